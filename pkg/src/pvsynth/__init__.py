"""Depth-optimal Pauli+V circuits approximating z-rotations."""
from __future__ import annotations

from .circuit import ExactUnitary, VWord, decompose, evaluate, normalize, parse_word
from .diophantine import GridTransform, adjust_meniscus, rational_convergent, real_convergent
from .enumeration import Candidate, candidates_at, conjecture_stats, growth_check
from .exact import GaussianInt, Interval, RealValue, parse_real
from .geometry import Meniscus, in_meniscus, trace_distance
from .numtheory import bounded_s2s, factor, is_probable_prime, rabin_shallit, s2s_decide_and_construct
from .synthesis import ResourceError, SynthesisResult, Variant, synthesize

__all__ = [
    "Candidate",
    "ExactUnitary",
    "GaussianInt",
    "GridTransform",
    "Interval",
    "Meniscus",
    "RealValue",
    "ResourceError",
    "SynthesisResult",
    "VWord",
    "Variant",
    "adjust_meniscus",
    "bounded_s2s",
    "candidates_at",
    "conjecture_stats",
    "decompose",
    "evaluate",
    "factor",
    "growth_check",
    "in_meniscus",
    "is_probable_prime",
    "normalize",
    "parse_real",
    "parse_word",
    "rabin_shallit",
    "rational_convergent",
    "real_convergent",
    "s2s_decide_and_construct",
    "synthesize",
    "trace_distance",
]
