"""Exact Pauli+V words: normal forms, evaluation, peel-off decomposition.

A matrix of the group generated by V1, V2, V3 and the Paulis is stored as
``(u, v, t)`` meaning ``[[u, -v*], [v, u*]] / sqrt(5)**t`` with Gaussian
integers ``u, v``.  Pauli tails are the SU(2) representatives
``+-I, +-iX, +-iY, +-iZ``; in the text format they are written ``I, -I, X, -X,
Y, -Y, Z, -Z`` (the phase ``i`` is implicit).
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .exact import GaussianInt

G = GaussianInt


class IntegrityError(ValueError):
    """The input is not a minimal exact Pauli+V matrix."""


@dataclass(frozen=True)
class ExactUnitary:
    u: GaussianInt
    v: GaussianInt
    t: int

    def __post_init__(self) -> None:
        if self.t < 0:
            raise ValueError("t must be >= 0")
        if self.u.norm() + self.v.norm() != 5**self.t:
            raise ValueError(f"norm equation fails: |u|^2+|v|^2 = {self.u.norm() + self.v.norm()} != 5^{self.t}")

    def __matmul__(self, other: ExactUnitary) -> ExactUnitary:
        # first column of [[u1,-v1*],[v1,u1*]] @ [[u2,-v2*],[v2,u2*]]
        u = self.u * other.u - self.v.conj() * other.v
        v = self.v * other.u + self.u.conj() * other.v
        return ExactUnitary(u, v, self.t + other.t)

    def is_minimal(self) -> bool:
        return self.t < 2 or not (self.u.divisible_by(5) and self.v.divisible_by(5))

    def minimal(self) -> ExactUnitary:
        m = self
        while not m.is_minimal():
            m = ExactUnitary(m.u.exact_div(5), m.v.exact_div(5), m.t - 2)
        return m

    def dagger(self) -> ExactUnitary:
        return ExactUnitary(self.u.conj(), -self.v, self.t)

    def matrix(self) -> tuple[tuple[GaussianInt, GaussianInt], tuple[GaussianInt, GaussianInt]]:
        """Integer matrix; the unitary is this divided by sqrt(5)**t."""
        return ((self.u, -self.v.conj()), (self.v, self.u.conj()))

    def to_json(self) -> dict:
        return {"u": str(self.u), "v": str(self.v), "t": self.t}

    @classmethod
    def from_json(cls, data: dict | str) -> ExactUnitary:
        if isinstance(data, str):
            data = json.loads(data)
        from .exact import parse_gaussian

        return cls(parse_gaussian(data["u"]), parse_gaussian(data["v"]), int(data["t"]))


IDENTITY = ExactUnitary(G(1), G(0), 0)

# sqrt(5) * V_k^{+-1} = I +- 2i P_k as (u, v) pairs
_GEN_UV = {
    (1, 1): (G(1), G(0, 2)),
    (1, -1): (G(1), G(0, -2)),
    (2, 1): (G(1), G(-2)),
    (2, -1): (G(1), G(2)),
    (3, 1): (G(1, 2), G(0)),
    (3, -1): (G(1, -2), G(0)),
}

TAILS: dict[str, ExactUnitary] = {
    "I": ExactUnitary(G(1), G(0), 0),
    "-I": ExactUnitary(G(-1), G(0), 0),
    "X": ExactUnitary(G(0), G(0, 1), 0),
    "-X": ExactUnitary(G(0), G(0, -1), 0),
    "Y": ExactUnitary(G(0), G(-1), 0),
    "-Y": ExactUnitary(G(0), G(1), 0),
    "Z": ExactUnitary(G(0, 1), G(0), 0),
    "-Z": ExactUnitary(G(0, -1), G(0), 0),
}
_TAIL_NAME = {(m.u, m.v): name for name, m in TAILS.items()}
# conventional names up to global phase: "X" here is iX in SU(2)
PHASE_DICTIONARY = {
    "I": "+I",
    "-I": "-I",
    "X": "+iX",
    "-X": "-iX",
    "Y": "+iY",
    "-Y": "-iY",
    "Z": "+iZ",
    "-Z": "-iZ",
}


@dataclass(frozen=True)
class Letter:
    axis: int  # 1, 2, 3 for X, Y, Z
    exp: int  # +1 or -1

    def inverse(self) -> Letter:
        return Letter(self.axis, -self.exp)

    def unitary(self) -> ExactUnitary:
        u, v = _GEN_UV[(self.axis, self.exp)]
        return ExactUnitary(u, v, 1)

    def __str__(self) -> str:
        return f"V{self.axis}" if self.exp == 1 else f"V{self.axis}^-1"


GENERATORS = tuple(Letter(a, e) for a in (1, 2, 3) for e in (1, -1))


@dataclass(frozen=True)
class VWord:
    letters: tuple[Letter, ...] = ()
    tail: str = "I"

    def __post_init__(self) -> None:
        if self.tail not in TAILS:
            raise ValueError(f"unknown Pauli tail {self.tail!r}")
        for a, b in zip(self.letters, self.letters[1:]):
            if b == a.inverse():
                raise ValueError(f"word not reduced: {a} followed by {b}")

    @property
    def v_count(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        parts = [str(x) for x in self.letters]
        if self.tail != "I":
            parts.append(self.tail)
        return " ".join(parts)


def _pauli_axis(tail: str) -> int:
    return {"I": 0, "X": 1, "Y": 2, "Z": 3}[tail.lstrip("-")]


def _tokens(raw: str | Sequence[str]) -> list[str]:
    if isinstance(raw, str):
        return raw.replace(",", " ").split()
    return list(raw)


def _parse_token(tok: str) -> Letter | str:
    t = tok.strip()
    if t in TAILS:
        return t
    if t.startswith("+") and t[1:] in TAILS:
        return t[1:]
    for suffix, exp in (("^-1", -1), ("'", -1), ("^+1", 1), ("^1", 1), ("", 1)):
        body = t[: len(t) - len(suffix)] if suffix else t
        if suffix and not t.endswith(suffix):
            continue
        if body in ("V1", "V2", "V3"):
            return Letter(int(body[1]), exp)
    raise ValueError(f"unknown token {tok!r}")


def normalize(raw: str | Sequence[str | Letter]) -> VWord:
    """Push Paulis to the right, multiply them into the tail, cancel inverse pairs."""
    items = [x if isinstance(x, Letter) else _parse_token(x) for x in (_tokens(raw) if isinstance(raw, str) else raw)]
    stack: list[Letter] = []
    acc = TAILS["I"]
    for item in items:
        if isinstance(item, str):
            acc = acc @ TAILS[item]
            continue
        axis = _pauli_axis(_TAIL_NAME[(acc.u, acc.v)])
        # P (I + 2iQ) = (I - 2iQ) P when P, Q anticommute
        letter = item if axis in (0, item.axis) else item.inverse()
        if stack and stack[-1] == letter.inverse():
            stack.pop()
        else:
            stack.append(letter)
    return VWord(tuple(stack), _TAIL_NAME[(acc.u, acc.v)])


def parse_word(text: str) -> VWord:
    return normalize(text)


def evaluate(w: VWord) -> ExactUnitary:
    m = IDENTITY
    for letter in w.letters:
        m = m @ letter.unitary()
    return m @ TAILS[w.tail]


def decompose(m: ExactUnitary) -> VWord:
    """Peel generators off the left until level 0, then match the Pauli tail."""
    if not m.is_minimal():
        raise IntegrityError(f"level {m.t} is not minimal for u={m.u}, v={m.v}")
    letters: list[Letter] = []
    cur = m
    while cur.t > 0:
        peeled = []
        for g in GENERATORS:
            rest = g.inverse().unitary() @ cur
            if rest.u.divisible_by(5) and rest.v.divisible_by(5):
                peeled.append((g, ExactUnitary(rest.u.exact_div(5), rest.v.exact_div(5), cur.t - 1)))
        if len(peeled) != 1:
            raise IntegrityError(f"{len(peeled)} generators peel at level {cur.t}")
        g, cur = peeled[0]
        letters.append(g)
    name = _TAIL_NAME.get((cur.u, cur.v))
    if name is None:
        raise IntegrityError(f"level-0 remainder ({cur.u}, {cur.v}) is not a Pauli tail")
    return VWord(tuple(letters), name)


# ---------------------------------------------------------------------------
# Counting


def count_normal_forms(t: int) -> int:
    if t < 1:
        raise ValueError("t must be >= 1")
    return 48 * 5 ** (t - 1)


def four_square_count(t: int) -> int:
    if t < 0:
        raise ValueError("t must be >= 0")
    return 2 * (5 ** (t + 1) - 1)


def reduced_words(length: int, alphabet: Sequence[Letter] = GENERATORS) -> Iterator[tuple[Letter, ...]]:
    if length == 0:
        yield ()
        return
    for prefix in reduced_words(length - 1, alphabet):
        for g in alphabet:
            if prefix and g == prefix[-1].inverse():
                continue
            yield prefix + (g,)


def enumerate_normal_forms(t: int) -> Iterator[VWord]:
    for letters in reduced_words(t):
        for tail in TAILS:
            yield VWord(letters, tail)


def distinct_matrix_count(t: int) -> int:
    """Evaluate every normal form of V-count t and count distinct matrices."""
    return len({(m.u, m.v) for m in (evaluate(w) for w in enumerate_normal_forms(t))})


def brute_four_square_count(n: int) -> int:
    """Ordered, signed (a, b, c, d) with a^2+b^2+c^2+d^2 = n, by direct enumeration."""
    import math

    r = math.isqrt(n)
    two: dict[int, int] = {}
    for c in range(-r, r + 1):
        for d in range(-r, r + 1):
            s = c * c + d * d
            if s <= n:
                two[s] = two.get(s, 0) + 1
    return sum(two.get(n - s, 0) * k for s, k in two.items())


# ---------------------------------------------------------------------------
# SO(3) images and their mod-5 reductions

_F = Fraction
R_MATRICES = {
    1: ((_F(1), _F(0), _F(0)), (_F(0), _F(-3, 5), _F(4, 5)), (_F(0), _F(-4, 5), _F(-3, 5))),
    2: ((_F(-3, 5), _F(0), _F(-4, 5)), (_F(0), _F(1), _F(0)), (_F(4, 5), _F(0), _F(-3, 5))),
    3: ((_F(-3, 5), _F(4, 5), _F(0)), (_F(-4, 5), _F(-3, 5), _F(0)), (_F(0), _F(0), _F(1))),
}
T_MATRICES = {
    1: ((0, 0, 0), (0, 2, 4), (0, 1, 2)),
    2: ((2, 0, 1), (0, 0, 0), (4, 0, 2)),
    3: ((2, 4, 0), (1, 2, 0), (0, 0, 0)),
}

Mat3 = tuple[tuple, tuple, tuple]


def _transpose(m: Mat3) -> Mat3:
    return tuple(tuple(m[j][i] for j in range(3)) for i in range(3))  # type: ignore[return-value]


def _matmul3(a: Mat3, b: Mat3, mod: int | None = None) -> Mat3:
    out = []
    for i in range(3):
        row = []
        for j in range(3):
            s = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j]
            row.append(s % mod if mod else s)
        out.append(tuple(row))
    return tuple(out)  # type: ignore[return-value]


_ID3_F: Mat3 = tuple(tuple(_F(int(i == j)) for j in range(3)) for i in range(3))  # type: ignore[assignment]
_ID3_I: Mat3 = tuple(tuple(int(i == j) for j in range(3)) for i in range(3))  # type: ignore[assignment]


def _letters_of(w: VWord | Iterable[Letter]) -> tuple[Letter, ...]:
    return w.letters if isinstance(w, VWord) else tuple(w)


def word_to_rotation(w: VWord | Iterable[Letter]) -> Mat3:
    m = _ID3_F
    for x in _letters_of(w):
        r = R_MATRICES[x.axis]
        m = _matmul3(m, r if x.exp == 1 else _transpose(r))
    return m


def word_to_modfive(w: VWord | Iterable[Letter], table: dict[int, Mat3] | None = None) -> Mat3:
    table = table or T_MATRICES
    m = _ID3_I
    for x in _letters_of(w):
        tm = table[x.axis]
        m = _matmul3(m, tm if x.exp == 1 else _transpose(tm), 5)
    return m


def rotation_of(m: ExactUnitary) -> Mat3:
    """SO(3) image by conjugating the Pauli basis; column j is the image of the j-th Pauli."""
    # U sigma U^dagger on integer matrices, divided by 5^t
    paulis = {
        1: ((G(0), G(1)), (G(1), G(0))),
        2: ((G(0), G(0, -1)), (G(0, 1), G(0))),
        3: ((G(1), G(0)), (G(0), G(-1))),
    }
    um = m.matrix()
    ud = ((um[0][0].conj(), um[1][0].conj()), (um[0][1].conj(), um[1][1].conj()))

    def mm(a, b):
        return tuple(tuple(a[i][0] * b[0][j] + a[i][1] * b[1][j] for j in range(2)) for i in range(2))

    scale = _F(1, 5**m.t)
    cols = []
    for k in (1, 2, 3):
        c = mm(mm(um, paulis[k]), ud)
        # c = x X + y Y + z Z: z = c00, x = Re c10, y = Im c10
        cols.append((c[1][0].re * scale, c[1][0].im * scale, c[0][0].re * scale))
    return tuple(tuple(cols[j][i] for j in range(3)) for i in range(3))  # type: ignore[return-value]


def max_denominator(m: Mat3) -> int:
    return max(_F(x).denominator for row in m for x in row)


def is_zero_matrix(m: Mat3) -> bool:
    return all(x == 0 for row in m for x in row)


def modfive_rank(m: Mat3) -> int:
    rows = [list(r) for r in m]
    rank = 0
    for col in range(3):
        piv = next((r for r in range(rank, 3) if rows[r][col] % 5), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], -1, 5)
        rows[rank] = [(x * inv) % 5 for x in rows[rank]]
        for r in range(3):
            if r != rank and rows[r][col]:
                f = rows[r][col]
                rows[r] = [(a - f * b) % 5 for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


@dataclass
class FreenessReport:
    max_length: int
    words_checked: dict[int, int] = field(default_factory=dict)
    first_zero: tuple[Letter, ...] | None = None

    @property
    def ok(self) -> bool:
        return self.first_zero is None


def freeness_sweep(max_length: int, table: dict[int, Mat3] | None = None) -> FreenessReport:
    """Check w[T] != 0 mod 5 for every reduced word of length 1..max_length.

    Products are extended on the right one letter at a time, batched with numpy.
    """
    import numpy as np

    table = table or T_MATRICES
    mats = {}
    for g in GENERATORS:
        tm = np.array(table[g.axis], dtype=np.int64)
        mats[g] = tm if g.exp == 1 else tm.T
    report = FreenessReport(max_length)
    # frontier: per last letter, a stack of products and the words (as index arrays)
    gens = list(GENERATORS)
    index = {g: i for i, g in enumerate(gens)}
    prods = np.stack([mats[g] % 5 for g in gens])
    last = np.arange(len(gens))
    words = last[:, None]
    for length in range(1, max_length + 1):
        report.words_checked[length] = len(prods)
        zero = ~prods.reshape(len(prods), -1).any(axis=1)
        if zero.any():
            k = int(np.argmax(zero))
            report.first_zero = tuple(gens[i] for i in words[k])
            return report
        if length == max_length:
            break
        new_prods, new_last, new_words = [], [], []
        for g in gens:
            keep = last != index[g.inverse()]
            new_prods.append(np.einsum("nij,jk->nik", prods[keep], mats[g]) % 5)
            new_last.append(np.full(int(keep.sum()), index[g]))
            new_words.append(np.concatenate([words[keep], np.full((int(keep.sum()), 1), index[g])], axis=1))
        prods = np.concatenate(new_prods)
        last = np.concatenate(new_last)
        words = np.concatenate(new_words)
    return report


def denominator_sweep(max_length: int) -> tuple[int, tuple[Letter, ...] | None]:
    """Check that w[R] has an entry of denominator exactly 5^len(w); returns (count, first failure)."""
    checked = 0

    def rec(prefix: tuple[Letter, ...], m: Mat3) -> tuple[Letter, ...] | None:
        nonlocal checked
        if prefix:
            checked += 1
            if max_denominator(m) != 5 ** len(prefix):
                return prefix
        if len(prefix) == max_length:
            return None
        for g in GENERATORS:
            if prefix and g == prefix[-1].inverse():
                continue
            r = R_MATRICES[g.axis]
            bad = rec(prefix + (g,), _matmul3(m, r if g.exp == 1 else _transpose(r)))
            if bad:
                return bad
        return None

    bad = rec((), _ID3_F)
    return checked, bad


def all_words_upto(n: int) -> Iterator[tuple[Letter, ...]]:
    return itertools.chain.from_iterable(reduced_words(k) for k in range(n + 1))
