"""Command-line entry point: ``pvsynth <command> ...``.

Exit codes: 0 success, 1 check failed, 2 no result (SA2), 3 level cap reached,
64 usage error, 65 bad input data.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
import time
from fractions import Fraction
from typing import Callable, Optional, Sequence, TextIO

from .circuit import (
    ExactUnitary,
    IntegrityError,
    count_normal_forms,
    denominator_sweep,
    distinct_matrix_count,
    decompose,
    evaluate,
    four_square_count,
    brute_four_square_count,
    freeness_sweep,
    parse_word,
)
from .diophantine import adjust_meniscus
from .enumeration import CSV_HEADER, candidates_at, conjecture_stats, disk_scan
from .exact import Interval, Ordering, RealValue, compare_strict, format_decimal, parse_gaussian, parse_real
from .geometry import DomainError, Meniscus, verified_trace_distance
from .numtheory import factor, is_s2s_exhaustive, s2s_criterion
from .synthesis import ResourceError, SynthesisResult, Variant, synthesize

EXIT_OK, EXIT_FAIL, EXIT_NIL, EXIT_RESOURCE, EXIT_USAGE, EXIT_DATA = 0, 1, 2, 3, 64, 65
SCHEMA = 1
DEFAULT_SEED = 20240101
DIGITS = 30


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _real(text: str, what: str) -> RealValue:
    try:
        return parse_real(text)
    except ValueError as exc:
        raise UsageError(f"bad {what}: {exc}") from None


def _epsilon(text: str) -> RealValue:
    eps = _real(text, "epsilon")
    if compare_strict(eps, 0, 200) is not Ordering.GREATER or compare_strict(eps, 1, 200) is not Ordering.LESS:
        raise UsageError(f"epsilon must lie strictly between 0 and 1, got {text}")
    return eps


def _seed(text: str) -> int:
    if text == "random":
        return int.from_bytes(os.urandom(4), "big")
    try:
        return int(text)
    except ValueError:
        raise UsageError(f"seed must be an integer or 'random', got {text!r}") from None


def _interval_json(iv: Interval) -> dict:
    return {"lo": format_decimal(iv.lo, DIGITS, "floor"), "hi": format_decimal(iv.hi, DIGITS, "ceil")}


def _dump(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True)


# ---------------------------------------------------------------------------
# commands


def _verify(word_text: str, theta: RealValue, epsilon: RealValue) -> tuple[ExactUnitary, Interval, bool]:
    m = evaluate(parse_word(word_text))
    td, ok = verified_trace_distance(m.u, m.v, m.t, theta, epsilon)
    return m, td, ok


def cmd_synthesize(args: argparse.Namespace, out: TextIO) -> int:
    theta = _real(args.theta, "theta")
    eps = _epsilon(args.epsilon)
    variant = Variant(args.variant)
    if not 0 < args.delta < 1:
        raise UsageError("delta must lie strictly between 0 and 1")
    seed = _seed(args.seed)
    try:
        res = synthesize(theta, eps, variant, delta=args.delta, seed=seed, t_cap=args.t_cap)
    except ResourceError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    base = {"schema": SCHEMA, "theta": args.theta, "epsilon": args.epsilon, "variant": variant.value, "seed": seed}
    if res is None:
        if args.format == "json":
            out.write(_dump({**base, "result": None}) + "\n")
        else:
            out.write("result: Nil\n")
        return EXIT_NIL
    # independent re-check of the printed word
    _, td, ok = _verify(str(res.word), theta, eps)
    if not ok:
        print(f"integrity error: word {res.word} failed re-verification", file=sys.stderr)
        return EXIT_DATA
    if args.format == "json":
        out.write(_dump({**base, **_result_json(res), "trace_distance": _interval_json(td)}) + "\n")
    else:
        out.write(f"word: {res.word}\n")
        out.write(f"u: {res.u}\nv: {res.v}\nt: {res.t}\n")
        td_json = _interval_json(td)
        out.write(f"trace distance: [{td_json['lo']}, {td_json['hi']}]\n")
        out.write(f"explored: {res.explored}\n")
    return EXIT_OK


def _result_json(res: SynthesisResult) -> dict:
    return {
        "word": str(res.word),
        "u": str(res.u),
        "v": str(res.v),
        "t": res.t,
        "explored": res.explored,
        "p_calls": res.p_calls,
        "nil_count": res.nil_count,
    }


def cmd_decompose(args: argparse.Namespace, out: TextIO) -> int:
    try:
        u, v = parse_gaussian(args.u), parse_gaussian(args.v)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        word = decompose(ExactUnitary(u, v, args.t))
    except (IntegrityError, ValueError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    if args.format == "json":
        out.write(_dump({"schema": SCHEMA, "word": str(word), "v_count": word.v_count}) + "\n")
    else:
        out.write(f"{word}\n")
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace, out: TextIO) -> int:
    try:
        m = evaluate(parse_word(args.word))
    except ValueError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    out.write(_dump({"schema": SCHEMA, **m.to_json()}) + "\n")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, out: TextIO) -> int:
    theta = _real(args.theta, "theta")
    eps = _epsilon(args.epsilon)
    try:
        m, td, ok = _verify(args.word, theta, eps)
    except (ValueError, DomainError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    verdict = "PASS" if ok else "FAIL"
    tdj = _interval_json(td)
    if args.format == "json":
        out.write(_dump({"schema": SCHEMA, **m.to_json(), "trace_distance": tdj, "verdict": verdict}) + "\n")
    else:
        out.write(f"{verdict} td in [{tdj['lo']}, {tdj['hi']}] vs epsilon {args.epsilon}\n")
    return EXIT_OK if ok else EXIT_FAIL


BENCH_HEADER = "epsilon,theta,t,three_log5,gap,explored,p_calls,nil_count,time_ms"


def bench_rows(epsilons: Sequence[str], samples: int, variant: Variant, delta: float, seed: int, timing: bool = True) -> list[str]:
    master = random.Random(seed)
    rows = []
    for e_text in epsilons:
        eps = _epsilon(e_text)
        three_log5 = 3 * math.log(1 / float(eps.interval_at(20).mid), 5)
        for _ in range(samples):
            theta = Fraction(master.randrange(0, 628_318_530), 100_000_000)
            row_seed = master.randrange(2**32)
            start = time.perf_counter()
            res = synthesize(RealValue.from_rational(theta), eps, variant, delta=delta, seed=row_seed)
            ms = (time.perf_counter() - start) * 1000 if timing else 0.0
            if res is None:
                rows.append(f"{e_text},{theta},,{three_log5:.4f},,,,1,{ms:.1f}")
                continue
            gap = res.t - three_log5
            rows.append(f"{e_text},{theta},{res.t},{three_log5:.4f},{gap:.4f},{res.explored},{res.p_calls},0,{ms:.1f}")
    return rows


def cmd_bench(args: argparse.Namespace, out: TextIO) -> int:
    seed = _seed(args.seed)
    if args.conjecture:
        theta = _real(args.theta or "0.7", "theta")
        eps = _epsilon(args.epsilon or "0.05")
        m = Meniscus(eps, theta)
        out.write(CSV_HEADER + "\n")
        for row in conjecture_stats(m, None, args.t_max):
            out.write(row.csv() + "\n")
        return EXIT_OK
    epsilons = [e for e in args.epsilons.split(",") if e]
    if args.samples < 1:
        raise UsageError("samples must be >= 1")
    for e in epsilons:
        _epsilon(e)
    out.write(BENCH_HEADER + "\n")
    for row in bench_rows(epsilons, args.samples, Variant(args.variant), args.delta, seed, timing=not args.no_timing):
        out.write(row + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# self-test


def _suite_counts(deep: bool) -> Optional[str]:
    for t in range(1, (4 if deep else 3) + 1):
        if distinct_matrix_count(t) != count_normal_forms(t):
            return f"normal-form count at t={t}"
    for t in range(0, (6 if deep else 4) + 1):
        if brute_four_square_count(5**t) != four_square_count(t):
            return f"four-square count at t={t}"
    return None


def _suite_freeness(deep: bool) -> Optional[str]:
    rep = freeness_sweep(8 if deep else 6)
    if not rep.ok:
        return f"reduced word {rep.first_zero} has w[T] = 0 mod 5"
    n, bad = denominator_sweep(5 if deep else 4)
    if bad is not None:
        return f"denominator exactness fails for {bad}"
    return None


def _suite_s2s(deep: bool) -> Optional[str]:
    for n in range(1, (100_000 if deep else 20_000) + 1):
        if s2s_criterion(factor(n)) != is_s2s_exhaustive(n):
            return f"sum-of-two-squares decision at n={n}"
    return None


def _suite_enumeration(deep: bool) -> Optional[str]:
    grid = [(Fraction(3, 10), Fraction(7, 10)), (Fraction(1, 10), Fraction(-2)), (Fraction(1, 20), Fraction(5))]
    for eps, th in grid:
        m = Meniscus(RealValue.from_rational(eps), RealValue.from_rational(th))
        adj = adjust_meniscus(m)
        for t in range(0, (8 if deep else 6) + 1):
            if {c.u for c in candidates_at(t, m, adj)} != disk_scan(t, m):
                return f"enumeration equals disk scan at eps={eps}, theta={th}, t={t}"
    return None


def _suite_conjecture(deep: bool) -> Optional[str]:
    m = Meniscus(RealValue.from_rational(Fraction(1, 20)), RealValue.from_rational(Fraction(7, 10)))
    for row in conjecture_stats(m, None, 10 if deep else 8):
        if not row.prime_wins <= row.s2s_wins <= row.candidates:
            return f"conjecture table row ordering at t={row.t}"
    return None


SUITES: list[tuple[str, Callable[[bool], Optional[str]]]] = [
    ("counts", _suite_counts),
    ("freeness", _suite_freeness),
    ("s2s", _suite_s2s),
    ("enumeration", _suite_enumeration),
    ("conjecture", _suite_conjecture),
]


def cmd_selftest(args: argparse.Namespace, out: TextIO) -> int:
    for name, suite in SUITES:
        start = time.perf_counter()
        failure = suite(args.deep)
        secs = time.perf_counter() - start
        if failure is not None:
            out.write(f"FAIL {name}: {failure}\n")
            return EXIT_FAIL
        out.write(f"ok   {name} ({secs:.1f}s)\n")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pvsynth", description="Optimal Pauli+V approximations of z-rotations.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--output", help="write to this file instead of stdout")
        sp.add_argument("--precision-cap", type=int, help="digits before an undecided comparison gives up")

    s = sub.add_parser("synthesize", help="approximate R_z(theta) within epsilon")
    s.add_argument("--theta", required=True)
    s.add_argument("--epsilon", required=True)
    s.add_argument("--variant", choices=[v.value for v in Variant], default=Variant.SA1_PRIME.value)
    s.add_argument("--delta", type=float, default=0.1)
    s.add_argument("--seed", default=str(DEFAULT_SEED))
    s.add_argument("--t-cap", type=int)
    common(s)

    d = sub.add_parser("decompose", help="exact matrix to normal-form word")
    d.add_argument("--u", required=True)
    d.add_argument("--v", required=True)
    d.add_argument("--t", type=int, required=True)
    common(d)

    e = sub.add_parser("evaluate", help="word to exact matrix")
    e.add_argument("--word", required=True)
    common(e)

    v = sub.add_parser("verify", help="trace distance of a word to R_z(theta)")
    v.add_argument("--word", required=True)
    v.add_argument("--theta", required=True)
    v.add_argument("--epsilon", required=True)
    common(v)

    b = sub.add_parser("bench", help="depth-gap table as CSV")
    b.add_argument("--epsilons", default="1e-2,1e-3,1e-4")
    b.add_argument("--samples", type=int, default=10)
    b.add_argument("--variant", choices=[x.value for x in Variant], default=Variant.SA1_PRIME.value)
    b.add_argument("--delta", type=float, default=0.1)
    b.add_argument("--seed", default=str(DEFAULT_SEED))
    b.add_argument("--no-timing", action="store_true", help="write 0 in time_ms so output is reproducible byte for byte")
    b.add_argument("--conjecture", action="store_true", help="emit the per-level candidate/winner table instead")
    b.add_argument("--theta")
    b.add_argument("--epsilon")
    b.add_argument("--t-max", type=int, default=12)
    common(b)

    st = sub.add_parser("selftest", help="run the oracle suites")
    st.add_argument("--deep", action="store_true")
    common(st)
    return p


COMMANDS = {
    "synthesize": cmd_synthesize,
    "decompose": cmd_decompose,
    "evaluate": cmd_evaluate,
    "verify": cmd_verify,
    "bench": cmd_bench,
    "selftest": cmd_selftest,
}


def _glue_word(argv: Sequence[str]) -> list[str]:
    # words such as "-Z" would otherwise be read as an option
    out: list[str] = []
    it = iter(argv)
    for a in it:
        if a == "--word":
            nxt = next(it, None)
            out.append(a if nxt is None else f"--word={nxt}")
        else:
            out.append(a)
    return out


def main(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(_glue_word(sys.argv[1:] if argv is None else argv))
        if args.precision_cap is not None:
            if args.precision_cap < 8:
                raise UsageError("precision cap must be >= 8")
            os.environ["PVSYNTH_PRECISION_CAP"] = str(args.precision_cap)
        if args.output:
            with open(args.output, "w") as fh:
                return COMMANDS[args.command](args, fh)
        return COMMANDS[args.command](args, out or sys.stdout)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
