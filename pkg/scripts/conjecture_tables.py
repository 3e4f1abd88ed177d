"""Per-level candidate and winner counts, with |S|*t/area and |S'|*t/area.

These tables support the density conjectures empirically; they are not
acceptance evidence.
"""
from __future__ import annotations

import argparse

from pvsynth.enumeration import conjecture_stats, find_t0
from pvsynth.exact import parse_real
from pvsynth.geometry import Meniscus


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--theta", default="0.7")
    ap.add_argument("--epsilon", default="0.05")
    ap.add_argument("--t-max", type=int, default=12)
    args = ap.parse_args()
    m = Meniscus(parse_real(args.epsilon), parse_real(args.theta))
    t0 = find_t0(m)
    print(f"# theta={args.theta} eps={args.epsilon} t0={t0}")
    print("t,candidates,s2s_wins,prime_wins,area,s2s_density,prime_density")
    for row in conjecture_stats(m, None, args.t_max):
        t = max(row.t, 1)
        print(f"{row.csv()},{row.s2s_wins * t / row.area:.4f},{row.prime_wins * t / row.area:.4f}")


if __name__ == "__main__":
    main()
