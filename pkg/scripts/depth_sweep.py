"""Depth gap t - 3 log5(1/eps) across epsilons, written as CSV (wraps ``pvsynth bench``)."""
from __future__ import annotations

import sys

from pvsynth.cli import main

if __name__ == "__main__":
    args = sys.argv[1:] or ["--epsilons", "1e-2,1e-3,1e-4,1e-5,1e-6", "--samples", "20"]
    sys.exit(main(["bench", *args]))
