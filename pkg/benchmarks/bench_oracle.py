"""Compare the numba and numpy oracle backends on a few representative pairs.

    python3 benchmarks/bench_oracle.py [--repeat N] [--quick]
"""

import argparse
import time

from todahurwitz import _kernels
from todahurwitz.oracle import oracle_count, oracle_work
from todahurwitz.partitions import Partition

PAIRS = [
    ((2, 1, 1), (2, 1, 1)),
    ((1, 1, 1, 1), (1, 1, 1, 1)),
    ((2, 1, 1, 1), (3, 1, 1)),
    ((1, 1, 1, 1, 1), (2, 2, 1)),
    ((1, 1, 1, 1, 1), (1, 1, 1, 1, 1)),
]


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return min(times), result


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="skip the largest pair")
    args = ap.parse_args()

    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is unavailable (or disabled); nothing to compare")

    # compile outside the timed region
    oracle_count(Partition((2, 1)), Partition((2, 1)), backend="numba")

    pairs = PAIRS[:-1] if args.quick else PAIRS
    print(f"{'pair':<28}{'leaves':>12}{'numba s':>10}{'numpy s':>10}{'speedup':>9}")
    for a, b in pairs:
        delta, delta_bar = Partition(a), Partition(b)
        t_nb, r_nb = best_of(lambda: oracle_count(delta, delta_bar, backend="numba"), args.repeat)
        t_np, r_np = best_of(lambda: oracle_count(delta, delta_bar, backend="numpy"), 1)
        assert r_nb == r_np, (a, b)
        label = f"{delta}|{delta_bar}"
        print(f"{label:<28}{oracle_work(delta, delta_bar):>12}{t_nb:>10.3f}{t_np:>10.3f}{t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
