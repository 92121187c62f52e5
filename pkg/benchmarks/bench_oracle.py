"""Time the candidate enumeration kernel: numba against the numpy fallback.

    python3 benchmarks/bench_oracle.py --choices 12 14 16 --repeat 3
"""

import argparse
import random
import time

from sasp.oracle import FALSE, GroundProgram
from sasp.oracle._kernels import HAS_NUMBA, Packed, enumerate_choice_sets
from sasp.oracle.stable import simplify


def random_program(n_choice: int, seed: int) -> GroundProgram:
    """Pairwise even loops give n_choice atoms under negation; the rest are derived."""
    rng = random.Random(seed)
    gp = GroundProgram()
    n = n_choice * 2
    for i in range(n):
        gp.atom_id(((f"a{i}", 0), ()))
    for i in range(0, n_choice - 1, 2):
        gp.add_rule(i, (), (i + 1,))
        gp.add_rule(i + 1, (), (i,))
    for _ in range(n * 2):
        pos = tuple(rng.sample(range(n), 2))
        neg = (rng.randrange(n_choice),)
        head = FALSE if rng.random() < 0.05 else rng.randrange(n_choice, n)
        gp.add_rule(head, pos, neg)
    return gp


def packed_for(gp: GroundProgram) -> Packed:
    rules, _ = simplify(gp)
    choice = sorted({a for _, _, neg in rules for a in neg})
    return Packed(len(gp.atoms), rules, choice)


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--choices", type=int, nargs="+", default=[10, 12, 14, 16])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    if HAS_NUMBA:
        # compile outside the timed region
        enumerate_choice_sets(packed_for(random_program(2, 0)), use_numba=True)

    print(f"{'choice atoms':>12} {'candidates':>10} {'numpy s':>9} {'numba s':>9} {'speedup':>8}")
    for k in args.choices:
        packed = packed_for(random_program(k, args.seed))
        kk = len(packed.choice)
        t_np = best_of(lambda: enumerate_choice_sets(packed, use_numba=False), args.repeat)
        if HAS_NUMBA:
            a = enumerate_choice_sets(packed, use_numba=True)
            b = enumerate_choice_sets(packed, use_numba=False)
            assert sorted(a.tolist()) == sorted(b.tolist())
            t_nb = best_of(lambda: enumerate_choice_sets(packed, use_numba=True), args.repeat)
            print(f"{kk:>12} {1 << kk:>10} {t_np:>9.4f} {t_nb:>9.4f} {t_np / t_nb:>7.1f}x")
        else:
            print(f"{kk:>12} {1 << kk:>10} {t_np:>9.4f} {'n/a':>9} {'':>8}")


if __name__ == "__main__":
    main()
