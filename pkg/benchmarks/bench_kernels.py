"""Numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Each case runs once untimed to compile, then reports the best of
``--repeat`` runs for both kernel families.
"""

import argparse
import time

import numpy as np

from hitlab import _jit
from hitlab.gf2 import EchelonForm, n_words
from hitlab.hit import PositiveBlock
from hitlab.monomial import monomial_index
from hitlab.steenrod import sq_images


def best(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def case_sq_images():
    src = monomial_index(5, 31).exps
    return lambda: sq_images(src, 4)


def case_absorb():
    rng = np.random.default_rng(7)
    width = 4096
    rows = rng.integers(0, 2**63, size=(3000, n_words(width)), dtype=np.uint64)

    def run():
        ef = EchelonForm(width)
        ef.absorb_many(rows)
        ef.rref()
    return run


def case_block(k, n):
    return lambda: PositiveBlock(k, n)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    cases = [("sq_images k=5 n=35 Sq^4", case_sq_images()),
             ("absorb_many 3000x4096", case_absorb()),
             ("PositiveBlock k=5 n=16", case_block(5, 16)),
             ("PositiveBlock k=4 n=27", case_block(4, 27))]
    print(f"{'case':28s} {'numba':>9s} {'numpy':>9s} {'ratio':>7s}")
    for name, fn in cases:
        prev = _jit.use_jit()
        try:
            _jit.set_jit(True)
            tj = best(fn, args.repeat)
            _jit.set_jit(False)
            tn = best(fn, args.repeat)
        finally:
            _jit.set_jit(prev)
        print(f"{name:28s} {tj:9.4f} {tn:9.4f} {tn / tj:7.1f}x")


if __name__ == "__main__":
    main()
