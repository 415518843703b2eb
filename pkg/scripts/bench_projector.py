"""Time repeated group-cosine queries: reused projector vs. per-query Gram solve.

    python scripts/bench_projector.py [--dim 300] [--rows 12] [--queries 2000]
"""

import argparse
import time

import numpy as np

from projsim.groupsim import build_projector, cos_to_group, cos_to_group_gram


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--dim", type=int, default=300)
    parser.add_argument("--rows", type=int, default=12)
    parser.add_argument("--queries", type=int, default=2000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    A = rng.standard_normal((args.rows, args.dim))
    Q = rng.standard_normal((args.queries, args.dim))

    t0 = time.perf_counter()
    P = build_projector(A)
    basis = [cos_to_group(q, P) for q in Q]
    t1 = time.perf_counter()
    gram = [cos_to_group_gram(q, A) for q in Q]
    t2 = time.perf_counter()

    print(f"projector reuse: {t1 - t0:.3f}s  ({(t1 - t0) / args.queries * 1e6:.1f} us/query)")
    print(f"gram per query:  {t2 - t1:.3f}s  ({(t2 - t1) / args.queries * 1e6:.1f} us/query)")
    print(f"max |difference| = {np.max(np.abs(np.subtract(basis, gram))):.2e}")


if __name__ == "__main__":
    main()
