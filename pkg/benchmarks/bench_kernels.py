"""Compiled vs pure-Python kernels: factor_u64 and screen_candidates.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import random
import time

from abclll import _pykernel
from abclll.lattice import coefficient_pairs, relation_basis
from abclll.numt import prime_powers
from abclll.search import SearchConfig, enumerate_bases

try:
    from abclll import _ckernel
except ImportError:
    _ckernel = None


def semiprimes(count, bits, rng):
    from abclll.numt import is_prime

    out = []
    while len(out) < count:
        p = rng.getrandbits(bits) | 1 | (1 << (bits - 1))
        q = rng.getrandbits(bits) | 1 | (1 << (bits - 1))
        if is_prime(p) and is_prime(q):
            out.append(p * q)
    return out


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def screen_workload(n_bases):
    members = prime_powers(10**7, 24, include_one=True)
    cfg = SearchConfig()
    jobs = []
    for base in list(enumerate_bases(members))[::997][:n_bases]:
        v1, v2 = relation_basis(*base.values)
        primes = sorted(set(base.a0.primes) | set(base.b0.primes) | set(base.c0.primes))
        vals = tuple(tuple(f.exponent(p) for p in primes) for f in base)
        logx = tuple(f.log() for f in base)
        jobs.append((v1, v2, coefficient_pairs(v1, v2), primes, vals, logx))
    return jobs, cfg


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--bases", type=int, default=60)
    args = ap.parse_args()

    kernels = [("python", _pykernel)] + ([("cython", _ckernel)] if _ckernel else [])
    if _ckernel is None:
        print("compiled kernel not built; timing the pure-Python kernel only")

    rng = random.Random(7)
    nums = semiprimes(200, 28, rng)
    jobs, cfg = screen_workload(args.bases)
    n_pairs = sum(len(j[2]) for j in jobs)

    rows = []
    for name, k in kernels:
        t_fac = best_of(lambda: [k.factor_u64(n, 1024, 1 << 24) for n in nums], args.repeat)
        t_scr = best_of(lambda: [k.screen_candidates(*j, cfg.p_threshold, cfg.rho_threshold)
                                 for j in jobs], args.repeat)
        rows.append((name, t_fac, t_scr))

    print(f"factor_u64: {len(nums)} semiprimes of ~56 bits")
    print(f"screen_candidates: {len(jobs)} bases, {n_pairs} coefficient pairs")
    print(f"{'kernel':8} {'factor (s)':>11} {'screen (s)':>11}")
    for name, t_fac, t_scr in rows:
        print(f"{name:8} {t_fac:11.4f} {t_scr:11.4f}")
    if len(rows) == 2:
        (_, pf, ps), (_, cf, cs) = rows
        print(f"speedup  {pf / cf:10.1f}x {ps / cs:10.1f}x")


if __name__ == "__main__":
    main()
