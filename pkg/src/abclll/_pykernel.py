"""Pure-Python implementations of the hot kernels.

This module mirrors ``_ckernel`` function for function and is used when the
compiled extension is unavailable (or ``ABCLLL_PURE_PYTHON=1`` is set). The
two backends must return identical results for identical inputs.
"""

from __future__ import annotations

import math
from math import gcd, isqrt

BACKEND = "python"

U64_LIMIT = 1 << 64
# Entries of combined relation vectors must stay below this for the screen.
SCREEN_ENTRY_LIMIT = 1 << 62
SCREEN_TRIAL_LIMIT = 1024
SCREEN_RHO_BUDGET = 1 << 20
# Candidates within this margin of a threshold are passed on to the exact path.
SCREEN_SLACK = 1e-7

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _sieve(limit: int) -> list[int]:
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = bytearray(len(range(p * p, limit + 1, p)))
    return [i for i, f in enumerate(flags) if f]


SMALL_PRIMES = _sieve(1 << 16)


def is_prime_u64(n: int) -> bool:
    """Deterministic Miller-Rabin for 0 <= n < 2**64."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n == p:
            return True
        if n % p == 0:
            return False
    d, s = n - 1, 0
    while d & 1 == 0:
        d >>= 1
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def rho_brent(n: int, budget: int) -> int:
    """Return a nontrivial factor of composite ``n``, or 0 once ``budget``
    polynomial steps have been spent without success."""
    if n & 1 == 0:
        return 2
    used = 0
    c = 0
    while used < budget:
        c += 1
        y, r, q, g = 2, 1, 1, 1
        x = ys = y
        m = 128
        while g == 1 and used < budget:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                used += min(m, r - k)
                g = gcd(q, n)
                k += m
            r <<= 1
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
    return 0


def _split(n: int, budget: int, out: list[int]) -> int:
    """Append the prime factors of ``n`` to ``out``; return the unsplit part."""
    if n == 1:
        return 1
    if is_prime_u64(n):
        out.append(n)
        return 1
    r = isqrt(n)
    if r * r == n:
        return _split(r, budget, out) * _split(r, budget, out)
    d = rho_brent(n, budget)
    if d == 0:
        return n
    return _split(d, budget, out) * _split(n // d, budget, out)


def _collect(primes: list[int]) -> list[tuple[int, int]]:
    primes.sort()
    pairs: list[tuple[int, int]] = []
    for p in primes:
        if pairs and pairs[-1][0] == p:
            pairs[-1] = (p, pairs[-1][1] + 1)
        else:
            pairs.append((p, 1))
    return pairs


def factor_u64(n: int, trial_bound: int, rho_budget: int) -> tuple[list[tuple[int, int]], int]:
    """Factor ``1 <= n < 2**64``.

    Returns ``(pairs, cofactor)`` where ``pairs`` is the sorted list of
    ``(prime, exponent)`` found and ``cofactor`` is 1 on success, otherwise the
    composite part left unsplit.
    """
    found: list[int] = []
    for p in SMALL_PRIMES:
        if p > trial_bound or p * p > n:
            break
        while n % p == 0:
            n //= p
            found.append(p)
    cofactor = _split(n, rho_budget, found)
    return _collect(found), cofactor


def _screen_factor(n: int):
    """Small-prime trial division then rho; None if the budget runs out."""
    out: list[int] = []
    for p in SMALL_PRIMES:
        if p >= SCREEN_TRIAL_LIMIT or p * p > n:
            break
        while n % p == 0:
            n //= p
            out.append(p)
    if _split(n, SCREEN_RHO_BUDGET, out) != 1:
        return None
    return out


def screen_candidates(v1, v2, pairs, base_primes, base_vals, base_logx,
                      p_threshold: float, rho_threshold: float) -> list[tuple[int, int, int]]:
    """Cheap float screen of combinations ``c1*v1 + c2*v2``.

    ``pairs`` lists the coefficient pairs in candidate order. Skipped: pairs with
    gcd(c1, c2) != 1 (they repeat a primitive candidate's triple) and vectors with
    a zero entry. A surviving vector, sign-normalized, is returned when its power
    or Szpiro quotient is within ``SCREEN_SLACK`` of beating a threshold, or when
    it cannot be screened (too large, or a coefficient resists factoring).
    ``base_vals[i][j]`` is the exponent of ``base_primes[j]`` in the i-th base
    value and ``base_logx[i]`` its natural log.
    """
    out = []
    nb = len(base_primes)
    for c1, c2 in pairs:
        if gcd(c1, c2) != 1:
            continue
        v = [c1 * v1[i] + c2 * v2[i] for i in range(3)]
        if 0 in v:
            continue
        if v[0] < 0:
            v = [-x for x in v]
        vec = (v[0], v[1], v[2])
        if max(abs(x) for x in v) >= SCREEN_ENTRY_LIMIT:
            out.append(vec)
            continue
        facs = []
        for x in v:
            f = _screen_factor(abs(x))
            if f is None:
                break
            facs.append(f)
        else:
            vals: dict[int, list[int]] = {}
            for j in range(nb):
                vals[base_primes[j]] = [base_vals[0][j], base_vals[1][j], base_vals[2][j]]
            for i, f in enumerate(facs):
                for p in f:
                    e = vals.get(p)
                    if e is None:
                        e = vals[p] = [0, 0, 0]
                    e[i] += 1
            log_rad = 0.0
            log_g = 0.0
            for p, e in vals.items():
                lo = min(e)
                if max(e) > lo:
                    log_rad += math.log(p)
                if lo:
                    log_g += lo * math.log(p)
            logs = [math.log(abs(v[i])) + base_logx[i] for i in range(3)]
            if log_rad <= 0.0:
                out.append(vec)
                continue
            power = (max(logs) - log_g) / log_rad
            szpiro = (logs[0] + logs[1] + logs[2] - 3.0 * log_g) / log_rad
            if power > p_threshold - SCREEN_SLACK or szpiro > rho_threshold - SCREEN_SLACK:
                out.append(vec)
            continue
        out.append(vec)
    return out
