"""Slow, obviously-correct reference computations for the tests.

Nothing here imports the package's algorithms; only plain integer and
Fraction arithmetic.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd, isqrt


def trial_is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


def trial_factor(n: int) -> list[tuple[int, int]]:
    out = []
    d = 2
    while d * d <= n:
        e = 0
        while n % d == 0:
            n //= d
            e += 1
        if e:
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


def largest_prime_factor_table(limit: int) -> list[int]:
    """lpf[n] for 0 <= n < limit (lpf[1] = 1), by trial division."""
    table = [0, 1]
    for n in range(2, limit):
        f = trial_factor(n)
        table.append(f[-1][0])
    return table


def gram_schmidt(basis):
    star, norms = [], []
    mu = {}
    for i, b in enumerate(basis):
        v = [Fraction(x) for x in b]
        for j in range(i):
            m = sum(Fraction(x) * y for x, y in zip(b, star[j])) / norms[j]
            mu[i, j] = m
            v = [a - m * c for a, c in zip(v, star[j])]
        star.append(v)
        norms.append(sum(x * x for x in v))
    return mu, norms


def lll_conditions(basis, delta: Fraction) -> tuple[bool, bool]:
    """(size reduced, Lovasz) checked with exact rationals."""
    mu, norms = gram_schmidt(basis)
    size_ok = all(abs(m) <= Fraction(1, 2) for m in mu.values())
    lovasz_ok = all(
        norms[k] >= (delta - mu[k, k - 1] ** 2) * norms[k - 1] for k in range(1, len(basis))
    )
    return size_ok, lovasz_ok


def _solve_rational(rows, target):
    """Coefficients x (Fractions) with sum x_i rows[i] = target, or None."""
    n, m = len(rows), len(target)
    # augmented system columns = rows, solve A^T x = target by elimination
    aug = [[Fraction(rows[i][r]) for i in range(n)] + [Fraction(target[r])] for r in range(m)]
    piv_cols = []
    r = 0
    for c in range(n):
        p = next((k for k in range(r, m) if aug[k][c] != 0), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        pv = aug[r][c]
        aug[r] = [x / pv for x in aug[r]]
        for k in range(m):
            if k != r and aug[k][c] != 0:
                f = aug[k][c]
                aug[k] = [x - f * y for x, y in zip(aug[k], aug[r])]
        piv_cols.append(c)
        r += 1
    if any(row[-1] != 0 for row in aug[r:]):
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(piv_cols):
        x[c] = aug[i][-1]
    return x


def same_lattice(b1, b2) -> bool:
    """Each basis expresses the other's vectors with integer coefficients."""
    for src, dst in ((b1, b2), (b2, b1)):
        for v in dst:
            x = _solve_rational(src, v)
            if x is None or any(c.denominator != 1 for c in x):
                return False
    return True


def shortest_vector_norm2(basis, radius: int) -> int:
    """Brute force over coefficient vectors in [-radius, radius]^n."""
    n = len(basis)
    best = None
    for coeffs in itertools.product(range(-radius, radius + 1), repeat=n):
        if not any(coeffs):
            continue
        v = [sum(c * b[k] for c, b in zip(coeffs, basis)) for k in range(len(basis[0]))]
        nv = sum(x * x for x in v)
        if best is None or nv < best:
            best = nv
    return best


def euclid_convergents(p: int, q: int) -> list[tuple[int, int]]:
    """Convergents of p/q (q > 0) from the floor continued fraction."""
    quotients = []
    while q:
        a = p // q
        quotients.append(a)
        p, q = q, p - a * q
    out = []
    for k in range(1, len(quotients) + 1):
        x = Fraction(quotients[k - 1])
        for a in reversed(quotients[: k - 1]):
            x = a + 1 / x
        out.append((x.numerator, x.denominator))
    return out


def gcd3(a, b, c):
    return gcd(gcd(a, b), c)
