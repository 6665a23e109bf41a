"""Exact integer lattice tools: LLL, Hermite normal form, relation lattices,
continued-fraction convergents and the small-combination generator.

No floating point is used in any decision; vectors are tuples of Python ints.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import NamedTuple, Sequence

from abclll.errors import DependentRows, ZeroDenominator

IntVector = tuple[int, ...]
LatticeBasis = list[IntVector]

DEFAULT_DELTA = Fraction(99, 100)
DEFAULT_CF_DEPTH = 16
DEFAULT_BOX = 8


class RelationVector(NamedTuple):
    """Coefficients (alpha, beta, gamma) with alpha*A0 + beta*B0 + gamma*C0 = 0."""

    alpha: int
    beta: int
    gamma: int

    def dot(self, values: Sequence[int]) -> int:
        return self.alpha * values[0] + self.beta * values[1] + self.gamma * values[2]

    def normalized(self) -> RelationVector:
        return RelationVector(*normalize_sign(self))

    def __neg__(self) -> RelationVector:
        return RelationVector(-self.alpha, -self.beta, -self.gamma)


class Convergent(NamedTuple):
    p: int
    q: int

    def __float__(self) -> float:
        return self.p / self.q

    def as_fraction(self) -> Fraction:
        return Fraction(self.p, self.q)


def dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


def norm2(v: Sequence[int]) -> int:
    return sum(a * a for a in v)


def normalize_sign(v: Sequence[int]) -> IntVector:
    """Flip ``v`` so its first nonzero entry is positive."""
    for x in v:
        if x:
            return tuple(v) if x > 0 else tuple(-y for y in v)
    return tuple(v)


def gram_determinant(basis: Sequence[Sequence[int]]) -> int:
    """det of the Gram matrix, by fraction-free Gaussian elimination."""
    gram = [[dot(u, v) for v in basis] for u in basis]
    return _bareiss_det(gram)


def _bareiss_det(m: list[list[int]]) -> int:
    m = [row[:] for row in m]
    n = len(m)
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1] if n else 1


def _round_div(a: int, b: int) -> int:
    """Nearest integer to a/b for b > 0, halves rounded up."""
    return (2 * a + b) // (2 * b)


def lll_reduce(basis: Sequence[Sequence[int]], delta=DEFAULT_DELTA) -> LatticeBasis:
    """LLL-reduce the rows of ``basis`` with Lovasz parameter ``delta``.

    Integral variant: the Gram-Schmidt data is kept as the integers
    d_i (leading Gram minors) and lambda_ij = d_j * mu_ij, so every step is
    exact. ``delta`` may be any rational in (1/4, 1].
    """
    delta = Fraction(delta)
    if not Fraction(1, 4) < delta <= 1:
        raise ValueError(f"delta must lie in (1/4, 1], got {delta}")
    b = [list(map(int, row)) for row in basis]
    n = len(b)
    if n == 0:
        return []
    dim = len(b[0])
    if any(len(row) != dim for row in b):
        raise ValueError("rows of unequal dimension")
    dn, dd = delta.numerator, delta.denominator

    # d[0] = 1 and d[i+1] is the Gram minor of rows 0..i
    d = [1] + [0] * n
    lam = [[0] * n for _ in range(n)]

    d[1] = norm2(b[0])
    if d[1] == 0:
        raise DependentRows("zero vector in basis")
    kmax = 0
    k = 1

    def red(k: int, l: int) -> None:
        if 2 * abs(lam[k][l]) > d[l + 1]:
            q = _round_div(lam[k][l], d[l + 1])
            bk, bl = b[k], b[l]
            for i in range(dim):
                bk[i] -= q * bl[i]
            lam[k][l] -= q * d[l + 1]
            lk, ll = lam[k], lam[l]
            for i in range(l):
                lk[i] -= q * ll[i]

    def swap(k: int) -> None:
        b[k], b[k - 1] = b[k - 1], b[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lm = lam[k][k - 1]
        new = (d[k - 1] * d[k + 1] + lm * lm) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - lm * t) // d[k]
            lam[i][k - 1] = (new * t + lm * lam[i][k]) // d[k + 1]
        d[k] = new

    while k < n:
        if k > kmax:
            kmax = k
            for j in range(k + 1):
                u = dot(b[k], b[j])
                for i in range(j):
                    u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
                if j < k:
                    lam[k][j] = u
                else:
                    if u == 0:
                        raise DependentRows("basis rows are linearly dependent")
                    d[k + 1] = u
        red(k, k - 1)
        lm = lam[k][k - 1]
        if dd * (d[k + 1] * d[k - 1] + lm * lm) < dn * d[k] * d[k]:
            swap(k)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1
    return [tuple(row) for row in b]


def gram_schmidt(basis: Sequence[Sequence[int]]) -> tuple[list[list[Fraction]], list[Fraction]]:
    """Exact rational Gram-Schmidt: returns (mu, squared norms of b*_i)."""
    n = len(basis)
    star: list[list[Fraction]] = []
    bnorm: list[Fraction] = []
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        v = [Fraction(x) for x in basis[i]]
        for j in range(i):
            mu[i][j] = sum(Fraction(x) * y for x, y in zip(basis[i], star[j])) / bnorm[j]
            v = [a - mu[i][j] * c for a, c in zip(v, star[j])]
        star.append(v)
        bnorm.append(sum(x * x for x in v))
    return mu, bnorm


def is_lll_reduced(basis: Sequence[Sequence[int]], delta=DEFAULT_DELTA) -> bool:
    """Check size reduction and the Lovasz condition exactly."""
    delta = Fraction(delta)
    mu, bn = gram_schmidt(basis)
    n = len(basis)
    for i in range(n):
        for j in range(i):
            if abs(mu[i][j]) > Fraction(1, 2):
                return False
    for k in range(1, n):
        if bn[k] < (delta - mu[k][k - 1] ** 2) * bn[k - 1]:
            return False
    return True


def hnf(basis: Sequence[Sequence[int]]) -> LatticeBasis:
    """Row-style Hermite normal form of a full-row-rank integer basis.

    Pivots are positive, entries above a pivot lie in [0, pivot), and entries
    below and left of it are zero. Equal lattices give identical output.
    """
    rows = [list(map(int, r)) for r in basis]
    if not rows:
        return []
    ncols = len(rows[0])
    out: list[list[int]] = []
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        # gcd-combine the column into row r using unimodular row operations
        for i in range(r + 1, len(rows)):
            if rows[i][col] == 0:
                continue
            a, c = rows[r][col], rows[i][col]
            g, x, y = _xgcd(a, c)
            ra, ri = rows[r], rows[i]
            ua, uc = a // g, c // g
            rows[r] = [x * s + y * t for s, t in zip(ra, ri)]
            rows[i] = [ua * t - uc * s for s, t in zip(ra, ri)]
        if r < len(rows) and rows[r][col] != 0:
            if rows[r][col] < 0:
                rows[r] = [-x for x in rows[r]]
            pivots.append(col)
            r += 1
            if r == len(rows):
                break
    if r < len(rows):
        raise DependentRows("basis rows are linearly dependent")
    out = rows
    for i, col in enumerate(pivots):
        p = out[i][col]
        for k in range(i):
            q = out[k][col] // p
            if q:
                out[k] = [a - q * b for a, b in zip(out[k], out[i])]
    return [tuple(row) for row in out]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def kernel_basis(values: Sequence[int]) -> tuple[IntVector, IntVector]:
    """An (unreduced) basis of {x in Z^3 : x . values = 0} from extended gcds."""
    a, b, c = values
    g1, x, y = _xgcd(a, b)
    if g1 == 0:
        # a = b = 0: kernel is spanned by e1, e2 when c != 0
        return (1, 0, 0), (0, 1, 0)
    g, _, _ = _xgcd(g1, c)
    k1 = (b // g1, -a // g1, 0)
    k2 = (x * (c // g), y * (c // g), -(g1 // g))
    return k1, k2


def _order_key(v: IntVector):
    return norm2(v), v


def relation_basis(a0, b0, c0, delta=DEFAULT_DELTA) -> tuple[RelationVector, RelationVector]:
    """Reduced basis (v1, v2) of all integer relations among a0, b0, c0.

    Arguments may be ints or anything with ``int()``, e.g. Factorization.
    v1 is the shorter vector; both are sign-normalized. Equal values are
    allowed here; distinctness is a property of search bases.
    """
    vals = (int(a0), int(b0), int(c0))
    if min(vals) <= 0:
        raise ValueError(f"base values must be positive, got {vals}")
    v1, v2 = lll_reduce(kernel_basis(vals), delta)
    # finish as a Lagrange reduction so v1 is a shortest vector
    while norm2(v2) < norm2(v1):
        v1, v2 = v2, v1
        q = _round_div(dot(v1, v2), norm2(v1))
        v2 = tuple(s - q * t for s, t in zip(v2, v1))
    v1, v2 = normalize_sign(v1), normalize_sign(v2)
    if _order_key(v2) < _order_key(v1):
        v1, v2 = v2, v1
    return RelationVector(*v1), RelationVector(*v2)


def convergents(num: int, den: int, max_depth: int) -> list[Convergent]:
    """Continued-fraction convergents of num/den, at most ``max_depth``.

    Partial quotients use floor division, so -23/12 starts with -2/1.
    """
    if den == 0:
        raise ZeroDenominator(f"{num}/0 has no continued fraction")
    if den < 0:
        num, den = -num, -den
    out: list[Convergent] = []
    p0, q0, p1, q1 = 1, 0, 0, 1
    while len(out) < max_depth:
        a, r = divmod(num, den)
        p0, p1 = a * p0 + p1, p0
        q0, q1 = a * q0 + q1, q0
        out.append(Convergent(p0, q0))
        if r == 0:
            break
        num, den = den, r
    return out


@lru_cache(maxsize=32)
def box_pairs(box: int) -> tuple[tuple[int, int], ...]:
    """Coefficient pairs (c1, c2) with |c1|, |c2| <= box, one per sign class."""
    return tuple(
        (c1, c2)
        for c1 in range(0, box + 1)
        for c2 in range(-box, box + 1)
        if c1 > 0 or c2 > 0
    )


def coefficient_pairs(v1: Sequence[int], v2: Sequence[int], cf_depth: int = DEFAULT_CF_DEPTH,
                      box: int = DEFAULT_BOX) -> list[tuple[int, int]]:
    """The (c1, c2) tried for c1*v1 + c2*v2, in candidate order."""
    pairs = [(1, 0), (0, 1)]
    for i in range(3):
        if v2[i] == 0:
            continue
        for cv in convergents(-v1[i], v2[i], cf_depth):
            pairs.append((cv.q, cv.p))
    pairs.extend(box_pairs(box))
    return pairs


def combine_candidates(v1: Sequence[int], v2: Sequence[int], cf_depth: int = DEFAULT_CF_DEPTH,
                       box: int = DEFAULT_BOX) -> list[RelationVector]:
    """Small combinations c1*v1 + c2*v2 worth turning into triples.

    v1 and v2 come first, then for each coordinate i the combinations from
    the convergents c2/c1 of -v1[i]/v2[i] (these make entry i small), then
    the whole box |c1|, |c2| <= box. Sign-normalized, deduplicated, no zero
    vector.
    """
    seen: set[IntVector] = set()
    out: list[RelationVector] = []
    for c1, c2 in coefficient_pairs(v1, v2, cf_depth, box):
        v = normalize_sign(tuple(c1 * x + c2 * y for x, y in zip(v1, v2)))
        if not any(v) or v in seen:
            continue
        seen.add(v)
        out.append(RelationVector(*v))
    return out
