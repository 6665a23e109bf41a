"""Integer number theory: primality, factoring, smooth numbers, radicals.

Every integer that enters a triple is carried as a :class:`Factorization`, a
sorted tuple of ``(prime, exponent)`` pairs plus the exact value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from math import isqrt
from typing import Iterable, Iterator

from abclll import _kernels
from abclll.errors import BoundsTooLarge, IncompleteFactorization

U64_LIMIT = _kernels.U64_LIMIT
# Miller-Rabin with the first 13 primes as bases is exact below this bound.
MR_DETERMINISTIC_LIMIT = 3317044064679887385961981
_MR13 = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)

DEFAULT_MEMBER_CAP = 10**6


@dataclass(frozen=True)
class FactorEffort:
    """Work budget for :func:`factorize`.

    Trial division runs over primes up to ``trial_bound``; every composite
    cofactor then gets at most ``rho_iterations`` Pollard-Brent steps.
    """

    trial_bound: int = 10**5
    rho_iterations: int = 2**26


DEFAULT_EFFORT = FactorEffort()


@dataclass(frozen=True, slots=True)
class Factorization:
    """A positive integer as sorted ``(prime, exponent)`` pairs.

    The public constructor checks every invariant, primality included. Code
    that already holds verified pairs goes through :meth:`trusted`.
    """

    factors: tuple[tuple[int, int], ...] = ()
    value: int = field(init=False, compare=False)

    def __post_init__(self):
        factors = tuple((int(p), int(e)) for p, e in self.factors)
        prev = 1
        for p, e in factors:
            if p <= prev:
                raise ValueError(f"primes must be strictly increasing: {factors}")
            if e < 1:
                raise ValueError(f"exponent of {p} must be positive")
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
            prev = p
        object.__setattr__(self, "factors", factors)
        object.__setattr__(self, "value", _product(factors))

    @classmethod
    def trusted(cls, factors, value: int | None = None) -> Factorization:
        """Build without validation; ``factors`` must already be canonical."""
        obj = object.__new__(cls)
        factors = tuple(factors)
        object.__setattr__(obj, "factors", factors)
        object.__setattr__(obj, "value", _product(factors) if value is None else value)
        return obj

    @classmethod
    def one(cls) -> Factorization:
        return _ONE

    @classmethod
    def from_dict(cls, exponents: dict[int, int]) -> Factorization:
        return cls.trusted(sorted((p, e) for p, e in exponents.items() if e > 0))

    def __int__(self) -> int:
        return self.value

    def __len__(self) -> int:
        return len(self.factors)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.factors)

    def __mul__(self, other: Factorization) -> Factorization:
        if not isinstance(other, Factorization):
            return NotImplemented
        exps = self.as_dict()
        for p, e in other.factors:
            exps[p] = exps.get(p, 0) + e
        return Factorization.from_dict(exps)

    def divide(self, other: Factorization) -> Factorization:
        """Exact quotient; raises ValueError if ``other`` does not divide."""
        exps = self.as_dict()
        for p, e in other.factors:
            left = exps.get(p, 0) - e
            if left < 0:
                raise ValueError(f"{other.value} does not divide {self.value}")
            exps[p] = left
        return Factorization.from_dict(exps)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def exponent(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    def radical(self) -> Factorization:
        return Factorization.trusted((p, 1) for p, _ in self.factors)

    def log(self) -> float:
        """Natural log of the value, as sum of exponent * log(prime)."""
        return math.fsum(e * math.log(p) for p, e in self.factors)

    def is_prime_power(self) -> bool:
        return len(self.factors) == 1


def _product(factors) -> int:
    v = 1
    for p, e in factors:
        v *= p**e
    return v


_ONE = Factorization.trusted(())


@lru_cache(maxsize=8)
def primes_below(limit: int) -> tuple[int, ...]:
    """All primes p < limit."""
    if limit <= 2:
        return ()
    flags = bytearray([1]) * limit
    flags[0:2] = b"\x00\x00"
    for p in range(2, isqrt(limit - 1) + 1):
        if flags[p]:
            flags[p * p :: p] = bytearray(len(range(p * p, limit, p)))
    return tuple(i for i, f in enumerate(flags) if f)


def _strong_probable_prime(n: int, a: int) -> bool:
    d, s = n - 1, 0
    while d & 1 == 0:
        d >>= 1
        s += 1
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def _jacobi(a: int, n: int) -> int:
    a %= n
    result = 1
    while a:
        while a & 1 == 0:
            a >>= 1
            if n & 7 in (3, 5):
                result = -result
        a, n = n, a
        if a & 3 == 3 and n & 3 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _strong_lucas_probable_prime(n: int) -> bool:
    # Selfridge's method A for the parameters.
    d = 5
    while True:
        j = _jacobi(d, n)
        if j == -1:
            break
        if j == 0 and abs(d) != n:
            return False
        d = -d - 2 if d > 0 else -d + 2
    p, q = 1, (1 - d) // 4
    k, s = n + 1, 0
    while k & 1 == 0:
        k >>= 1
        s += 1

    def half(x: int) -> int:
        return (x + n) // 2 % n if x & 1 else x // 2 % n

    # Left-to-right binary ladder for U_k, V_k, Q^k.
    u, v, qk = 1, p, q % n
    for bit in bin(k)[3:]:
        u, v = u * v % n, (v * v - 2 * qk) % n
        qk = qk * qk % n
        if bit == "1":
            u, v = half(p * u + v), half(d * u + p * v)
            qk = qk * q % n
    if u == 0 or v == 0:
        return True
    for _ in range(s - 1):
        v = (v * v - 2 * qk) % n
        qk = qk * qk % n
        if v == 0:
            return True
    return False


def is_prime(n: int) -> bool:
    """Primality test, exact below 3.3e24 and Baillie-PSW above."""
    if n < U64_LIMIT:
        return n >= 2 and _kernels.is_prime_u64(n)
    for p in _MR13:
        if n % p == 0:
            return False
    if n < MR_DETERMINISTIC_LIMIT:
        return all(_strong_probable_prime(n, a) for a in _MR13)
    r = isqrt(n)
    if r * r == n:
        return False
    return _strong_probable_prime(n, 2) and _strong_lucas_probable_prime(n)


def iroot(n: int, k: int) -> int:
    """floor(n ** (1/k)) for n >= 0."""
    if n < 2:
        return n
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def _perfect_power(n: int) -> tuple[int, int] | None:
    for k in primes_below(n.bit_length() + 1):
        r = iroot(n, k)
        if r**k == n:
            return r, k
    return None


def factorize(n: int, effort: FactorEffort = DEFAULT_EFFORT) -> Factorization:
    """Factor ``n >= 1`` completely.

    Raises IncompleteFactorization when a composite cofactor survives the
    Pollard-Brent budget of ``effort``.
    """
    if n < 1:
        raise ValueError(f"factorize needs a positive integer, got {n}")
    if n < U64_LIMIT:
        pairs, cofactor = _kernels.factor_u64(n, effort.trial_bound, effort.rho_iterations)
        if cofactor != 1:
            raise IncompleteFactorization(n, Factorization.trusted(pairs), cofactor)
        return Factorization.trusted(pairs)

    exps: dict[int, int] = {}
    m = n
    for p in primes_below(effort.trial_bound + 1):
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            exps[p] = e
    unsplit = 1
    # (cofactor, multiplicity) pairs still to split
    stack = [(m, 1)]
    while stack:
        x, mult = stack.pop()
        if x == 1:
            continue
        if x < U64_LIMIT:
            pairs, cof = _kernels.factor_u64(x, 1, effort.rho_iterations)
            for p, e in pairs:
                exps[p] = exps.get(p, 0) + e * mult
            unsplit *= cof**mult
        elif is_prime(x):
            exps[x] = exps.get(x, 0) + mult
        elif (pp := _perfect_power(x)) is not None:
            stack.append((pp[0], mult * pp[1]))
        else:
            d = _kernels.rho_brent(x, effort.rho_iterations)
            if d == 0:
                unsplit *= x**mult
            else:
                stack.append((d, mult))
                stack.append((x // d, mult))
    if unsplit != 1:
        raise IncompleteFactorization(n, Factorization.from_dict(exps), unsplit)
    return Factorization.from_dict(exps)


def factor_exponents(n: int, effort: FactorEffort = DEFAULT_EFFORT) -> dict[int, int]:
    return factorize(n, effort).as_dict()


@dataclass(frozen=True)
class SmoothSet:
    """Members are ascending by value, all below ``value_bound`` and built from
    primes below ``prime_bound``."""

    value_bound: int
    prime_bound: int
    members: tuple[Factorization, ...]

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Factorization]:
        return iter(self.members)

    def __getitem__(self, i):
        return self.members[i]

    @property
    def values(self) -> list[int]:
        return [m.value for m in self.members]


def _check_bounds(M: int, N: int) -> None:
    if M < 2 or N < 2:
        raise ValueError(f"bounds must be >= 2, got M={M}, N={N}")


def _too_many(count: int, cap: int, M: int, N: int) -> None:
    if count > cap:
        raise BoundsTooLarge(f"more than {cap} members below M={M} with primes < {N}")


def smooth_numbers(M: int, N: int, cap: int = DEFAULT_MEMBER_CAP) -> SmoothSet:
    """Every n < M whose prime factors are all < N, 1 included."""
    _check_bounds(M, N)
    primes = [p for p in primes_below(N) if p < M]
    members: list[tuple[int, tuple]] = [(1, ())]
    # depth-first: (next prime index, value, factors so far)
    stack = [(0, 1, ())]
    while stack:
        start, value, factors = stack.pop()
        for j in range(start, len(primes)):
            p = primes[j]
            v = value * p
            if v >= M:
                break
            e = 1
            while v < M:
                f = factors + ((p, e),)
                members.append((v, f))
                stack.append((j + 1, v, f))
                v *= p
                e += 1
            _too_many(len(members), cap, M, N)
    members.sort()
    return SmoothSet(M, N, tuple(Factorization.trusted(f, v) for v, f in members))


def prime_powers(M: int, N: int, include_one: bool = False,
                 cap: int = DEFAULT_MEMBER_CAP) -> SmoothSet:
    """The members of ``smooth_numbers(M, N)`` that are p**k, k >= 1."""
    _check_bounds(M, N)
    members = [(1, ())] if include_one else []
    for p in primes_below(N):
        v, e = p, 1
        while v < M:
            members.append((v, ((p, e),)))
            v *= p
            e += 1
        _too_many(len(members), cap, M, N)
    members.sort()
    return SmoothSet(M, N, tuple(Factorization.trusted(f, v) for v, f in members))


def prime_power_products(M: int, N: int, include_one: bool = False,
                         cap: int = DEFAULT_MEMBER_CAP) -> SmoothSet:
    """Members of ``smooth_numbers(M, N)`` with one or two distinct primes."""
    single = prime_powers(M, N, include_one=False, cap=cap)
    members = [(1, ())] if include_one else []
    members.extend((m.value, m.factors) for m in single)
    for i, x in enumerate(single.members):
        for y in single.members[i + 1 :]:
            if y.factors[0][0] == x.factors[0][0]:
                continue
            v = x.value * y.value
            if v < M:
                members.append((v, tuple(sorted(x.factors + y.factors))))
        _too_many(len(members), cap, M, N)
    members.sort()
    return SmoothSet(M, N, tuple(Factorization.trusted(f, v) for v, f in members))


def radical(a: Factorization, b: Factorization, c: Factorization) -> Factorization:
    """Product of the distinct primes dividing a*b*c."""
    primes = set(a.primes) | set(b.primes) | set(c.primes)
    return Factorization.trusted((p, 1) for p in sorted(primes))


def gcd_factored(a: Factorization, b: Factorization) -> Factorization:
    """Componentwise minimum of exponents."""
    bexp = b.as_dict()
    return Factorization.trusted(
        (p, min(e, bexp[p])) for p, e in a.factors if p in bexp
    )


def multiply(factorizations: Iterable[Factorization]) -> Factorization:
    exps: dict[int, int] = {}
    for f in factorizations:
        for p, e in f.factors:
            exps[p] = exps.get(p, 0) + e
    return Factorization.from_dict(exps)
