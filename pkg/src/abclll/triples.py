"""ABC triples: construction from relations, metrics, classification, text I/O."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from abclll.errors import DegenerateRelation, ParseError, RadicalIsOne
from abclll.lattice import RelationVector
from abclll.numt import (
    DEFAULT_EFFORT,
    FactorEffort,
    Factorization,
    factorize,
    gcd_factored,
    radical,
)

GOOD_ABC = 1.4
GOOD_SZPIRO = 4.0

_LOG10 = math.log(10.0)


def log_radical(a: Factorization, b: Factorization, c: Factorization) -> float:
    return math.fsum(math.log(p) for p in radical(a, b, c).primes)


def triple_metrics(a: Factorization, b: Factorization, c: Factorization) -> tuple[float, float, float]:
    """(power, Szpiro quotient, log10 of the size) for any three factorizations.

    The size is the largest of the three values, so the arguments need not be
    ordered or coprime.
    """
    lr = log_radical(a, b, c)
    if lr == 0.0:
        raise RadicalIsOne("rad(A, B, C) = 1, metrics undefined")
    logs = [a.log(), b.log(), c.log()]
    big = max((a, b, c), key=lambda f: f.value).log()
    return big / lr, math.fsum(logs) / lr, big / _LOG10


@dataclass(frozen=True)
class AbcTriple:
    """Coprime a + b = c with a <= b < c, in factored form."""

    a: Factorization
    b: Factorization
    c: Factorization
    p_metric: float
    rho_metric: float
    size_log10: float

    @property
    def values(self) -> tuple[int, int, int]:
        return self.a.value, self.b.value, self.c.value

    @property
    def radical(self) -> Factorization:
        return radical(self.a, self.b, self.c)

    def __str__(self) -> str:
        return f"{format_factored(self.a)} + {format_factored(self.b)} = {format_factored(self.c)}"


def make_triple(a: Factorization, b: Factorization, c: Factorization) -> AbcTriple:
    """Validate and order a triple given in factored form."""
    if a.value + b.value != c.value:
        raise ValueError(f"{a.value} + {b.value} != {c.value}")
    if a.value > b.value:
        a, b = b, a
    for x, y in ((a, b), (a, c), (b, c)):
        if gcd_factored(x, y).value != 1:
            raise ValueError(f"{x.value} and {y.value} are not coprime")
    p, rho, size = triple_metrics(a, b, c)
    return AbcTriple(a, b, c, p, rho, size)


@dataclass(frozen=True)
class BaseTriple:
    """Three distinct positive values whose relation lattice is searched."""

    a0: Factorization
    b0: Factorization
    c0: Factorization

    def __post_init__(self):
        vals = self.values
        if min(vals) < 1:
            raise ValueError(f"base values must be positive: {vals}")
        if len(set(vals)) != 3:
            raise ValueError(f"base values must be pairwise distinct: {vals}")

    @property
    def values(self) -> tuple[int, int, int]:
        return self.a0.value, self.b0.value, self.c0.value

    def __iter__(self):
        return iter((self.a0, self.b0, self.c0))


def build_triple(rel, base: BaseTriple, effort: FactorEffort = DEFAULT_EFFORT) -> AbcTriple:
    """Turn a relation alpha*A0 + beta*B0 + gamma*C0 = 0 into a reduced triple.

    The two terms of equal sign become A and B, the third becomes C; the common
    gcd is divided out. Raises DegenerateRelation for a zero coefficient and
    lets IncompleteFactorization through from the coefficient factoring.
    """
    rel = RelationVector(*rel)
    if 0 in rel:
        raise DegenerateRelation(f"relation {tuple(rel)} has a zero entry")
    if rel.dot(base.values) != 0:
        raise ValueError(f"{tuple(rel)} does not annihilate {base.values}")
    terms = []
    for coef, x in zip(rel, base):
        f = x * factorize(abs(coef), effort) if abs(coef) != 1 else x
        terms.append((coef > 0, f))
    # exactly one term has the minority sign
    signs = [s for s, _ in terms]
    odd = 0 if signs[1] == signs[2] else (1 if signs[0] == signs[2] else 2)
    c = terms[odd][1]
    a, b = (f for i, (_, f) in enumerate(terms) if i != odd)
    g = gcd_factored(gcd_factored(a, b), c)
    if g.value != 1:
        a, b, c = a.divide(g), b.divide(g), c.divide(g)
    if a.value > b.value:
        a, b = b, a
    if a.value + b.value != c.value:
        raise AssertionError("relation arithmetic broke: A + B != C")
    p, rho, size = triple_metrics(a, b, c)
    return AbcTriple(a, b, c, p, rho, size)


def power(t: AbcTriple) -> float:
    """log C / log rad(A, B, C)."""
    lr = log_radical(t.a, t.b, t.c)
    if lr == 0.0:
        raise RadicalIsOne("rad(A, B, C) = 1")
    return t.c.log() / lr


def szpiro(t: AbcTriple) -> float:
    """log(A B C) / log rad(A, B, C)."""
    lr = log_radical(t.a, t.b, t.c)
    if lr == 0.0:
        raise RadicalIsOne("rad(A, B, C) = 1")
    return math.fsum((t.a.log(), t.b.log(), t.c.log())) / lr


def classify(t: AbcTriple, p_threshold: float = GOOD_ABC,
             rho_threshold: float = GOOD_SZPIRO) -> tuple[bool, bool]:
    """(good ABC, good Szpiro), both strict comparisons."""
    return t.p_metric > p_threshold, t.rho_metric > rho_threshold


_TERM = re.compile(r"(\d+)(?:\^(\d+))?")


def parse_factored(expr: str, effort: FactorEffort = DEFAULT_EFFORT) -> Factorization:
    """Parse ``term ("*" term)*`` with ``term = int ("^" int)?``.

    Bases need not be prime: each is factored, so stated primes are checked
    rather than trusted.
    """
    text = "".join(expr.split())
    if not text:
        raise ParseError("empty factored expression")
    exps: dict[int, int] = {}
    for term in text.split("*"):
        m = _TERM.fullmatch(term)
        if m is None:
            raise ParseError(f"bad term {term!r} in {expr!r}")
        base = int(m.group(1))
        e = int(m.group(2)) if m.group(2) is not None else 1
        if base < 1 or e < 1:
            raise ParseError(f"base and exponent must be positive in {term!r}")
        if base == 1:
            continue
        for p, k in factorize(base, effort).factors:
            exps[p] = exps.get(p, 0) + k * e
    return Factorization.from_dict(exps)


def format_factored(f: Factorization) -> str:
    """Canonical text ``p1^e1*p2^e2*...``; ``^1`` omitted, empty product is ``1``."""
    if not f.factors:
        return "1"
    return "*".join(str(p) if e == 1 else f"{p}^{e}" for p, e in f.factors)


def estimate_worst_case_power(size: float, p: float, q: float, r: float) -> float:
    """Power of the triple given by a worst-case shortest relation.

    Three bases of magnitude ``size`` built on primes p, q, r admit a relation
    with coefficients near sqrt(3*size). The result is below 1 for every size
    and increases towards 1 as ``size`` grows.
    """
    if size <= 1:
        raise ValueError("size must exceed 1")
    if min(p, q, r) < 2:
        raise ValueError("primes must be >= 2")
    # in logs: size * sqrt(3 size) overflows a double long before size does
    log_root = 0.5 * (math.log(3.0) + math.log(size))
    return (math.log(size) + log_root) / math.fsum(
        (3.0 * log_root, math.log(p), math.log(q), math.log(r)))
