"""Find and verify high-quality ABC and Szpiro triples with LLL-reduced
relation lattices of numbers with small radical."""

from abclll._kernels import BACKEND
from abclll.errors import (
    AbcError,
    BoundsTooLarge,
    DegenerateRelation,
    DependentRows,
    IncompleteFactorization,
    OutputUnwritable,
    ParseError,
    RadicalIsOne,
    ZeroDenominator,
)
from abclll.lattice import (
    Convergent,
    RelationVector,
    combine_candidates,
    convergents,
    hnf,
    lll_reduce,
    relation_basis,
)
from abclll.numt import (
    FactorEffort,
    Factorization,
    SmoothSet,
    factorize,
    gcd_factored,
    is_prime,
    prime_powers,
    radical,
    smooth_numbers,
)
from abclll.search import (
    SearchConfig,
    SearchRecord,
    SearchStats,
    canonical_key,
    enumerate_bases,
    evaluate_base,
    run_search,
    verify_tables,
)
from abclll.triples import (
    AbcTriple,
    BaseTriple,
    build_triple,
    classify,
    estimate_worst_case_power,
    format_factored,
    parse_factored,
    power,
    szpiro,
)

__version__ = "0.1.0"
