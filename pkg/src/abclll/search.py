"""The search pipeline: bases from a smooth set, relation lattices, small
combinations, triples, filtering, deduplication and JSONL persistence.

Results are a pure function of the :class:`SearchConfig`; the worker count
only changes how fast they arrive.
"""

from __future__ import annotations

import dataclasses
import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, islice
from pathlib import Path
from typing import Iterator

from abclll import _kernels
from abclll.errors import DegenerateRelation, IncompleteFactorization, OutputUnwritable, ParseError
from abclll.lattice import (
    DEFAULT_BOX,
    DEFAULT_CF_DEPTH,
    DEFAULT_DELTA,
    RelationVector,
    coefficient_pairs,
    combine_candidates,
    relation_basis,
)
from abclll.numt import (
    DEFAULT_MEMBER_CAP,
    FactorEffort,
    SmoothSet,
    gcd_factored,
    prime_power_products,
    prime_powers,
    smooth_numbers,
)
from abclll.triples import (
    GOOD_ABC,
    GOOD_SZPIRO,
    AbcTriple,
    BaseTriple,
    build_triple,
    format_factored,
    parse_factored,
    triple_metrics,
)

log = logging.getLogger(__name__)

MODES = ("smooth", "prime_powers", "prime_power_products_2")
CHUNK_SIZE = 2048

TABLE_METRIC_TOL = 1e-6
TABLE_LOG10_TOL = 0.05
TABLE_COLUMNS = ("kind", "a", "b", "c", "expected_metric", "expected_log10c")


@dataclass(frozen=True)
class SearchConfig:
    value_bound: int = 10**7
    prime_bound: int = 24
    mode: str = "prime_powers"
    include_one: bool = False
    p_threshold: float = GOOD_ABC
    rho_threshold: float = GOOD_SZPIRO
    cf_depth: int = DEFAULT_CF_DEPTH
    box: int = DEFAULT_BOX
    factor_effort: FactorEffort = field(default_factory=FactorEffort)
    worker_count: int = 1
    output_path: str | None = None
    delta: Fraction = DEFAULT_DELTA
    member_cap: int = DEFAULT_MEMBER_CAP

    def __post_init__(self):
        if self.value_bound < 2 or self.prime_bound < 2:
            raise ValueError("value_bound and prime_bound must be >= 2")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if math.isnan(self.p_threshold) or math.isnan(self.rho_threshold):
            raise ValueError("thresholds must be numbers")
        if self.worker_count < 1:
            raise ValueError("worker_count must be >= 1")
        if self.cf_depth < 0 or self.box < 0:
            raise ValueError("cf_depth and box must be >= 0")

    def to_json(self) -> dict:
        d = dataclasses.asdict(self)
        d["delta"] = str(self.delta)
        return d


@dataclass(frozen=True)
class SearchRecord:
    triple: AbcTriple
    base: BaseTriple
    relation: RelationVector

    @property
    def p_metric(self) -> float:
        return self.triple.p_metric

    @property
    def rho_metric(self) -> float:
        return self.triple.rho_metric

    @property
    def size_log10(self) -> float:
        return self.triple.size_log10

    def to_json(self) -> dict:
        t = self.triple
        return {
            "a": format_factored(t.a),
            "b": format_factored(t.b),
            "c": format_factored(t.c),
            "p": _sig10(t.p_metric),
            "rho": _sig10(t.rho_metric),
            "size_log10": _sig10(t.size_log10),
            "base_a0": format_factored(self.base.a0),
            "base_b0": format_factored(self.base.b0),
            "base_c0": format_factored(self.base.c0),
            "alpha": self.relation.alpha,
            "beta": self.relation.beta,
            "gamma": self.relation.gamma,
        }

    def to_line(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, obj: dict) -> SearchRecord:
        """Rebuild a record, recomputing everything from the relation."""
        base = BaseTriple(*(parse_factored(obj[k]) for k in ("base_a0", "base_b0", "base_c0")))
        rel = RelationVector(obj["alpha"], obj["beta"], obj["gamma"])
        return cls(build_triple(rel, base), base, rel)


def _sig10(x: float) -> float:
    return float(f"{x:.10g}")


@dataclass
class SearchStats:
    bases_examined: int = 0
    candidates_considered: int = 0
    candidates_built: int = 0
    factorization_skips: int = 0
    duplicates: int = 0
    good_abc_found: int = 0
    good_szpiro_found: int = 0
    wall_time: float = 0.0

    def add(self, other: SearchStats) -> None:
        for f in ("bases_examined", "candidates_considered", "candidates_built",
                  "factorization_skips", "duplicates"):
            setattr(self, f, getattr(self, f) + getattr(other, f))

    def summary(self) -> str:
        return (
            f"bases {self.bases_examined}, candidates {self.candidates_considered}, "
            f"built {self.candidates_built}, factorization skips {self.factorization_skips}, "
            f"duplicates {self.duplicates}, good ABC {self.good_abc_found}, "
            f"good Szpiro {self.good_szpiro_found}, {self.wall_time:.1f}s"
        )


def canonical_key(t: AbcTriple) -> str:
    """``A+B=C`` in canonical factored text, A <= B."""
    a, b = (t.a, t.b) if t.a.value <= t.b.value else (t.b, t.a)
    return f"{format_factored(a)}+{format_factored(b)}={format_factored(t.c)}"


def member_set(cfg: SearchConfig) -> SmoothSet:
    M, N = cfg.value_bound, cfg.prime_bound
    if cfg.mode == "prime_powers":
        return prime_powers(M, N, cfg.include_one, cfg.member_cap)
    if cfg.mode == "prime_power_products_2":
        return prime_power_products(M, N, cfg.include_one, cfg.member_cap)
    s = smooth_numbers(M, N, cfg.member_cap)
    if not cfg.include_one:
        s = SmoothSet(s.value_bound, s.prime_bound, s.members[1:])
    return s


def enumerate_bases(members: SmoothSet) -> Iterator[BaseTriple]:
    """Every 3-subset once, lexicographic by ascending value."""
    for a, b, c in combinations(members.members, 3):
        yield BaseTriple(a, b, c)


def _keep(t: AbcTriple, cfg: SearchConfig) -> bool:
    return t.p_metric > cfg.p_threshold or t.rho_metric > cfg.rho_threshold


def _screened(base: BaseTriple, v1, v2, pairs, cfg: SearchConfig) -> list[tuple[int, int, int]]:
    primes = sorted(set(base.a0.primes) | set(base.b0.primes) | set(base.c0.primes))
    vals = tuple(tuple(f.exponent(p) for p in primes) for f in base)
    logx = tuple(f.log() for f in base)
    return _kernels.screen_candidates(v1, v2, pairs, primes, vals, logx,
                                      float(cfg.p_threshold), float(cfg.rho_threshold))


def evaluate_base(base: BaseTriple, cfg: SearchConfig, stats: SearchStats | None = None,
                  screen: bool = True) -> list[SearchRecord]:
    """Records from one base triple that beat either threshold.

    With ``screen`` on, the compiled (or pure-Python) kernel discards
    candidates whose float metrics fall clearly short before the exact build;
    with it off, every candidate from ``combine_candidates`` is built. Both
    routes return the same records.
    """
    if stats is None:
        stats = SearchStats()
    stats.bases_examined += 1
    v1, v2 = relation_basis(*base.values, cfg.delta)
    if screen:
        pairs = coefficient_pairs(v1, v2, cfg.cf_depth, cfg.box)
        cands = _screened(base, v1, v2, pairs, cfg)
        stats.candidates_considered += len(pairs)
    else:
        cands = combine_candidates(v1, v2, cfg.cf_depth, cfg.box)
        stats.candidates_considered += len(cands)
    records: list[SearchRecord] = []
    seen_vec: set = set()
    seen_key: set[str] = set()
    for vec in cands:
        vec = tuple(vec)
        if vec in seen_vec:
            continue
        seen_vec.add(vec)
        try:
            t = build_triple(vec, base, cfg.factor_effort)
        except DegenerateRelation:
            continue
        except IncompleteFactorization:
            stats.factorization_skips += 1
            continue
        stats.candidates_built += 1
        if not _keep(t, cfg):
            continue
        key = canonical_key(t)
        if key in seen_key:
            stats.duplicates += 1
            continue
        seen_key.add(key)
        records.append(SearchRecord(t, base, RelationVector(*vec)))
    return records


# per-process state for worker chunks
_STATE: tuple[tuple, SearchConfig] | None = None


def _init_worker(members: tuple, cfg: SearchConfig) -> None:
    global _STATE
    _STATE = (members, cfg)


def _evaluate_chunk(bounds: tuple[int, int]) -> tuple[list[SearchRecord], SearchStats]:
    members, cfg = _STATE
    start, stop = bounds
    stats = SearchStats()
    out: list[SearchRecord] = []
    for a, b, c in islice(combinations(members, 3), start, stop):
        out.extend(evaluate_base(BaseTriple(a, b, c), cfg, stats))
    return out, stats


def _sort_key(rec: SearchRecord, cfg: SearchConfig):
    margin = max(rec.p_metric - cfg.p_threshold, rec.rho_metric - cfg.rho_threshold)
    return -margin, canonical_key(rec.triple)


def _open_output(cfg: SearchConfig):
    try:
        path = Path(cfg.output_path)
        fh = path.open("a", encoding="utf-8")
    except OSError as exc:
        raise OutputUnwritable(f"cannot write {cfg.output_path}: {exc}") from exc
    return fh


def run_search(cfg: SearchConfig) -> tuple[list[SearchRecord], SearchStats]:
    """Run the whole search; returns (records, stats) and appends JSONL output.

    Bases are cut into contiguous chunks of the canonical order and handed to
    ``worker_count`` processes. Chunk results are merged in order; the first
    record for each canonical key wins.
    """
    t0 = time.perf_counter()
    fh = _open_output(cfg) if cfg.output_path else None
    try:
        if fh is not None:
            fh.write(json.dumps({"config": cfg.to_json(), "backend": _kernels.BACKEND}) + "\n")
            fh.flush()
        members = member_set(cfg).members
        n = len(members)
        total = n * (n - 1) * (n - 2) // 6
        chunks = [(s, min(s + CHUNK_SIZE, total)) for s in range(0, total, CHUNK_SIZE)]
        log.info("%d members, %d bases, %d chunks, %d workers, kernel %s",
                 n, total, len(chunks), cfg.worker_count, _kernels.BACKEND)

        stats = SearchStats()
        merged: list[SearchRecord] = []
        seen: set[str] = set()

        def absorb(results) -> None:
            for recs, st in results:
                stats.add(st)
                for r in recs:
                    key = canonical_key(r.triple)
                    if key in seen:
                        stats.duplicates += 1
                        continue
                    seen.add(key)
                    merged.append(r)
                log.info("bases %d/%d, %d records", stats.bases_examined, total, len(merged))

        if cfg.worker_count == 1 or len(chunks) <= 1:
            _init_worker(members, cfg)
            absorb(map(_evaluate_chunk, chunks))
        else:
            with ProcessPoolExecutor(max_workers=cfg.worker_count, initializer=_init_worker,
                                     initargs=(members, cfg)) as pool:
                absorb(pool.map(_evaluate_chunk, chunks))

        merged.sort(key=lambda r: _sort_key(r, cfg))
        stats.good_abc_found = sum(r.p_metric > GOOD_ABC for r in merged)
        stats.good_szpiro_found = sum(r.rho_metric > GOOD_SZPIRO for r in merged)
        stats.wall_time = time.perf_counter() - t0
        if fh is not None:
            for r in merged:
                fh.write(r.to_line() + "\n")
    finally:
        if fh is not None:
            fh.close()
    return merged, stats


def read_records(path) -> list[dict]:
    """Record objects from a JSONL output file, config headers skipped."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            if "config" not in obj:
                out.append(obj)
    return out


@dataclass
class RowResult:
    row: int
    kind: str
    key: str
    sum_ok: bool
    coprime_ok: bool
    metric: float | None
    expected_metric: float
    log10c: float | None
    expected_log10c: float

    @property
    def metric_ok(self) -> bool:
        return self.metric is not None and abs(self.metric - self.expected_metric) <= TABLE_METRIC_TOL

    @property
    def log10_ok(self) -> bool:
        return self.log10c is not None and abs(self.log10c - self.expected_log10c) <= TABLE_LOG10_TOL

    @property
    def passed(self) -> bool:
        return self.sum_ok and self.coprime_ok and self.metric_ok and self.log10_ok

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        metric = "nan" if self.metric is None else f"{self.metric:.10f}"
        return (f"{status} row {self.row} {self.kind}: {self.key} "
                f"metric {metric} (printed {self.expected_metric:.8f}) "
                f"sum={'ok' if self.sum_ok else 'BAD'} coprime={'ok' if self.coprime_ok else 'BAD'}")


@dataclass
class TableReport:
    rows: list[RowResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def count(self, kind: str) -> int:
        return sum(r.kind == kind for r in self.rows)


def verify_tables(fixture_path) -> TableReport:
    """Recheck every row of a TSV fixture of published triples.

    Columns: kind (szpiro|abc), a, b, c, expected_metric, expected_log10c.
    A leading header line and blank or ``#`` lines are skipped.
    """
    rows: list[RowResult] = []
    with open(fixture_path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            cells = [c.strip() for c in line.split("\t")]
            if tuple(cells) == TABLE_COLUMNS:
                continue
            if len(cells) != len(TABLE_COLUMNS):
                raise ParseError(f"expected {len(TABLE_COLUMNS)} columns, got {len(cells)}", row=lineno)
            kind = cells[0]
            if kind not in ("szpiro", "abc"):
                raise ParseError(f"unknown kind {kind!r}", row=lineno)
            try:
                a, b, c = (parse_factored(x) for x in cells[1:4])
                expected = float(cells[4])
                expected_lg = float(cells[5])
            except (ParseError, ValueError) as exc:
                raise ParseError(str(exc), row=lineno) from exc
            sum_ok = a.value + b.value == c.value
            coprime_ok = all(gcd_factored(x, y).value == 1 for x, y in ((a, b), (a, c), (b, c)))
            p, rho, lg = triple_metrics(a, b, c)
            metric = rho if kind == "szpiro" else p
            key = f"{format_factored(a)}+{format_factored(b)}={format_factored(c)}"
            rows.append(RowResult(lineno, kind, key, sum_ok, coprime_ok, metric, expected, lg, expected_lg))
    return TableReport(rows)


def default_fixture() -> Path:
    return Path(__file__).with_name("data") / "published_tables.tsv"
