import json
import os
import subprocess
import sys
from math import comb, gcd, inf

import pytest

from abclll.errors import OutputUnwritable, ParseError
from abclll.lattice import RelationVector
from abclll.numt import Factorization, SmoothSet, factorize, prime_powers
from abclll.search import (
    SearchConfig,
    SearchRecord,
    SearchStats,
    canonical_key,
    default_fixture,
    enumerate_bases,
    evaluate_base,
    member_set,
    read_records,
    run_search,
    verify_tables,
)
from abclll.triples import BaseTriple, make_triple, parse_factored

SMALL = dict(value_bound=10**5, prime_bound=12, include_one=True)
TINY = dict(value_bound=2000, prime_bound=8, include_one=True)


def base(*exprs):
    return BaseTriple(*(parse_factored(e) for e in exprs))


def smooth_set(values):
    return SmoothSet(max(values) + 1, 2, tuple(factorize(v) for v in values))


@pytest.fixture(scope="module")
def small_run():
    return run_search(SearchConfig(**SMALL))


class TestEnumerate:
    def test_single(self):
        bases = list(enumerate_bases(smooth_set([1, 2, 3])))
        assert [b.values for b in bases] == [(1, 2, 3)]

    def test_count_and_order(self):
        vals = [1, 2, 3, 4, 8, 9, 16]
        bases = [b.values for b in enumerate_bases(smooth_set(vals))]
        assert len(bases) == comb(7, 3) == len(set(bases))
        assert bases == sorted(bases)

    def test_reyssat_base_present(self):
        members = {f.value for f in prime_powers(10**7, 24, include_one=True).members}
        assert {1, 3**10, 23**5} <= members

    def test_member_set_modes(self):
        cfg = SearchConfig(value_bound=100, prime_bound=6, mode="smooth")
        assert [f.value for f in member_set(cfg).members][:4] == [2, 3, 4, 5]
        cfg = SearchConfig(value_bound=100, prime_bound=6, mode="smooth", include_one=True)
        assert member_set(cfg).members[0].value == 1
        cfg = SearchConfig(value_bound=20, prime_bound=4, mode="prime_power_products_2")
        assert [f.value for f in member_set(cfg).members] == [2, 3, 4, 6, 8, 9, 12, 16, 18]


class TestConfig:
    @pytest.mark.parametrize("kw", [dict(value_bound=1), dict(prime_bound=1), dict(worker_count=0),
                                    dict(mode="cubes"), dict(p_threshold=float("nan"))])
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            SearchConfig(**kw)


class TestEvaluateBase:
    def test_worked_example(self):
        recs = evaluate_base(base("1", "3^4", "5^4"), SearchConfig())
        keys = {canonical_key(r.triple): r for r in recs}
        r = keys["1+2*3^7=5^4*7"]
        assert 1.567 <= r.p_metric < 1.568

    def test_nothing_from_1_2_3(self):
        stats = SearchStats()
        assert evaluate_base(base("1", "2", "3"), SearchConfig(), stats) == []
        assert stats.bases_examined == 1 and stats.candidates_considered > 0

    def test_71_8(self):
        recs = evaluate_base(base("71^8", "2^5*5^18*17^3", "3^38"), SearchConfig())
        hit = [r for r in recs if r.triple.a.value == 71**8 * 233**3]
        assert len(hit) == 1
        assert abs(hit[0].p_metric - 1.41457078) <= 1e-6
        assert abs(hit[0].rho_metric - 4.00747592) <= 1e-6

    def test_records_reconstruct(self):
        b = base("71^8", "2^5*5^18*17^3", "3^38")
        for r in evaluate_base(b, SearchConfig(p_threshold=0.5, rho_threshold=2.0)):
            terms = [abs(x) * v for x, v in zip(r.relation, b.values)]
            assert r.relation.dot(b.values) == 0
            g = terms[0]
            for t in terms[1:]:
                g = gcd(g, t)
            assert sorted(t // g for t in terms) == sorted(r.triple.values)

    def test_screen_matches_full_build(self):
        cfg = SearchConfig(p_threshold=1.0, rho_threshold=3.0)
        members = prime_powers(10**6, 14, include_one=True).members
        bases = list(enumerate_bases(SmoothSet(10**6, 14, members)))[::97]
        assert len(bases) > 100
        for b in bases:
            fast = [r.to_line() for r in evaluate_base(b, cfg)]
            slow = [r.to_line() for r in evaluate_base(b, cfg, screen=False)]
            assert fast == slow, b.values


class TestCanonicalKey:
    def test_reyssat(self):
        t = make_triple(*(parse_factored(x) for x in ("2", "3^10*109", "23^5")))
        assert canonical_key(t) == "2+3^10*109=23^5"

    def test_ones(self):
        one = Factorization.one()
        assert canonical_key(make_triple(one, one, factorize(2))) == "1+1=2"

    def test_independent_of_base(self):
        b1 = base("1", "3^4", "5^4")
        b2 = base("3", "3^5", "3*5^4")
        r1 = evaluate_base(b1, SearchConfig())
        r2 = evaluate_base(b2, SearchConfig())
        assert {canonical_key(r.triple) for r in r1} == {canonical_key(r.triple) for r in r2}


class TestRunSearch:
    def test_sorted_and_unique(self, small_run):
        recs, stats = small_run
        keys = [canonical_key(r.triple) for r in recs]
        assert len(keys) == len(set(keys))
        margins = [max(r.p_metric - 1.4, r.rho_metric - 4.0) for r in recs]
        assert margins == sorted(margins, reverse=True)
        assert stats.good_abc_found <= stats.candidates_built
        assert stats.bases_examined == comb(len(member_set(SearchConfig(**SMALL)).members), 3)

    def test_worker_count_does_not_matter(self, small_run):
        recs2, _ = run_search(SearchConfig(**SMALL, worker_count=3))
        assert [r.to_line() for r in recs2] == [r.to_line() for r in small_run[0]]

    def test_infinite_thresholds(self):
        recs, stats = run_search(SearchConfig(**TINY, p_threshold=inf, rho_threshold=inf))
        assert recs == []
        assert stats.bases_examined > 0 and stats.candidates_considered > 0

    def test_jsonl_output_revalidates(self, tmp_path):
        out = tmp_path / "run.jsonl"
        recs, _ = run_search(SearchConfig(**TINY, output_path=str(out)))
        lines = out.read_text().splitlines()
        header = json.loads(lines[0])
        assert header["config"]["value_bound"] == 2000
        assert len(lines) == len(recs) + 1
        objs = read_records(out)
        assert len(objs) == len(recs) > 0
        for obj, rec in zip(objs, recs):
            assert set(obj) == {"a", "b", "c", "p", "rho", "size_log10", "base_a0", "base_b0",
                                "base_c0", "alpha", "beta", "gamma"}
            again = SearchRecord.from_json(obj)
            assert again.triple == rec.triple
            assert abs(again.p_metric - obj["p"]) <= 1e-9 * obj["p"]
            assert abs(again.rho_metric - obj["rho"]) <= 1e-9 * obj["rho"]

    def test_output_appends(self, tmp_path):
        out = tmp_path / "run.jsonl"
        cfg = SearchConfig(**TINY, output_path=str(out))
        n = len(run_search(cfg)[0])
        run_search(cfg)
        assert len(read_records(out)) == 2 * n

    def test_unwritable(self, tmp_path):
        cfg = SearchConfig(**TINY, output_path=str(tmp_path / "missing" / "x.jsonl"))
        with pytest.raises(OutputUnwritable):
            run_search(cfg)

    def test_pure_python_backend_agrees(self):
        code = (
            "from abclll import _kernels\n"
            "from abclll.search import SearchConfig, run_search\n"
            "assert _kernels.BACKEND == 'python'\n"
            f"for r in run_search(SearchConfig(**{TINY!r}))[0]: print(r.to_line())\n"
        )
        env = dict(os.environ, ABCLLL_PURE_PYTHON="1")
        proc = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                              text=True, check=True)
        here = [r.to_line() for r in run_search(SearchConfig(**TINY))[0]]
        assert proc.stdout.splitlines() == here


class TestVerifyTables:
    def test_shipped_fixture(self):
        report = verify_tables(default_fixture())
        assert len(report.rows) == 89
        assert report.count("szpiro") == 48 and report.count("abc") == 41
        failed = [r.line() for r in report.rows if not r.passed]
        assert failed == []

    def test_first_rows(self):
        rows = verify_tables(default_fixture()).rows
        assert rows[0].kind == "szpiro" and abs(rows[0].metric - 4.23181492) <= 1e-6
        first_abc = next(r for r in rows if r.kind == "abc")
        assert first_abc.key.startswith("13^10*37^2+")
        assert abs(first_abc.metric - 1.50943262) <= 1e-6

    def _write(self, tmp_path, lines):
        p = tmp_path / "f.tsv"
        p.write_text("".join(line + "\n" for line in lines))
        return p

    def test_c_off_by_one(self, tmp_path):
        from abclll.triples import format_factored

        c = format_factored(factorize(23**5 + 1))
        p = self._write(tmp_path, [f"abc\t2\t3^10*109\t{c}\t1.62991168\t6.8"])
        (row,) = verify_tables(p).rows
        assert not row.sum_ok and not row.passed

    def test_metric_misprint(self, tmp_path):
        p = self._write(tmp_path, ["abc\t2\t3^10*109\t23^5\t1.62990000\t6.8"])
        (row,) = verify_tables(p).rows
        assert row.sum_ok and row.coprime_ok and not row.metric_ok

    def test_empty(self, tmp_path):
        assert verify_tables(self._write(tmp_path, [])).rows == []

    @pytest.mark.parametrize("bad", ["abc\t2\t3^10*109\t23^5\t1.6", "cube\t2\t3\t5\t1\t1",
                                     "abc\t2\t3^^10\t23^5\t1.6\t6.8", "abc\t2\t3\t5\tx\t1"])
    def test_corrupted_row_number(self, tmp_path, bad):
        p = self._write(tmp_path, ["kind\ta\tb\tc\texpected_metric\texpected_log10c",
                                   "abc\t2\t3^10*109\t23^5\t1.62991168\t6.8", bad])
        with pytest.raises(ParseError) as exc:
            verify_tables(p)
        assert exc.value.row == 3
