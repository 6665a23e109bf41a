import re
import subprocess
import sys

import pytest

from abclll.cli import main
from abclll.triples import parse_factored


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def metric(out, name):
    return float(re.search(rf"^{name} = (\S+)$", out, re.M).group(1))


class TestVerify:
    def test_reyssat(self, capsys):
        code, out, _ = run(capsys, "verify", "2", "3^10*109", "23^5")
        assert code == 0
        assert abs(metric(out, "P") - 1.6299) <= 5e-4
        assert "good ABC triple: yes" in out
        assert "rad = 2*3*23*109  (15042)" in out

    def test_nitaj(self, capsys):
        code, out, _ = run(capsys, "verify", "13*19^6", "2^30*5", "3^13*11^2*31")
        assert code == 0
        assert abs(metric(out, "rho") - 4.4195) <= 5e-4
        assert "good Szpiro triple: yes" in out

    def test_bad_sum(self, capsys):
        code, out, _ = run(capsys, "verify", "1", "1", "3")
        assert code == 1 and "A + B = C: NO" in out

    def test_parse_failure(self, capsys):
        code, _, err = run(capsys, "verify", "2^", "3", "5")
        assert code == 2 and "error" in err

    def test_non_coprime_is_reported(self, capsys):
        code, out, _ = run(capsys, "verify", "2", "2", "4")
        assert code == 0 and "pairwise coprime: no" in out

    def test_reduce_gcd(self, capsys):
        code, out, _ = run(capsys, "verify", "2", "2", "4", "--reduce-gcd")
        assert code == 0 and "pairwise coprime: yes" in out and "C = 2  (2)" in out

    def test_printed_factorizations_reparse(self, capsys):
        _, out, _ = run(capsys, "verify", "13*19^6", "2^30*5", "3^13*11^2*31")
        for text, value in re.findall(r"^[ABC] = (\S+)  \((\d+)\)$", out, re.M):
            assert parse_factored(text).value == int(value)


class TestReduce:
    def test_worked_example(self, capsys):
        code, out, _ = run(capsys, "reduce", "1", "3^4", "5^4")
        assert code == 0
        assert "v1 = (23, -8, 1)" in out and "v2 = (12, 23, -3)" in out
        assert "Gram determinant 397187 ==" in out
        assert "(1, 54, -7): 1 + 2*3^7 = 5^4*7" in out

    def test_71_8(self, capsys):
        code, out, _ = run(capsys, "reduce", "71^8", "2^5*5^18*17^3", "3^38")
        assert code == 0
        line = next(l for l in out.splitlines() if l.startswith("  (12649337, 336633577, -149459713):"))
        p = float(re.search(r"P=(\S+)", line).group(1))
        rho = float(re.search(r"rho=(\S+)", line).group(1))
        assert abs(p - 1.41457078) <= 1e-6 and abs(rho - 4.00747592) <= 1e-6

    def test_not_distinct(self, capsys):
        code, _, err = run(capsys, "reduce", "1", "1", "2")
        assert code == 2 and "distinct" in err

    def test_small_box(self, capsys):
        code, out, _ = run(capsys, "reduce", "1", "3^4", "5^4", "--cf-depth", "0", "--box", "0")
        assert code == 0 and "2 candidates" in out


class TestSearch:
    ARGS = ("search", "--max-value", "2e3", "--prime-bound", "8", "--include-one")

    def test_basic(self, capsys, tmp_path):
        out_file = tmp_path / "o.jsonl"
        code, out, _ = run(capsys, *self.ARGS, "--out", str(out_file))
        assert code == 0
        n = int(re.search(r"^(\d+) records written", out, re.M).group(1))
        assert n > 0 and len(out_file.read_text().splitlines()) == n + 1
        assert "bases 2024" in out

    def test_high_thresholds(self, capsys, tmp_path):
        code, out, _ = run(capsys, *self.ARGS, "--p-threshold", "99", "--rho-threshold", "99",
                           "--out", str(tmp_path / "o.jsonl"))
        assert code == 0 and "0 records written" in out

    def test_workers_identical(self, capsys, tmp_path):
        files = []
        for w in ("1", "2"):
            f = tmp_path / f"w{w}.jsonl"
            assert run(capsys, *self.ARGS, "--workers", w, "--out", str(f))[0] == 0
            files.append(f.read_text().splitlines()[1:])
        assert files[0] == files[1]

    def test_unwritable(self, capsys, tmp_path):
        code, _, err = run(capsys, *self.ARGS, "--out", str(tmp_path / "no" / "o.jsonl"))
        assert code == 3

    @pytest.mark.parametrize("flags", [("--max-value", "1"), ("--workers", "0"),
                                       ("--max-value", "1e3.5x")])
    def test_invalid_flags(self, capsys, tmp_path, flags):
        argv = ["search", "--out", str(tmp_path / "o.jsonl"), *flags]
        try:
            code = main(argv)
        except SystemExit as exc:
            code = exc.code
        assert code == 2


class TestTables:
    def test_shipped(self, capsys):
        code, out, _ = run(capsys, "tables")
        assert code == 0
        assert "89/89 rows pass (48 szpiro, 41 abc)" in out

    def test_empty(self, capsys, tmp_path):
        f = tmp_path / "e.tsv"
        f.write_text("")
        code, out, err = run(capsys, "tables", "--fixture", str(f))
        assert code == 0 and "0/0" in out and "warning" in err

    def test_corrupted(self, capsys, tmp_path):
        f = tmp_path / "c.tsv"
        f.write_text("abc\t2\t3^10*109\t23^5\t1.62991168\t6.8\nabc\t2\t3^10*109\n")
        code, _, err = run(capsys, "tables", "--fixture", str(f))
        assert code == 2 and "row 2" in err

    def test_failing_row(self, capsys, tmp_path):
        f = tmp_path / "c.tsv"
        f.write_text("abc\t2\t3^10*109\t6436344\t1.62991168\t6.8\n")
        code, out, _ = run(capsys, "tables", "--fixture", str(f))
        assert code == 1 and out.startswith("FAIL")

    def test_missing(self, capsys, tmp_path):
        assert run(capsys, "tables", "--fixture", str(tmp_path / "nope.tsv"))[0] == 2


class TestEstimate:
    def value(self, out):
        return float(out.rsplit(":", 1)[1])

    def test_value(self, capsys):
        code, out, _ = run(capsys, "estimate", "--size", "1e20", "--primes", "2,3,5")
        assert code == 0
        assert self.value(out) == pytest.approx(0.9392956711, abs=1e-9)

    def test_grows_with_size(self, capsys):
        a = self.value(run(capsys, "estimate", "--size", "1e6", "--primes", "2,3,5")[1])
        b = self.value(run(capsys, "estimate", "--size", "1e12", "--primes", "2,3,5")[1])
        assert a < b < 1

    def test_arity(self, capsys):
        assert run(capsys, "estimate", "--size", "1e6", "--primes", "2,3")[0] == 2

    def test_bad_size(self, capsys):
        assert run(capsys, "estimate", "--size", "1", "--primes", "2,3,5")[0] == 2


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "abclll", "verify", "1", "8", "9"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "P = 1.226294" in proc.stdout
