"""Build the extension module, import it, and check a few factorizations.

Usage: python3 python/smoke_test.py [--no-build]
"""

import argparse
import importlib.util
import shutil
import subprocess
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def build_and_load():
    subprocess.run(
        ["cargo", "build", "--release", "-p", "nilfactor-py"], cwd=ROOT, check=True
    )
    lib = ROOT / "target" / "release" / "libnilfactor.so"
    dest = Path(tempfile.mkdtemp()) / "nilfactor.so"
    shutil.copy(lib, dest)
    spec = importlib.util.spec_from_file_location("nilfactor", dest)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def entry(s, p):
    x = Fraction(s)
    return x if p is None else x.numerator * pow(x.denominator, -1, p) % p


def mat(rows, p):
    return [[entry(x, p) for x in row] for row in rows]


def mul(a, b, p):
    n = len(a)
    c = [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    return c if p is None else [[x % p for x in row] for row in c]


def vanishes(m, p):
    power = m
    for _ in range(len(m) - 1):
        power = mul(power, m, p)
    return all(x == 0 for row in power for x in row)


def check_factor(nf, rows, field):
    p = None if field == "QQ" else int(field[3:-1])
    out = nf.factor(rows, field)
    n1, n2 = mat(out["n1"], p), mat(out["n2"], p)
    assert mul(n1, n2, p) == mat([[str(x) for x in r] for r in rows], p), rows
    assert vanishes(n1, p) and vanishes(n2, p), rows
    assert out["certificate"]["product_ok"]
    return out["certificate"]["route"]


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--no-build", action="store_true", help="import an installed module")
    args = parser.parse_args()
    nf = importlib.import_module("nilfactor") if args.no_build else build_and_load()

    routes = {
        check_factor(nf, [[0, 0, 0], [0, 0, 0], [0, 1, 0]], "QQ"),
        check_factor(nf, [[0, 0], [0, 5]], "QQ"),
        check_factor(nf, [[1, 1, 0], [1, 1, 0], [0, 0, 0]], "QQ"),
        check_factor(nf, [[1, 2, 0, 3], [2, 4, 0, 1], [0, 0, 0, 0], [3, 1, 0, 4]], "GF(5)"),
        check_factor(nf, [[Fraction(1, 2), 1, 0], [0, 0, 1], [0, 0, 0]], "QQ"),
        check_factor(nf, [[0, 0, 0, 0], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 2]], "QQ"),
    }
    print("factor ok, routes:", sorted(routes))

    for rows, exc in [([[1, 0], [0, 1]], nf.NotSingularError), ([[0, 0], [1, 0]], nf.ExceptionalCaseError)]:
        try:
            nf.factor(rows)
        except exc:
            pass
        else:
            raise AssertionError(f"{rows} should raise {exc.__name__}")
    print("errors ok")

    text = nf.format_matrix([[1, Fraction(-2, 3)], [0, 4]], "QQ")
    assert nf.parse_matrix(text) == ([["1", "-2/3"], ["0", "4"]], "QQ"), text
    print("format ok")

    wu = nf.check_wu_counterexample(7)
    flaw = nf.check_projection_flaw()
    assert wu["verdict"] == "ConfirmsPaper" and flaw["verdict"] == "ConfirmsPaper"
    assert nf.check_wu_counterexample(5)["measurements"]["nilpotent"] is True
    print("forensics ok")

    for name in ["lemma1", "lemma2", "sourour", "roth"]:
        report = nf.run_suite(name, fields=["QQ", "GF(3)"], size=6, count=5, seed=3)
        assert report["passed"], report
    print("suites ok")
    return 0


if __name__ == "__main__":
    sys.exit(main())
