import json

import pytest

from qcross import cli
from qcross.catalog import Check


@pytest.fixture
def one_atom(tmp_path):
    path = tmp_path / "one_atom.txt"
    path.write_text("# single atom\n0.7 1\nkrange -30 30\n")
    return str(path)


@pytest.fixture
def disc_atoms(tmp_path):
    path = tmp_path / "disc.txt"
    path.write_text("-0.6 1\n-0.9 0.5\nkrange -30 30\n")
    return str(path)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# -- verify-symbolic ----------------------------------------------------------------------

def test_verify_all_suites(capsys):
    code, out, _ = run(capsys, "verify-symbolic", "--suite", "all")
    assert code == cli.EXIT_PASS
    assert "FAIL" not in out


def test_verify_empty_suite_list(capsys):
    code, out, _ = run(capsys, "verify-symbolic", "--json")
    assert code == cli.EXIT_PASS
    assert json.loads(out)["suites"] == {}


def test_verify_unknown_suite(capsys):
    code, _, err = run(capsys, "verify-symbolic", "--suite", "nonsense")
    assert code == cli.EXIT_USAGE
    assert "unknown suite" in err


def test_verify_broken_suite(capsys):
    table = {"broken": lambda: [Check("x", "fixture", "a = b", False, "1")],
             "fine": lambda: [Check("y", "fixture", "a = a", True)]}
    cfg = cli.RunConfig("verify-symbolic")
    assert cli.cmd_verify_symbolic(cfg, ["broken"], suite_table=table) == cli.EXIT_FAIL
    assert cli.cmd_verify_symbolic(cfg, ["fine"], suite_table=table) == cli.EXIT_PASS
    out = capsys.readouterr().out
    assert "broken: FAIL" in out and "a = b" in out


# -- check-series -----------------------------------------------------------------------------

def test_check_series_passes(capsys, tmp_path):
    report = tmp_path / "report.json"
    code, out, _ = run(capsys, "check-series", "--label", "II_ABH", "--A", "0.7", "--B", "0.6",
                       "--H", "0.8", "--q", "0.5", "--radius", "12", "--out", str(report))
    assert code == cli.EXIT_PASS
    data = json.loads(report.read_text())
    assert data["passed"] and not data["vacuous"]
    assert data["relations"]["rows"][0]["anchor"]


def test_check_series_vacuous(capsys):
    code, out, _ = run(capsys, "check-series", "--label", "I_A", "--radius", "1")
    assert code == cli.EXIT_PASS
    assert "vacuous" in out


def test_check_series_invalid_parameters(capsys):
    code, out, _ = run(capsys, "check-series", "--label", "I_AHe", "--H", "1.2")
    assert code == cli.EXIT_INVALID
    assert "σ(H)⊑(q^{1/2},1]" in out


def test_check_series_operator_parameters(capsys):
    code, _, _ = run(capsys, "check-series", "--label", "II_ABHe", "--A", "0.6,0.8,1.0",
                     "--B", "0.55,0.75,0.95", "--H", "0.75,0.85,0.95", "--radius", "4")
    assert code == cli.EXIT_PASS


def test_check_series_export(capsys, tmp_path):
    code, _, _ = run(capsys, "check-series", "--label", "I_A", "--radius", "4", "--export", str(tmp_path))
    assert code == cli.EXIT_PASS
    assert (tmp_path / "I_A_z.coo").read_text().strip()


@pytest.mark.parametrize("argv", [
    ["check-series", "--label", "nope"],
    ["check-series", "--label", "I_A", "--A", "abc"],
    ["check-series", "--label", "I_A", "--q", "1.5"],
    ["check-series", "--label", "I_A", "--tol", "-1"],
    ["check-series"],
    ["frobnicate"],
])
def test_usage_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == cli.EXIT_USAGE


# -- functional --------------------------------------------------------------------------------

def test_functional_invariance(capsys, one_atom):
    code, out, err = run(capsys, "functional", "--family", "Eq2", "--measure", one_atom,
                         "--task", "invariance", "--seed", "7", "--n", "20")
    assert code == cli.EXIT_PASS
    assert "seed 7" in err
    assert out.count("ok") == 4


def test_functional_eval(capsys, tmp_path):
    path = tmp_path / "unit.txt"
    path.write_text("1 1\nkrange 0 0\n")
    code, out, _ = run(capsys, "functional", "--family", "Cq", "--measure", str(path), "--task", "eval")
    assert code == cli.EXIT_PASS
    assert "= 1\n" in out


def test_functional_gram(capsys, disc_atoms):
    code, out, _ = run(capsys, "functional", "--family", "disc", "--measure", disc_atoms,
                       "--task", "gram", "--seed", "3", "--n", "5", "--json")
    assert code == cli.EXIT_PASS
    assert json.loads(out)["min_eigenvalue"] >= -1e-10


def test_functional_empty_gram(capsys, one_atom):
    code, out, _ = run(capsys, "functional", "--family", "Eq2", "--measure", one_atom,
                       "--task", "gram", "--n", "0")
    assert code == cli.EXIT_PASS
    assert out.strip() == ""


def test_functional_seed_reproducible(capsys, one_atom):
    argv = ["functional", "--family", "SUq11", "--measure", one_atom, "--task", "gram",
            "--seed", "11", "--n", "4", "--json"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b


def test_malformed_measure_file(capsys, tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("0.7 1\n0.8 one\nkrange 0 3\n")
    code, _, err = run(capsys, "functional", "--family", "Eq2", "--measure", str(path), "--task", "eval")
    assert code == cli.EXIT_USAGE
    assert "line 2" in err
    code, _, _ = run(capsys, "functional", "--family", "Eq2", "--measure", str(tmp_path / "missing"),
                     "--task", "eval")
    assert code == cli.EXIT_USAGE


# -- proposition ----------------------------------------------------------------------------------

def test_proposition_eq2(capsys, one_atom):
    code, out, _ = run(capsys, "proposition", "--case", "eq2", "--measure", one_atom)
    assert code == cli.EXIT_PASS
    assert "beta = -1" in out and "B = 0.666666666667" in out


def test_proposition_disc(capsys):
    code, out, _ = run(capsys, "proposition", "--case", "disc", "--json")
    assert code == cli.EXIT_PASS
    data = json.loads(out)
    assert [s["target"] for s in data["summands"]] == ["I1_H1", "II2_A1A2H1"]


def test_proposition_unknown_case(capsys):
    code, _, _ = run(capsys, "proposition", "--case", "sl3")
    assert code == cli.EXIT_USAGE
