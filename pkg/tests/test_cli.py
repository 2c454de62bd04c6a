import json

import numpy as np
import pytest

from slicecauchy.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_algebra_info(capsys, tmp_path):
    dump = tmp_path / "o.json"
    code, out, _ = run(capsys, "algebra-info", "--builtin", "octonions", "--dump", str(dump))
    data = json.loads(out)
    assert code == 0 and data["dim"] == 8
    assert data["basis"] == ["1", "i", "j", "ij", "k", "ik", "jk", "k(ij)"]
    assert json.loads(dump.read_text())["dim"] == 8


def test_validate(capsys, tmp_path):
    code, out, _ = run(capsys, "validate", "--builtin", "quaternions", "--samples", "200")
    assert code == 0
    spec = tmp_path / "sedenions.json"
    run(capsys, "algebra-info", "--builtin", "sedenions", "--dump", str(spec))
    code, out, _ = run(capsys, "validate", "--spec", str(spec), "--samples", "500")
    data = json.loads(out)
    assert code == 1 and data["alternative"]["max_violation"] > 0.1


def test_eval(capsys):
    code, out, _ = run(capsys, "eval", "--f", "poly:z*i", "--x", "j")
    assert code == 0 and np.allclose(json.loads(out)["value_coeffs"], [0, 0, 0, -1])


def test_cauchy_modes(capsys):
    common = ["cauchy", "--algebra", "octonions", "--f", "poly:z*i", "--x", "k", "--J", "(i+j)/sqrt2", "--N", "2048"]
    code, out, _ = run(capsys, *common, "--mode", "slice")
    assert code == 0
    assert np.allclose(json.loads(out)["value_coeffs"], [0, 0, 0, 0, 0, -1, 0, 0], atol=1e-8)
    code, out, _ = run(capsys, *common, "--mode", "pointwise")
    assert np.allclose(json.loads(out)["value_coeffs"], [0, 0, 0, 0, 0, -0.5, -0.5, 0], atol=1e-8)


def test_cauchy_pompeiu_mode(capsys):
    code, out, _ = run(capsys, "cauchy", "--f", "conj", "--x", "0.3+0.5i-0.2j", "--J", "k",
                       "--mode", "pompeiu", "--area-nodes", "64", "128")
    data = json.loads(out)
    assert code == 0 and np.allclose(data["value_coeffs"], [0.3, -0.5, 0.2, 0], atol=1e-4)
    assert "area_term_norm" in data["residual_estimates"]


def test_output_is_reproducible(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["cauchy", "--algebra", "octonions", "--f", "poly:z^2 jk + i", "--x", "0.2+0.3k", "--J", "j"]
    run(capsys, *argv, "--out", str(a))
    run(capsys, *argv, "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_expand(capsys, tmp_path):
    csv_path = tmp_path / "res.csv"
    code, out, _ = run(capsys, "expand", "--f", "halfplane:J", "--J", "i", "--center", "i", "--kind", "spherical",
                       "--K", "16", "--r", "0.3", "--r-prime", "0.8", "--residual-csv", str(csv_path))
    data = json.loads(out)
    assert code == 0
    assert np.allclose(data["coefficients"][1], [0, -1, 0, 0], atol=1e-8)
    assert data["convergence"]["passed"]
    assert csv_path.read_text().startswith("n,sup_residual,fitted_ratio")
    code, out, _ = run(capsys, "expand", "--f", "poly:1 + 2z + z^3 j", "--x0", "0", "--kind", "power",
                       "--K", "5", "--contour-radius", "1")
    coeffs = np.array(json.loads(out)["coefficients"])
    assert np.allclose(coeffs[:4], [[1, 0, 0, 0], [2, 0, 0, 0], [0, 0, 0, 0], [0, 0, 1, 0]], atol=1e-12)


def test_expand_csv(capsys):
    code, out, _ = run(capsys, "expand", "--f", "halfplane:J", "--J", "i", "--x0", "i", "--kind", "spherical",
                       "--K", "8", "--r", "0.3", "--r-prime", "0.8", "--csv")
    assert code == 0 and out.splitlines()[0] == "n,sup_residual,fitted_ratio"


@pytest.mark.parametrize("argv,code", [
    (["eval", "--f", "poly:z", "--x", "q"], 2),
    (["eval", "--f", "mystery", "--x", "i"], 2),
    (["eval", "--algebra", "nonions", "--f", "poly:z", "--x", "1"], 2),
    (["cauchy", "--f", "poly:z", "--x", "3i"], 3),
    (["cauchy", "--f", "poly:z", "--x", "i", "--J", "2i"], 2),
    (["expand", "--f", "conj", "--x0", "i", "--kind", "power"], 2),
    (["expand", "--f", "poly:z", "--x0", "i", "--J", "i", "--kind", "spherical", "--contour-radius", "2"], 3),
])
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_usage_error_exit():
    with pytest.raises(SystemExit) as e:
        main(["cauchy", "--mode", "sideways"])
    assert e.value.code == 2


def test_verify_paper_quick(capsys, tmp_path):
    out = tmp_path / "report.json"
    code, _, err = run(capsys, "verify-paper", "--quick", "--out", str(out))
    report = json.loads(out.read_text())
    assert code == 0 and report["passed"]
    assert any("(ki+kj)/2" in c["name"] for c in report["checks"])
    assert "[PASS]" in err
