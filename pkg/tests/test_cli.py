import json
import math
from fractions import Fraction
from pathlib import Path

import jsonschema
import pytest

from gonlab.cli import (
    EXIT_BUDGET,
    EXIT_INCONCLUSIVE,
    EXIT_INPUT,
    EXIT_OK,
    EXIT_USAGE,
    main,
    parse_config,
    parse_diagram,
    parse_plot_data,
    parse_profile_row,
    parse_trajectory,
)
from gonlab.exponents import cf_value, designed_cf_terms, golden_cf_terms
from gonlab.lattice import identity_lattice
from gonlab.minima import successive_minima

SCHEMA = json.loads((Path(__file__).resolve().parents[1] / "docs" / "schema.json").read_text())


def _theta(x) -> str:
    return f"1 1\n{x.numerator}/{x.denominator}\n"


@pytest.fixture
def files(tmp_files):
    return tmp_files(**{
        "Z3.txt": "3\n1 0 0\n0 1 0\n0 0 1\n",
        "golden40.txt": _theta(cf_value(golden_cf_terms(40))),
        "golden100.txt": _theta(cf_value(golden_cf_terms(100))),
        "designed.txt": _theta(cf_value(designed_cf_terms(10))),
        "trivial2.txt": "1 1\n1\n1\n",
        "w.txt": "2 1\n2/3 1/3\n1\n",
        "w3.txt": "2 3\n2/3 1/3\n1/3 1/3 1/3\n",
        "bad.txt": "2\n1 x\n0 1\n",
    })


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def _validate(record, name):
    jsonschema.validate(record, {"$defs": SCHEMA["$defs"], "$ref": f"#/$defs/{name}"})


def test_minima_row_and_round_trip(capsys, files):
    code, out, _ = run(capsys, "minima", "--lattice", files["Z3.txt"], "--tau", "2,-1,-1")
    assert code == EXIT_OK
    head, row = out.splitlines()
    assert head.split("\t")[:4] == ["tag", "L1", "L2", "L3"]
    assert row.split("\t")[:7] == ["tau=2,-1,-1", "-2", "1", "1", "-2", "-1", "0"]
    p = parse_profile_row(row)
    ref = successive_minima(identity_lattice(3), [2, -1, -1])
    assert p.L == ref.L and p.S == ref.S and p.witnesses == ref.witnesses and p.tau == ref.tau


def test_minima_json_matches_schema(capsys, files):
    code, out, _ = run(capsys, "minima", "--lattice", files["Z3.txt"], "--tau", "1/2,0,-1/2", "--format", "json")
    assert code == EXIT_OK
    _validate(json.loads(out), "minimaProfile")


def test_trajectory_stays_in_oracle_envelope(capsys, files):
    code, out, _ = run(
        capsys, "trajectory", "--theta", files["golden40.txt"], "--weights", files["trivial2.txt"],
        "--gamma", "1", "--smax", "8", "--grid-step", "1/2",
    )
    assert code == EXIT_OK
    rows = parse_trajectory(out)
    assert [r["s"] for r in rows] == [Fraction(i, 2) for i in range(1, 17)]
    for r in rows:
        L1 = r["L"][0]
        # golden convergents have q |q theta - p| > 1/3, so L_1 >= -log(3)/2 before truncation shows
        assert -math.log(3) / 2 <= float(L1) <= 0
        assert r["ratio"][0] == float(L1) / float(r["s"])


def test_diagram_points_are_collinear(capsys, files):
    code, out, _ = run(capsys, "diagram", "--weights", files["w3.txt"], "--delta", "2")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "# collinearityResidual=0"
    pts = parse_diagram(out)
    assert set(pts) == {"mu(gamma_delta)", "-mu(gamma_delta)", "mu*(delta)", "nu"}
    (a1, a2), (b1, b2), (c1, c2) = pts["mu*(delta)"], pts["-mu(gamma_delta)"], pts["nu"]
    assert (b1 - a1) * (c2 - a2) - (b2 - a2) * (c1 - a1) == 0


def test_plot_data_curve(capsys, files):
    code, out, _ = run(capsys, "plot-data", "--weights", files["w3.txt"], "--points", "4")
    assert code == EXIT_OK
    rows = parse_plot_data(out)
    curve = {x: y for s, x, y in rows if s == "gamma_delta"}
    assert curve[Fraction(1)] == 1
    assert curve[Fraction(0)] == Fraction(1, 3)  # 1 - sigma_1
    assert curve[math.inf] == Fraction(3, 2)  # (1 - rho_n)^(-1)
    code, out, _ = run(capsys, "plot-data", "--weights", files["w.txt"], "--delta", "2")
    rows = parse_plot_data(out)
    assert ("gamma_delta", math.inf, math.inf) in rows
    assert any(s.startswith("diagram:") for s, _, _ in rows)


def test_exponent_converged_and_unconverged(capsys, files):
    code, out, _ = run(capsys, "exponent", "--theta", files["golden100.txt"], "--tol", "0.1")
    rec = json.loads(out)
    _validate(rec, "exponentEstimate")
    assert code == EXIT_OK and rec["converged"] and rec["bracket"][0] <= 1 <= rec["bracket"][1]
    code, out, _ = run(capsys, "exponent", "--theta", files["designed.txt"], "--tol", "0.01", "--tail", "1/2")
    assert code == EXIT_INCONCLUSIVE and not json.loads(out)["converged"]


def test_exponent_lattice_kind(capsys, files):
    code, out, _ = run(capsys, "exponent", "--kind", "psi", "--lattice", files["Z3.txt"], "--directions", "12", "--smax", "8")
    rec = json.loads(out)
    assert code == EXIT_OK and rec["bracket"] == [-1, -1] and rec["status"] == "exact"


def test_verify_output_and_determinism(capsys):
    args = ("verify", "--suite", "local", "--d", "2", "--seeds", "1", "--samples", "2")
    code, out1, _ = run(capsys, *args)
    assert code == EXIT_OK
    code, out2, _ = run(capsys, *args)
    assert out1 == out2
    lines = [json.loads(x) for x in out1.splitlines()]
    for rec in lines[:-1]:
        _validate(rec, "checkResult")
    _validate(lines[-1], "verifySummary")
    assert lines[-1]["summary"]["failed"] == 0


@pytest.mark.parametrize("argv, code", [
    (["minima", "--bogus"], EXIT_USAGE),
    (["minima", "--lattice", "x.txt"], EXIT_USAGE),
    (["nosuchcommand"], EXIT_USAGE),
    (["verify", "--suite", "nope"], EXIT_USAGE),
    (["minima", "--lattice", "/nonexistent/file", "--tau", "1,-1"], EXIT_INPUT),
])
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_input_errors(capsys, files):
    assert run(capsys, "minima", "--lattice", files["bad.txt"], "--tau", "1,-1")[0] == EXIT_INPUT
    assert run(capsys, "minima", "--lattice", files["Z3.txt"], "--tau", "1,-1")[0] == EXIT_INPUT
    assert run(capsys, "minima", "--lattice", files["Z3.txt"], "--tau", "1,1,1")[0] == EXIT_INPUT
    assert run(capsys, "diagram", "--weights", files["w.txt"], "--delta", "-1")[0] == EXIT_INPUT
    assert run(capsys, "trajectory", "--lattice", files["Z3.txt"], "--mu", "1,0,-1", "--smax", "0")[0] == EXIT_INPUT


def test_budget_exit(capsys, files):
    code, _, err = run(capsys, "exponent", "--kind", "psi", "--lattice", files["Z3.txt"], "--directions", "10", "--budget", "5")
    assert code == EXIT_BUDGET and "budget" in err


def test_config_defaults_and_flag_override(capsys, files, tmp_files):
    cfg = tmp_files(**{"run.cfg": "# defaults\nsmax = 3\ngrid-step = 1\ntrajectory.smax = 2\n"})["run.cfg"]
    base = ["trajectory", "--lattice", files["Z3.txt"], "--mu", "1,0,-1"]
    code, out, _ = run(capsys, "--config", cfg, *base)
    assert code == EXIT_OK and [r["s"] for r in parse_trajectory(out)] == [1, 2]
    code, out, _ = run(capsys, "--config", cfg, *base, "--smax", "4")
    assert [r["s"] for r in parse_trajectory(out)] == [1, 2, 3, 4]


def test_parse_config_errors():
    with pytest.raises(Exception):
        parse_config("no equals sign\n")
    with pytest.raises(Exception):
        parse_config("minima.nope = 1\n")
    assert parse_config("tol = 0.2\n")["exponent"] == {"tol": "0.2"}
