import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gonlab.errors import InputError
from gonlab.exact import LogReal
from gonlab.exponents import ExponentEstimate, cf_value, designed_cf_terms, golden_cf_terms
from gonlab.lattice import ThetaMatrix, identity_lattice
from gonlab.minima import MinimaProfile, successive_minima
from gonlab.params import Weights
from gonlab.verify import (
    FAIL,
    INCONCLUSIVE,
    PASS,
    WEIGHT_GRID,
    CheckResult,
    _bracket_le,
    _product_result,
    check_diagram,
    check_immersion,
    check_inhom_bound,
    check_lattice_transference,
    check_omega_product,
    check_parameter_identities,
    check_S_properties,
    check_weighted_dyson,
    local_checks,
    random_lattice,
    random_tau,
    run_suite,
    standard_corpus,
    summarize,
)

INF = math.inf
W11 = Weights.trivial(1, 1)
GOLDEN = ThetaMatrix.of([[cf_value(golden_cf_terms(100))]])
DESIGNED = ThetaMatrix.of([[cf_value(designed_cf_terms(10))]])


def _est(lo, hi, status="converged"):
    return ExponentEstimate("omega", 1, lo, hi, Fraction(20), Fraction(3, 10), status != "inconclusive", 24, status)


@given(st.integers(0, 5000), st.integers(2, 4), st.sampled_from(["unimodularInteger", "thetaForm"]))
def test_local_checks_pass(seed, d, mode):
    lat = random_lattice(d, 50, seed, mode)
    res = local_checks(lat, random_tau(d, seed), "x")
    assert res and all(r.status == PASS and r.exact for r in res)


def test_random_lattice_is_deterministic_and_unimodular():
    a = random_lattice(3, 50, 7)
    assert a == random_lattice(3, 50, 7)
    assert a.covolume == 1
    assert random_lattice(3, 50, 7, "thetaForm").covolume == 1
    with pytest.raises(InputError):
        random_lattice(3, 50, 7, "nope")


def test_check_flags_a_broken_profile():
    p = successive_minima(identity_lattice(2), [1, -1])
    bad = MinimaProfile(p.tau, p.L, (p.S[0], LogReal.rational(1)), p.witnesses)
    res = {r.check_id: r for r in check_S_properties(identity_lattice(2), [1, -1], profile=bad)}
    assert res["S.minkowski2.upper"].status == FAIL
    assert res["S.minkowski2.upper"].slack == -1.0


@pytest.mark.parametrize("w", WEIGHT_GRID, ids=str)
def test_exact_parameter_checks(w):
    out = []
    for delta in [Fraction(0), Fraction(1, 3), Fraction(1), Fraction(2), Fraction(7)]:
        out += check_diagram(w, delta) + check_parameter_identities(w, delta, Fraction(5, 2))
        out += check_immersion(w, delta, Fraction(3))
    assert all(r.status == PASS and r.exact for r in out)
    assert {r.check_id for r in out} >= {"immersion.inclusion", "gamma_delta.roundtrip", "tau_plus_k.duality"}


def test_product_rule_branches():
    assert _product_result("p", "i", _est(0.9, 1.1), _est(0.95, 1.05), 0.15).status == PASS
    assert _product_result("p", "i", _est(2.0, 2.2), _est(0.95, 1.05), 0.15).status == FAIL
    assert _product_result("p", "i", _est(INF, INF, "exact"), _est(0.0, 0.05), 0.15).status == PASS
    assert _product_result("p", "i", _est(INF, INF, "exact"), _est(0.5, 0.6), 0.15).status == FAIL
    assert _product_result("p", "i", _est(0.5, 5.0, "inconclusive"), _est(0.9, 1.1), 0.15).status == INCONCLUSIVE


def test_inconclusive_never_passes():
    r = _bracket_le("c", "i", 0.0, 10.0, 0.1, (_est(0.0, 10.0, "inconclusive"),))
    assert r.status == INCONCLUSIVE and not r.passed


def test_golden_product_and_dyson():
    res = check_omega_product(GOLDEN, W11, 0.15, "golden") + check_weighted_dyson(GOLDEN, W11, 0.15, "golden")
    assert [r.status for r in res] == [PASS] * 3


def test_designed_dyson_has_nonnegative_slack():
    (r,) = check_weighted_dyson(DESIGNED, W11, 0.15, "designed", tail_fraction=Fraction(1, 2))
    assert r.status == PASS and r.slack >= 0


def test_inhom_bound_golden():
    res = check_inhom_bound(GOLDEN, W11, [Fraction(1, 2)], 0.15, "golden")
    assert [r.status for r in res] == [PASS, PASS]


def test_lattice_transference_Z3():
    res = check_lattice_transference(identity_lattice(3), 0.1, "Z3", s_max=10)
    assert [r.status for r in res] == [PASS, PASS]
    assert res[0].exact


def test_summarize():
    rs = [
        CheckResult("a", "x", 0.0, 1.0, 1.0, PASS, True),
        CheckResult("b", "x", 2.0, 1.0, -1.0, FAIL, True),
        CheckResult("c", "x", 0.0, 1.0, 1.0, INCONCLUSIVE, False),
    ]
    s = summarize(rs)
    assert s == {
        "total": 3, "passed": 1, "failed": 1, "inconclusive": 1,
        "inconclusiveRate": 1 / 3, "failedChecks": ["b"],
    }
    assert rs[1].to_record()["slack"] == -1.0


def test_standard_corpus_names():
    c = standard_corpus((2, 3), 1)
    names = [i.name for i in c["lattices"]]
    assert names == ["Z2", "unimodular-d2-s0", "theta-d2-s0", "Z3", "unimodular-d3-s0", "theta-d3-s0"]
    assert [w.name for w in c["weighted"]] == ["golden", "designed", "golden-silver-column", "rational-row"]


def test_run_suite_is_ordered_and_parallel_safe():
    a = run_suite("local", (2, 3), 1, 3)
    b = run_suite("local", (2, 3), 1, 3, jobs=2)
    assert [r.to_record() for r in a] == [r.to_record() for r in b]
    assert summarize(a)["failed"] == 0
    with pytest.raises(InputError):
        run_suite("bogus")
