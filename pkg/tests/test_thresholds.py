import json
from fractions import Fraction as F

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from eincoh.exactpoly import PolyQ, QuadraticSurd, SignKind, exact_cmp, poly_eval, sign_on_interval
from eincoh.thresholds import (
    PSI_EXCLUDED,
    DimensionError,
    StructuralTriple,
    VerdictTag,
    a1_threshold,
    bohm_focus_upper,
    bohm_lower,
    build_families,
    check_a2_sufficient,
    chi_tilde,
    classify,
    discriminant_and_mu,
    focus_condition,
    omega_at_0,
    omega_xi_bounds,
    psi,
    s_bullet,
    sigma_param,
    tau_param,
    threshold_report,
)

from oracles import (
    a1_oracle,
    a1_profile_oracle,
    k as K,
    l as L,
    psi_oracle,
    quad_in_l,
    rat,
    slice_polys,
    to_sympy_poly,
)

PAIRS_6 = [(a, b) for a in range(2, 7) for b in range(a, 7)]
T = StructuralTriple


# --- families against the independent derivation -----------------------------

@pytest.mark.parametrize("d1,d2", PAIRS_6)
def test_families_match_rederivation(d1, d2):
    fam = build_families(d1, d2)
    for A in (F(1, 8), F(3)):
        ref = slice_polys(d1, d2, A)
        assert ref["extra_P"] == []
        assert to_sympy_poly(fam.P_X).as_expr() - ref["PX"] == 0
        assert sp.expand(to_sympy_poly(fam.Q_X).as_expr() - ref["QX"]) == 0
        assert sp.expand(quad_in_l(fam.P_Y(A)) - ref["PY"]) == 0
        assert sp.expand(quad_in_l(fam.Q_Y(A)) - ref["QY"]) == 0
        assert sp.expand(quad_in_l(fam.T_Y(A)) - ref["TY"]) == 0
        assert sp.expand(to_sympy_poly(fam.T_X).as_expr() - ref["TX"]) == 0
        assert sp.expand(quad_in_l(fam.omega(A)) - ref["omega"]) == 0
        assert sp.expand(quad_in_l(fam.zeta(A)) - ref["zeta"]) == 0


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 8), st.integers(0, 6),
       st.fractions(min_value=0, max_value=5, max_denominator=9),
       st.fractions(min_value=-1, max_value=1, max_denominator=11),
       st.fractions(min_value=0, max_value=6, max_denominator=7))
def test_omega_identity_at_random_rationals(d1, extra, A, k0, l0):
    d2 = d1 + extra
    fam = build_families(d1, d2)
    px, qx = poly_eval(fam.P_X, k0), poly_eval(fam.Q_X, k0)
    lhs = fam.omega(A)(k0, l0)
    rhs = fam.Q_Y(A)(k0, l0) * px - qx * fam.P_Y(A)(k0, l0)
    assert lhs == rhs


def test_P_X_vanishes_at_one():
    assert poly_eval(build_families(2, 2).P_X, 1) == 0


def test_omega_at_one_for_2_2():
    fam = build_families(2, 2)
    assert poly_eval(fam.omega2, 1) == -12 and poly_eval(fam.omega0, 1) == 12


@pytest.mark.parametrize("d1,d2", PAIRS_6)
def test_omega_closed_forms_at_one(d1, d2):
    n = d1 + d2
    fam = build_families(d1, d2)
    assert poly_eval(fam.omega2, 1) == -d2 * (n - 1) * (d1 * n - n - d1)
    assert poly_eval(fam.omega0, 1) == d2 * (n - 1) * (d1 * n - n - d1)


def test_theta_3_3_printed_quintic():
    got = build_families(3, 3).Theta(F(1, 8))
    assert got == PolyQ([52488, 166212, 379080, 635688, 535086, 166941])


@pytest.mark.parametrize("d1,d2,A", [(2, 3, F(1, 2)), (3, 3, F(1, 8)), (3, 5, F(1, 2)), (4, 6, F(3))])
def test_resultant_identities_against_sympy(d1, d2, A):
    from oracles import theta_resultant, rho_resultant
    fam = build_families(d1, d2)
    theta = theta_resultant(d1, d2, A)
    want = to_sympy_poly(fam.theta_prefactor() * fam.Theta(A)) * rat(A)
    assert theta == want
    rho = rho_resultant(d1, d2, A)
    want = to_sympy_poly(fam.rho_prefactor() * (fam.rho1 * A - fam.rho0)) * rat(A)
    assert rho == want


@pytest.mark.parametrize("d1,d2", [(2, 3), (3, 5), (4, 4), (2, 7)])
def test_a1_profile_matches_rederivation(d1, d2):
    fam = build_families(d1, d2)
    f = a1_profile_oracle(d1, d2)
    for k0 in (F(1, 7), F(1, 2), F(5, 6)):
        assert rat(fam.a1_profile(k0)) == f.subs(K, rat(k0))


# --- thresholds ----------------------------------------------------------------

@pytest.mark.parametrize("pair,value", [
    ((5, 8), F(186494, 198025)), ((7, 8), F(8879, 20886)), ((7, 14), F(11, 6)),
    ((11, 64), F(26823819708, 1214772845)), ((15, 128), F(28882022881, 576131150)),
])
def test_psi_printed_values(pair, value):
    assert psi(*pair) == value


@pytest.mark.parametrize("d1,d2", [(2, 5), (3, 3), (3, 7), (5, 8), (7, 8), (4, 9)])
def test_psi_matches_resultant_oracle(d1, d2):
    assert rat(psi(d1, d2)) == psi_oracle(d1, d2)


def test_chi_tilde_examples():
    assert chi_tilde(2, 4) == 1
    assert chi_tilde(2, 28) == 63
    assert chi_tilde(3, 19) == F(76, 9)
    assert chi_tilde(3, 20) == F(3, 2) * 20 * 19**2 / F(28**2)
    with pytest.raises(ValueError):
        chi_tilde(4, 4)


def test_a1_examples():
    assert a1_threshold(4, 4) == F(9, 64)
    assert a1_threshold(2, 2) == F(1, 12)
    a = a1_threshold(3, 3)
    assert a == QuadraticSurd(F(364, 513), F(-112, 1539), 63)
    assert abs(float(a) - 0.1319) < 5e-4


@pytest.mark.parametrize("d1,d2", [(2, 2), (2, 3), (2, 6), (2, 11), (3, 3), (3, 4), (3, 9),
                                   (3, 20), (4, 4), (4, 7), (5, 8)])
def test_a1_matches_exact_minimization(d1, d2):
    got = a1_threshold(d1, d2)
    ref = a1_oracle(d1, d2)
    if isinstance(got, QuadraticSurd):
        expr = rat(got.a) + rat(got.b) * sp.sqrt(got.m)
    else:
        expr = rat(got)
    assert sp.simplify(expr - ref) == 0


def test_bohm_and_omega_endpoints():
    for d1, d2 in PAIRS_6:
        n = d1 + d2
        assert bohm_lower(d1, d2) == F(d2 * (d2 - 1) ** 2, 4 * (d1 - 1) * (n + d1))
        b = omega_xi_bounds(d1, d2, 1)
        assert b["omega"] == b["xi"] == bohm_lower(d1, d2)
        assert omega_xi_bounds(d1, d2, 0)["omega"] == omega_at_0(d1, d2)


def test_omega_xi_pinned_value():
    assert omega_xi_bounds(7, 8, F(1, 2)) == {"omega": F(364810, 1145529), "xi": F(25, 36)}


@pytest.mark.parametrize("pair", [(5, 8), (7, 8), (7, 14), (11, 64), (15, 128)])
def test_nonexistence_window_nonempty_for_table_rows(pair):
    assert omega_at_0(*pair) <= psi(*pair) <= bohm_lower(*pair)


def test_discriminant_examples():
    mu = discriminant_and_mu(T(3, 6, F(25, 16)))
    assert mu.delta == 0 and mu.mu1 == mu.mu2 == QuadraticSurd(F(4, 5))
    mu = discriminant_and_mu(T(2, 4, 1))
    assert mu.mu1 == QuadraticSurd(1) and mu.mu2 == QuadraticSurd(F(1, 2))
    mu0 = discriminant_and_mu(T(2, 4, 0))
    assert mu0.mu1 is None and mu0.mu1_infinite and mu0.mu2 == QuadraticSurd(F(1, 3))
    assert discriminant_and_mu(T(2, 4, 10)).mu1 is None


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 12), st.integers(0, 12), st.fractions(min_value=F(1, 50), max_value=8,
                                                            max_denominator=50))
def test_mu_root_identities(d1, extra, A):
    d2 = d1 + extra
    n = d1 + d2
    mu = discriminant_and_mu(T(d1, d2, A))
    if mu.delta < 0:
        assert mu.mu1 is None and mu.mu2 is None
        return
    assert exact_cmp(mu.mu1 + mu.mu2, F(d2 * (d2 - 1)) / ((n + d1) * A)) == 0
    assert exact_cmp(mu.mu1 * mu.mu2, F(d2 * (d1 - 1)) / ((n + d1) * A)) == 0
    assert exact_cmp(mu.mu1 - mu.mu2, 0) >= 0


def test_focus_condition_examples():
    assert focus_condition(T(2, 4, F(1, 100)))
    assert bohm_focus_upper(2, 4) == F(7, 9)
    assert not focus_condition(T(7, 8, F(1, 2)))
    assert bohm_focus_upper(7, 8) is None
    assert not focus_condition(T(2, 2, 1))
    assert bohm_focus_upper(2, 2) == F(135, 1764)


def test_sigma_tau_s_bullet():
    assert sigma_param(2, 4, 1) == F(3, 2)
    assert tau_param(3, 3, F(1, 8)) == F(1, 2)
    assert s_bullet(3, 3, F(1, 8)) == 6
    assert s_bullet(2, 4, 10) is None


def test_check_a2_examples():
    assert check_a2_sufficient(T(3, 3, F(1, 8)))
    assert check_a2_sufficient(T(4, 4, F(9, 64)))
    fam = build_families(5, 8)
    res = sign_on_interval(fam.Theta(F(9, 20)), 0, 1)
    assert res.kind is SignKind.MIXED
    assert not check_a2_sufficient(T(5, 8, F(9, 20)))


@pytest.mark.parametrize("d", range(4, 12))
def test_a2_check_at_equal_dimension_bound(d):
    assert check_a2_sufficient(T(d, d, F((d - 1) ** 2, d * (d * d - d + 4))))


# --- classify -----------------------------------------------------------------

@pytest.mark.parametrize("triple,tag", [
    ((7, 8, F(1, 2)), VerdictTag.NONEXISTENCE_TWO_SUMMANDS),
    ((3, 6, F(25, 16)), VerdictTag.NONEXISTENCE_BOHM),
    ((5, 20, F(361, 50)), VerdictTag.INDETERMINABLE),
    ((3, 3, F(1, 8)), VerdictTag.EXISTENCE),
    ((2, 28, 63), VerdictTag.EXISTENCE),
    ((2, 4, 0), VerdictTag.EXISTENCE_PRODUCT),
    ((7, 7, F(3, 8)), VerdictTag.NONEXISTENCE_TWO_SUMMANDS),
    ((8, 16, F(25, 9)), VerdictTag.NONEXISTENCE_TWO_SUMMANDS),
])
def test_classify_examples(triple, tag):
    v = classify(T(*triple))
    assert v.tag == tag
    assert v.evidence and v.evidence[0].predicate == "A == 0"


def test_classify_evidence_is_serializable():
    v = classify(T(5, 20, F(361, 50)))
    out = json.loads(json.dumps(v.to_json()))
    assert out["verdict"] == "Indeterminable"
    preds = [e["predicate"] for e in out["evidence"]]
    assert preds == ["A == 0", "Delta <= 0", "A >= Psi", "A < A1"]


@settings(max_examples=120, deadline=None)
@given(st.integers(2, 10), st.integers(0, 20), st.fractions(min_value=0, max_value=60,
                                                           max_denominator=40))
def test_classify_ladder_consistency(d1, extra, A):
    d2 = d1 + extra
    t = T(d1, d2, A)
    tag = classify(t).tag
    delta = discriminant_and_mu(t).delta if A > 0 else None
    if A == 0:
        assert tag == VerdictTag.EXISTENCE_PRODUCT
    elif delta <= 0:
        assert tag == VerdictTag.NONEXISTENCE_BOHM
    elif (d1, d2) not in PSI_EXCLUDED and A >= psi(d1, d2):
        assert tag == VerdictTag.NONEXISTENCE_TWO_SUMMANDS
    else:
        assert tag in (VerdictTag.EXISTENCE, VerdictTag.INDETERMINABLE)
        if tag == VerdictTag.EXISTENCE and not (d1 in (2, 3) and A <= chi_tilde(d1, d2)):
            assert exact_cmp(A, a1_threshold(d1, d2)) < 0 and check_a2_sufficient(t)
    if (d1, d2) in PSI_EXCLUDED:
        assert tag != VerdictTag.NONEXISTENCE_TWO_SUMMANDS


def test_excluded_pairs_skip_psi():
    v = classify(T(2, 4, 1))
    assert any(e.predicate == "(d1,d2) admits Psi test" for e in v.evidence)


def test_dimension_errors():
    for bad in ((1, 3), (4, 3), (2.0, 3)):
        with pytest.raises(DimensionError):
            T(bad[0], bad[1], 1)
    with pytest.raises(ValueError):
        T(2, 3, -1)
    with pytest.raises(TypeError):
        T(2, 3, 0.5)


def test_threshold_report_json_is_stable():
    r = threshold_report(T(3, 3, F(1, 8)))
    a = json.dumps(r.to_json(), sort_keys=True)
    b = json.dumps(threshold_report(T(3, 3, F(1, 8))).to_json(), sort_keys=True)
    assert a == b
    out = r.to_json()
    assert out["a1"] == {"a": "364/513", "b": "-112/513", "m": 7}
    assert out["psi"] == "77/486" and out["omega_at_1"] == out["bohm_lower"]
    assert out["chi_tilde"] == "12/121"
    assert threshold_report(T(5, 8, 1)).to_json()["chi_tilde"] is None
