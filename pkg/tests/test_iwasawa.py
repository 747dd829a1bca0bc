import warnings

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from cayley_iwasawa.cyclo import _pdivmod_monic
from cayley_iwasawa.errors import (AmbivalenceTrap, Condition2, DegreeDivisible, DegreeMismatch,
                                   DeterminantDegenerate, RamifiedUnsupported, ZeroSeries)
from cayley_iwasawa.graphs import (BetaAssignment, VoltageAssignment, cayley_graph, random_class_beta)
from cayley_iwasawa.iwasawa import (coefficient_lemma_check, congruence_invariant_check,
                                    congruence_test, evaluation_identity_check, gl2_example_report,
                                    growth_check, iwasawa_laurent, iwasawa_polynomial, mu_lambda,
                                    q_chi, q_chi_elementwise, series_mu_lambda, sum_rule_check,
                                    verify_factorization)
from cayley_iwasawa.laurent import XLaurent

from conftest import full_set, group, table

SMALL = ("cyclic:5", "cyclic:6", "cyclic:7", "quaternion8", "dihedral:4", "product(cyclic:3,symmetric:3)")
seeds = st.integers(0, 2 ** 32 - 1)
x, T = sympy.symbols("x T")


def setup(name, partial_labels):
    G, S = group(name), full_set(name)
    beta = BetaAssignment.from_partial(G, S, {G.index_of(k): v for k, v in partial_labels.items()})
    X = cayley_graph(G, S)
    return G, S, beta, X, VoltageAssignment.from_beta(X, beta)


def random_setup(name, seed):
    G, S = group(name), full_set(name)
    beta = random_class_beta(G, S, np.random.default_rng(seed))
    X = cayley_graph(G, S)
    return beta, X, VoltageAssignment.from_beta(X, beta)


def circulant_oracle():
    """det of the 3x3 voltage matrix of the triangle, expanded by sympy."""
    M = sympy.Matrix([[2, -x, -1 / x], [-1 / x, 2, -x], [-x, -1 / x, 2]])
    return sympy.factor(sympy.expand(M.det()))


def test_c3_closed_form():
    _, _, beta, X, alpha = setup("cyclic:3", {"1": 1})
    f = iwasawa_laurent(X, alpha)
    oracle = circulant_oracle()
    assert sympy.simplify(sum(c * x ** e for e, c in f.items()) - oracle) == 0
    data = iwasawa_polynomial(f, 3)
    cleared = sympy.Poly(-T ** 2 * (T ** 2 + 3 * T + 3) ** 2, T).all_coeffs()[::-1]
    assert data.K == 3
    assert list(data.fT) == [int(c) for c in cleared]
    assert (data.mu, data.lam) == (0, 5)
    assert (iwasawa_polynomial(f, 5).mu, iwasawa_polynomial(f, 5).lam) == (0, 1)


@given(st.sampled_from(SMALL), seeds)
def test_determinant_structure(name, seed):
    beta, X, alpha = random_setup(name, seed)
    f = iwasawa_laurent(X, alpha)
    # M(1) is the Laplacian and M(1/x) = M(x)^T
    assert f.evaluate(1) == 0
    assert f == f.inverse_substitution()
    if f.is_zero:
        return
    K, coeffs = f.t_coefficients()
    assert coeffs[0] == 0 and coeffs[1] == 0


@given(st.sampled_from(SMALL + ("heisenberg:3",)), seeds)
def test_q_chi_classwise_equals_elementwise(name, seed):
    T_ = table(name)
    beta, _, _ = random_setup(name, seed)
    for chi in range(len(T_)):
        assert q_chi(T_, chi, beta) == q_chi_elementwise(T_, chi, beta)


@given(st.sampled_from(SMALL), seeds)
def test_factorization_small(name, seed):
    beta, _, _ = random_setup(name, seed)
    rep = verify_factorization(table(name), beta)
    assert rep.passed, rep.details


def test_degenerate_determinant():
    _, _, _, X, alpha = setup("cyclic:5", {})
    with pytest.raises(DeterminantDegenerate):
        iwasawa_polynomial(iwasawa_laurent(X, alpha), 2)


def test_mu_lambda_rule():
    assert mu_lambda([4, 2, 8, 1], 2) == (0, 3)
    assert mu_lambda([0, 6, 3, 9], 3) == (1, 1)
    with pytest.raises(ZeroSeries):
        mu_lambda([0, 0], 5)


@pytest.mark.parametrize("name,beta,ell", [("cyclic:5", {"1": 1, "2": 1}, 2),
                                           ("cyclic:7", {"1": 1, "2": -1, "3": 2}, 2),
                                           ("cyclic:3", {"1": 1}, 3)])
def test_distinguished_polynomial_divides(name, beta, ell):
    *_, X, alpha = setup(name, beta)
    data = iwasawa_polynomial(iwasawa_laurent(X, alpha), ell, N=20)
    P = list(data.distinguished)
    assert P[-1] == 1 and len(P) - 1 == data.lam
    assert all(c % ell == 0 for c in P[:-1])
    g = [c // ell ** data.mu for c in data.gT]
    _, r = _pdivmod_monic(g, P, ell ** 20)
    assert all(c % ell ** 20 == 0 for c in r)


def test_precision_escalates():
    Q = XLaurent.from_terms({0: -(3 ** 70), 1: 3 ** 70})  # 3^70 T
    mu, lam, N = series_mu_lambda(Q, 3, 64)
    assert (mu, lam) == (70, 1) and N == 128


def test_c3_characters_at_5():
    _, _, beta, X, alpha = setup("cyclic:3", {"1": 1})
    rep = sum_rule_check(table("cyclic:3"), beta, 5)
    assert rep.passed
    assert [tuple(r[2:]) for r in rep.details["per_character"]] == [(0, 2), (0, 0), (0, 0)]


@pytest.mark.parametrize("name,beta,ell", [("cyclic:5", {"1": 1, "2": 1}, 2),
                                           ("heisenberg:3", {"z": 1}, 2),
                                           ("cyclic:6", {"1": 1, "2": 1}, 5),
                                           ("product(cyclic:3,symmetric:3)", {"(1,())": 1}, 2)])
def test_sum_rule_fixtures(name, beta, ell):
    _, _, b, _, _ = setup(name, beta)
    rep = sum_rule_check(table(name), b, ell)
    assert rep.passed, rep.details


def test_sum_rule_with_degree_divisible_by_ell():
    # product(C3, S3) has degree-2 characters, so at ell = 2 the shift v(chi(1)) is live
    _, _, b, _, _ = setup("product(cyclic:3,symmetric:3)", {"(1,())": 1})
    rep = sum_rule_check(table("product(cyclic:3,symmetric:3)"), b, 2)
    assert rep.details["degree_valuation_shift"] > 0
    assert not rep.details["unadjusted_mu_rule_holds"]


@given(st.sampled_from(("cyclic:5", "cyclic:7", "heisenberg:3", "cyclic:6")), seeds,
       st.sampled_from([2, 5, 7]))
def test_coefficient_lemma_property(name, seed, ell):
    T_ = table(name)
    beta, _, _ = random_setup(name, seed)
    if not any(beta.values):
        return
    try:
        rep = coefficient_lemma_check(T_, 0, beta, ell)
    except RamifiedUnsupported:
        assert ell in (5, 7) and T_.m % ell == 0
        return
    assert rep.details["T_coefficient"] == "0"
    assert rep.details["T2_matches"] and rep.passed


def test_coefficient_lemma_degree_divisible():
    _, _, b, _, _ = setup("heisenberg:3", {"z": 1})
    T_ = table("heisenberg:3")
    with pytest.raises(DegreeDivisible):
        coefficient_lemma_check(T_, T_.degrees.index(3), b, 3)


def test_congruence_pairs():
    name = "product(cyclic:3,symmetric:3)"
    T_ = table(name)
    _, _, b, _, _ = setup(name, {"(1,())": 1})
    lin = [i for i, d in enumerate(T_.degrees) if d == 1]
    pairs = [(i, j) for i in lin for j in lin if i < j and congruence_test(T_, i, j, 2)]
    assert pairs
    for i, j in pairs:
        assert congruence_invariant_check(T_, i, j, b, 2).passed
    deg2 = T_.degrees.index(2)
    with pytest.raises(DegreeMismatch):
        congruence_invariant_check(T_, lin[0], deg2, b, 2)


def test_heisenberg_degree3_pair_not_congruent():
    T_ = table("heisenberg:3")
    _, _, b, _, _ = setup("heisenberg:3", {"z": 1})
    i, j = [k for k, d in enumerate(T_.degrees) if d == 3]
    rep = congruence_invariant_check(T_, i, j, b, 2)
    assert rep.passed and rep.details["congruent"] is False


def test_evaluation_on_disconnected_cover():
    # cycle voltages of the triangle are multiples of 3, so the ell = 3 cover splits
    *_, X, alpha = setup("cyclic:3", {"1": 1})
    rep = evaluation_identity_check(X, alpha, 3, 1)
    assert rep.details["cover_connected"] is False
    assert rep.status in ("pass", "BothZero")


def test_evaluation_convention_c5():
    *_, X, alpha = setup("cyclic:5", {"1": 1, "2": 1})
    rep = evaluation_identity_check(X, alpha, 2, 2)
    assert rep.passed and rep.details["convention"] == "T = zeta - 1"


def test_growth_c5():
    _, _, b, _, _ = setup("cyclic:5", {"1": 1, "2": 1})
    rep = growth_check(b, 2, 3)
    assert rep.passed
    assert rep.details["valuations"] == [0, 2, 5, 10]
    assert (rep.details["mu"], rep.details["lambda"], rep.details["nu"]) == (1, 1, -1)


def test_growth_rejects_invalid_beta():
    _, _, b, _, _ = setup("cyclic:5", {"1": 2, "2": 2})
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AmbivalenceTrap)
        with pytest.raises(Condition2):
            growth_check(b, 2, 2)


def test_gl2_report_flags_discrepancy():
    rep = gl2_example_report(4)
    assert rep["degree"] == 4
    assert rep["claimed_matches"] is False
    assert rep["discrepancy"]
    assert rep["P_chi_V_T_coeffs"] == ["180", "180", "-1"]
