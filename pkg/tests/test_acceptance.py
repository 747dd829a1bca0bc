"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Every expected value is produced here by an oracle that does not share code
with the pipeline under test (sympy expansions, brute-force Kirchhoff
cofactors, character values written out by hand), or is an identity between
two independently computed quantities.

Hand expansion used by criterion 2.  On the triangle Cay(C3, {1, 2}) with
beta(1) = 1, beta(2) = -1 the voltage matrix is the circulant
M(x) = 2I - x P - x^-1 P^-1, so with w = exp(2 pi i / 3)

    det M(x) = prod_k (2 - x w^k - x^-1 w^-k)
             = -(x - 1)^2 / x * (w x - 1)(x - w^2)(w^2 x - 1)(x - w) / x^2
             = -(x - 1)^2 (x^2 + x + 1)^2 / x^3,

and x = 1 + T gives x^3 f = -T^2 (T^2 + 3T + 3)^2 with K = 3.
"""

import time
import warnings

import numpy as np
import pytest
import sympy

from cayley_iwasawa.chartab import (character_table, check_orthogonality, permutation_character_P1,
                                    principal_series_character)
from cayley_iwasawa.cyclo import CyclotomicInteger
from cayley_iwasawa.errors import AmbivalenceTrap
from cayley_iwasawa.graphs import (BetaAssignment, Multigraph, VoltageAssignment,
                                   artin_corollary_check, cayley_graph, class_number_formula_check,
                                   jacobian, random_class_beta, random_multigraph)
from cayley_iwasawa.groups import gl2, validate_connection_set
from cayley_iwasawa.iwasawa import (coefficient_lemma_check, congruence_invariant_check,
                                    evaluation_identity_check, gl2_example_report, gl2_scalar_beta,
                                    growth_check, iwasawa_laurent, iwasawa_polynomial, q_chi,
                                    sum_rule_check, verify_factorization)
from cayley_iwasawa.laurent import XLaurent
from cayley_iwasawa.polydet import bareiss_det

from conftest import CATALOG, full_set, group, table

CRITERIA = {
    1: "factorization theorem",
    2: "closed-form C3 oracle",
    3: "class number formula",
    4: "Artin corollary",
    5: "growth law",
    6: "per-character invariants and sum rules",
    7: "coefficient lemma (corrected form)",
    8: "congruence proposition",
    9: "character tables",
    10: "evaluation identity",
}
RESULTS: dict[int, tuple[bool, str]] = {}


def record(n, ok, info=""):
    RESULTS[n] = (bool(ok), info)
    print(f"criterion {n:2d} {CRITERIA[n]}: {'PASS' if ok else 'FAIL'} {info}")
    return ok


def summary_lines():
    out = []
    for n, name in CRITERIA.items():
        if n in RESULTS:
            ok, info = RESULTS[n]
            out.append(f"criterion {n:2d} {name}: {'PASS' if ok else 'FAIL'} {info}".rstrip())
        else:
            out.append(f"criterion {n:2d} {name}: FAIL (not run to completion)")
    return out


def fixture(name, partial):
    G, S = group(name), full_set(name)
    beta = BetaAssignment.from_partial(G, S, {G.index_of(k): v for k, v in partial.items()})
    X = cayley_graph(G, S)
    return beta, X, VoltageAssignment.from_beta(X, beta)


C5 = ("cyclic:5", {"1": 1, "2": 1})
HEIS = ("heisenberg:3", {"z": 1})
PROD = ("product(cyclic:3,symmetric:3)", {"(1,())": 1})


def test_criterion_1_factorization():
    rng = np.random.default_rng(20240501)
    start = time.perf_counter()
    failures, cases = [], 0
    for name in CATALOG:
        T = table(name)
        for _ in range(50):
            beta = random_class_beta(group(name), full_set(name), rng, bound=3)
            rep = verify_factorization(T, beta)
            cases += 1
            if not rep.passed:
                failures.append((name, beta.class_values(), rep.details.get("first_mismatch")))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 300
    record(1, ok, f"({cases} cases, {len(failures)} mismatches, {elapsed:.1f} s)")
    assert not failures, failures[:3]
    assert elapsed < 300


def test_criterion_2_closed_form():
    x, T = sympy.symbols("x T")
    beta, X, alpha = fixture("cyclic:3", {"1": 1})
    f = iwasawa_laurent(X, alpha)
    M = sympy.Matrix([[2, -x, -1 / x], [-1 / x, 2, -x], [-x, -1 / x, 2]])
    oracle_f = sympy.factor(M.det())
    assert sympy.simplify(oracle_f + (x - 1) ** 2 * (x ** 2 + x + 1) ** 2 / x ** 3) == 0
    same_f = sympy.simplify(sum(c * x ** e for e, c in f.items()) - oracle_f) == 0
    want = [int(c) for c in sympy.Poly(-T ** 2 * (T ** 2 + 3 * T + 3) ** 2, T).all_coeffs()[::-1]]
    d3, d5 = iwasawa_polynomial(f, 3), iwasawa_polynomial(f, 5)
    checks = {"f matches circulant expansion": same_f, "cleared f": list(d3.fT) == want,
              "K = 3": d3.K == 3, "(mu, lambda) at 3 = (0, 5)": (d3.mu, d3.lam) == (0, 5),
              "(mu, lambda) at 5 = (0, 1)": (d5.mu, d5.lam) == (0, 1)}
    ok = all(checks.values())
    record(2, ok, "" if ok else str([k for k, v in checks.items() if not v]))
    assert ok, checks


def complete(n):
    return Multigraph(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))


def test_criterion_3_class_number():
    graphs = {"K4": complete(4), "K5": complete(5), "K27": complete(27)}
    C6 = group("cyclic:6")
    S = validate_connection_set(C6, [C6.index_of(s) for s in ("1", "5", "2", "4", "3")])
    graphs["Cay(C6,{+-1,+-2,3})"] = cayley_graph(C6, S)
    rng = np.random.default_rng(7)
    for k in range(20):
        X = random_multigraph(rng, max_vertices=12, min_degree=2)
        assert X.is_connected() and X.euler_characteristic != 0 and X.degrees.min() >= 2
        graphs[f"random{k}"] = X
    bad = []
    for name, X in graphs.items():
        rep = class_number_formula_check(X)
        kirchhoff = abs(bareiss_det(X.reduced_laplacian().tolist()))
        if not (rep.passed and rep.details["kappa"] == kirchhoff):
            bad.append(name)
    trees = {"K4": 16, "K5": 125, "K27": 27 ** 25}
    bad += [n for n, t in trees.items() if jacobian(graphs[n]).kappa != t]
    record(3, not bad, f"({len(graphs)} graphs)" if not bad else f"failed on {bad}")
    assert not bad


def test_criterion_4_artin():
    rows, ok = [], True
    for name, partial in (C5, HEIS):
        _, X, alpha = fixture(name, partial)
        for n in (1, 2):
            rep = artin_corollary_check(X, alpha, 2, n)
            good = rep.passed and rep.details["product_rational"]
            ok &= good
            rows.append(f"{name} n={n}:{'ok' if good else 'FAIL'}")
    record(4, ok, "(" + ", ".join(rows) + ")")
    assert ok


def test_criterion_5_growth():
    start = time.perf_counter()
    rows, ok = [], True
    for name, partial in (C5, HEIS, PROD):
        beta, _, _ = fixture(name, partial)
        rep = growth_check(beta, 2, n_max=3)
        d = rep.details
        good = rep.passed and d["n0"] <= 2
        ok &= good
        rows.append(f"{name}: mu={d['mu']} lambda={d['lambda']} nu={d['nu']} n0={d['n0']}")
    elapsed = time.perf_counter() - start
    ok &= elapsed < 600
    record(5, ok, f"({'; '.join(rows)}; {elapsed:.1f} s)")
    assert ok


UNRAMIFIED = [(*C5, 2), (*HEIS, 2), (*PROD, 2), ("cyclic:3", {"1": 1}, 5),
              ("cyclic:6", {"1": 1, "2": 1}, 5), ("cyclic:7", {"1": 1, "2": -1, "3": 2}, 2),
              ("heisenberg:3", {"z": 1, "x": 1}, 5), ("cyclic:5", {"1": 1, "2": -2}, 3)]


def test_criterion_6_sum_rules():
    bad = []
    for name, partial, ell in UNRAMIFIED:
        beta, _, _ = fixture(name, partial)
        rep = sum_rule_check(table(name), beta, ell)
        # mu_chi is taken for P_chi = Q_chi / chi(1): shift by v(chi(1))
        if not rep.passed:
            bad.append((name, ell, rep.details))
    beta, _, _ = fixture("cyclic:3", {"1": 1})
    per = sum_rule_check(table("cyclic:3"), beta, 5).details["per_character"]
    c3 = sorted((mu, lam) for _, _, mu, lam in per) == sorted([(0, 2), (0, 0), (0, 0)]) and \
        (per[0][2], per[0][3]) == (0, 2)
    ok = not bad and c3
    record(6, ok, f"({len(UNRAMIFIED)} fixtures; C3/5 per-character {[(p[2], p[3]) for p in per]})")
    assert not bad, bad
    assert c3


def test_criterion_7_coefficient_lemma():
    rng = np.random.default_rng(99)
    names = [n for n in CATALOG]
    bad, count = [], 0
    while count < 100:
        name = names[count % len(names)]
        beta = random_class_beta(group(name), full_set(name), rng, bound=3)
        Q = q_chi(table(name), 0, beta)
        sq = sum(b * b for b in beta.nonzero_pairs())
        t2 = Q.series_coefficient(2)
        if t2 != -sq or Q.series_coefficient(1) != 0:
            bad.append((name, beta.class_values()))
        count += 1
    # unit criterion on fixtures with ell dividing and not dividing sum beta_i^2
    fixtures = [("cyclic:5", {"1": 1, "2": 1}, 2), ("cyclic:5", {"1": 1, "2": 1}, 3),
                ("cyclic:7", {"1": 1, "2": -1, "3": 2}, 2), ("cyclic:7", {"1": 1, "2": -1, "3": 2}, 3),
                ("heisenberg:3", {"z": 1}, 2), ("heisenberg:3", {"z": 1, "x": 1}, 2),
                ("cyclic:6", {"1": 1, "2": 1}, 5)]
    divides = {True: 0, False: 0}
    for name, partial, ell in fixtures:
        beta, _, _ = fixture(name, partial)
        rep = coefficient_lemma_check(table(name), 0, beta, ell)
        divides[rep.details["sum_beta_i_squared"] % ell == 0] += 1
        if not rep.passed:
            bad.append((name, ell, rep.details))
    ok = not bad and divides[True] > 0 and divides[False] > 0
    record(7, ok, f"({count} random beta; fixtures with ell | sum: {divides[True]}, ell not | sum: {divides[False]})")
    assert ok, bad


def _product_pair():
    name = PROD[0]
    T, G = table(name), group(name)
    gen_c3, transposition = G.index_of("(1,())"), G.index_of("(0,(12))")
    one = CyclotomicInteger.one(T.m)
    triv = sign = None
    for k, d in enumerate(T.degrees):
        if d != 1 or T.value(k, gen_c3) == one:
            continue
        if triv is None and T.value(k, transposition) == one:
            triv = k
    psi = T.value(triv, gen_c3)
    for k, d in enumerate(T.degrees):
        if d == 1 and T.value(k, gen_c3) == psi and T.value(k, transposition) == -one:
            sign = k
    return triv, sign


def test_criterion_8_congruence():
    i, j = _product_pair()
    beta, _, _ = fixture(*PROD)
    rep = congruence_invariant_check(table(PROD[0]), i, j, beta, 2)
    first = rep.passed and rep.details["congruent"] is True
    T = table("heisenberg:3")
    a, b = [k for k, d in enumerate(T.degrees) if d == 3]
    hbeta, _, _ = fixture(*HEIS)
    rep2 = congruence_invariant_check(T, a, b, hbeta, 2)
    second = rep2.passed and rep2.details["congruent"] is False
    ok = first and second
    record(8, ok, f"(product pair invariants {rep.details['invariants']}; heisenberg degree-3 pair"
                  f" congruent={rep2.details['congruent']})")
    assert ok


S4_BY_TYPE = {(): (1, 1, 3, 3, 2), (2,): (1, -1, 1, -1, 0), (2, 2): (1, 1, -1, -1, 2),
              (3,): (1, 1, 0, 0, -1), (4,): (1, -1, -1, 1, 0)}
S3_BY_TYPE = {(): (1, 1, 2), (2,): (1, -1, 0), (3,): (1, 1, -1)}


def _cycle_type(label):
    import re
    return tuple(sorted((len(c) for c in re.findall(r"\(([0-9]+)\)", label) if len(c) > 1), reverse=True))


def _rows(T):
    G = T.group
    return {tuple(T.value(k, g).to_int() for g in range(G.order)) for k in range(len(T))}


def _by_type(G, ref):
    k = len(next(iter(ref.values())))
    return {tuple(ref[_cycle_type(G.labels[g])][i] for g in range(G.order)) for i in range(k)}


def _d4(G):
    def parse(label):
        a = 0 if label in ("e", "s") else (1 if label.startswith("r") and not label.startswith("r^") else
                                           int(label[2]))
        return a, int(label.endswith("s"))
    rows = {tuple(e1 ** a * e2 ** b for a, b in map(parse, G.labels)) for e1 in (1, -1) for e2 in (1, -1)}
    rows.add(tuple({0: 2, 2: -2}.get(a, 0) if b == 0 else 0 for a, b in map(parse, G.labels)))
    return rows


def _q8(G):
    rows = set()
    for si in (1, -1):
        for sj in (1, -1):
            v = {"1": 1, "-1": 1, "i": si, "-i": si, "j": sj, "-j": sj, "k": si * sj, "-k": si * sj}
            rows.add(tuple(v[lb] for lb in G.labels))
    rows.add(tuple({"1": 2, "-1": -2}.get(lb, 0) for lb in G.labels))
    return rows


def test_criterion_9_character_tables():
    names = CATALOG + ("gl2:4", "gl2:3", "gl2:2", "dihedral:5", "heisenberg:5")
    orth_bad = [n for n in names if check_orthogonality(character_table(group(n)))]
    refs = {"symmetric:3": _by_type(group("symmetric:3"), S3_BY_TYPE),
            "symmetric:4": _by_type(group("symmetric:4"), S4_BY_TYPE),
            "dihedral:4": _d4(group("dihedral:4")), "quaternion8": _q8(group("quaternion8"))}
    ref_bad = [n for n, ref in refs.items() if _rows(table(n)) != ref]
    T = table("gl2:4")
    G = T.group
    rows_present = all(T.index_of_row(r) is not None for r in (
        permutation_character_P1(4, G), principal_series_character(4, 1, 0, G),
        principal_series_character(4, 2, 0, G)))
    rep = gl2_example_report(4)
    # recompute P_chi_V from the permutation character directly, element by element
    chi = permutation_character_P1(4, G)
    S = full_set("gl2:4")
    beta = gl2_scalar_beta(G, S, 4)
    cls = G.conjugacy.class_of
    terms = {0: S.r * 4}
    for t in S:
        terms[beta(t)] = terms.get(beta(t), 0) - chi[cls[t]].to_int()
    P = XLaurent.from_terms({e: c // 4 for e, c in terms.items()})
    assert all(c % 4 == 0 for c in terms.values())
    recomputed_matches = rep["P_chi_V"] == str(P)
    flagged = rep["claimed_matches"] is False and bool(rep["discrepancy"])
    ok = not orth_bad and not ref_bad and rows_present and recomputed_matches and flagged
    record(9, ok, f"(orthogonality on {len(names)} groups; P_chi_V = {rep['P_chi_V']} vs claimed"
                  f" {rep['claimed']}: discrepancy flagged)")
    assert not orth_bad and not ref_bad
    assert rows_present and recomputed_matches and flagged


def test_criterion_10_evaluation():
    rows, ok = [], True
    for name, partial in (C5, HEIS):
        _, X, alpha = fixture(name, partial)
        rep = evaluation_identity_check(X, alpha, 2, 1)
        good = rep.passed and rep.status == "pass" and rep.details["cover_connected"]
        ok &= good
        rows.append(f"{name}: {rep.details['convention']}")
    record(10, ok, "(" + "; ".join(rows) + ")")
    assert ok


if __name__ == "__main__":
    warnings.simplefilter("ignore", AmbivalenceTrap)
    for fn in [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]:
        try:
            fn()
        except AssertionError:
            pass
    print("\n".join(summary_lines()))
    raise SystemExit(0 if all(RESULTS.get(n, (False,))[0] for n in CRITERIA) else 1)
