import itertools
import math
import warnings

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st
from sympy.matrices.normalforms import smith_normal_form

from cayley_iwasawa.errors import (AmbivalenceTrap, BaseDisconnected, Condition1, Condition3,
                                   ConfigError, DegreeOneVertex, Disconnected,
                                   EulerCharacteristicZero)
from cayley_iwasawa.graphs import (BetaAssignment, Multigraph, VoltageAssignment,
                                   artin_corollary_check, cayley_graph, class_number_formula_check,
                                   derived_graph, find_condition5_witness, ihara_h, jacobian,
                                   random_class_beta, random_multigraph, smith_form,
                                   smith_form_mod_det, twisted_h_values, validate_beta,
                                   voltage_connectivity, voltage_image_gcd)
from cayley_iwasawa.groups import validate_connection_set
from cayley_iwasawa.polydet import bareiss_det

from conftest import CATALOG, full_set, group

seeds = st.integers(0, 2 ** 32 - 1)


def complete(n):
    return Multigraph(n, tuple(itertools.combinations(range(n), 2)))


def brute_force_trees(X):
    """Count spanning trees by testing every (n-1)-subset of edges."""
    count = 0
    for sub in itertools.combinations(range(X.nE), X.nV - 1):
        parent = list(range(X.nV))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a
        ok = True
        for k in sub:
            a, b = (find(v) for v in X.edges[k])
            if a == b:
                ok = False
                break
            parent[a] = b
        count += ok
    return count


def bfs_connected(X):
    adj = [[] for _ in range(X.nV)]
    for a, b in X.edges:
        adj[a].append(b)
        adj[b].append(a)
    seen, stack = {0}, [0]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == X.nV


@pytest.mark.parametrize("n,factors", [(3, (1, 3)), (4, (1, 4, 4)), (5, (1, 5, 5, 5))])
def test_complete_graph_jacobians(n, factors):
    jac = jacobian(complete(n))
    assert jac.invariant_factors == factors
    assert jac.kappa == n ** (n - 2)
    loc = jacobian(complete(n), ell=n if n != 4 else 2)
    assert loc.kappa_ell_valuation == (n - 2 if n != 4 else 4)


def test_jacobian_needs_connected():
    with pytest.raises(Disconnected):
        jacobian(Multigraph(4, ((0, 1), (2, 3))))
    assert jacobian(Multigraph(1, ((0, 0),))).kappa == 1


@given(seeds)
def test_kappa_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    X = random_multigraph(rng, max_vertices=6)
    if X.nE > 11:
        X = Multigraph(X.nV, X.edges[:11])
        if not X.is_connected():
            return
    assert jacobian(X).kappa == brute_force_trees(X)


@given(seeds)
def test_smith_form_matches_sympy(seed):
    X = random_multigraph(np.random.default_rng(seed), max_vertices=9)
    Lr = X.reduced_laplacian().tolist()
    snf = smith_normal_form(sympy.Matrix(Lr), domain=sympy.ZZ)
    want = sorted(abs(int(snf[i, i])) for i in range(len(Lr)))
    jac = jacobian(X)
    assert list(jac.invariant_factors) == want
    D = bareiss_det(Lr)
    assert smith_form(Lr, D) == smith_form_mod_det(Lr, D) == want
    for ell in (2, 3):
        loc = jacobian(X, ell=ell)
        assert loc.kappa_ell_valuation == sum(_v(d, ell) for d in want)


def _v(n, ell):
    return 0 if n % ell else 1 + _v(n // ell, ell)


def test_smith_form_with_a_large_prime_cofactor():
    p = 1_000_000_007
    M = [[p, 0, 0], [0, 6, 0], [0, 0, 4]]
    assert smith_form(M, 24 * p) == [1, 2, 12 * p]
    q = 2 ** 61 - 1  # two large primes: handled by elimination modulo their product
    M = [[p * q, 1], [0, 1]]
    assert smith_form(M, p * q) == [1, p * q]


@given(seeds)
def test_ihara_bass(seed):
    # det(I - uW) = (1 - u^2)^(m - n) h(u) with W the non-backtracking edge matrix
    X = random_multigraph(np.random.default_rng(seed), max_vertices=5)
    if X.nE > 8 or (X.degrees == 1).any():
        return
    h = ihara_h(X)
    o, t = X.origins.tolist(), X.targets.tolist()
    nd = 2 * X.nE
    W = [[int(t[a] == o[b] and b != a ^ 1) for b in range(nd)] for a in range(nd)]
    for u in range(-X.nE, X.nE + 2):
        lhs = bareiss_det([[int(a == b) - u * W[a][b] for b in range(nd)] for a in range(nd)])
        hu = sum(c * u ** k for k, c in enumerate(h))
        assert lhs == (1 - u * u) ** (X.nE - X.nV) * hu


@given(seeds)
def test_class_number_formula_random(seed):
    X = random_multigraph(np.random.default_rng(seed), max_vertices=10)
    rep = class_number_formula_check(X)
    assert rep.passed, rep.details
    assert rep.details["h_at_1"] == 0


def test_ihara_hypotheses():
    with pytest.raises(EulerCharacteristicZero):
        ihara_h(Multigraph(3, ((0, 1), (1, 2), (2, 0))))
    with pytest.raises(DegreeOneVertex):
        ihara_h(Multigraph(4, ((0, 1), (1, 2), (2, 0), (0, 1), (2, 3))))
    with pytest.raises(Disconnected):
        ihara_h(Multigraph(2, ((0, 0), (1, 1))))


@pytest.mark.parametrize("name", CATALOG)
def test_cayley_graphs_are_regular(name):
    G = group(name)
    S = full_set(name)
    X = cayley_graph(G, S)
    assert X.nV == G.order
    assert (X.degrees == S.r).all()
    assert X.nE == G.order * S.r // 2
    assert X.is_connected()


def test_multigraph_json_round_trip(tmp_path):
    X = Multigraph(3, ((0, 1), (1, 1), (1, 2), (0, 2), (0, 2)))
    Y = Multigraph.from_json(X.to_json())
    assert Y.edges == X.edges and Y.nV == 3
    assert X.adjacency[1, 1] == 2
    with pytest.raises(ConfigError):
        Multigraph.from_json({"nV": 2, "edges": [[0, 5]]})


@given(seeds, st.sampled_from([2, 3]), st.integers(0, 2))
def test_voltage_connectivity_matches_bfs(seed, ell, n):
    rng = np.random.default_rng(seed)
    X = random_multigraph(rng, max_vertices=6)
    alpha = VoltageAssignment(X, tuple(int(v) for v in rng.integers(-3, 4, X.nE)))
    Y = derived_graph(X, alpha, ell, n)
    assert Y.nV == X.nV * ell ** n and Y.nE == X.nE * ell ** n
    assert voltage_connectivity(X, alpha, ell, n) == bfs_connected(Y)


def test_voltage_connectivity_on_disconnected_base():
    X = Multigraph(4, ((0, 1), (0, 1), (2, 3), (2, 3)))
    with pytest.raises(BaseDisconnected):
        voltage_image_gcd(X, VoltageAssignment(X, (1, 0, 1, 0)))


def test_voltages_from_beta_are_antisymmetric():
    G = group("cyclic:5")
    S = full_set("cyclic:5")
    beta = BetaAssignment.from_partial(G, S, {1: 1, 2: 1})
    assert beta.values[1:] == (1, 1, -1, -1)
    X = cayley_graph(G, S)
    alpha = VoltageAssignment.from_beta(X, beta)
    for (o, t), a in zip(X.edges, alpha.values):
        assert a == beta(G.mul(o, int(G.inv[t])))
    d = alpha.directed
    assert (d[0::2] == -d[1::2]).all()


def test_beta_conflicts():
    G = group("cyclic:5")
    S = full_set("cyclic:5")
    with pytest.raises(Condition3):
        BetaAssignment.from_partial(G, S, {1: 1, 4: 1})
    H = group("heisenberg:3")
    SH = full_set("heisenberg:3")
    x, xz = H.index_of("x"), H.index_of("xz")  # conjugate
    with pytest.raises(Condition1):
        BetaAssignment.from_partial(H, SH, {x: 1, xz: 2})


def test_ambivalence_trap():
    G = group("symmetric:3")
    S = full_set("symmetric:3")
    with pytest.warns(AmbivalenceTrap):
        rep = validate_beta(BetaAssignment.from_partial(G, S, {}), 2)
    assert rep.ambivalence_trap and not rep.valid


@given(st.sampled_from(("cyclic:5", "cyclic:7", "heisenberg:3", "product(cyclic:3,symmetric:3)")),
       st.sampled_from([2, 5]), seeds)
def test_condition5_witnesses_are_genuine(name, ell, seed):
    G = group(name)
    S = full_set(name)
    beta = random_class_beta(G, S, np.random.default_rng(seed))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AmbivalenceTrap)
        rep = validate_beta(beta, ell)
    w = find_condition5_witness(beta, ell)
    if w is None:
        assert not rep.conditions[5]
        return
    assert 2 <= len(w) <= 4 and all(h in S for h in w)
    prod = G.product(w)
    assert prod in S
    assert (beta(prod) - sum(beta(h) for h in w)) % ell != 0


def test_class_antisymmetric_random_beta():
    rng = np.random.default_rng(1)
    for name in CATALOG:
        G, S = group(name), full_set(name)
        beta = random_class_beta(G, S, rng)
        for s in S:
            assert beta(int(G.inv[s])) == -beta(s)
            assert all(beta(G.conj(g, s)) == beta(s) for g in range(G.order))


def test_twisted_h_trivial_character_vanishes():
    G = group("cyclic:5")
    S = full_set("cyclic:5")
    X = cayley_graph(G, S)
    alpha = VoltageAssignment.from_beta(X, BetaAssignment.from_partial(G, S, {1: 1, 2: 1}))
    hs = twisted_h_values(X, alpha, 2, 2)
    assert not hs[0]
    assert all(bool(h) for h in hs[1:])
    # conjugate characters give conjugate values
    assert hs[1].conj() == hs[3]


def test_artin_level_one_cyclic():
    G = group("cyclic:5")
    S = full_set("cyclic:5")
    X = cayley_graph(G, S)
    alpha = VoltageAssignment.from_beta(X, BetaAssignment.from_partial(G, S, {1: 1, 2: 1}))
    rep = artin_corollary_check(X, alpha, 2, 1)
    assert rep.passed and rep.details["product_rational"]


def test_cayley_graph_custom_connection_set():
    G = group("cyclic:6")
    S = validate_connection_set(G, [1, 5, 2, 4, 3])
    X = cayley_graph(G, S)
    assert math.prod(jacobian(X).invariant_factors) == jacobian(X).kappa
