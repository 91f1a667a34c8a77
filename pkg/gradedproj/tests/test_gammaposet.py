import pytest

from gradedproj.errors import NonDominantWeightError, PreconditionError
from gradedproj.gammaposet import (
    check_grade_uniqueness,
    check_node_monotonicity,
    check_shift_property,
    gamma_interval,
    gamma_set,
    grade_bound,
    is_interval_closed,
    leq,
    linear_extension,
    psi_from_roots,
    psi_from_xi,
    psi_node,
    rigidity_check,
    to_dot,
    to_json,
    to_networkx,
)
from gradedproj.models import GammaNode, PsiOrigin
from gradedproj.rootdata import build_root_system, conjecture_support, make_lie_type, root_to_weight
from gradedproj.sweep import default_psi, sweep_grid

# =============================================================================
# Psi
# =============================================================================

def test_psi_node_counts(b4, b5, c4, d4, d5):
    assert len(psi_node(2, b4).roots) == 1
    assert len(psi_node(3, b4).roots) == 3
    assert len(psi_node(4, b5).roots) == 6
    assert len(psi_node(3, c4).roots) == 6
    assert len(psi_node(3, d5).roots) == 3
    assert psi_node(1, b4).roots == ()
    assert psi_node(3, d4).roots == ()


def test_psi_node_of_b4_node_three(b4):
    # epsilon_1 + epsilon_2, epsilon_1 + epsilon_3, epsilon_2 + epsilon_3
    assert set(psi_node(3, b4).roots) == {(1, 2, 2, 2), (1, 1, 2, 2), (0, 1, 2, 2)}


def _eps_pair(r, s, rank):
    # epsilon_r + epsilon_s = omega_r + omega_s - omega_{r-1} - omega_{s-1}, with omega_0 = 0
    w = [0] * rank
    for k in (r, s):
        w[k - 1] += 1
        if k > 1:
            w[k - 2] -= 1
    return tuple(w)


@pytest.mark.parametrize("family,ranks", [("B", range(3, 9)), ("C", range(3, 9)), ("D", range(4, 10))])
def test_psi_node_closed_form(family, ranks):
    for rank in ranks:
        rs = build_root_system(make_lie_type(family, rank))
        for i in range(1, conjecture_support(rs) + 1):
            # long roots 2 epsilon_r also have coefficient 2 at alpha_i in type C
            diagonal = 1 if family == "C" else 0
            expected = {_eps_pair(r, s, rank) for s in range(1, i + 1) for r in range(1, s + diagonal)}
            got = {root_to_weight(r, rs) for r in psi_node(i, rs).roots}
            assert got == expected, (family, rank, i)


def test_psi_from_xi_matches_node(b4, c4):
    assert psi_from_xi((0, 1, 0, 0), b4).roots == psi_node(2, b4).roots
    assert psi_from_xi((0, 0, 1, 0), c4).roots == psi_node(3, c4).roots
    assert psi_from_xi((1, 1, 1, 1), b4).roots == (b4.theta,)
    assert psi_from_xi((0, 1, 0, 0), b4).origin == PsiOrigin.XI


def test_psi_errors(b3):
    with pytest.raises(PreconditionError):
        psi_from_xi((0, 0, 0), b3)
    with pytest.raises(NonDominantWeightError):
        psi_from_xi((1, -1, 0), b3)
    with pytest.raises(PreconditionError):
        psi_node(4, b3)
    with pytest.raises(PreconditionError):
        psi_from_roots([(1, -1, 0)], b3)


def test_describe(b3):
    assert psi_node(2, b3).describe() == "node 2"
    assert psi_from_roots([(0, 1, 0), (1, 0, 0)], b3).describe() == "roots 0,1,0;1,0,0"

# =============================================================================
# Gamma
# =============================================================================

def test_gamma_of_adjoint(b3):
    psi = psi_node(2, b3)
    assert grade_bound((0, 1, 0), psi, b3) == 1
    gamma = gamma_set((0, 1, 0), psi, b3)
    assert gamma.nodes == (GammaNode(mu=(0, 1, 0), grade=0), GammaNode(mu=(0, 0, 0), grade=1))
    assert gamma.covers == ((0, 1),)


def test_gamma_of_b4_node_three(b4):
    lam = (1, 1, 1, 0)
    gamma = gamma_set(lam, psi_node(3, b4), b4)
    assert len(gamma) == 7
    assert [n.grade for n in gamma.nodes] == [0, 1, 1, 1, 2, 2, 3]
    assert {n.mu for n in gamma.nodes if n.grade == 1} == {(1, 0, 1, 0), (0, 2, 0, 0), (2, 1, 0, 0)}
    assert {n.mu for n in gamma.nodes if n.grade == 2} == {(0, 1, 0, 0), (2, 0, 0, 0)}
    assert gamma.grades_of((0, 0, 0, 0)) == [3]


def test_gamma_with_empty_psi(b3):
    gamma = gamma_set((1, 0, 1), psi_from_roots([], b3), b3)
    assert gamma.nodes == (GammaNode(mu=(1, 0, 1), grade=0),)


def test_order(b3):
    top = GammaNode(mu=(0, 1, 0), grade=0)
    bottom = GammaNode(mu=(0, 0, 0), grade=1)
    assert leq(top, bottom, b3)
    assert not leq(bottom, top, b3)
    assert leq(top, top, b3)
    # omega_3 is not in the root lattice
    assert not leq(top, GammaNode(mu=(0, 0, 1), grade=3), b3)


def test_interval_contains_zero_steps(b3):
    a = GammaNode(mu=(0, 1, 0), grade=0)
    b = GammaNode(mu=(0, 1, 0), grade=2)
    interval = gamma_interval(a, b, b3)
    assert a in interval and b in interval
    assert GammaNode(mu=(0, 1, 0), grade=1) in interval
    assert GammaNode(mu=(0, 0, 0), grade=1) in interval
    assert gamma_interval(b, a, b3) == set()


@pytest.mark.parametrize("name,lam,node", [
    ("b4", (1, 1, 1, 0), 3),
    ("b3", (0, 2, 0), 2),
    ("c3", (1, 1, 0), 2),
    ("d5", (0, 1, 1, 0, 0), 3),
])
def test_gamma_properties(name, lam, node, request):
    rs = request.getfixturevalue(name)
    gamma = gamma_set(lam, psi_node(node, rs), rs)
    assert check_grade_uniqueness(gamma) == []
    assert check_node_monotonicity(gamma) == []
    assert check_shift_property(gamma, rs) == []
    assert is_interval_closed(gamma, rs)


def test_every_node_is_reachable_from_the_base(b5):
    gamma = gamma_set((1, 1, 1, 1, 0), psi_node(4, b5), b5)
    assert len(gamma) > 1
    for node in gamma.nodes:
        assert leq(gamma.base, node, b5), node
        assert node == gamma.base or not leq(node, gamma.base, b5), node


@pytest.mark.slow
@pytest.mark.parametrize("name,max_coord,top", [
    ("b4", 2, 3), ("d5", 2, 3), ("b5", 1, 4), ("c4", 1, 3), ("c3", 2, 2), ("d4", 2, 2),
])
def test_order_suite_on_every_gamma(name, max_coord, top, request):
    rs = request.getfixturevalue(name)
    rigid = {}
    for lam in sweep_grid(rs, max_coord, top):
        psi = default_psi(lam, rs)
        gamma = gamma_set(lam, psi, rs)
        assert check_grade_uniqueness(gamma) == [], lam
        assert check_node_monotonicity(gamma) == [], lam
        assert check_shift_property(gamma, rs) == [], lam
        assert is_interval_closed(gamma, rs), lam
        assert all(leq(gamma.base, node, rs) for node in gamma.nodes), lam
        if psi.roots not in rigid:
            rigid[psi.roots] = rigidity_check(psi, rs, bound=2).holds
        assert rigid[psi.roots], psi.describe()

# =============================================================================
# Rigidity
# =============================================================================

def test_rigidity_fails_for_two_simple_roots(b2):
    psi = psi_from_roots([(1, 0), (0, 1)], b2)
    report = rigidity_check(psi, b2, bound=2)
    assert not report
    witness = report.violation
    target = tuple(sum(k * beta[j] for k, beta in zip(witness.psi_multiplicities, psi.roots)) for j in range(2))
    assert tuple(sum(r[j] for r in witness.root_multiset) for j in range(2)) == target
    assert len(witness.root_multiset) <= sum(witness.psi_multiplicities)


def test_rigidity_holds(b2, b4):
    assert rigidity_check(psi_from_roots([(1, 0)], b2), b2, bound=2)
    report = rigidity_check(psi_node(3, b4), b4, bound=2)
    assert report.holds
    assert report.checked == 26
    assert report.violation is None

# =============================================================================
# Export
# =============================================================================

def test_exports(b4):
    gamma = gamma_set((1, 1, 1, 0), psi_node(3, b4), b4)
    graph = to_networkx(gamma)
    assert graph.number_of_nodes() == 7
    assert graph.number_of_edges() == len(gamma.covers)
    order = linear_extension(gamma)
    position = {node: k for k, node in enumerate(order)}
    for i, j in gamma.covers:
        assert position[gamma.nodes[i]] < position[gamma.nodes[j]]
    assert order[0] == gamma.base
    payload = to_json(gamma)
    assert payload["nodes"][0] == {"mu": [1, 1, 1, 0], "r": 0}
    assert len(payload["edges"]) == len(gamma.covers)
    dot = to_dot(gamma)
    assert dot.startswith("digraph gamma {")
    assert 'n0 [label="(1,1,1,0), 0"];' in dot


def test_every_cover_is_a_root_step(b4):
    gamma = gamma_set((1, 1, 1, 0), psi_node(3, b4), b4)
    roots = {root_to_weight(r, b4) for r in b4.positive_roots}
    for i, j in gamma.covers:
        diff = tuple(a - b for a, b in zip(gamma.nodes[i].mu, gamma.nodes[j].mu))
        assert not any(diff) or diff in roots or tuple(-c for c in diff) in roots
