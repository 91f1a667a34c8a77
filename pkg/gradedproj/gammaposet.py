"""
Root subsets Psi, the graded poset Gamma(lambda, Psi) and executable checks of
its order-theoretic properties.

Nodes are pairs (mu, r). The order on P+ x Z+ is generated by
(mu, r) < (nu, r + 1) whenever nu - mu is a root or zero.
"""

import logging
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, List, Optional, Sequence, Set, Tuple

import networkx as nx

from .errors import PreconditionError
from .models import (
    GammaNode,
    GammaPoset,
    LieType,
    PsiOrigin,
    PsiSet,
    RigidityReport,
    RigidityViolation,
    RootSystem,
    RootVec,
    Weight,
)
from .rootdata import (
    Basis,
    add,
    all_roots,
    bilinear,
    build_root_system,
    fundamental_weight,
    i_lambda,
    is_dominant,
    require_dominant,
    root_to_weight,
    sub,
    weight_to_root_int,
)

logger = logging.getLogger(__name__)

# =============================================================================
# Psi
# =============================================================================

def psi_from_xi(xi: Weight, rs: RootSystem) -> PsiSet:
    """Roots attaining max_{beta in R} (beta, xi)."""
    xi = require_dominant(xi, "xi")
    if not any(xi):
        raise PreconditionError("xi = 0 makes every root a maximiser")
    pairings = {r: bilinear(xi, r, rs, b_basis=Basis.ROOT) for r in all_roots(rs)}
    best = max(pairings.values())
    roots = sorted(r for r, p in pairings.items() if p == best)
    if any(c < 0 for r in roots for c in r):
        raise ArithmeticError(f"argmax set for xi={xi} contains a negative root")
    return PsiSet(roots=tuple(roots), origin=PsiOrigin.XI, xi=xi)


def psi_node(i: int, rs: RootSystem) -> PsiSet:
    """Psi_i = {alpha in R+ : epsilon_i(alpha) = 2}; empty when epsilon_i(theta) = 1."""
    if not 1 <= i <= rs.rank:
        raise PreconditionError(f"node {i} out of range 1..{rs.rank}")
    roots = sorted(r for r in rs.positive_roots if r[i - 1] == 2)
    return PsiSet(roots=tuple(roots), origin=PsiOrigin.NODE, node=i)


def psi_from_roots(roots: Sequence[Sequence[int]], rs: RootSystem) -> PsiSet:
    positive = set(rs.positive_roots)
    out = sorted(set(tuple(r) for r in roots))
    for r in out:
        if r not in positive:
            raise PreconditionError(f"{r} is not a positive root of {rs.lie_type}")
    return PsiSet(roots=tuple(out), origin=PsiOrigin.EXPLICIT)


def psi_functional(psi: PsiSet, rs: RootSystem) -> Optional[Weight]:
    """A dominant xi for which psi is the argmax set, when one is known."""
    if psi.origin == PsiOrigin.XI:
        return psi.xi
    if psi.origin == PsiOrigin.NODE and psi.roots:
        return fundamental_weight(psi.node, rs.rank)
    return None


def grade_bound(lam: Weight, psi: PsiSet, rs: RootSystem) -> int:
    """Largest grade at which lambda minus a sum of Psi elements can still be dominant."""
    if not psi.roots:
        return 0
    xi = psi_functional(psi, rs)
    if xi is not None:
        top = bilinear(xi, psi.roots[0], rs, b_basis=Basis.ROOT)
        return int(bilinear(lam, xi, rs) // top)
    rho = rs.rho
    smallest = min(bilinear(rho, r, rs, b_basis=Basis.ROOT) for r in psi.roots)
    return int(bilinear(lam, rho, rs) // smallest)

# =============================================================================
# Gamma
# =============================================================================

def _is_cover_step(lower: Weight, upper: Weight, rs: RootSystem) -> bool:
    diff = sub(upper, lower)
    return not any(diff) or diff in rs.root_weights


def _covers(nodes: Sequence[GammaNode], rs: RootSystem) -> List[Tuple[int, int]]:
    by_grade: Dict[int, List[int]] = {}
    for idx, node in enumerate(nodes):
        by_grade.setdefault(node.grade, []).append(idx)
    edges = []
    for grade, lower in sorted(by_grade.items()):
        for i in lower:
            for j in by_grade.get(grade + 1, []):
                if _is_cover_step(nodes[i].mu, nodes[j].mu, rs):
                    edges.append((i, j))
    return edges


def make_gamma(base: GammaNode, psi: PsiSet, nodes, rs: RootSystem) -> GammaPoset:
    ordered = sorted(set(nodes), key=GammaNode.sort_key)
    return GammaPoset(base=base, psi=psi, nodes=tuple(ordered), covers=tuple(_covers(ordered, rs)))


@lru_cache(maxsize=4096)
def _gamma_nodes(t: LieType, lam: Weight, psi: PsiSet) -> Tuple[GammaNode, ...]:
    rs = build_root_system(t)
    psi_weights = [root_to_weight(r, rs) for r in psi.roots]
    r_max = grade_bound(lam, psi, rs)
    level = {lam}
    nodes = [GammaNode(mu=lam, grade=0)]
    for r in range(1, r_max + 1):
        level = {sub(w, b) for w in level for b in psi_weights}
        nodes.extend(GammaNode(mu=mu, grade=r) for mu in level if is_dominant(mu))
    return tuple(nodes)


def gamma_set(lam: Weight, psi: PsiSet, rs: RootSystem) -> GammaPoset:
    """
    Gamma(lambda, Psi): all (mu, r) with mu = lambda - (sum of r elements of Psi,
    with repetition) dominant. Terminates through grade_bound.
    """
    lam = require_dominant(tuple(lam), "lambda")
    nodes = _gamma_nodes(rs.lie_type, lam, psi)
    gamma = make_gamma(GammaNode(mu=lam, grade=0), psi, nodes, rs)
    logger.debug(f"Gamma({lam}, {psi.describe()}) in {rs.lie_type}: {len(gamma.nodes)} nodes, {len(gamma.covers)} covers")
    return gamma

# =============================================================================
# The order on P+ x Z+
# =============================================================================

def _moves(rs: RootSystem) -> List[Tuple[RootVec, Weight]]:
    zero = tuple(0 for _ in range(rs.rank))
    return [(zero, zero)] + [(r, root_to_weight(r, rs)) for r in all_roots(rs)]


def _forward_layers(a: GammaNode, b: GammaNode, rs: RootSystem) -> Optional[List[Dict[Weight, RootVec]]]:
    """
    Dominant weights reachable from a at each grade up to b.grade, pruned to the
    box from which b.mu is still reachable: a root moves coordinate j by at
    most theta_j.
    """
    if b.grade < a.grade:
        return None
    target = weight_to_root_int(sub(b.mu, a.mu), rs)
    if target is None:
        return None
    steps = b.grade - a.grade
    theta = rs.theta
    if any(abs(target[j]) > steps * theta[j] for j in range(rs.rank)):
        return None
    zero = tuple(0 for _ in range(rs.rank))
    layers: List[Dict[Weight, RootVec]] = [{a.mu: zero}]
    moves = _moves(rs)
    for g in range(1, steps + 1):
        remaining = steps - g
        nxt: Dict[Weight, RootVec] = {}
        for w, offset in layers[-1].items():
            for r, rw in moves:
                u = add(w, rw)
                if u in nxt or not is_dominant(u):
                    continue
                off = add(offset, r)
                if all(abs(target[j] - off[j]) <= remaining * theta[j] for j in range(rs.rank)):
                    nxt[u] = off
        if not nxt:
            return None
        layers.append(nxt)
    return layers if b.mu in layers[-1] else None


def leq(a: GammaNode, b: GammaNode, rs: RootSystem) -> bool:
    if a == b:
        return True
    return _forward_layers(a, b, rs) is not None


def gamma_interval(a: GammaNode, b: GammaNode, rs: RootSystem) -> Set[GammaNode]:
    """All c in P+ x Z+ with a <= c <= b; empty when a is not below b."""
    if a == b:
        return {a}
    layers = _forward_layers(a, b, rs)
    if layers is None:
        return set()
    moves = [rw for _, rw in _moves(rs)]
    kept: List[Set[Weight]] = [set() for _ in layers]
    kept[-1] = {b.mu}
    for g in range(len(layers) - 2, -1, -1):
        kept[g] = {w for w in layers[g] if any(add(w, x) in kept[g + 1] for x in moves)}
    return {GammaNode(mu=w, grade=a.grade + g) for g, ws in enumerate(kept) for w in ws}


def interval_violations(gamma: GammaPoset, rs: RootSystem) -> List[Tuple[GammaNode, GammaNode, GammaNode]]:
    """Triples (a, b, c) with a <= c <= b, a and b in Gamma, c outside."""
    out = []
    for a in gamma.nodes:
        for b in gamma.nodes:
            if b.grade <= a.grade + 1:
                continue
            for c in sorted(gamma_interval(a, b, rs), key=GammaNode.sort_key):
                if c not in gamma:
                    out.append((a, b, c))
    return out


def is_interval_closed(gamma: GammaPoset, rs: RootSystem) -> bool:
    violations = interval_violations(gamma, rs)
    if violations:
        a, b, c = violations[0]
        logger.info(f"Gamma is not interval closed: {c} lies between {a} and {b}")
    return not violations

# =============================================================================
# Rigidity
# =============================================================================

def _find_smaller_expression(
    target: RootVec,
    size: int,
    roots: List[RootVec],
    in_psi: Set[RootVec],
    bound: int,
    rs: RootSystem,
    xi: Optional[Weight],
) -> Optional[List[RootVec]]:
    """
    Search root multisets (each root at most `bound` times, at most `size`
    roots) summing to target that use fewer than `size` roots or a root
    outside Psi.
    """
    theta = rs.theta
    n = rs.rank
    pair = {r: bilinear(xi, r, rs, b_basis=Basis.ROOT) for r in roots} if xi is not None else None
    if pair is not None:
        top = max(pair.values())
        goal = bilinear(xi, target, rs, b_basis=Basis.ROOT)
    chosen: List[RootVec] = []

    def dfs(idx: int, current: Tuple[int, ...], left: int, paired: Fraction) -> Optional[List[RootVec]]:
        rest = [target[j] - current[j] for j in range(n)]
        if any(abs(rest[j]) > left * theta[j] for j in range(n)):
            return None
        if pair is not None and paired + left * top < goal:
            return None
        if not any(rest) and (len(chosen) < size or any(r not in in_psi for r in chosen)):
            return list(chosen)
        if idx == len(roots) or left == 0:
            return None
        r = roots[idx]
        for count in range(min(bound, left) + 1):
            step = pair[r] * count if pair is not None else 0
            chosen.extend([r] * count)
            found = dfs(idx + 1, add(current, tuple(count * c for c in r)), left - count, paired + step)
            if count:
                del chosen[-count:]
            if found is not None:
                return found
        return None

    return dfs(0, tuple(0 for _ in range(n)), size, Fraction(0))


def rigidity_check(psi: PsiSet, rs: RootSystem, bound: int) -> RigidityReport:
    """
    Brute force over n in {0..bound}^Psi: whenever sum m_alpha alpha = sum n_beta beta
    with m_alpha <= bound, sum n <= sum m, with equality only if m vanishes off Psi.
    The result is truthy iff the property holds; otherwise it carries a witness.
    """
    roots = all_roots(rs)
    in_psi = set(psi.roots)
    xi = psi_functional(psi, rs)
    checked = 0
    for ns in product(range(bound + 1), repeat=len(psi.roots)):
        size = sum(ns)
        if not size:
            continue
        checked += 1
        target = tuple(sum(k * beta[j] for k, beta in zip(ns, psi.roots)) for j in range(rs.rank))
        witness = _find_smaller_expression(target, size, roots, in_psi, bound, rs, xi)
        if witness is not None:
            logger.info(f"Rigidity fails for {psi.describe()}: n={ns}, roots={witness}")
            return RigidityReport(
                holds=False,
                checked=checked,
                violation=RigidityViolation(psi_multiplicities=list(ns), root_multiset=witness),
            )
    return RigidityReport(holds=True, checked=checked)

# =============================================================================
# Property checks
# =============================================================================

def check_grade_uniqueness(gamma: GammaPoset) -> List[Weight]:
    """Weights occurring at more than one grade."""
    grades: Dict[Weight, Set[int]] = {}
    for node in gamma.nodes:
        grades.setdefault(node.mu, set()).add(node.grade)
    return sorted(mu for mu, gs in grades.items() if len(gs) > 1)


def check_shift_property(gamma: GammaPoset, rs: RootSystem) -> List[Tuple[GammaNode, GammaNode]]:
    """Pairs a < b in Gamma with (b.mu, b.grade - a.grade) missing from Gamma(a.mu, Psi)."""
    out = []
    for a in gamma.nodes:
        shifted = gamma_set(a.mu, gamma.psi, rs)
        for b in gamma.nodes:
            if b.grade <= a.grade or not leq(a, b, rs):
                continue
            if GammaNode(mu=b.mu, grade=b.grade - a.grade) not in shifted:
                out.append((a, b))
    return out


def check_node_monotonicity(gamma: GammaPoset) -> List[GammaNode]:
    """Nodes whose weight is supported beyond i_lambda of the base."""
    top = i_lambda(gamma.base.mu)
    return [node for node in gamma.nodes if i_lambda(node.mu) > top]

# =============================================================================
# Export
# =============================================================================

def to_networkx(gamma: GammaPoset) -> nx.DiGraph:
    graph = nx.DiGraph()
    for idx, node in enumerate(gamma.nodes):
        graph.add_node(idx, mu=list(node.mu), r=node.grade)
    graph.add_edges_from(gamma.covers)
    return graph


def linear_extension(gamma: GammaPoset) -> List[GammaNode]:
    """A topological order of the covers, ties broken by (grade, weight)."""
    graph = to_networkx(gamma)
    order = nx.lexicographical_topological_sort(graph, key=lambda idx: gamma.nodes[idx].sort_key())
    return [gamma.nodes[idx] for idx in order]


def to_json(gamma: GammaPoset) -> Dict:
    return {
        "nodes": [{"mu": list(node.mu), "r": node.grade} for node in gamma.nodes],
        "edges": [[i, j] for i, j in gamma.covers],
    }


def to_dot(gamma: GammaPoset) -> str:
    lines = ["digraph gamma {", "  rankdir=BT;"]
    for idx, node in enumerate(gamma.nodes):
        label = "(" + ",".join(str(c) for c in node.mu) + f"), {node.grade}"
        lines.append(f'  n{idx} [label="{label}"];')
    for i, j in gamma.covers:
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
