"""
Graded characters of the projective covers P(lambda, r)^Gamma, KR characters
and the identities relating them to the c-coefficients.
"""

import logging
from functools import lru_cache
from typing import Dict, List, Tuple

from sympy import Symbol, eye

from .charring import character_dimension, graded_specialize, weyl_dim
from .errors import PreconditionError
from .gammaposet import gamma_set, linear_extension, psi_node
from .liealgebra import c_coefficient, d_coefficient, psi_module
from .models import (
    CheckResult,
    DominantCharacter,
    GammaMatrix,
    GammaNode,
    GradedCharacter,
    LieType,
    MatrixEntry,
    MatrixReport,
    ProjectiveCharacter,
    PsiSet,
    RootSystem,
    Weight,
)
from .rootdata import build_root_system, format_weight, fundamental_weight, require_dominant, scale

logger = logging.getLogger(__name__)

T = Symbol("t")

# =============================================================================
# Projective characters
# =============================================================================

@lru_cache(maxsize=4096)
def _projective_layers(t: LieType, lam: Weight, psi: PsiSet) -> Tuple[Tuple[int, Weight, int], ...]:
    rs = build_root_system(t)
    module = psi_module(psi, rs)
    out = []
    for node in gamma_set(lam, psi, rs).nodes:
        d = d_coefficient(lam, node.mu, node.grade, module, rs)
        if d:
            out.append((node.grade, node.mu, d))
    return tuple(out)


def projective_character(lam: Weight, psi: PsiSet, rs: RootSystem) -> ProjectiveCharacter:
    """ch_t P(lambda, 0)^Gamma(lambda, Psi) = sum over Gamma of t^s d(mu, s) ch V(mu)."""
    lam = require_dominant(tuple(lam), "lambda")
    layers: Dict[int, Dict[Weight, int]] = {}
    for grade, mu, d in _projective_layers(rs.lie_type, lam, psi):
        layers.setdefault(grade, {})[mu] = d
    graded = GradedCharacter.from_layers({s: DominantCharacter.from_mapping(m) for s, m in layers.items()})
    return ProjectiveCharacter(base=GammaNode(mu=lam, grade=0), psi=psi, graded=graded)


def kr_character(i: int, m: int, rs: RootSystem) -> ProjectiveCharacter:
    """Graded character of the KR module labelled (i, m): P(m omega_i, 0) for Psi_i."""
    if m < 1:
        raise PreconditionError(f"level must be positive, got {m}")
    psi = psi_node(i, rs)
    return projective_character(scale(m, fundamental_weight(i, rs.rank)), psi, rs)

# =============================================================================
# Alternating sum over Gamma
# =============================================================================

def _signed_terms(lam: Weight, psi: PsiSet, rs: RootSystem) -> List[Tuple[GammaNode, int]]:
    """(nu, s) in Gamma(lambda, Psi) with (-1)^s c^lambda_{nu,s}, zero terms dropped."""
    module = psi_module(psi, rs)
    out = []
    for node in gamma_set(lam, psi, rs).nodes:
        c = c_coefficient(lam, node.mu, node.grade, module, rs)
        if c:
            out.append((node, -c if node.grade % 2 else c))
    return out


def verify_thm2(lam: Weight, psi: PsiSet, rs: RootSystem) -> GradedCharacter:
    """
    Residual of sum_{(nu,s)} (-t)^s c^lambda_{nu,s} ch_t P(nu,0)^Gamma(nu,Psi) - ch V(lambda).
    Zero exactly when the identity holds.
    """
    lam = require_dominant(tuple(lam), "lambda")
    total = GradedCharacter.zero()
    for node, signed_c in _signed_terms(lam, psi, rs):
        graded = projective_character(node.mu, psi, rs).graded
        total = total + graded.shifted(node.grade).scaled(signed_c)
    residual = total - GradedCharacter.from_layers({0: DominantCharacter.simple(lam)})
    logger.info(f"Theorem-2 sum for lambda={format_weight(lam)}, {psi.describe()} in {rs.lie_type}: "
                f"residual {'zero' if residual.is_zero() else 'NONZERO'}")
    return residual


def dimension_check(lam: Weight, psi: PsiSet, rs: RootSystem) -> CheckResult:
    """sum (-1)^s c^lambda_{nu,s} dim P(nu,0)^Gamma = dim V(lambda)."""
    lam = require_dominant(tuple(lam), "lambda")
    total = 0
    for node, signed_c in _signed_terms(lam, psi, rs):
        total += signed_c * character_dimension(graded_specialize(projective_character(node.mu, psi, rs).graded), rs)
    expected = weyl_dim(lam, rs)
    return CheckResult(
        check="dimension",
        passed=total == expected,
        residual=None if total == expected else str(total - expected),
        detail={"alternating_sum": total, "dim": expected},
    )


def shift_check(lam: Weight, psi: PsiSet, rs: RootSystem) -> CheckResult:
    """
    For every (mu, r) in Gamma(lambda, Psi), compare the d-multiplicities of
    P(mu, r)^Gamma read off inside Gamma(lambda, Psi) with t^r ch_t P(mu, 0)^Gamma(mu, Psi).
    """
    lam = require_dominant(tuple(lam), "lambda")
    gamma = gamma_set(lam, psi, rs)
    module = psi_module(psi, rs)
    bad = []
    for base in gamma.nodes:
        layers: Dict[int, Dict[Weight, int]] = {}
        for node in gamma.nodes:
            if node.grade < base.grade:
                continue
            d = d_coefficient(base.mu, node.mu, node.grade - base.grade, module, rs)
            if d:
                layers.setdefault(node.grade, {})[node.mu] = d
        direct = GradedCharacter.from_layers({s: DominantCharacter.from_mapping(m) for s, m in layers.items()})
        shifted = projective_character(base.mu, psi, rs).graded.shifted(base.grade)
        if direct != shifted:
            bad.append({"mu": list(base.mu), "r": base.grade})
    return CheckResult(check="shift", passed=not bad, residual=str(bad) if bad else None, detail={"nodes": len(gamma)})

# =============================================================================
# A(t) and E(t)
# =============================================================================

def gamma_matrices(lam: Weight, psi: PsiSet, rs: RootSystem) -> Tuple[GammaMatrix, GammaMatrix]:
    """
    A[(nu,s),(mu,r)] = t^(s-r) [P(mu,r)^Gamma : ev_s V(nu)] and
    E[(nu,s),(mu,r)] = t^(s-r) c^mu_{nu,s-r}, both nonzero only when
    (nu, s-r) lies in Gamma(mu, Psi). Rows and columns follow linear_extension.
    """
    lam = require_dominant(tuple(lam), "lambda")
    order = linear_extension(gamma_set(lam, psi, rs))
    module = psi_module(psi, rs)
    a_entries, e_entries = [], []
    for col, base in enumerate(order):
        local = gamma_set(base.mu, psi, rs)
        for row, node in enumerate(order):
            k = node.grade - base.grade
            if k < 0 or GammaNode(mu=node.mu, grade=k) not in local:
                continue
            d = d_coefficient(base.mu, node.mu, k, module, rs)
            c = c_coefficient(base.mu, node.mu, k, module, rs)
            if d:
                a_entries.append(MatrixEntry(row=row, col=col, coeff=d, degree=k))
            if c:
                e_entries.append(MatrixEntry(row=row, col=col, coeff=c, degree=k))
    nodes = tuple(order)
    return GammaMatrix(node_order=nodes, entries=a_entries), GammaMatrix(node_order=nodes, entries=e_entries)


def matrix_identity_residual(A: GammaMatrix, E: GammaMatrix):
    """A(t) E(-t) - Id as an expanded sympy matrix."""
    product = A.to_sympy(T) * E.to_sympy(T).subs(T, -T)
    return (product - eye(len(A.node_order))).expand()


def matrix_report(A: GammaMatrix, E: GammaMatrix) -> MatrixReport:
    return MatrixReport(
        node_order=[{"mu": list(n.mu), "r": n.grade} for n in A.node_order],
        A=[[str(x) for x in A.to_sympy(T).row(i)] for i in range(len(A.node_order))],
        E=[[str(x) for x in E.to_sympy(T).row(i)] for i in range(len(E.node_order))],
    )


def matrix_check(lam: Weight, psi: PsiSet, rs: RootSystem) -> Tuple[CheckResult, MatrixReport]:
    A, E = gamma_matrices(lam, psi, rs)
    residual = matrix_identity_residual(A, E)
    passed = residual.is_zero_matrix
    return (
        CheckResult(check="matrix", passed=passed, residual=None if passed else str(residual.tolist()),
                    detail={"size": len(A.node_order)}),
        matrix_report(A, E),
    )
