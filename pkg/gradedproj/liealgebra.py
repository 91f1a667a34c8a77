"""
Matrix realisations of the classical Lie algebras and the kernel computations
behind the c and d coefficients.

B_n and D_n preserve the antidiagonal symmetric form, C_n the antidiagonal
symplectic form. Root vectors are literal commutators of the simple ones.
"""

import logging
import random
from collections import Counter
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, combinations_with_replacement
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, PrivateAttr
from sympy import ImmutableMatrix, QQ, Matrix, Rational, zeros
from sympy.polys.matrices import DomainMatrix

from .cache import cached
from .errors import PreconditionError
from .models import CoefficientRow, Family, GammaNode, GammaPoset, LieType, PsiSet, RootSystem, RootVec, Weight
from .rootdata import add, build_root_system, format_weight, is_dominant, require_dominant, root_to_weight, sub, weight_to_root_int

logger = logging.getLogger(__name__)

Vector = Dict[Tuple[int, ...], Fraction]

# =============================================================================
# Matrix realisation
# =============================================================================

class MatrixRealization(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    lie_type: LieType
    ambient_dim: int
    form: Any
    e: Tuple[Any, ...]
    f: Tuple[Any, ...]
    h: Tuple[Any, ...]
    xplus: Dict[RootVec, Any]
    xminus: Dict[RootVec, Any]
    seed: Optional[int] = None


def bracket(x, y) -> ImmutableMatrix:
    return ImmutableMatrix(x * y - y * x)


def _unit(size: int, a: int, b: int) -> Matrix:
    m = zeros(size, size)
    m[a, b] = 1
    return m


def _form(t: LieType) -> ImmutableMatrix:
    n = t.rank
    size = 2 * n + 1 if t.family == Family.B else 2 * n
    m = zeros(size, size)
    for p in range(size):
        m[p, size - 1 - p] = -1 if t.family == Family.C and p >= n else 1
    return ImmutableMatrix(m)


def _form_pair(a: int, b: int, form: ImmutableMatrix) -> Matrix:
    """E_ab plus the partner entry that makes it preserve the form."""
    size = form.shape[0]
    a2, b2 = size - 1 - a, size - 1 - b
    m = _unit(size, a, b)
    if (b2, a2) != (a, b):
        m[b2, a2] = -form[a, a2] / form[b, b2]
    return m


def _simple_positions(t: LieType) -> List[Tuple[int, int]]:
    n = t.rank
    positions = [(k, k + 1) for k in range(n - 1)]
    positions.append((n - 2, n) if t.family == Family.D else (n - 1, n))
    return positions


def _eigenvalue(h: ImmutableMatrix, x: ImmutableMatrix) -> Rational:
    image = bracket(h, x)
    for idx, value in enumerate(x):
        if value != 0:
            return image[idx] / value
    raise ArithmeticError("zero root vector")


@lru_cache(maxsize=None)
def _build_realization(t: LieType, seed: Optional[int]) -> MatrixRealization:
    rs = build_root_system(t)
    form = _form(t)
    rng = random.Random(seed) if seed is not None else None
    scalars = [1, -1, 2, -2, 3, Rational(1, 2), Rational(-1, 3)]

    e, f, h = [], [], []
    for a, b in _simple_positions(t):
        x = _form_pair(a, b, form)
        y = x.T
        c = rng.choice(scalars) if rng else 1
        x, y = ImmutableMatrix(c * x), ImmutableMatrix(y / c)
        y = ImmutableMatrix(y * 2 / _eigenvalue(bracket(x, y), x))
        e.append(x)
        f.append(y)
        h.append(bracket(x, y))

    xplus: Dict[RootVec, ImmutableMatrix] = {}
    xminus: Dict[RootVec, ImmutableMatrix] = {}
    for beta in rs.positive_roots:
        if sum(beta) == 1:
            i = beta.index(1)
            xplus[beta], xminus[beta] = e[i], f[i]
            continue
        for i in range(t.rank):
            lower = tuple(c - (1 if j == i else 0) for j, c in enumerate(beta))
            if lower in xplus:
                xplus[beta] = bracket(e[i], xplus[lower])
                xminus[beta] = bracket(f[i], xminus[lower])
                break
        if rng:
            xminus[beta] = ImmutableMatrix(rng.choice(scalars) * xminus[beta])
        if xplus[beta].is_zero_matrix or xminus[beta].is_zero_matrix:
            raise ArithmeticError(f"vanishing root vector for {beta} in {t}")

    logger.debug(f"Built matrix realisation of {t} (seed={seed}) in dimension {form.shape[0]}")
    return MatrixRealization(
        lie_type=t,
        ambient_dim=form.shape[0],
        form=form,
        e=tuple(e),
        f=tuple(f),
        h=tuple(h),
        xplus=xplus,
        xminus=xminus,
        seed=seed,
    )


def build_realization(t: LieType, seed: Optional[int] = None) -> MatrixRealization:
    """
    Split realisation of g. A seed rescales the Chevalley generators and the
    negative root vectors by random nonzero scalars.
    """
    return _build_realization(t, seed)


def span_dimension(realization: MatrixRealization) -> int:
    """Dimension of the span of h_i and all root vectors."""
    mats = list(realization.h) + list(realization.xplus.values()) + list(realization.xminus.values())
    return Matrix([list(m) for m in mats]).rank()

# =============================================================================
# n^-_Psi and its exterior and symmetric powers
# =============================================================================

class PsiModule(BaseModel):
    """
    Basis x^-_beta (beta in Psi) of n^-_Psi with the action of ad x^-_{alpha_i}:
    lowering[(i, k)] = (j, c) means [x^-_i, x^-_{beta_k}] = c x^-_{beta_j}.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    lie_type: LieType
    psi: PsiSet
    basis: Tuple[Any, ...]
    weights: Tuple[Weight, ...]
    lowering: Dict[Tuple[int, int], Tuple[int, Fraction]]
    seed: Optional[int] = None

    _exterior: Dict[int, Dict[RootVec, List[Tuple[int, ...]]]] = PrivateAttr(default_factory=dict)
    _symmetric: Dict[int, Dict[RootVec, List[Tuple[int, ...]]]] = PrivateAttr(default_factory=dict)

    def _grouped(self, s: int, symmetric: bool) -> Dict[RootVec, List[Tuple[int, ...]]]:
        store = self._symmetric if symmetric else self._exterior
        if s not in store:
            roots = self.psi.roots
            rank = self.lie_type.rank
            choose = combinations_with_replacement if symmetric else combinations
            groups: Dict[RootVec, List[Tuple[int, ...]]] = {}
            for key in choose(range(len(roots)), s):
                total = tuple(sum(roots[k][j] for k in key) for j in range(rank))
                groups.setdefault(total, []).append(key)
            store[s] = groups
        return store[s]

    def exterior_basis(self, s: int, root_sum: RootVec) -> List[Tuple[int, ...]]:
        """s-subsets of Psi with the given sum, as sorted index tuples."""
        return self._grouped(s, symmetric=False).get(tuple(root_sum), [])

    def symmetric_basis(self, s: int, root_sum: RootVec) -> List[Tuple[int, ...]]:
        """s-multisets of Psi with the given sum, as sorted index tuples."""
        return self._grouped(s, symmetric=True).get(tuple(root_sum), [])


def _to_fraction(value) -> Fraction:
    value = Rational(value)
    return Fraction(int(value.p), int(value.q))


def build_psi_module(realization: MatrixRealization, psi: PsiSet) -> PsiModule:
    rs = build_root_system(realization.lie_type)
    index = {beta: k for k, beta in enumerate(psi.roots)}
    basis = tuple(realization.xminus[beta] for beta in psi.roots)
    lowering: Dict[Tuple[int, int], Tuple[int, Fraction]] = {}
    for i, fi in enumerate(realization.f):
        for k, beta in enumerate(psi.roots):
            image = bracket(fi, basis[k])
            up = tuple(c + (1 if j == i else 0) for j, c in enumerate(beta))
            if up not in index:
                if not image.is_zero_matrix:
                    raise PreconditionError(f"n^-_Psi is not stable under x^-_{i + 1}: Psi is not an ideal")
                continue
            target = basis[index[up]]
            pos = next(p for p, v in enumerate(target) if v != 0)
            c = image[pos] / target[pos]
            if image != c * target:
                raise ArithmeticError(f"[x^-_{i + 1}, x^-_{beta}] is not proportional to x^-_{up}")
            if c != 0:
                lowering[(i, k)] = (index[up], _to_fraction(c))
    weights = tuple(tuple(-c for c in root_to_weight(beta, rs)) for beta in psi.roots)
    return PsiModule(
        lie_type=realization.lie_type,
        psi=psi,
        basis=basis,
        weights=weights,
        lowering=lowering,
        seed=realization.seed,
    )


@lru_cache(maxsize=256)
def _default_module(t: LieType, psi: PsiSet) -> PsiModule:
    return build_psi_module(build_realization(t), psi)


def psi_module(psi: PsiSet, rs: RootSystem) -> PsiModule:
    """The module n^-_Psi built from the default realisation (memoised)."""
    return _default_module(rs.lie_type, psi)


def is_abelian(module: PsiModule) -> bool:
    return all(bracket(x, y).is_zero_matrix for x, y in combinations(module.basis, 2))


def _sort_sign(items: List[int]) -> int:
    inversions = sum(1 for a in range(len(items)) for b in range(a + 1, len(items)) if items[a] > items[b])
    return -1 if inversions % 2 else 1


def apply_wedge(i: int, vec: Vector, module: PsiModule) -> Vector:
    """ad x^-_{alpha_i} extended to the exterior algebra as a derivation."""
    out: Vector = {}
    for key, coeff in vec.items():
        for pos, k in enumerate(key):
            hit = module.lowering.get((i, k))
            if hit is None:
                continue
            j, c = hit
            if j in key:
                continue
            new = list(key)
            new[pos] = j
            sorted_key = tuple(sorted(new))
            out[sorted_key] = out.get(sorted_key, Fraction(0)) + _sort_sign(new) * c * coeff
    return {k: v for k, v in out.items() if v}


def apply_sym(i: int, vec: Vector, module: PsiModule) -> Vector:
    """ad x^-_{alpha_i} extended to the symmetric algebra as a derivation."""
    out: Vector = {}
    for key, coeff in vec.items():
        for pos, k in enumerate(key):
            hit = module.lowering.get((i, k))
            if hit is None:
                continue
            j, c = hit
            new = list(key)
            new[pos] = j
            sorted_key = tuple(sorted(new))
            out[sorted_key] = out.get(sorted_key, Fraction(0)) + c * coeff
    return {k: v for k, v in out.items() if v}


def _kernel_dimension(
    basis: Sequence[Tuple[int, ...]],
    exponents: Sequence[int],
    module: PsiModule,
    apply: Callable[[int, Vector, PsiModule], Vector],
) -> int:
    """dim of the common kernel of the operators (ad x^-_i)^exponents[i] on span(basis)."""
    if not basis:
        return 0
    columns: Dict[Tuple[int, Tuple[int, ...]], int] = {}
    rows: List[Dict[int, Fraction]] = []
    for b in basis:
        row: Dict[int, Fraction] = {}
        for i, k in enumerate(exponents):
            vec: Vector = {b: Fraction(1)}
            for _ in range(k):
                vec = apply(i, vec, module)
                if not vec:
                    break
            for key, c in vec.items():
                col = columns.setdefault((i, key), len(columns))
                row[col] = c
        rows.append(row)
    if not columns:
        return len(basis)
    dense = [[QQ(row[c].numerator, row[c].denominator) if c in row else QQ(0) for c in range(len(columns))] for row in rows]
    rank = DomainMatrix(dense, (len(rows), len(columns)), QQ).rank()
    return len(basis) - rank


def _psi_key(psi: PsiSet) -> str:
    return ";".join(format_weight(r) for r in psi.roots)


def _coefficient(kind: str, lam: Weight, nu: Weight, s: int, module: PsiModule, rs: RootSystem) -> int:
    if s < 0:
        return 0
    target = weight_to_root_int(sub(lam, nu), rs)
    if target is None:
        return 0
    symmetric = kind == "d"
    basis = module.symmetric_basis(s, target) if symmetric else module.exterior_basis(s, target)
    if not basis:
        return 0
    exponents = [c + 1 for c in nu]
    apply = apply_sym if symmetric else apply_wedge

    def compute() -> int:
        return _kernel_dimension(basis, exponents, module, apply)

    if module.seed is not None:
        return compute()
    key = f"{_psi_key(module.psi)}|{format_weight(lam)}|{format_weight(nu)}|{s}"
    return cached(str(rs.lie_type), kind, key, compute, decode=int)


def c_coefficient(lam: Weight, nu: Weight, s: int, module: PsiModule, rs: RootSystem) -> int:
    """
    dim{ v in (wedge^s n^-_Psi)_{nu - lambda} : (x_i^-)^{nu(h_i)+1} v = 0 for all i }
    """
    lam = require_dominant(lam, "lambda")
    nu = require_dominant(nu, "nu")
    return _coefficient("c", lam, nu, s, module, rs)


def d_coefficient(
    lam: Weight,
    mu: Weight,
    s: int,
    module: PsiModule,
    rs: RootSystem,
    gamma: Optional[GammaPoset] = None,
) -> int:
    """
    dim{ v in S^s(n^-_Psi)_{mu - lambda} : (x_i^-)^{mu(h_i)+1} v = 0 for all i }.
    When gamma is given, (mu, s) must belong to it.
    """
    lam = require_dominant(lam, "lambda")
    mu = require_dominant(mu, "mu")
    if gamma is not None and GammaNode(mu=mu, grade=s) not in gamma:
        raise PreconditionError(f"({mu}, {s}) is not in Gamma({gamma.base.mu}, {gamma.psi.describe()})")
    return _coefficient("d", lam, mu, s, module, rs)


def weight_space_profile(module: PsiModule, rs: RootSystem) -> Dict[Weight, int]:
    """Weight -> dimension over the whole exterior algebra of n^-_Psi."""
    counts: Counter = Counter()
    n = len(module.psi.roots)
    for s in range(n + 1):
        for key in combinations(range(n), s):
            weight = tuple(0 for _ in range(rs.rank))
            for k in key:
                weight = add(weight, module.weights[k])
            counts[weight] += 1
    return dict(counts)


def c_terms(lam: Weight, module: PsiModule, rs: RootSystem) -> List[CoefficientRow]:
    """
    One row per weight space of the exterior algebra: mu = lambda + weight, its
    degree s, c (zero for non-dominant mu) and the weight-space dimension.
    """
    lam = require_dominant(lam, "lambda")
    n = len(module.psi.roots)
    rows = []
    for s in range(n + 1):
        for root_sum, keys in sorted(module._grouped(s, symmetric=False).items()):
            offset = tuple(-c for c in root_to_weight(root_sum, rs))
            mu = add(lam, offset)
            dominant = is_dominant(mu)
            c = c_coefficient(lam, mu, s, module, rs) if dominant else 0
            rows.append(CoefficientRow(
                mu=list(mu),
                offset=list(offset),
                s=s,
                c=c,
                weight_space_dim=len(keys),
                dominant=dominant,
            ))
    rows.sort(key=lambda row: (row.s, [-x for x in row.offset]))
    logger.debug(f"c-terms for lambda={lam}, {module.psi.describe()}: {len(rows)} rows")
    return rows
