"""
Character ring of a classical Lie algebra.

Simple characters come from Freudenthal's recursion over dominant weights,
tensor products from the signed-reflection (Brauer-Klimyk) rule, and
exterior/symmetric powers from Newton's identities on Adams operations.
"""

import logging
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Tuple

from .cache import cached
from .errors import NegativeMultiplicityError
from .models import DominantCharacter, FormalCharacter, GradedCharacter, LieType, RootSystem, Weight
from .rootdata import (
    add,
    bilinear,
    build_root_system,
    dominant_conjugate,
    format_weight,
    require_dominant,
    root_to_weight,
    sub,
    to_dominant_signed,
    weight_to_root,
    weyl_orbit,
)

logger = logging.getLogger(__name__)

Multiplicities = Tuple[Tuple[Weight, int], ...]


def _encode_pairs(pairs: Multiplicities) -> List[List]:
    return [[list(w), m] for w, m in pairs]


def _decode_pairs(value: List[List]) -> Multiplicities:
    return tuple((tuple(w), int(m)) for w, m in value)


def _pair_with_root(w: Weight, r: Tuple[int, ...], rs: RootSystem) -> Fraction:
    return sum((rs.d[j] * w[j] * r[j] for j in range(rs.rank) if r[j]), Fraction(0))

# =============================================================================
# Simple characters
# =============================================================================

def dominant_weights_below(lam: Weight, rs: RootSystem) -> List[Weight]:
    """Dominant mu <= lambda, ordered by depth below lambda."""
    seen = {lam}
    frontier = [lam]
    while frontier:
        nxt = []
        for mu in frontier:
            for alpha in rs.positive_root_weights:
                nu = sub(mu, alpha)
                if nu not in seen and all(c >= 0 for c in nu):
                    seen.add(nu)
                    nxt.append(nu)
        frontier = nxt
    depth = {mu: sum(weight_to_root(sub(lam, mu), rs)) for mu in seen}
    return sorted(seen, key=lambda mu: (depth[mu], tuple(-c for c in mu)))


def _freudenthal(lam: Weight, rs: RootSystem) -> Multiplicities:
    order = dominant_weights_below(lam, rs)
    mults: Dict[Weight, int] = {lam: 1}
    top = add(lam, rs.rho)
    top_norm = bilinear(top, top, rs)
    for mu in order[1:]:
        total = Fraction(0)
        for alpha, alpha_w in zip(rs.positive_roots, rs.positive_root_weights):
            v = add(mu, alpha_w)
            while True:
                m = mults.get(dominant_conjugate(v, rs)[0])
                if not m:
                    break
                total += m * _pair_with_root(v, alpha, rs)
                v = add(v, alpha_w)
        shifted = add(mu, rs.rho)
        value = 2 * total / (top_norm - bilinear(shifted, shifted, rs))
        if value.denominator != 1:
            raise ArithmeticError(f"non-integral multiplicity {value} at {mu} in V({format_weight(lam)})")
        mults[mu] = int(value)
    return tuple((mu, mults[mu]) for mu in order)


@lru_cache(maxsize=None)
def _dominant_multiplicities(t: LieType, lam: Weight) -> Multiplicities:
    rs = build_root_system(t)
    return cached(str(t), "freudenthal", format_weight(lam), lambda: _freudenthal(lam, rs),
                  encode=_encode_pairs, decode=_decode_pairs)


def dominant_multiplicities(lam: Weight, rs: RootSystem) -> Dict[Weight, int]:
    """Multiplicities of the dominant weights of V(lambda)."""
    lam = require_dominant(lam, "highest weight")
    return dict(_dominant_multiplicities(rs.lie_type, lam))


@lru_cache(maxsize=None)
def _simple_character(t: LieType, lam: Weight) -> FormalCharacter:
    rs = build_root_system(t)
    mult: Dict[Weight, int] = {}
    for mu, m in _dominant_multiplicities(t, lam):
        for v in weyl_orbit(mu, rs):
            mult[v] = m
    logger.debug(f"ch V({format_weight(lam)}) in {t}: {len(mult)} weights")
    return FormalCharacter(highest_weight=lam, mult=mult)


def simple_character(lam: Weight, rs: RootSystem) -> FormalCharacter:
    """Full weight multiplicity map of V(lambda). The result is shared; do not mutate it."""
    lam = require_dominant(lam, "highest weight")
    return _simple_character(rs.lie_type, lam)


def weyl_dim(lam: Weight, rs: RootSystem) -> int:
    lam = require_dominant(lam, "highest weight")
    shifted = add(lam, rs.rho)
    value = Fraction(1)
    for beta in rs.positive_roots:
        value *= _pair_with_root(shifted, beta, rs) / _pair_with_root(rs.rho, beta, rs)
    return int(value)


def character_dimension(M: DominantCharacter, rs: RootSystem) -> int:
    return sum(m * weyl_dim(w, rs) for w, m in M.mult.items())


def adjoint_character(rs: RootSystem) -> DominantCharacter:
    return DominantCharacter.simple(root_to_weight(rs.theta, rs))

# =============================================================================
# Decomposition and tensor products
# =============================================================================

def decompose_formal(mult: Mapping[Weight, int], rs: RootSystem) -> DominantCharacter:
    """Write a Weyl-invariant formal character as a combination of simple characters."""
    out: Dict[Weight, int] = {}
    for v, m in mult.items():
        if not m:
            continue
        dom, sign = to_dominant_signed(add(v, rs.rho), rs)
        if sign:
            key = sub(dom, rs.rho)
            out[key] = out.get(key, 0) + sign * m
    return DominantCharacter.from_mapping(out)


def formal_expansion(M: DominantCharacter, rs: RootSystem) -> Dict[Weight, int]:
    out: Dict[Weight, int] = {}
    for kappa, c in M.mult.items():
        for v, m in simple_character(kappa, rs).mult.items():
            out[v] = out.get(v, 0) + c * m
    return {v: m for v, m in out.items() if m}


def _tensor_pair_uncached(kappa: Weight, lam: Weight, rs: RootSystem) -> Multiplicities:
    if weyl_dim(kappa, rs) > weyl_dim(lam, rs):
        kappa, lam = lam, kappa
    top = add(lam, rs.rho)
    out: Dict[Weight, int] = {}
    for v, m in simple_character(kappa, rs).mult.items():
        dom, sign = to_dominant_signed(add(v, top), rs)
        if sign:
            key = sub(dom, rs.rho)
            out[key] = out.get(key, 0) + sign * m
    return tuple(sorted((w, m) for w, m in out.items() if m))


@lru_cache(maxsize=None)
def _tensor_pair(t: LieType, kappa: Weight, lam: Weight) -> Multiplicities:
    if kappa > lam:
        kappa, lam = lam, kappa
    rs = build_root_system(t)
    return cached(str(t), "tensor", f"{format_weight(kappa)}|{format_weight(lam)}",
                  lambda: _tensor_pair_uncached(kappa, lam, rs),
                  encode=_encode_pairs, decode=_decode_pairs)


def tensor_multiplicity(M: DominantCharacter, lam: Weight, rs: RootSystem) -> DominantCharacter:
    """Decomposition of (sum_kappa M(kappa) V(kappa)) (x) V(lambda)."""
    lam = require_dominant(lam, "tensor factor")
    out: Dict[Weight, int] = {}
    for kappa, c in M.mult.items():
        for w, m in _tensor_pair(rs.lie_type, kappa, lam):
            out[w] = out.get(w, 0) + c * m
    return DominantCharacter.from_mapping(out)


def tensor_product(M: DominantCharacter, N: DominantCharacter, rs: RootSystem) -> DominantCharacter:
    out = DominantCharacter.zero()
    for lam, c in N.items():
        out = out + tensor_multiplicity(M, lam, rs).scaled(c)
    return out

# =============================================================================
# Exterior and symmetric powers
# =============================================================================

def _convolve(a: Mapping[Weight, int], b: Mapping[Weight, int]) -> Dict[Weight, int]:
    out: Dict[Weight, int] = {}
    for v, m in a.items():
        for u, n in b.items():
            key = add(v, u)
            out[key] = out.get(key, 0) + m * n
    return out


def _adams(mult: Mapping[Weight, int], k: int) -> Dict[Weight, int]:
    out: Dict[Weight, int] = {}
    for v, m in mult.items():
        key = tuple(k * c for c in v)
        out[key] = out.get(key, 0) + m
    return out


def _newton_powers(M: DominantCharacter, s: int, rs: RootSystem, alternating: bool) -> DominantCharacter:
    if not M.is_actual():
        raise NegativeMultiplicityError("powers are only defined for actual (nonnegative) characters")
    if s < 0:
        return DominantCharacter.zero()
    formal = formal_expansion(M, rs)
    zero = tuple(0 for _ in range(rs.rank))
    powers: List[Dict[Weight, int]] = [{zero: 1}]
    for j in range(1, s + 1):
        acc: Dict[Weight, int] = {}
        for k in range(1, j + 1):
            sign = -1 if alternating and k % 2 == 0 else 1
            for v, m in _convolve(_adams(formal, k), powers[j - k]).items():
                acc[v] = acc.get(v, 0) + sign * m
        layer = {}
        for v, m in acc.items():
            if m % j:
                raise ArithmeticError(f"Newton recursion produced a non-integral coefficient at {v}")
            if m:
                layer[v] = m // j
        powers.append(layer)
    return decompose_formal(powers[s], rs)


def exterior_power(M: DominantCharacter, s: int, rs: RootSystem) -> DominantCharacter:
    return _newton_powers(M, s, rs, alternating=True)


def symmetric_power(M: DominantCharacter, s: int, rs: RootSystem) -> DominantCharacter:
    return _newton_powers(M, s, rs, alternating=False)

# =============================================================================
# Graded characters
# =============================================================================

def graded_specialize(G: GradedCharacter, at_t_1: bool = True) -> DominantCharacter:
    """Value at t = 1 (sum of all layers) or at t = 0 (degree-zero layer)."""
    if not at_t_1:
        return G.layer(0)
    out = DominantCharacter.zero()
    for s in G.degrees():
        out = out + G.layer(s)
    return out


def sum_characters(parts: Iterable[DominantCharacter]) -> DominantCharacter:
    out: Dict[Weight, int] = {}
    for part in parts:
        for w, m in part.mult.items():
            out[w] = out.get(w, 0) + m
    return DominantCharacter.from_mapping(out)
