"""
Root data and weight arithmetic for the classical types B_n, C_n and D_n.
"""

import logging
import re
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, List, Optional, Sequence, Set, Tuple

from sympy import Matrix

from .errors import InvalidLieTypeError, NonDominantWeightError, WeightError
from .models import MIN_RANK, Family, LieType, RootSystem, RootVec, Weight

logger = logging.getLogger(__name__)

_TYPE_PATTERN = re.compile(r"^\s*([BCDbcd])\s*(\d+)\s*$")


class Basis(str, Enum):
    WEIGHT = "weight"
    ROOT = "root"

# =============================================================================
# Parsing and formatting
# =============================================================================

def make_lie_type(family: str, rank: int) -> LieType:
    try:
        fam = Family(family.upper())
    except ValueError:
        raise InvalidLieTypeError(f"unknown family {family!r}; expected one of B, C, D") from None
    if rank < MIN_RANK[fam]:
        raise InvalidLieTypeError(f"{fam.value}{rank}: rank must be at least {MIN_RANK[fam]}")
    return LieType(family=fam, rank=rank)


def parse_lie_type(text: str) -> LieType:
    """Parse strings such as 'B4' or 'd5'."""
    match = _TYPE_PATTERN.match(text or "")
    if not match:
        raise InvalidLieTypeError(f"malformed type string {text!r}; expected e.g. 'B4'")
    return make_lie_type(match.group(1), int(match.group(2)))


def parse_weight(text: str, rank: int) -> Weight:
    """Parse '1,0,2,0' into a weight of the given rank."""
    try:
        coords = tuple(int(part) for part in text.split(","))
    except (AttributeError, ValueError):
        raise WeightError(f"malformed weight {text!r}; expected comma-separated integers") from None
    if len(coords) != rank:
        raise WeightError(f"weight {text!r} has {len(coords)} coordinates, rank is {rank}")
    return coords


def format_weight(w: Sequence[int]) -> str:
    return ",".join(str(c) for c in w)

# =============================================================================
# Construction
# =============================================================================

def cartan_matrix(t: LieType) -> Tuple[Tuple[int, ...], ...]:
    """cartan[i][j] = alpha_j(h_i), Bourbaki labelling."""
    n = t.rank
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        a[i][i] = 2
    chain = n - 1 if t.family != Family.D else n - 2
    for i in range(chain - 1):
        a[i][i + 1] = a[i + 1][i] = -1
    if t.family == Family.B:
        a[n - 2][n - 1] = -1
        a[n - 1][n - 2] = -2
    elif t.family == Family.C:
        a[n - 2][n - 1] = -2
        a[n - 1][n - 2] = -1
    else:
        a[n - 3][n - 2] = a[n - 2][n - 3] = -1
        a[n - 3][n - 1] = a[n - 1][n - 3] = -1
    return tuple(tuple(row) for row in a)


def _symmetrizers(t: LieType) -> Tuple[Fraction, ...]:
    n = t.rank
    if t.family == Family.B:
        return tuple(Fraction(1) for _ in range(n - 1)) + (Fraction(1, 2),)
    if t.family == Family.C:
        return tuple(Fraction(1, 2) for _ in range(n - 1)) + (Fraction(1),)
    return tuple(Fraction(1) for _ in range(n))


def _apply_cartan(cartan: Sequence[Sequence[int]], r: Sequence[int]) -> Weight:
    n = len(cartan)
    return tuple(sum(cartan[i][j] * r[j] for j in range(n)) for i in range(n))


def _positive_roots(cartan: Sequence[Sequence[int]]) -> List[RootVec]:
    """
    Closure of the simple roots under adding simple roots, using alpha-strings:
    beta + alpha_i is a root iff p - beta(h_i) > 0, where p is the largest k
    with beta - k alpha_i a root.
    """
    n = len(cartan)
    simple = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    found: Set[RootVec] = set(simple)
    layer = list(simple)
    while layer:
        next_layer = []
        for beta in layer:
            weight = _apply_cartan(cartan, beta)
            for i in range(n):
                p = 0
                lower = list(beta)
                while True:
                    lower[i] -= 1
                    if tuple(lower) in found:
                        p += 1
                    else:
                        break
                if p - weight[i] > 0:
                    up = tuple(c + (1 if j == i else 0) for j, c in enumerate(beta))
                    if up not in found:
                        found.add(up)
                        next_layer.append(up)
        layer = next_layer
    return sorted(found, key=lambda r: (sum(r), r))


@lru_cache(maxsize=None)
def build_root_system(t: LieType) -> RootSystem:
    cartan = cartan_matrix(t)
    inverse = Matrix(cartan).inv()
    cartan_inverse = tuple(
        tuple(Fraction(int(inverse[i, j].p), int(inverse[i, j].q)) for j in range(t.rank))
        for i in range(t.rank)
    )
    positive = _positive_roots(cartan)
    positive_weights = tuple(_apply_cartan(cartan, r) for r in positive)
    root_weights = frozenset(positive_weights) | frozenset(tuple(-c for c in w) for w in positive_weights)
    theta = positive[-1]
    rs = RootSystem(
        lie_type=t,
        positive_roots=tuple(positive),
        positive_root_weights=positive_weights,
        root_weights=root_weights,
        cartan_matrix=cartan,
        cartan_inverse=cartan_inverse,
        d=_symmetrizers(t),
        rho=tuple(1 for _ in range(t.rank)),
        theta=theta,
    )
    logger.debug(f"Built root system {t}: {len(positive)} positive roots, theta={theta}")
    return rs

# =============================================================================
# Weight arithmetic
# =============================================================================

def _check_dim(v: Sequence, rs: RootSystem) -> None:
    if len(v) != rs.rank:
        raise WeightError(f"vector {tuple(v)} has {len(v)} coordinates, rank of {rs.lie_type} is {rs.rank}")


def root_to_weight(r: Sequence[int], rs: RootSystem) -> Weight:
    _check_dim(r, rs)
    return _apply_cartan(rs.cartan_matrix, r)


def weight_to_root(w: Sequence[int], rs: RootSystem) -> Tuple[Fraction, ...]:
    """Simple-root coordinates of a weight; rational in general."""
    _check_dim(w, rs)
    n = rs.rank
    inv = rs.cartan_inverse
    return tuple(sum((inv[i][j] * w[j] for j in range(n)), Fraction(0)) for i in range(n))


def weight_to_root_int(w: Sequence[int], rs: RootSystem) -> Optional[RootVec]:
    """Integer root coordinates, or None when w is not in the root lattice."""
    coords = weight_to_root(w, rs)
    if any(c.denominator != 1 for c in coords):
        return None
    return tuple(int(c) for c in coords)


def simple_root_weight(i: int, rs: RootSystem) -> Weight:
    """alpha_i (0-based i) in the weight basis: column i of the Cartan matrix."""
    return tuple(row[i] for row in rs.cartan_matrix)


def fundamental_weight(i: int, rank: int) -> Weight:
    """omega_i for 1-based i."""
    return tuple(1 if j == i - 1 else 0 for j in range(rank))


def add(a: Sequence[int], b: Sequence[int]) -> Weight:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Sequence[int], b: Sequence[int]) -> Weight:
    return tuple(x - y for x, y in zip(a, b))


def scale(k: int, a: Sequence[int]) -> Weight:
    return tuple(k * x for x in a)


def is_dominant(w: Sequence[int]) -> bool:
    return all(c >= 0 for c in w)


def require_dominant(w: Sequence[int], what: str = "weight") -> Weight:
    if not is_dominant(w):
        raise NonDominantWeightError(f"{what} {tuple(w)} is not dominant")
    return tuple(w)


def height(r: Sequence[int]) -> int:
    return sum(r)


def leq_weight(mu: Sequence[int], lam: Sequence[int], rs: RootSystem) -> bool:
    """mu <= lam iff lam - mu is a nonnegative integer combination of simple roots."""
    diff = weight_to_root_int(sub(lam, mu), rs)
    return diff is not None and all(c >= 0 for c in diff)


def bilinear(
    a: Sequence[int],
    b: Sequence[int],
    rs: RootSystem,
    *,
    a_basis: Basis = Basis.WEIGHT,
    b_basis: Basis = Basis.WEIGHT,
) -> Fraction:
    """
    The invariant form with (omega_i, alpha_j) = delta_ij d_j. Arguments in the
    weight basis are converted to root coordinates through the inverse Cartan
    matrix where needed.
    """
    _check_dim(a, rs)
    _check_dim(b, rs)
    if a_basis == Basis.WEIGHT and b_basis == Basis.WEIGHT:
        b = weight_to_root(b, rs)
    elif a_basis == Basis.ROOT and b_basis == Basis.ROOT:
        a = root_to_weight(a, rs)
    elif a_basis == Basis.ROOT:
        a, b = b, a
    return sum((Fraction(a[j]) * rs.d[j] * b[j] for j in range(rs.rank)), Fraction(0))


def reflect(v: Sequence[int], i: int, rs: RootSystem) -> Weight:
    """Simple reflection s_i (0-based i): v - v(h_i) alpha_i."""
    vi = v[i]
    return tuple(c - vi * row[i] for c, row in zip(v, rs.cartan_matrix))


def dominant_conjugate(v: Sequence[int], rs: RootSystem) -> Tuple[Weight, int]:
    """The dominant element of the Weyl orbit of v and the number of reflections used."""
    w = tuple(v)
    length = 0
    while True:
        for i, c in enumerate(w):
            if c < 0:
                w = reflect(w, i, rs)
                length += 1
                break
        else:
            return w, length


def to_dominant_signed(v: Sequence[int], rs: RootSystem) -> Tuple[Weight, int]:
    """
    (w(v), (-1)^l(w)) with w(v) dominant, or sign 0 when v lies on a wall,
    i.e. its dominant conjugate has a zero coordinate.
    """
    _check_dim(v, rs)
    w, length = dominant_conjugate(v, rs)
    if any(c == 0 for c in w):
        return w, 0
    return w, -1 if length % 2 else 1


def weyl_orbit(v: Sequence[int], rs: RootSystem) -> Set[Weight]:
    start = tuple(v)
    orbit = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for w in frontier:
            for i, c in enumerate(w):
                if c:
                    u = reflect(w, i, rs)
                    if u not in orbit:
                        orbit.add(u)
                        nxt.append(u)
        frontier = nxt
    return orbit


def all_roots(rs: RootSystem) -> List[RootVec]:
    return list(rs.positive_roots) + [tuple(-c for c in r) for r in rs.positive_roots]


def epsilon_theta(t: LieType) -> RootVec:
    """Simple-root coordinates of the highest root."""
    return build_root_system(t).theta

# =============================================================================
# Node bookkeeping for Jacobi-Trudi data
# =============================================================================

def i_lambda(lam: Iterable[int]) -> int:
    """Largest 1-based node with lambda(h_i) > 0; 0 for lambda = 0."""
    best = 0
    for i, c in enumerate(lam, start=1):
        if c > 0:
            best = i
    return best


def conjecture_support(rs: RootSystem) -> int:
    """Number of leading nodes lambda may be supported on for Jacobi-Trudi data."""
    return rs.rank - 2 if rs.family == Family.D else rs.rank - 1


def epsilon_basis(k: int, rs: RootSystem) -> Weight:
    """epsilon_k = omega_k - omega_{k-1}, valid for k within conjecture_support."""
    w = list(fundamental_weight(k, rs.rank))
    if k > 1:
        w[k - 2] -= 1
    return tuple(w)
