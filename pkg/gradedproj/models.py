from enum import Enum
from fractions import Fraction
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, computed_field, field_validator, model_validator

from .errors import NonDominantWeightError

# =============================================================================
# Type aliases
# =============================================================================

# Coordinates in the fundamental-weight basis (entry i is the value on h_i).
Weight = Tuple[int, ...]
# Coordinates in the simple-root basis.
RootVec = Tuple[int, ...]

# =============================================================================
# Enums
# =============================================================================

class Family(str, Enum):
    """Classical Lie family"""
    B = "B"
    C = "C"
    D = "D"

class PsiOrigin(str, Enum):
    """How a root subset was produced"""
    XI = "xi"
    NODE = "node"
    EXPLICIT = "explicit"

class JTMode(str, Enum):
    """Evaluation ring for Jacobi-Trudi computations"""
    SYMBOLIC = "symbolic"
    CONCRETE = "concrete"

class OutputFormat(str, Enum):
    TABLE = "table"
    JSON = "json"

MIN_RANK = {Family.B: 2, Family.C: 2, Family.D: 4}

# =============================================================================
# Root data
# =============================================================================

class LieType(BaseModel):
    """A classical Cartan type such as B4"""
    model_config = ConfigDict(frozen=True)

    family: Family = Field(..., description="One of B, C, D.")
    rank: int = Field(..., description="Number of simple roots.")

    @model_validator(mode="after")
    def _check_rank(self) -> "LieType":
        if self.rank < MIN_RANK[self.family]:
            raise ValueError(f"{self.family.value}{self.rank}: rank must be at least {MIN_RANK[self.family]}")
        return self

    def __str__(self) -> str:
        return f"{self.family.value}{self.rank}"


class RootSystem(BaseModel):
    """
    Positive roots, Cartan matrix and symmetrisation data of a classical type.

    cartan_matrix[i][j] is alpha_j(h_i), so column j holds the simple root
    alpha_j in the fundamental-weight basis. Long roots have squared length 2.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    lie_type: LieType
    positive_roots: Tuple[RootVec, ...] = Field(..., description="Sorted by height, then coordinates.")
    positive_root_weights: Tuple[Weight, ...] = Field(..., description="positive_roots in the weight basis, same order.")
    root_weights: FrozenSet[Weight] = Field(..., description="Every root (both signs) in the weight basis.")
    cartan_matrix: Tuple[Tuple[int, ...], ...]
    cartan_inverse: Tuple[Tuple[Fraction, ...], ...]
    d: Tuple[Fraction, ...] = Field(..., description="d_i = (alpha_i, alpha_i) / 2")
    rho: Weight
    theta: RootVec = Field(..., description="Highest root in the simple-root basis.")

    @property
    def rank(self) -> int:
        return self.lie_type.rank

    @property
    def family(self) -> Family:
        return self.lie_type.family

# =============================================================================
# Characters
# =============================================================================

def _sorted_weights(mapping: Mapping[Weight, Any]) -> List[Weight]:
    return sorted(mapping, key=lambda w: tuple(-c for c in w))


def _require_dominant_keys(mapping: Mapping[Weight, Any]) -> None:
    for w in mapping:
        if any(c < 0 for c in w):
            raise NonDominantWeightError(f"highest weight {tuple(w)} is not dominant")


class FormalCharacter(BaseModel):
    """Full weight expansion of a single simple module"""
    highest_weight: Weight
    mult: Dict[Weight, int] = Field(default_factory=dict)

    def total(self) -> int:
        return sum(self.mult.values())


class DominantCharacter(BaseModel):
    """
    A virtual module written in the basis of simple characters: dominant
    highest weight -> multiplicity. Zero multiplicities are never stored.
    """
    mult: Dict[Weight, int] = Field(default_factory=dict)

    @field_validator("mult")
    @classmethod
    def _dominant_keys(cls, mult: Dict[Weight, int]) -> Dict[Weight, int]:
        mult = {w: m for w, m in mult.items() if m}
        _require_dominant_keys(mult)
        return mult

    @classmethod
    def from_mapping(cls, mapping: Mapping[Weight, int]) -> "DominantCharacter":
        mult = {tuple(w): m for w, m in mapping.items() if m}
        _require_dominant_keys(mult)
        return cls.model_construct(mult=mult)

    @classmethod
    def simple(cls, weight: Weight, multiplicity: int = 1) -> "DominantCharacter":
        return cls.from_mapping({tuple(weight): multiplicity})

    @classmethod
    def zero(cls) -> "DominantCharacter":
        return cls.model_construct(mult={})

    def is_zero(self) -> bool:
        return not self.mult

    def is_actual(self) -> bool:
        return all(m > 0 for m in self.mult.values())

    def items(self) -> List[Tuple[Weight, int]]:
        return [(w, self.mult[w]) for w in _sorted_weights(self.mult)]

    def scaled(self, factor: int) -> "DominantCharacter":
        return DominantCharacter.from_mapping({w: factor * m for w, m in self.mult.items()})

    def __add__(self, other: "DominantCharacter") -> "DominantCharacter":
        out = dict(self.mult)
        for w, m in other.mult.items():
            out[w] = out.get(w, 0) + m
        return DominantCharacter.from_mapping(out)

    def __sub__(self, other: "DominantCharacter") -> "DominantCharacter":
        return self + other.scaled(-1)

    def __neg__(self) -> "DominantCharacter":
        return self.scaled(-1)


class GradedCharacter(BaseModel):
    """degree -> DominantCharacter; empty layers are dropped"""
    by_degree: Dict[int, DominantCharacter] = Field(default_factory=dict)

    @classmethod
    def from_layers(cls, layers: Mapping[int, DominantCharacter]) -> "GradedCharacter":
        return cls.model_construct(by_degree={s: layer for s, layer in layers.items() if not layer.is_zero()})

    @classmethod
    def zero(cls) -> "GradedCharacter":
        return cls.model_construct(by_degree={})

    def layer(self, degree: int) -> DominantCharacter:
        return self.by_degree.get(degree, DominantCharacter.zero())

    def degrees(self) -> List[int]:
        return sorted(self.by_degree)

    def is_zero(self) -> bool:
        return not self.by_degree

    def shifted(self, k: int) -> "GradedCharacter":
        """Multiply by t^k"""
        return GradedCharacter.from_layers({s + k: layer for s, layer in self.by_degree.items()})

    def scaled(self, factor: int) -> "GradedCharacter":
        return GradedCharacter.from_layers({s: layer.scaled(factor) for s, layer in self.by_degree.items()})

    def __add__(self, other: "GradedCharacter") -> "GradedCharacter":
        layers = dict(self.by_degree)
        for s, layer in other.by_degree.items():
            layers[s] = layers[s] + layer if s in layers else layer
        return GradedCharacter.from_layers(layers)

    def __sub__(self, other: "GradedCharacter") -> "GradedCharacter":
        return self + other.scaled(-1)

# =============================================================================
# Root subsets and the poset Gamma
# =============================================================================

class PsiSet(BaseModel):
    model_config = ConfigDict(frozen=True)

    roots: Tuple[RootVec, ...] = Field(..., description="Positive roots, sorted.")
    origin: PsiOrigin
    xi: Optional[Weight] = Field(default=None, description="Dominant functional the set maximises.")
    node: Optional[int] = Field(default=None, description="Node i for Psi_i (1-based).")

    def describe(self) -> str:
        if self.origin == PsiOrigin.NODE:
            return f"node {self.node}"
        if self.origin == PsiOrigin.XI:
            return "xi " + ",".join(str(c) for c in self.xi)
        return "roots " + ";".join(",".join(str(c) for c in r) for r in self.roots)


class GammaNode(BaseModel):
    model_config = ConfigDict(frozen=True)

    mu: Weight
    grade: int = Field(..., ge=0)

    def sort_key(self) -> Tuple[int, Weight]:
        return (self.grade, tuple(-c for c in self.mu))


class GammaPoset(BaseModel):
    """Gamma(lambda, Psi) with nodes in (grade, weight) order and cover edges as index pairs"""
    base: GammaNode
    psi: PsiSet
    nodes: Tuple[GammaNode, ...]
    covers: Tuple[Tuple[int, int], ...] = ()

    _index: Dict[GammaNode, int] = PrivateAttr(default_factory=dict)

    def model_post_init(self, __context: Any) -> None:
        self._index = {node: i for i, node in enumerate(self.nodes)}

    def __contains__(self, node: GammaNode) -> bool:
        return node in self._index

    def __len__(self) -> int:
        return len(self.nodes)

    def index_of(self, node: GammaNode) -> int:
        return self._index[node]

    def grades_of(self, mu: Weight) -> List[int]:
        return sorted(n.grade for n in self.nodes if n.mu == tuple(mu))

# =============================================================================
# Projective characters and Gamma matrices
# =============================================================================

class ProjectiveCharacter(BaseModel):
    base: GammaNode
    psi: PsiSet
    graded: GradedCharacter


class MatrixEntry(BaseModel):
    """coeff * t^degree at (row, col)"""
    row: int
    col: int
    coeff: int
    degree: int


class GammaMatrix(BaseModel):
    node_order: Tuple[GammaNode, ...]
    entries: List[MatrixEntry] = Field(default_factory=list)

    def to_sympy(self, t: Any):
        from sympy import zeros

        size = len(self.node_order)
        m = zeros(size, size)
        for e in self.entries:
            m[e.row, e.col] += e.coeff * t ** e.degree
        return m

# =============================================================================
# Jacobi-Trudi ring
# =============================================================================

class JTElement(BaseModel):
    """
    Element of Z[h_1, h_2, ...]. Keys are weakly decreasing index tuples; the
    empty tuple is the unit.
    """
    terms: Dict[Tuple[int, ...], int] = Field(default_factory=dict)

    @classmethod
    def from_terms(cls, terms: Iterable[Tuple[Iterable[int], int]]) -> "JTElement":
        out: Dict[Tuple[int, ...], int] = {}
        for indices, coeff in terms:
            indices = tuple(indices)
            if any(k < 0 for k in indices):
                continue
            key = tuple(sorted((k for k in indices if k != 0), reverse=True))
            out[key] = out.get(key, 0) + coeff
        return cls.model_construct(terms={k: c for k, c in out.items() if c})

    @classmethod
    def h(cls, k: int) -> "JTElement":
        return cls.from_terms([((k,), 1)])

    @classmethod
    def one(cls) -> "JTElement":
        return cls.from_terms([((), 1)])

    @classmethod
    def zero(cls) -> "JTElement":
        return cls.model_construct(terms={})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "JTElement") -> "JTElement":
        return JTElement.from_terms(list(self.terms.items()) + list(other.terms.items()))

    def __sub__(self, other: "JTElement") -> "JTElement":
        return self + other.scaled(-1)

    def __mul__(self, other: "JTElement") -> "JTElement":
        return JTElement.from_terms(
            (a + b, ca * cb) for a, ca in self.terms.items() for b, cb in other.terms.items()
        )

    def scaled(self, factor: int) -> "JTElement":
        return JTElement.from_terms((k, factor * c) for k, c in self.terms.items())

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = ""
        for key in sorted(self.terms, key=lambda k: (-sum(k), tuple(-x for x in k))):
            coeff = self.terms[key]
            mono = "*".join(f"h{k}" for k in key)
            size = abs(coeff)
            body = mono if key and size == 1 else (f"{size}*{mono}" if key else str(size))
            if not out:
                out = ("-" if coeff < 0 else "") + body
            else:
                out += (" - " if coeff < 0 else " + ") + body
        return out


class LambdaProfile(BaseModel):
    i_lambda: int = Field(..., description="Largest node with lambda(h_i) > 0; 0 for lambda = 0.")
    lambda_parts: Tuple[int, ...] = Field(..., description="lambda_i = sum of lambda(h_k) for i <= k <= i_lambda")

# =============================================================================
# Check results and reports
# =============================================================================

class RigidityViolation(BaseModel):
    psi_multiplicities: List[int] = Field(..., description="n_beta for each element of Psi, in Psi order.")
    root_multiset: List[RootVec] = Field(..., description="Roots (with repetition) with the same sum.")


class RigidityReport(BaseModel):
    holds: bool
    checked: int = Field(..., description="Number of Psi-multiplicity vectors examined.")
    violation: Optional[RigidityViolation] = None

    def __bool__(self) -> bool:
        return self.holds


class CharacterRow(BaseModel):
    weight: List[int]
    mult: int
    dim: Optional[int] = None


class LayerRow(BaseModel):
    degree: int
    weight: List[int]
    mult: int


class CoefficientRow(BaseModel):
    mu: List[int]
    offset: List[int] = Field(..., description="mu - lambda in the fundamental-weight basis.")
    s: int
    c: int
    weight_space_dim: int
    dominant: bool


class CharacterReport(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    lie_type: str
    lam: List[int] = Field(..., alias="lambda")
    rows: List[CharacterRow]
    dimension: int


class GradedReport(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    lie_type: str
    lam: List[int] = Field(..., alias="lambda")
    psi_origin: str
    layers: List[LayerRow]
    dimension: int = Field(..., description="Dimension at t = 1.")


class GammaReport(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    lie_type: str
    lam: List[int] = Field(..., alias="lambda")
    psi_origin: str
    nodes: List[Dict[str, Any]]
    edges: List[List[int]]


class CoefficientReport(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    lie_type: str
    lam: List[int] = Field(..., alias="lambda")
    psi_origin: str
    rows: List[CoefficientRow]


class CheckResult(BaseModel):
    check: str
    passed: bool
    residual: Optional[str] = Field(default=None, description="Exact residual when the check fails.")
    detail: Dict[str, Any] = Field(default_factory=dict)


class MatrixReport(BaseModel):
    node_order: List[Dict[str, Any]]
    A: List[List[str]]
    E: List[List[str]]


class VerificationReport(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    lie_type: str
    lam: List[int] = Field(..., alias="lambda")
    psi_origin: Optional[str] = None
    residual_is_zero: bool
    checks: List[CheckResult] = Field(default_factory=list)
    matrices: Optional[MatrixReport] = None


class SweepCase(BaseModel):
    lam: List[int]
    success: bool
    checks: List[CheckResult] = Field(default_factory=list)
    error: Optional[str] = None


class SweepReport(BaseModel):
    lie_type: str
    checks: List[str]
    total: int
    passed: int
    failed: List[SweepCase] = Field(default_factory=list)


class CalibrationCase(BaseModel):
    lam: List[int]
    passed: bool


class CalibrationReport(BaseModel):
    lie_type: str
    i_lambda: int
    cases: List[CalibrationCase] = Field(default_factory=list)

    @computed_field
    @property
    def enabled(self) -> bool:
        return bool(self.cases) and all(c.passed for c in self.cases)

# =============================================================================
# Golden tables
# =============================================================================

class GoldenTerm(BaseModel):
    """coeff times the indicator that lambda(h_node) >= min for every (node, min) pair"""
    coeff: int
    when: List[Tuple[int, int]] = Field(default_factory=list)


class GoldenEntry(BaseModel):
    mu_offset: List[int] = Field(..., description="mu - lambda on nodes 1..i_lambda.")
    s: int
    c_formula: List[GoldenTerm]


class GoldenTable(BaseModel):
    schema_version: int
    name: str
    families: List[Family]
    i_lambda: int
    entries: List[GoldenEntry]

# =============================================================================
# Cache and run configuration
# =============================================================================

class CacheRecord(BaseModel):
    schema_version: int
    lie_type: str
    op: str
    key: str
    value: Any


class CacheStats(BaseModel):
    path: str
    records: int
    skipped: int
    ops: Dict[str, int] = Field(default_factory=dict)


class RunConfig(BaseModel):
    """Validated command-line parameters"""
    model_config = ConfigDict(extra="forbid")

    lie_type: str = Field(..., description="Type string such as 'B4'.")
    weight: Optional[str] = Field(default=None, description="Comma-separated fundamental-weight coordinates.")
    psi_node: Optional[int] = None
    psi_xi: Optional[str] = None
    psi_roots: Optional[str] = Field(default=None, description="Semicolon-separated simple-root coordinates.")
    output_format: OutputFormat = OutputFormat.TABLE
    cache_dir: Optional[str] = None
    use_cache: bool = True
    workers: Optional[int] = Field(default=None, ge=1)
    log_level: str = "WARNING"

    @model_validator(mode="after")
    def _one_psi_selector(self) -> "RunConfig":
        chosen = [x for x in (self.psi_node, self.psi_xi, self.psi_roots) if x is not None]
        if len(chosen) > 1:
            raise ValueError("use at most one of --psi-node, --psi-xi, --psi-roots")
        return self
