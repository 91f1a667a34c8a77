import pytest
from sympy import Matrix

from gradedproj.charring import character_dimension, graded_specialize, weyl_dim
from gradedproj.errors import NonDominantWeightError, PreconditionError
from gradedproj.gammaposet import psi_node
from gradedproj.models import DominantCharacter, GradedCharacter
from gradedproj.projchar import (
    T,
    dimension_check,
    gamma_matrices,
    kr_character,
    matrix_check,
    matrix_identity_residual,
    projective_character,
    shift_check,
    verify_thm2,
)
from gradedproj.sweep import default_psi, sweep_grid

# =============================================================================
# Projective and KR characters
# =============================================================================

def test_projective_character_of_the_adjoint(b3):
    proj = projective_character((0, 1, 0), psi_node(2, b3), b3)
    assert proj.graded.degrees() == [0, 1]
    assert proj.graded.layer(0) == DominantCharacter.simple((0, 1, 0))
    assert proj.graded.layer(1) == DominantCharacter.simple((0, 0, 0))


def test_kr_ladder(b3):
    proj = kr_character(2, 2, b3)
    assert proj.graded == GradedCharacter.from_layers({
        0: DominantCharacter.simple((0, 2, 0)),
        1: DominantCharacter.simple((0, 1, 0)),
        2: DominantCharacter.simple((0, 0, 0)),
    })
    assert character_dimension(graded_specialize(proj.graded), b3) == 168 + 21 + 1


def test_kr_ladder_at_level_three(b3):
    proj = kr_character(2, 3, b3)
    assert proj.graded == GradedCharacter.from_layers({
        s: DominantCharacter.simple((0, 3 - s, 0)) for s in range(4)
    })
    assert character_dimension(graded_specialize(proj.graded), b3) == sum(weyl_dim((0, k, 0), b3) for k in range(4))


@pytest.mark.parametrize("level", [1, 2, 3])
def test_kr_at_the_last_node_of_c3_is_simple(c3, level):
    proj = kr_character(3, level, c3)
    assert proj.graded == GradedCharacter.from_layers({0: DominantCharacter.simple((0, 0, level))})


def test_kr_with_empty_psi_is_a_single_layer(b4):
    proj = kr_character(1, 3, b4)
    assert proj.graded == GradedCharacter.from_layers({0: DominantCharacter.simple((3, 0, 0, 0))})


def test_kr_rejects_bad_levels(b3):
    with pytest.raises(PreconditionError):
        kr_character(2, 0, b3)
    with pytest.raises(PreconditionError):
        kr_character(4, 1, b3)


def test_projective_character_requires_dominant(b3):
    with pytest.raises(NonDominantWeightError):
        projective_character((1, -1, 0), psi_node(2, b3), b3)

# =============================================================================
# The alternating c-sum
# =============================================================================

@pytest.mark.parametrize("name,lam,node", [
    ("b3", (0, 1, 0), 2),
    ("b3", (0, 2, 0), 2),
    ("b4", (1, 1, 1, 0), 3),
    ("c3", (1, 1, 0), 2),
    ("d5", (0, 1, 1, 0, 0), 3),
])
def test_alternating_sum_recovers_simple_character(name, lam, node, request):
    rs = request.getfixturevalue(name)
    psi = psi_node(node, rs)
    assert verify_thm2(lam, psi, rs).is_zero()
    assert dimension_check(lam, psi, rs).passed
    assert shift_check(lam, psi, rs).passed


def test_dimension_check_detail(b3):
    result = dimension_check((0, 1, 0), psi_node(2, b3), b3)
    assert result.check == "dimension"
    assert result.detail == {"alternating_sum": 21, "dim": 21}

# =============================================================================
# A(t) and E(t)
# =============================================================================

def test_two_node_matrices(b3):
    A, E = gamma_matrices((0, 1, 0), psi_node(2, b3), b3)
    assert A.to_sympy(T) == Matrix([[1, 0], [T, 1]])
    assert E.to_sympy(T) == Matrix([[1, 0], [T, 1]])
    assert matrix_identity_residual(A, E).is_zero_matrix


def test_matrices_are_unitriangular(b4):
    A, E = gamma_matrices((1, 1, 1, 0), psi_node(3, b4), b4)
    a, e = A.to_sympy(T), E.to_sympy(T)
    size = len(A.node_order)
    assert size == 7
    for i in range(size):
        assert a[i, i] == 1 and e[i, i] == 1
        for j in range(i + 1, size):
            assert a[i, j] == 0 and e[i, j] == 0


@pytest.mark.parametrize("name,lam,node", [
    ("b3", (0, 2, 0), 2),
    ("b4", (1, 1, 1, 0), 3),
    ("c3", (1, 1, 0), 2),
])
def test_matrix_identity(name, lam, node, request):
    rs = request.getfixturevalue(name)
    result, report = matrix_check(lam, psi_node(node, rs), rs)
    assert result.passed
    assert result.detail["size"] == len(report.node_order)
    assert report.A[0][0] == "1"


@pytest.mark.slow
@pytest.mark.parametrize("name,max_coord,top", [
    ("b4", 2, 3), ("d5", 1, 3), ("c4", 1, 3), ("b5", 1, 4), ("c3", 2, 3), ("d4", 2, 3),
])
def test_theorem_grid(name, max_coord, top, request):
    rs = request.getfixturevalue(name)
    for lam in sweep_grid(rs, max_coord, top):
        psi = default_psi(lam, rs)
        assert verify_thm2(lam, psi, rs).is_zero(), lam
        assert matrix_check(lam, psi, rs)[0].passed, lam
