import numpy as np
import pytest
from numpy.testing import assert_allclose

from netswitch.core.errors import IncompatiblePatternError, PreconditionError
from netswitch.core.linalg import centralizer_basis
from netswitch.core.sparsity import (
    SparsityPattern,
    default_initial_pattern,
    is_compatible,
    nullspace_vector,
    row_submatrix,
    scnet,
)
from tests.conftest import FIVE_NODE_B, FORCED_ZEROS


def test_pattern_basics():
    pattern = SparsityPattern(3, [(1, 2), (3, 3), (1, 2)])
    assert len(pattern) == 2
    assert (1, 2) in pattern
    assert [2, 1] not in pattern
    assert pattern.indices == [4, 9]
    assert pattern == SparsityPattern.from_indices(3, [9, 4])
    assert pattern.to_list() == [[1, 2], [3, 3]]

    mask = pattern.mask()
    assert mask.sum() == 2
    assert mask[0, 1] and mask[2, 2]


def test_pattern_validation():
    with pytest.raises(PreconditionError):
        SparsityPattern(0)
    with pytest.raises(PreconditionError):
        SparsityPattern(2, [(3, 1)])
    with pytest.raises(PreconditionError):
        SparsityPattern(2, [(0, 1)])


def test_row_submatrix_size_mismatch(five_node_A):
    basis = centralizer_basis(five_node_A, 5)
    with pytest.raises(PreconditionError):
        row_submatrix(basis, SparsityPattern(4, [(1, 1)]))


def test_empty_pattern_is_compatible(five_node_A):
    basis = centralizer_basis(five_node_A, 5)
    sub = row_submatrix(basis, SparsityPattern(5))
    assert sub.rank == 0
    assert is_compatible(sub)
    assert_allclose(nullspace_vector(sub), [1.0, 0.0, 0.0, 0.0, 0.0])


def test_forced_zeros_recover_the_complementary_network(five_node_A, forced_zeros):
    basis = centralizer_basis(five_node_A, 5)
    sub = row_submatrix(basis, forced_zeros)
    assert sub.rank == 4
    assert sub.nullity == 1
    assert is_compatible(sub)

    c = nullspace_vector(sub)
    assert np.linalg.norm(c) == pytest.approx(1.0)
    B = basis.matrix(c)
    B *= -13.0 / np.trace(B)
    assert_allclose(B, FIVE_NODE_B, atol=1e-7)


def test_extra_edge_is_incompatible(five_node_A):
    basis = centralizer_basis(five_node_A, 5)
    sub = row_submatrix(basis, SparsityPattern(5, FORCED_ZEROS + [(1, 1)]))
    assert not is_compatible(sub)
    with pytest.raises(IncompatiblePatternError):
        nullspace_vector(sub)


def test_default_initial_pattern(five_node_A):
    basis = centralizer_basis(five_node_A, 5)
    initial = default_initial_pattern(basis)
    assert len(initial) == 5
    assert {(2, 2), (3, 3), (4, 4), (5, 5)} <= initial.edges
    assert is_compatible(row_submatrix(basis, initial))


def test_scnet_five_node(five_node_A):
    pattern = scnet(five_node_A)
    assert pattern == SparsityPattern(5, FORCED_ZEROS)


def test_scnet_from_given_initial_pattern(five_node_A, initial_pattern):
    pattern = scnet(five_node_A, initial=initial_pattern)
    assert initial_pattern.edges <= pattern.edges
    assert pattern == SparsityPattern(5, FORCED_ZEROS)


def test_scnet_seeded(five_node_A):
    basis = centralizer_basis(five_node_A, 5)
    first = scnet(five_node_A, seed=7, basis=basis)
    assert first == scnet(five_node_A, seed=7, basis=basis)
    assert len(first) >= 5
    assert is_compatible(row_submatrix(basis, first))


def test_scnet_diagonal_network():
    A = np.diag([-1.0, -2.0, -3.0])
    pattern = scnet(A)
    # Only diagonal networks commute; one diagonal entry must stay free
    assert len(pattern) == 8
    assert sum(1 for i, j in pattern if i != j) == 6


def test_scnet_rejects_wrong_initial_size(five_node_A):
    with pytest.raises(PreconditionError):
        scnet(five_node_A, initial=SparsityPattern(5, [(1, 2)]))
    with pytest.raises(PreconditionError):
        scnet(five_node_A, initial=SparsityPattern(4, [(1, 2)]))


COMPANION = np.array([
    [0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
    [-24.0, -50.0, -35.0, -10.0],
])
UPPER = np.array([
    [-1.0, 1.0, 0.0, 0.0],
    [0.0, -2.0, 1.0, 0.0],
    [0.0, 0.0, -3.0, 1.0],
    [0.0, 0.0, 0.0, -4.0],
])


@pytest.mark.parametrize("A", [COMPANION, UPPER, np.diag([-1.0, -2.0, -3.0, -4.0])],
                         ids=["companion", "triangular", "diagonal"])
@pytest.mark.parametrize("seed", [None, 1, 2])
def test_scnet_pattern_is_maximal(A, seed):
    basis = centralizer_basis(A, 4)
    pattern = scnet(A, seed=seed, basis=basis)
    assert is_compatible(row_submatrix(basis, pattern))
    # Rank only grows with rows, so checking every single extension is exhaustive
    for i in range(1, 5):
        for j in range(1, 5):
            if (i, j) in pattern:
                continue
            grown = SparsityPattern(4, sorted(pattern.edges) + [(i, j)])
            assert not is_compatible(row_submatrix(basis, grown)), (i, j)
