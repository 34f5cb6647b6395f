from fractions import Fraction

import pytest

from core.base import BoundaryDegree, NotChainMap
from core.ratlin import (
    ComplexSlice, Echelon, SparseMatrix, coordinates, homology, homology_dims, kernel_basis,
    map_rank_on_homology, rank, rref, solve_affine,
)


def test_sparse_matrix_drops_zeros_and_multiplies():
    a = SparseMatrix.from_rows([[1, 0], [0, 2]])
    b = SparseMatrix.from_rows([[0, 1], [1, 0]])
    assert a.entries == {(0, 0): 1, (1, 1): 2}
    assert (a @ b).dense() == [[0, 1], [2, 0]]
    assert (a - a).is_zero()
    assert a.transpose() == a


def test_entry_outside_shape():
    with pytest.raises(IndexError):
        SparseMatrix(2, 2, {(2, 0): 1})


def test_rank_and_kernel():
    m = SparseMatrix.from_rows([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    assert rank(m) == 2
    kernel = kernel_basis(m)
    assert len(kernel) == 1
    assert m.apply(kernel[0]) == {}


def test_rref_pivots():
    m = SparseMatrix.from_rows([[0, 2, 4], [1, 1, 1]])
    echelon, r, pivots = rref(m)
    assert r == 2
    assert pivots == [0, 1]
    assert echelon.get(1, 1) == 1


def test_solve_affine_consistent_and_not():
    a = SparseMatrix.from_rows([[1, 1], [1, -1]])
    particular, kernel = solve_affine(a, [2, 0])
    assert particular == {0: 1, 1: 1}
    assert kernel == []
    singular = SparseMatrix.from_rows([[1, 1], [1, 1]])
    assert solve_affine(singular, [1, 2]) is None


def test_coordinates_outside_span():
    vectors = [{'a': 1}, {'b': 1}]
    assert coordinates(vectors, {'a': 2, 'b': Fraction(1, 3)}) == [2, Fraction(1, 3)]
    assert coordinates(vectors, {'c': 1}) is None


def test_echelon_contains():
    basis = Echelon([{0: 1, 1: 1}])
    assert basis.contains({0: 2, 1: 2})
    assert not basis.add({0: 3, 1: 3})
    assert basis.add({1: 1})
    assert len(basis) == 2


def _circle():
    # two vertices, two edges; H^0 = H^1 = Q
    d0 = SparseMatrix.from_rows([[-1, 1], [1, -1]])
    return ComplexSlice({0: ['v0', 'v1'], 1: ['e0', 'e1']}, {0: d0})


def test_homology_of_circle():
    c = _circle()
    assert homology_dims(c) == {0: 1, 1: 1}
    assert c.euler_characteristic() == 0
    h = homology(c, 0)
    assert h.representatives == [{0: 1, 1: 1}]


def test_d_squared_nonzero_is_rejected():
    d0 = SparseMatrix.from_rows([[1]])
    d1 = SparseMatrix.from_rows([[1]])
    with pytest.raises(NotChainMap):
        ComplexSlice({0: ['a'], 1: ['b'], 2: ['c']}, {0: d0, 1: d1})


def test_boundary_degree_is_flagged():
    c = ComplexSlice({0: ['a'], 1: ['b']}, complete=(1, 1))
    assert not homology(c, 0).reliable
    with pytest.raises(BoundaryDegree):
        homology(c, 0, strict=True)


def test_identity_induces_iso_on_homology():
    c = _circle()
    assert map_rank_on_homology(c, c, SparseMatrix.identity(2), 1) == 1


def _random_matrix(rng, rows, cols):
    return SparseMatrix.from_rows([[rng.randint(-2, 2) for _ in range(cols)] for _ in range(rows)], cols)


def _random_complex(rng, n0, n1):
    d0 = _random_matrix(rng, n1, n0)
    cokernel = kernel_basis(d0.transpose())
    d1 = SparseMatrix.from_rows([[v.get(j, 0) for j in range(n1)] for v in cokernel], n1)
    spaces = {0: [f"a{i}" for i in range(n0)], 1: [f"b{i}" for i in range(n1)],
              2: [f"c{i}" for i in range(len(cokernel))]}
    return ComplexSlice(spaces, {0: d0, 1: d1}), d0, d1


def test_row_rank_equals_column_rank(rng):
    for _ in range(20):
        m = _random_matrix(rng, rng.randint(1, 6), rng.randint(1, 6))
        assert rank(m) == rank(m.transpose())


def test_homology_ignores_the_order_of_the_basis(rng):
    for _ in range(10):
        c, d0, d1 = _random_complex(rng, rng.randint(1, 4), rng.randint(1, 5))
        n1 = d0.rows
        order = list(range(n1))
        rng.shuffle(order)
        p = SparseMatrix(n1, n1, {(i, order[i]): Fraction(1) for i in range(n1)})
        shuffled = ComplexSlice(c.spaces, {0: p @ d0, 1: d1 @ p.transpose()})
        assert homology_dims(shuffled) == homology_dims(c)


def test_euler_characteristic_of_homology(rng):
    for _ in range(10):
        c, _, _ = _random_complex(rng, rng.randint(1, 4), rng.randint(1, 5))
        dims = homology_dims(c)
        assert sum((-1) ** (k % 2) * n for k, n in dims.items()) == c.euler_characteristic()
