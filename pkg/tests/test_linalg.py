import pytest

from heisenleib import linalg
from heisenleib.linalg import ShapeError, SingularMatrixError, smat, svec
from heisenleib.scalars import Scalar


def test_mat_mul_identity():
    m = smat([[1, 2], [3, 4]])
    assert linalg.mat_eq(linalg.mat_mul(m, linalg.identity(2)), m)


def test_mat_mul_shape_error():
    with pytest.raises(ShapeError):
        linalg.mat_mul(smat([[1, 2]]), smat([[1, 2]]))


def test_rref_and_rank():
    m = smat([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    red, pivots = linalg.rref(m)
    assert pivots == [0, 1]
    assert linalg.rank(m) == 2
    assert red[0] == svec([1, 0, 1])
    assert red[1] == svec([0, 1, 1])


def test_nullspace_solves():
    m = smat([[1, 2, 3], [0, 1, 1]])
    basis = linalg.nullspace(m)
    assert len(basis) == 1
    for v in basis:
        assert linalg.is_zero_vector(linalg.mat_vec(m, v))


def test_det():
    assert linalg.det(smat([[1, 2], [3, 4]])) == Scalar.rational(-2)
    assert linalg.det(smat([[1, 2], [2, 4]])) == Scalar.zero()
    assert linalg.det(smat([[0, 1, 0], [1, 0, 0], [0, 0, 1]])) == Scalar.rational(-1)


def test_inverse_roundtrip():
    m = smat([[1, 2], [3, 5]])
    inv = linalg.inverse(m)
    assert linalg.mat_eq(linalg.mat_mul(m, inv), linalg.identity(2))


def test_inverse_singular():
    with pytest.raises(SingularMatrixError):
        linalg.inverse(smat([[1, 2], [2, 4]]))


def test_mat_pow():
    n = smat([[0, 1], [0, 0]])
    assert linalg.is_zero_matrix(linalg.mat_pow(n, 2))
    assert linalg.mat_eq(linalg.mat_pow(n, 0), linalg.identity(2))


def test_quadratic_entries():
    i = Scalar.sqrt_d(-1)
    m = [[i, Scalar.zero()], [Scalar.zero(), -i]]
    assert linalg.det(m) == Scalar.one()
    inv = linalg.inverse(m)
    assert linalg.mat_eq(linalg.mat_mul(m, inv), linalg.identity(2))
