from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from obata_holonomy import exact as ex


small = st.integers(min_value=-4, max_value=4)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


def test_frac_rejects_floats():
    with pytest.raises(TypeError):
        ex.frac(0.5)
    assert ex.frac("3/6") == F(1, 2)


def test_rank_trivial_cases():
    assert ex.rank(ex.identity(2)) == 2
    assert ex.rank(ex.zeros(3, 5)) == 0


def test_nullspace_of_difference_row():
    ns = ex.solve_homogeneous(ex.matrix([[1, -1]]))
    assert ns.dim == 1
    assert [1, 1] in ns
    assert ex.solve_homogeneous(ex.identity(4)).dim == 0


def test_rref_pivots_are_clean():
    rs = ex.span([[2, 4, 6], [1, 1, 1]], 3)
    for row, p in zip(rs.basis, rs.pivot_columns):
        assert row[p] == 1
        assert all(other[p] == 0 for other in rs.basis if other is not row)


def test_cyclic_shift_closure_fills_space():
    shift = ex.matrix([[0, 0, 1], [1, 0, 0], [0, 1, 0]])
    sub = ex.subspace_closure([[1, 0, 0]], maps=[shift])
    assert sub.dim == 3


def test_closure_dimension_mismatch():
    with pytest.raises(ex.DimensionError):
        ex.subspace_closure([[1, 0, 0]], maps=[ex.identity(2)])
    with pytest.raises(ex.DimensionError):
        ex.subspace_closure([[1, 0], [1, 0, 0]])


def test_closure_under_product_generates_matrix_algebra():
    # E12 and E21 generate all of Mat_2
    prod = lambda u, v: ex.flatten(ex.matmul(ex.unflatten(u, 2), ex.unflatten(v, 2)))
    sub = ex.subspace_closure([[0, 1, 0, 0], [0, 0, 1, 0]], product=prod)
    assert sub.dim == 4


def test_sparse_affine_solve():
    eqs = [({0: F(1), 1: F(1)}, F(3)), ({0: F(1), 1: F(-1)}, F(1))]
    x, null = ex.solve_sparse_affine(eqs, 3)
    assert x[:2] == [2, 1]
    assert null.dim == 1 and [0, 0, 1] in null
    with pytest.raises(ex.InconsistentSystem):
        ex.solve_sparse_affine([({0: F(1)}, F(1)), ({0: F(2)}, F(1))], 1)


def test_charpoly_and_eigenvalue_count():
    m = ex.matrix([[2, 0, 0], [0, 0, -1], [0, 1, 0]])
    # (x - 2)(x^2 + 1) = x^3 - 2x^2 + x - 2
    assert ex.charpoly(m) == [-2, 1, -2, 1]
    assert ex.distinct_eigenvalue_count(m) == 3
    assert ex.distinct_eigenvalue_count(ex.identity(4)) == 1


def test_inverse_and_singular():
    m = ex.matrix([[2, 1], [1, 1]])
    assert ex.matmul(m, ex.inverse(m)) == ex.identity(2)
    with pytest.raises(ex.SingularMatrix):
        ex.inverse(ex.matrix([[1, 2], [2, 4]]))


def test_negative_definite():
    assert ex.is_negative_definite(ex.scale(-1, ex.identity(3)))
    assert not ex.is_negative_definite(ex.matrix([[-1, 0], [0, 1]]))


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_of_transpose(m):
    assert ex.rank(m) == ex.rank(ex.transpose(m))


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_plus_nullity(m):
    cols = len(m[0])
    ns = ex.solve_homogeneous(m)
    assert ex.rank(m) + ns.dim == cols
    for v in ns.basis:
        assert ex.is_zero(ex.matvec(m, v))


@settings(max_examples=40, deadline=None)
@given(matrices(4, 4))
def test_rank_matches_numpy(m):
    assert ex.rank(m) == np.linalg.matrix_rank(np.array(m, float))


@settings(max_examples=30, deadline=None)
@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=3),
       st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3))
def test_closure_is_idempotent(seed, m):
    once = ex.subspace_closure(seed, maps=[m])
    again = ex.subspace_closure(once.basis, maps=[m], ambient_dim=3)
    assert once == again


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n),
                                                    min_size=n, max_size=n)))
def test_determinant_and_charpoly_match_numpy(m):
    a = np.array(m, float)
    assert float(ex.determinant(m)) == pytest.approx(np.linalg.det(a), abs=1e-8)
    ours = [float(x) for x in reversed(ex.charpoly(m))]
    assert np.allclose(ours, np.poly(a), atol=1e-6)
