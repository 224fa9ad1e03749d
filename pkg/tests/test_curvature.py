from fractions import Fraction as F

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from obata_holonomy import curvature
from obata_holonomy import exact as ex


def test_joyce_identities(joyce_conn, derived):
    rep = curvature.verify_curvature(joyce_conn, seed=0)
    assert rep.ok, rep.to_text()
    assert rep["joyce-su3.curvature.Z_span_dim"].actual == str(derived["z_span_dim"])
    assert rep["joyce-su3.curvature.grading.image_dim"].actual == str(derived["curvature_image_dim"])


def test_hopf_is_flat(hopf_conn):
    rep = curvature.verify_curvature(hopf_conn, seed=0, n_random=10)
    assert rep.ok
    assert rep["hopf-g0.curvature.Z_span_dim"].status == "skipped"
    assert all(ex.is_zero(m) for m in curvature.curvature_tensor(hopf_conn).r.values())


def test_not_flat_on_w(joyce, joyce_conn):
    W = list(joyce.w)
    assert not ex.is_zero(curvature.curvature_endo(joyce_conn, W, joyce.apply("I", W)))


def test_seed_rank_against_float_oracle(joyce_conn, derived):
    Rt = curvature.curvature_tensor(joyce_conn)
    exact_rank = ex.span(Rt.flattened(), 64).dim
    lam = np.array(joyce_conn.lam, float)
    c = np.array([[[float(x) for x in cij] for cij in ci]
                  for ci in joyce_conn.hyper.algebra.structure_constants])
    rows = []
    for i in range(8):
        for j in range(i + 1, 8):
            R = lam[i] @ lam[j] - lam[j] @ lam[i] - np.tensordot(c[i, j], lam, axes=1)
            rows.append(R.reshape(-1))
    assert exact_rank == np.linalg.matrix_rank(np.array(rows), 1e-9) == derived["curvature_seed_rank"]


def test_z_span_against_float_oracle(joyce, joyce_conn, derived):
    W = list(joyce.w)
    zs = [ex.matvec(curvature.curvature_endo(joyce_conn, W, joyce.apply(a, W)), W) for a in "IJK"]
    assert np.linalg.matrix_rank(np.array(zs, float), 1e-9) == derived["z_span_dim"]


def test_tensor_accessor_antisymmetric(joyce_conn):
    Rt = curvature.curvature_tensor(joyce_conn)
    assert Rt(5, 2) == ex.scale(-1, Rt(2, 5))
    assert ex.is_zero(Rt(3, 3))


def test_random_vectors_deterministic():
    a = curvature.random_vectors(7, 5, 8)
    assert a == curvature.random_vectors(7, 5, 8)
    assert all(x.denominator in (1, 2) and abs(x) <= F(3, 2) for v in a for x in v)


vec8 = st.lists(st.integers(-3, 3).map(lambda k: F(k, 2)), min_size=8, max_size=8)


@settings(max_examples=25, deadline=None)
@given(vec8, vec8)
def test_antisymmetry_and_quaternion_linearity(joyce_conn, x, y):
    R = curvature.curvature_endo(joyce_conn, x, y)
    assert ex.add(R, curvature.curvature_endo(joyce_conn, y, x)) == ex.zeros(8)
    assert ex.is_zero(curvature.curvature_endo(joyce_conn, x, x))
    for A in joyce_conn.hyper.structures.values():
        assert ex.commutator(R, A) == ex.zeros(8)


@settings(max_examples=15, deadline=None)
@given(vec8, vec8)
def test_bilinear_in_first_slot(joyce_conn, x, y):
    Rt = curvature.curvature_tensor(joyce_conn)
    total = ex.zeros(8)
    for i in range(8):
        for j in range(8):
            if x[i] and y[j]:
                total = ex.add(total, ex.scale(x[i] * y[j], Rt(i, j)))
    assert total == curvature.curvature_endo(joyce_conn, x, y)
