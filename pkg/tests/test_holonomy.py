from fractions import Fraction as F

import numpy as np
import pytest

from obata_holonomy import exact as ex
from obata_holonomy import holonomy as ho


def _float_nomizu_dim(C, tol=1e-9):
    lam = np.array(C.lam, float)
    c = np.array([[[float(x) for x in cij] for cij in ci] for ci in C.hyper.algebra.structure_constants])
    n = len(lam)
    basis = [(lam[i] @ lam[j] - lam[j] @ lam[i] - np.tensordot(c[i, j], lam, axes=1)).reshape(-1)
             for i in range(n) for j in range(i + 1, n)]
    rank = lambda vs: np.linalg.matrix_rank(np.array(vs), tol) if len(vs) else 0
    while True:
        r = rank(basis)
        if r == 0:
            return 0
        cur = np.linalg.svd(np.array(basis))[2][:r]
        mats = [m.reshape(n, n) for m in cur]
        cand = [(L @ m - m @ L).reshape(-1) for m in mats for L in lam]
        cand += [(a @ b - b @ a).reshape(-1) for a in mats for b in mats]
        if rank(list(cur) + cand) == r:
            return r
        basis = list(cur) + cand


def test_nomizu_dimension(joyce_conn, joyce_hol, derived):
    assert joyce_hol.dim == derived["nomizu_dim"] == 16
    assert _float_nomizu_dim(joyce_conn) == 16


def test_nomizu_hopf_is_trivial(hopf_hol):
    assert hopf_hol.dim == 0


def test_closure_idempotent(joyce_conn, joyce_hol):
    assert ho.close(joyce_conn, joyce_hol.sub.basis) == joyce_hol


def test_commutants(joyce, joyce_hol):
    assert ho.commutant([], 8).dim == 64
    Q = ho.commutant(list(joyce.structures.values()))
    assert Q.dim == 16
    assert Q == joyce_hol
    comm = ho.commutant(joyce_hol.matrices(), 8)
    assert comm.dim == 4
    qnf = ho.quaternion_normal_form(comm)
    assert qnf is not None and qnf["is_H"]


def test_commutant_size_mismatch():
    with pytest.raises(ex.DimensionError):
        ho.commutant([ex.identity(2), ex.identity(3)])
    with pytest.raises(ex.DimensionError):
        ho.commutant([])


def test_split_quaternions_are_not_H():
    # Mat_2(R) = (1, 1): a 4-dim algebra with the same shape but a, b < 0
    alg = ho.EndoSubspace(2, ex.span([ex.flatten(ex.identity(2)), [1, 0, 0, -1], [0, 1, 1, 0],
                                      [0, 1, -1, 0]], 4))
    qnf = ho.quaternion_normal_form(alg)
    assert qnf is not None and not qnf["is_H"]


def test_invariant_tensors(joyce_hol):
    assert ho.invariant_profile(joyce_hol) == {
        "vectors": 0, "covectors": 0, "bilinear": 0, "metrics": 0,
        "bivectors": 0, "endos": 4, "top_forms": 0}
    with pytest.raises(ValueError):
        ho.invariant_tensor_dims(joyce_hol, "3,3")


def test_invariants_of_small_algebra():
    # so(2) acting on R^2 preserves the metric and the volume form
    rot = ex.matrix([[0, -1], [1, 0]])
    alg = ho.EndoSubspace(2, ex.span([ex.flatten(rot)], 4))
    assert ho.invariant_tensor_dims(alg, "0,2s") == 1
    assert ho.invariant_tensor_dims(alg, "top") == 1
    assert ho.invariant_tensor_dims(alg, "1,1") == 2
    assert ho.invariant_tensor_dims(alg, "1,0") == 0


def test_identification_report(joyce, joyce_conn, joyce_hol, derived):
    rep = ho.identify_gl2h(joyce_hol, joyce, joyce_conn)
    assert rep.ok, rep.to_text()
    assert rep["holonomy.dim"].actual == "16"
    assert rep["holonomy.g0_annihilator_dim"].actual == str(derived["g0_annihilator_dim"])
    assert rep["holonomy.seed_rank"].actual == str(derived["curvature_seed_rank"])


def test_identity_commutes_with_hol(joyce, joyce_hol):
    for A in joyce_hol.matrices():
        for M in joyce.structures.values():
            assert ex.commutator(A, M) == ex.zeros(8)


def test_quaternion_scalar_witness(joyce_conn, joyce_hol):
    w = ho.quaternion_scalar_witness(joyce_conn, joyce_hol)
    assert w["in_hol"] and w["kills_g0"] and w["nonreal"]
    assert w["eigenvalues"] == 3


def test_trace_witness(joyce_hol, derived):
    A = ho.trace_witness(joyce_hol)
    assert ex.fmt(ex.trace(A)) == derived["trace_of_first_traceful_hol_element"]


def _lines(*vs):
    return [ex.span([v], 2) for v in vs]


def test_projection_lemma_lines():
    V1, V2, V3 = _lines([1, 0], [0, 1], [1, 1])
    assert ho.projection_algebra_dim(V1, V2, V3) == (4, True)


def test_projection_lemma_planes():
    V1 = ex.span([[1, 0, 0, 0], [0, 1, 0, 0]], 4)
    V2 = ex.span([[0, 0, 1, 0], [0, 0, 0, 1]], 4)
    V3 = ex.span([[1, 0, 2, 1], [0, 1, -1, 3]], 4)
    assert ho.projection_algebra_dim(V1, V2, V3) == (4, True)


def test_projection_lemma_rejects_degenerate_input():
    V1, V2, _ = _lines([1, 0], [0, 1], [1, 1])
    with pytest.raises(ho.ComplementError):
        ho.projection_algebra_dim(V1, V2, V1)
    with pytest.raises(ho.ComplementError):
        ho.projection_algebra_dim(V1, V2, ex.span([[1, 0, 0, 0]], 4))


@pytest.mark.parametrize("m", [2, 4, 8])
def test_projection_lemma_random(m):
    rng = np.random.default_rng(11)
    for _ in range(3):
        assert ho.projection_algebra_dim(*ho.random_complementary_triple(rng, m // 2)) == (4, True)


def test_sl2c_commutant(derived):
    assert ho.sl2c_s3c2_commutant_dim() == derived["s3c2_commutant_dim"]
    gens = ho.s3_generators()
    assert ho.commutant([gens["H"]], 8).dim == derived["s3c2_H_only_commutant_dim"]
    # float oracle: nullspace of the stacked Sylvester system
    rows = [np.kron(np.array(g, float), np.eye(8)) - np.kron(np.eye(8), np.array(g, float).T)
            for g in gens.values()]
    s = np.linalg.svd(np.vstack(rows), compute_uv=False)
    assert int(np.sum(s < 1e-9)) == 2


def test_eliminations_report():
    rep = ho.verify_eliminations(seed=3, trials=4)
    assert rep.ok, rep.to_text()


def test_holonomy_dump(joyce_hol):
    d = ho.to_json_dict(joyce_hol)
    assert d["dim"] == 16 and len(d["basis"]) == 16 and len(d["basis"][0]) == 64
    assert all(isinstance(x, str) and "/" in x for x in d["basis"][0])
