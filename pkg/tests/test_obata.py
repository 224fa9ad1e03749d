import numpy as np
import pytest

from obata_holonomy import exact as ex
from obata_holonomy import hyper, obata


def _float_obata(H):
    """Lambda from the real-form formula, evaluated in floats."""
    c = np.array([[[float(x) for x in cij] for cij in ci] for ci in H.algebra.structure_constants])
    I, J, K = (np.array([[float(x) for x in r] for r in A]) for A in (H.I, H.J, H.K))
    br = lambda x, y: np.einsum("i,j,ijk->k", x, y, c)
    e = np.eye(H.dim)
    lam = lambda x, y: 0.5 * (br(x, y) + I @ br(I @ x, y) - J @ br(x, J @ y) + K @ br(I @ x, J @ y))
    return np.array([np.array([lam(e[i], e[j]) for j in range(H.dim)]).T for i in range(H.dim)])


@pytest.mark.parametrize("name", ["joyce", "hopf"])
def test_unique_solution_equals_formula(name, request):
    H = request.getfixturevalue(name)
    C = obata.solve_unique_connection(H)
    assert C.lam == obata.obata_lambda(H).lam
    assert np.allclose(np.array(C.lam, float), _float_obata(H))


def test_dropping_nabla_j_leaves_a_family(joyce, hopf, derived):
    for H in (joyce, hopf):
        eqs, nvars = obata.uniqueness_system(H, parallel=("I",))
        _, null = ex.solve_sparse_affine(eqs, nvars)
        assert null.dim == derived["without_nablaJ_nullity"][H.name]
        assert null.dim > 0


@pytest.mark.parametrize("name", ["joyce_conn", "hopf_conn"])
def test_connection_report(name, request):
    rep = obata.verify_connection(request.getfixturevalue(name))
    assert rep.ok, rep.to_text()


def test_euler_package(joyce, joyce_conn):
    rep = obata.euler_report(joyce, joyce_conn)
    assert rep.ok, rep.to_text()
    assert rep.summary()["skipped"] == 0


def test_euler_package_hopf(hopf, hopf_conn):
    rep = obata.euler_report(hopf, hopf_conn)
    assert rep.ok
    # the Killing form of su(2)+u(1) is degenerate
    assert rep["hopf-g0.euler.nabla_IE_h=0"].status == "skipped"


def test_hopf_connection_is_minus_right_multiplication(hopf, hopf_conn):
    e = [ex.unit(4, i) for i in range(4)]
    for X in e:
        for Y in e:
            assert obata.nabla(hopf_conn, X, Y) == ex.vscale(-1, hyper.qmul(Y, X))


def test_uniqueness_error_when_underdetermined(joyce, monkeypatch):
    real = obata.uniqueness_system
    monkeypatch.setattr(obata, "uniqueness_system", lambda H: real(H, parallel=("I",)))
    with pytest.raises(obata.UniquenessError):
        obata.solve_unique_connection(joyce)


def test_nabla_w_w_nonzero(joyce, joyce_conn):
    assert not ex.is_zero(obata.nabla(joyce_conn, joyce.w, joyce.w))


def test_lambda_dump_shape(joyce_conn):
    d = obata.to_json_dict(joyce_conn)
    assert len(d["lambda"]) == 8 and len(d["lambda"][0]) == 8
