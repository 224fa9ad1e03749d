from fractions import Fraction as F

import numpy as np
import pytest

from obata_holonomy import exact as ex
from obata_holonomy import lie


@pytest.mark.parametrize("n", [2, 3, 4])
def test_su_n_axioms(n):
    L = lie.build_su(n)
    assert L.dim == n * n - 1
    rep = lie.verify_lie_axioms(L, prefix=f"su{n}")
    assert rep.ok, rep.to_text()


def test_su3_labels_and_a_bracket():
    L = lie.build_su(3)
    assert L.basis_labels == ("h2", "a12", "s12", "h3", "a13", "s13", "a23", "s23")
    e = L.basis()
    # [diag(i,i,-2i), E13 - E31] = 3 i (E13 + E31)
    assert L.bracket(e[3], e[4]) == ex.vscale(3, e[5])


def test_killing_form_su3_matches_6_trace():
    L = lie.build_su(3)
    h = lie.killing_form(L)
    assert h.is_symmetric() and h.is_negative_definite()
    mats = [np.array(re, float) + 1j * np.array(im, float)
            for re, im in ((np.array([[float(x) for x in r] for r in m[0]]),
                            np.array([[float(x) for x in r] for r in m[1]]))
                           for m in L.matrix_realization)]
    oracle = np.array([[6 * np.trace(a @ b).real for b in mats] for a in mats])
    assert np.allclose(np.array(h.matrix, float), oracle)
    assert h.matrix[0][0] == -12 and h.matrix[3][3] == -36


def test_killing_form_su2():
    h = lie.killing_form(lie.build_su(2))
    assert h.matrix[0][0] == -8


def test_bracket_dimension_error():
    L = lie.build_su(2)
    with pytest.raises(ex.DimensionError):
        L.bracket([1, 0], [0, 1, 0])


def test_build_su_rejects_small_n():
    with pytest.raises(ValueError):
        lie.build_su(1)


def test_broken_constants_fail_jacobi():
    # in dimension 3 every such rescaling is still a Lie algebra; use su(3)
    c = [[list(x) for x in row] for row in lie.build_su(3).structure_constants]
    c[0][1] = ex.vscale(5, c[0][1])
    c[1][0] = ex.vscale(5, c[1][0])
    rep = lie.verify_lie_axioms(lie.from_structure_constants(c), prefix="broken")
    assert rep["broken.antisymmetry"].status == "pass"
    assert rep["broken.jacobi"].status == "fail"


def test_json_uses_rational_strings():
    d = lie.to_json_dict(lie.build_su(2))
    assert d["dim"] == 3
    assert all("/" in x for row in d["structure_constants"] for v in row for x in v)
