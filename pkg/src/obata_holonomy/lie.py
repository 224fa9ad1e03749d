"""Lie algebras given by rational structure constants."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from . import exact as ex
from .report import CheckReport

# complex rational matrices are (real, imag) pairs of rational matrices
CMat = tuple


def _cmul(a: CMat, b: CMat) -> CMat:
    ar, ai = a
    br, bi = b
    return (ex.sub(ex.matmul(ar, br), ex.matmul(ai, bi)),
            ex.add(ex.matmul(ar, bi), ex.matmul(ai, br)))


def _csub(a: CMat, b: CMat) -> CMat:
    return ex.sub(a[0], b[0]), ex.sub(a[1], b[1])


def _ccomb(coeffs: Sequence[Fraction], mats: Sequence[CMat]) -> CMat:
    n = len(mats[0][0])
    re, im = ex.zeros(n), ex.zeros(n)
    for c, (mr, mi) in zip(coeffs, mats):
        if c:
            re = ex.add(re, ex.scale(c, mr))
            im = ex.add(im, ex.scale(c, mi))
    return re, im


@dataclass(frozen=True)
class LieAlgebra:
    dim: int
    structure_constants: tuple  # c[i][j] = coordinates of [e_i, e_j]
    basis_labels: tuple[str, ...]
    matrix_realization: tuple | None = None

    def bracket(self, x: Sequence, y: Sequence) -> list:
        return bracket(self, x, y)

    def ad(self, x: Sequence) -> list:
        """Matrix of ad_x; column j holds [x, e_j]."""
        cols = [bracket(self, x, ex.unit(self.dim, j)) for j in range(self.dim)]
        return ex.transpose(cols)

    def basis(self) -> list[list]:
        return [ex.unit(self.dim, i) for i in range(self.dim)]


@dataclass(frozen=True)
class BilinearForm:
    gram: tuple

    def __call__(self, x: Sequence, y: Sequence) -> Fraction:
        return sum((a * g * b for a, row in zip(x, self.gram) if a
                    for g, b in zip(row, y) if g and b), Fraction(0))

    @property
    def matrix(self) -> list:
        return [list(r) for r in self.gram]

    def is_symmetric(self) -> bool:
        return self.matrix == ex.transpose(self.matrix)

    def is_negative_definite(self) -> bool:
        return ex.is_negative_definite(self.matrix)


def from_structure_constants(c, labels=None, realization=None) -> LieAlgebra:
    dim = len(c)
    c = tuple(tuple(tuple(ex.frac(x) for x in c[i][j]) for j in range(dim)) for i in range(dim))
    labels = tuple(labels) if labels else tuple(f"e{i + 1}" for i in range(dim))
    return LieAlgebra(dim, c, labels, realization)


def bracket(L: LieAlgebra, x: Sequence, y: Sequence) -> list:
    if len(x) != L.dim or len(y) != L.dim:
        raise ex.DimensionError(f"bracket needs vectors of length {L.dim}")
    out = [Fraction(0)] * L.dim
    c = L.structure_constants
    for i, a in enumerate(x):
        if not a:
            continue
        ci = c[i]
        for j, b in enumerate(y):
            if not b:
                continue
            ab = a * b
            for k, v in enumerate(ci[j]):
                if v:
                    out[k] += ab * v
    return out


# ---------------------------------------------------------------------------
# su(n)


def _su_basis(n: int) -> tuple[list[CMat], list[str]]:
    """Skew-Hermitian traceless basis, grouped by growing leading block.

    For each m = 2..n: the diagonal element i*diag(1,..,1,-(m-1),0..) and then
    the pairs E_pm - E_mp, i(E_pm + E_mp) for p < m.  For n = 3 this is
    diag(i,-i,0), E12-E21, i(E12+E21), diag(i,i,-2i), then the (1,3) and
    (2,3) pairs: the d block, the b direction, the f block.
    """
    zero = lambda: ex.zeros(n)
    mats, labels = [], []
    for m in range(2, n + 1):
        im = zero()
        for k in range(m - 1):
            im[k][k] = Fraction(1)
        im[m - 1][m - 1] = Fraction(-(m - 1))
        mats.append((zero(), im))
        labels.append(f"h{m}")
        for p in range(1, m):
            re = zero()
            re[p - 1][m - 1], re[m - 1][p - 1] = Fraction(1), Fraction(-1)
            mats.append((re, zero()))
            labels.append(f"a{p}{m}")
            im = zero()
            im[p - 1][m - 1] = im[m - 1][p - 1] = Fraction(1)
            mats.append((zero(), im))
            labels.append(f"s{p}{m}")
    return mats, labels


def _su_coordinates(n: int, mat: CMat, labels: Sequence[str]) -> list:
    re, im = mat
    diag = [im[k][k] for k in range(n)]
    out = []
    for lab in labels:
        if lab[0] == "h":
            m = int(lab[1:])
            h = [Fraction(1)] * (m - 1) + [Fraction(-(m - 1))] + [Fraction(0)] * (n - m)
            out.append(sum((a * b for a, b in zip(diag, h)), Fraction(0))
                       / sum((b * b for b in h), Fraction(0)))
        else:
            p, m = int(lab[1]), int(lab[2])
            out.append(re[p - 1][m - 1] if lab[0] == "a" else im[p - 1][m - 1])
    return out


def build_su(n: int) -> LieAlgebra:
    """su(n) with exact structure constants and its defining matrix realization."""
    if n < 2:
        raise ValueError("su(n) needs n >= 2")
    if n > 9:
        raise ValueError("labels assume single-digit matrix indices")
    mats, labels = _su_basis(n)
    dim = len(mats)
    c = [[None] * dim for _ in range(dim)]
    for i in range(dim):
        for j in range(dim):
            comm = _csub(_cmul(mats[i], mats[j]), _cmul(mats[j], mats[i]))
            c[i][j] = _su_coordinates(n, comm, labels)
    return from_structure_constants(c, labels, tuple(mats))


def killing_form(L: LieAlgebra) -> BilinearForm:
    ads = [L.ad(e) for e in L.basis()]
    gram = [[ex.trace(ex.matmul(ads[i], ads[j])) for j in range(L.dim)] for i in range(L.dim)]
    return BilinearForm(tuple(tuple(r) for r in gram))


def verify_lie_axioms(L: LieAlgebra, prefix: str = "algebra") -> CheckReport:
    rep = CheckReport()
    anchor = "Lie algebra axioms"
    e = L.basis()
    bad = [(i, j) for i in range(L.dim) for j in range(L.dim)
           if ex.vadd(bracket(L, e[i], e[j]), bracket(L, e[j], e[i])) != [0] * L.dim]
    rep.add(f"{prefix}.antisymmetry", anchor, "0 violations",
            f"{len(bad)} violations" + (f", first {bad[0]}" if bad else ""))
    bad = []
    for i, j, k in combinations(range(L.dim), 3):
        s = ex.vadd(ex.vadd(bracket(L, e[i], bracket(L, e[j], e[k])),
                            bracket(L, e[j], bracket(L, e[k], e[i]))),
                    bracket(L, e[k], bracket(L, e[i], e[j])))
        if not ex.is_zero(s):
            bad.append((L.basis_labels[i], L.basis_labels[j], L.basis_labels[k]))
    rep.add(f"{prefix}.jacobi", anchor, "0 violations",
            f"{len(bad)} violations" + (f", first {bad[0]}" if bad else ""))
    if L.matrix_realization is not None:
        mats = L.matrix_realization
        bad = []
        for i in range(L.dim):
            for j in range(L.dim):
                comm = _csub(_cmul(mats[i], mats[j]), _cmul(mats[j], mats[i]))
                if comm != _ccomb(L.structure_constants[i][j], mats):
                    bad.append((i, j))
        rep.add(f"{prefix}.matrix_realization", anchor, "0 violations", f"{len(bad)} violations")
    else:
        rep.skip(f"{prefix}.matrix_realization", anchor, "no exact matrix realization")
    return rep


def to_json_dict(L: LieAlgebra) -> dict:
    return {
        "dim": L.dim,
        "labels": list(L.basis_labels),
        "structure_constants": [[[ex.fmt(x) for x in L.structure_constants[i][j]]
                                 for j in range(L.dim)] for i in range(L.dim)],
    }


def dumps(L: LieAlgebra) -> str:
    return json.dumps(to_json_dict(L), indent=2)
