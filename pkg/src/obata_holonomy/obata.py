"""The Obata connection of a left-invariant hypercomplex structure.

A left-invariant connection is a bilinear map Lambda: g x g -> g with
nabla_X Y = Lambda_X Y on left-invariant fields.  ``Connection.lam[i]`` is
the matrix of Lambda_{e_i}; its column j is Lambda_{e_i} e_j.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from . import exact as ex
from . import lie
from .hyper import HypercomplexLieAlgebra, verify_hypercomplex
from .report import CheckReport

F = Fraction


class UniquenessError(RuntimeError):
    """The torsion-free, I- and J-parallel system is not uniquely solvable."""


@dataclass(frozen=True)
class Connection:
    hyper: HypercomplexLieAlgebra
    lam: tuple  # lam[i] = matrix of Lambda_{e_i}

    @property
    def dim(self) -> int:
        return len(self.lam)

    def matrix(self, X: Sequence) -> list:
        """Matrix of Lambda_X."""
        n = self.dim
        out = ex.zeros(n)
        for x, L in zip(X, self.lam):
            if x:
                for r in range(n):
                    for c, v in enumerate(L[r]):
                        if v:
                            out[r][c] += x * v
        return out

    def matrices(self) -> list[list]:
        return [[list(r) for r in L] for L in self.lam]


def _from_columns(H: HypercomplexLieAlgebra, f) -> Connection:
    n = H.dim
    e = [ex.unit(n, i) for i in range(n)]
    lam = []
    for i in range(n):
        cols = [f(e[i], e[j]) for j in range(n)]
        lam.append(tuple(tuple(r) for r in ex.transpose(cols)))
    return Connection(H, tuple(lam))


def obata_formula(H: HypercomplexLieAlgebra, X: Sequence, Y: Sequence) -> list:
    """(1/2)([X,Y] + I[IX,Y] - J[X,JY] + K[IX,JY])."""
    S = H.structures
    I, J, K = S["I"], S["J"], S["K"]
    br = H.bracket
    IX, JY = ex.matvec(I, X), ex.matvec(J, Y)
    s = br(X, Y)
    s = ex.vadd(s, ex.matvec(I, br(IX, Y)))
    s = ex.vsub(s, ex.matvec(J, br(X, JY)))
    s = ex.vadd(s, ex.matvec(K, br(IX, JY)))
    return ex.vscale(F(1, 2), s)


def obata_lambda(H: HypercomplexLieAlgebra) -> Connection:
    return _from_columns(H, lambda X, Y: obata_formula(H, X, Y))


def _idx(n: int, i: int, a: int, b: int) -> int:
    return (i * n + a) * n + b


def uniqueness_system(H: HypercomplexLieAlgebra, parallel: Sequence[str] = ("I", "J")):
    """Sparse affine system in the n^3 entries of Lambda.

    Unknown (i, a, b) is the e_a coefficient of Lambda_{e_i} e_b.  Rows:
    torsion Lambda_i e_j - Lambda_j e_i = [e_i, e_j], and Lambda_i A = A Lambda_i
    for each A named in ``parallel``.
    """
    n = H.dim
    c = H.algebra.structure_constants
    eqs = []
    for i, j in combinations(range(n), 2):
        for a in range(n):
            eqs.append(({_idx(n, i, a, j): F(1), _idx(n, j, a, i): F(-1)}, c[i][j][a]))
    S = H.structures
    for name in parallel:
        A = S[name]
        for i in range(n):
            # (Lambda_i A - A Lambda_i)[a][b] = sum_k L[a][k] A[k][b] - A[a][k] L[k][b]
            for a in range(n):
                for b in range(n):
                    row: dict[int, Fraction] = {}
                    for k in range(n):
                        if A[k][b]:
                            key = _idx(n, i, a, k)
                            row[key] = row.get(key, F(0)) + A[k][b]
                        if A[a][k]:
                            key = _idx(n, i, k, b)
                            row[key] = row.get(key, F(0)) - A[a][k]
                    row = {k: v for k, v in row.items() if v}
                    if row:
                        eqs.append((row, F(0)))
    return eqs, n ** 3


def solve_unique_connection(H: HypercomplexLieAlgebra) -> Connection:
    """Solve torsion = 0, nabla I = nabla J = 0 exactly and demand one solution.

    nabla K = 0 follows from K = IJ and is checked afterwards.
    """
    eqs, nvars = uniqueness_system(H)
    try:
        x, null = ex.solve_sparse_affine(eqs, nvars)
    except ex.InconsistentSystem as err:
        raise UniquenessError("no torsion-free hypercomplex connection") from err
    if null.dim:
        raise UniquenessError(f"solution set has dimension {null.dim}")
    n = H.dim
    lam = tuple(tuple(tuple(x[_idx(n, i, a, b)] for b in range(n)) for a in range(n))
                for i in range(n))
    C = Connection(H, lam)
    if C.lam != obata_lambda(H).lam:
        raise UniquenessError("unique solution differs from the Obata formula")
    K = H.structures["K"]
    if any(ex.commutator(L, K) != ex.zeros(n) for L in C.matrices()):
        raise UniquenessError("nabla K != 0")
    return C


# ---------------------------------------------------------------------------
# covariant derivatives of left-invariant tensors


def nabla(C: Connection, X: Sequence, Y: Sequence) -> list:
    return ex.matvec(C.matrix(X), Y)


def nabla_endo(C: Connection, A, X: Sequence) -> list:
    """(nabla_X A) = [Lambda_X, A]."""
    return ex.commutator(C.matrix(X), [list(r) for r in A])


def nabla_form(C: Connection, h, X: Sequence) -> lie.BilinearForm:
    """(nabla_X h)(Y, Z) = -h(Lambda_X Y, Z) - h(Y, Lambda_X Z)."""
    g = h.matrix if isinstance(h, lie.BilinearForm) else [list(r) for r in h]
    L = C.matrix(X)
    gl = ex.matmul(g, L)
    out = ex.scale(-1, ex.add(ex.transpose(gl), gl))
    return lie.BilinearForm(tuple(tuple(r) for r in out))


def second_covariant(C: Connection, V: Sequence, X: Sequence, Y: Sequence) -> list:
    """(nabla^2 V)(X, Y) = Lambda_X Lambda_Y V - Lambda_{Lambda_X Y} V."""
    return ex.vsub(nabla(C, X, nabla(C, Y, V)), nabla(C, nabla(C, X, Y), V))


def torsion(C: Connection, X: Sequence, Y: Sequence) -> list:
    return ex.vsub(ex.vsub(nabla(C, X, Y), nabla(C, Y, X)), C.hyper.bracket(X, Y))


def parallel_fields(C: Connection) -> ex.Subspace:
    """Left-invariant V with Lambda_X V = 0 for all X."""
    rows = [list(r) for L in C.lam for r in L]
    return ex.solve_homogeneous(rows)


# ---------------------------------------------------------------------------


def verify_connection(C: Connection) -> CheckReport:
    """Torsion, nabla I = nabla J = nabla K = 0, grading, and the dbar split."""
    H = C.hyper
    n = H.dim
    p = f"{H.name}.connection"
    rep = CheckReport()
    e = [ex.unit(n, i) for i in range(n)]
    bad = sum(not ex.is_zero(torsion(C, e[i], e[j])) for i, j in combinations(range(n), 2))
    rep.add(f"{p}.torsion_free", "unique torsion-free connection", "0 nonzero pairs",
            f"{bad} nonzero pairs")
    for name, A in H.structures.items():
        bad = sum(not ex.is_zero(nabla_endo(C, A, e[i])) for i in range(n))
        rep.add(f"{p}.parallel_{name}", "nabla I = nabla J = nabla K = 0", 0, bad)

    from .hyper import dbar
    S = H.structures
    I, J, K = S["I"], S["J"], S["K"]
    bad = 0
    for i in range(n):
        for j in range(n):
            X, Y = e[i], e[j]
            holo = ex.vscale(F(1, 2), ex.vadd(ex.vscale(-1, ex.matvec(J, H.bracket(X, ex.matvec(J, Y)))),
                                              ex.matvec(K, H.bracket(ex.matvec(I, X), ex.matvec(J, Y)))))
            if ex.vadd(dbar(H, X, Y), holo) != nabla(C, X, Y):
                bad += 1
        # dbar is antilinear in X; the remaining part is linear in X
    rep.add(f"{p}.dbar_split", "nabla = dbar - J d J", 0, bad)

    g0, g1 = set(H.g0), set(H.g1)
    ok = True
    for i in range(n):
        for j in range(n):
            v = nabla(C, e[i], e[j])
            deg = (i in g1) + (j in g1)
            target = g1 if deg == 1 else g0
            if any(v[k] for k in range(n) if k not in target):
                ok = False
    rep.add(f"{p}.respects_grading", "the Obata connection respects the grading", True, ok)
    return rep


def verify_uniqueness(H: HypercomplexLieAlgebra) -> CheckReport:
    rep = CheckReport()
    p = f"{H.name}.connection"
    anchor = "unique torsion-free connection"
    try:
        C = solve_unique_connection(H)
        rep.add(f"{p}.unique_solution", anchor, "dim 0, equals formula", "dim 0, equals formula")
    except UniquenessError as err:
        rep.add(f"{p}.unique_solution", anchor, "dim 0, equals formula", str(err))
    eqs, nvars = uniqueness_system(H, parallel=("I",))
    x, null = ex.solve_sparse_affine(eqs, nvars)
    rep.add(f"{p}.without_nablaJ_nonunique", anchor, "dim > 0", f"dim {null.dim}", null.dim > 0)
    return rep


def euler_report(H: HypercomplexLieAlgebra, C: Connection) -> CheckReport:
    rep = CheckReport()
    p = f"{H.name}.euler"
    n = H.dim
    e = [ex.unit(n, i) for i in range(n)]
    E = list(H.euler)
    S = H.structures

    ad_e = H.algebra.ad(E)
    for name, A in S.items():
        rep.add(f"{p}.holomorphic_{name}", "E is holomorphic with respect to I, J, K", True,
                ex.commutator(ad_e, A) == ex.zeros(n))

    bad = sum(nabla(C, e[i], E) != e[i] for i in range(n))
    rep.add(f"{p}.nabla_E=Id", "nabla E = Id", "0 failures", f"{bad} failures")

    bad = sum(not ex.is_zero(second_covariant(C, E, e[i], e[j])) for i in range(n) for j in range(n))
    rep.add(f"{p}.nabla2_E=0", "nabla^2 E = 0", "0 failures", f"{bad} failures")

    h = lie.killing_form(H.algebra)
    got = nabla_form(C, h, E)
    rep.add(f"{p}.nabla_E_h=-2h", "nabla_E h = -2h", True,
            got.matrix == ex.scale(-2, h.matrix))
    degenerate = ex.determinant(h.matrix) == 0
    for name, A in S.items():
        cid = f"{p}.nabla_{name}E_h=0"
        anchor = "nabla_IE h = nabla_JE h = nabla_KE h = 0"
        if degenerate:
            rep.skip(cid, anchor, "Killing form is degenerate, not quaternionic Hermitian")
        else:
            rep.add(cid, anchor, True, ex.is_zero(nabla_form(C, h, ex.matvec(A, E)).matrix))

    rep.add(f"{p}.parallel_fields_dim", "E is unique when it exists", 0, parallel_fields(C).dim)

    if H.w is None:
        rep.skip(f"{p}.nabla_W_W_nonzero", "choose W with nabla_W W != 0", "g1 is empty")
    else:
        rep.add(f"{p}.nabla_W_W_nonzero", "choose W with nabla_W W != 0", True,
                not ex.is_zero(nabla(C, H.w, H.w)))
    return rep


def to_json_dict(C: Connection) -> dict:
    return {"name": C.hyper.name, "labels": list(C.hyper.algebra.basis_labels),
            "lambda": [[[ex.fmt(x) for x in r] for r in L] for L in C.lam]}


def dumps(C: Connection) -> str:
    return json.dumps(to_json_dict(C), indent=2)
