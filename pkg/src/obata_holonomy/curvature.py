"""Curvature of a left-invariant connection and its identities."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from . import exact as ex
from .obata import Connection, second_covariant
from .report import CheckReport

F = Fraction


def curvature_endo(C: Connection, X: Sequence, Y: Sequence) -> list:
    """R(X, Y) = [Lambda_X, Lambda_Y] - Lambda_[X,Y]."""
    LX, LY = C.matrix(X), C.matrix(Y)
    return ex.sub(ex.commutator(LX, LY), C.matrix(C.hyper.bracket(X, Y)))


@dataclass(frozen=True)
class CurvatureTensor:
    dim: int
    r: dict  # (i, j), i < j -> matrix of R(e_i, e_j)

    def __call__(self, i: int, j: int) -> list:
        if i == j:
            return ex.zeros(self.dim)
        if i < j:
            return self.r[i, j]
        return ex.scale(-1, self.r[j, i])

    def flattened(self) -> list[list]:
        return [ex.flatten(self.r[k]) for k in sorted(self.r)]


def curvature_tensor(C: Connection) -> CurvatureTensor:
    n = C.dim
    e = [ex.unit(n, i) for i in range(n)]
    return CurvatureTensor(n, {(i, j): curvature_endo(C, e[i], e[j])
                               for i, j in combinations(range(n), 2)})


def random_vectors(seed: int, count: int, dim: int) -> list[list]:
    """Seeded rational vectors with entries in {-3..3}/2."""
    rng = np.random.default_rng(seed)
    ints = rng.integers(-3, 4, size=(count, dim))
    return [[F(int(k), 2) for k in row] for row in ints]


def _apply(R, v):
    return ex.matvec(R, v)


def verify_curvature(C: Connection, seed: int = 0, n_random: int = 50) -> CheckReport:
    H = C.hyper
    n = H.dim
    p = f"{H.name}.curvature"
    rep = CheckReport()
    e = [ex.unit(n, i) for i in range(n)]
    S = H.structures
    I, J, K = S["I"], S["J"], S["K"]
    Rt = curvature_tensor(C)
    Rf = lambda X, Y: curvature_endo(C, X, Y)
    rnd = random_vectors(seed, 3 * n_random, n)
    rpairs = [(rnd[3 * t], rnd[3 * t + 1]) for t in range(n_random)]
    rtriples = [(rnd[3 * t], rnd[3 * t + 1], rnd[3 * t + 2]) for t in range(n_random)]
    bpairs = [(e[i], e[j]) for i in range(n) for j in range(n)]

    flat = all(ex.is_zero(m) for m in Rt.r.values())
    rep.add(f"{p}.flat", "the Obata connection is not flat" if H.g1 else "flat Hopf case",
            not bool(H.g1), flat)

    # (a) SU(2)-invariance
    anchor = "R(IX,IY) = R(JX,JY) = R(KX,KY) = R(X,Y)"
    bad = 0
    for X, Y in bpairs + rpairs:
        R0 = Rf(X, Y)
        for A in (I, J, K):
            if Rf(ex.matvec(A, X), ex.matvec(A, Y)) != R0:
                bad += 1
    rep.add(f"{p}.su2_invariance", anchor, 0, bad)

    # (b) H-linearity
    anchor = "R(X,Y) is H-linear"
    bad = sum(ex.commutator(Rt.r[k], A) != ex.zeros(n) for k in Rt.r for A in (I, J, K))
    bad += sum(ex.commutator(Rf(X, Y), A) != ex.zeros(n) for X, Y in rpairs for A in (I, J, K))
    rep.add(f"{p}.H_linear", anchor, 0, bad)

    # (c) first Bianchi
    anchor = "first Bianchi identity"
    bad = 0
    for i, j, k in combinations(range(n), 3):
        s = [Rt(i, j)[a][k] + Rt(j, k)[a][i] + Rt(k, i)[a][j] for a in range(n)]
        bad += not ex.is_zero(s)
    for X, Y, Z in rtriples:
        s = ex.vadd(ex.vadd(_apply(Rf(X, Y), Z), _apply(Rf(Y, Z), X)), _apply(Rf(Z, X), Y))
        bad += not ex.is_zero(s)
    rep.add(f"{p}.bianchi", anchor, 0, bad)

    # (d) R(X,IX)X + J R(X,KX)X - K R(X,JX)X = 0
    anchor = "R(X,IX)X + JR(X,KX)X - KR(X,JX)X = 0"
    bad = 0
    for X in e + rnd[:n_random]:
        t1 = _apply(Rf(X, ex.matvec(I, X)), X)
        t2 = ex.matvec(J, _apply(Rf(X, ex.matvec(K, X)), X))
        t3 = ex.matvec(K, _apply(Rf(X, ex.matvec(J, X)), X))
        bad += not ex.is_zero(ex.vsub(ex.vadd(t1, t2), t3))
    rep.add(f"{p}.lemma_identity", anchor, 0, bad)

    # (f) R(X,Y)E = 0, (e) R(E,X)X = 0 and R(E,IX)IX = -R(E,X)X
    E = list(H.euler)
    bad = sum(not ex.is_zero(_apply(m, E)) for m in Rt.r.values())
    bad += sum(not ex.is_zero(_apply(Rf(X, Y), E)) for X, Y in rpairs)
    rep.add(f"{p}.R_kills_E", "g0 lies in the kernel of R(X,Y)", 0, bad)
    bad = 0
    for X in e + rnd[:n_random]:
        rxx = _apply(Rf(E, X), X)
        bad += not ex.is_zero(rxx)
        for A in (I, J, K):
            AX = ex.matvec(A, X)
            bad += _apply(Rf(E, AX), AX) != ex.vscale(-1, rxx)
    rep.add(f"{p}.R(E,X)X=0", "R(Z,X)X = 0 when R(.,.)Z = 0", 0, bad)

    # (g) grading facts
    g0, g1 = list(H.g0), list(H.g1)
    anchor = "R(X,Y) on g1 by degree of X, Y"
    if g1:
        bad = sum(not ex.is_zero([Rt(i, j)[r][c] for r in range(n) for c in g1])
                  for i in g0 for j in g0 if i != j)
        rep.add(f"{p}.grading.g0g0_kills_g1", anchor, 0, bad)
        bad = sum(not ex.is_zero([Rt(i, j)[r][c] for r in range(n) for c in g1])
                  for i in g0 for j in g1)
        rep.add(f"{p}.grading.g0g1_kills_g1", anchor, 0, bad)
        bad = sum(not ex.is_zero([Rt(i, j)[r][c] for r in g0 for c in g1])
                  for i in g1 for j in g1 if i != j)
        rep.add(f"{p}.grading.g1g1_preserves_g1", anchor, 0, bad)
        image = ex.span([[m[r][c] for r in range(n)] for m in Rt.r.values() for c in range(n)], n)
        rep.add(f"{p}.grading.image_dim", "R(X,Y)g1 = g1", len(g1), image.dim)
    else:
        rep.skip(f"{p}.grading", anchor, "g1 is empty")

    # (h) span{Z1, Z2, Z3}
    anchor = "span{Z1, Z2, Z3} is at least two-dimensional"
    if H.w is not None:
        W = list(H.w)
        zs = [_apply(Rf(W, ex.matvec(A, W)), W) for A in (I, J, K)]
        d = ex.span(zs, n).dim
        rep.add(f"{p}.Z_span_dim", anchor, ">= 2", d, d >= 2)
    else:
        rep.skip(f"{p}.Z_span_dim", anchor, "no W (g1 is empty)")

    # cross-check against Alt(nabla^2 Z)
    anchor = "R(X,Y)Z = Alt(nabla^2 Z)(X,Y)"
    bad = 0
    for i, j in combinations(range(n), 2):
        for k in range(n):
            alt = ex.vsub(second_covariant(C, e[k], e[i], e[j]), second_covariant(C, e[k], e[j], e[i]))
            bad += alt != _apply(Rt.r[i, j], e[k])
    rep.add(f"{p}.alt_second_covariant", anchor, 0, bad)

    rep.add(f"{p}.seed_rank", "holonomy algebra contains all R(X,Y)",
            "recorded", ex.span(Rt.flattened(), n * n).dim, True)
    return rep


def to_json_dict(C: Connection) -> dict:
    Rt = curvature_tensor(C)
    return {"name": C.hyper.name,
            "curvature": {f"{i},{j}": [[ex.fmt(x) for x in r] for r in m]
                          for (i, j), m in sorted(Rt.r.items())}}


def dumps(C: Connection) -> str:
    return json.dumps(to_json_dict(C), indent=2)
