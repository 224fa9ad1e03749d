"""Holonomy algebra of a left-invariant connection and its identification.

The holonomy algebra is computed infinitesimally: start from all curvature
endomorphisms R(e_i, e_j), then close under X -> [Lambda_{e_k}, X] and under
the matrix commutator.  Endomorphisms of g are flattened row-major into
Q^(n*n).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from . import exact as ex
from . import lie
from .curvature import curvature_tensor
from .hyper import HypercomplexLieAlgebra
from .obata import Connection
from .report import CheckReport

F = Fraction


class ComplementError(ValueError):
    """Subspaces that were required to be pairwise complementary are not."""


@dataclass(frozen=True)
class EndoSubspace:
    n: int
    sub: ex.Subspace

    @property
    def dim(self) -> int:
        return self.sub.dim

    def matrices(self) -> list[list]:
        return [ex.unflatten(v, self.n) for v in self.sub.basis]

    def __contains__(self, m) -> bool:
        return ex.flatten(m) in self.sub

    def issubspace(self, other: "EndoSubspace") -> bool:
        return self.sub.issubspace(other.sub)

    def __eq__(self, other) -> bool:
        return isinstance(other, EndoSubspace) and self.n == other.n and self.sub == other.sub

    def __hash__(self):
        return hash((self.n, self.sub.basis))


def _commutator_flat(n: int):
    def prod(u, v):
        return ex.flatten(ex.commutator(ex.unflatten(u, n), ex.unflatten(v, n)))
    return prod


def _ad_flat(n: int, L):
    L = [list(r) for r in L]

    def f(v):
        return ex.flatten(ex.commutator(L, ex.unflatten(v, n)))
    return f


def curvature_seed(C: Connection) -> list[list]:
    return curvature_tensor(C).flattened()


def close(C: Connection, seed: Sequence[Sequence]) -> EndoSubspace:
    n = C.dim
    sub = ex.subspace_closure(seed, maps=[_ad_flat(n, L) for L in C.lam],
                              product=_commutator_flat(n), ambient_dim=n * n)
    return EndoSubspace(n, sub)


def nomizu_closure(C: Connection) -> EndoSubspace:
    return close(C, curvature_seed(C))


def commutant(gens: Sequence, n: int | None = None) -> EndoSubspace:
    """All X with AX = XA for every A in ``gens`` (Sylvester nullspace)."""
    gens = [ex.matrix(A) for A in gens]
    if n is None:
        if not gens:
            raise ex.DimensionError("matrix size unknown for an empty generator list")
        n = len(gens[0])
    for A in gens:
        if ex.shape(A) != (n, n):
            raise ex.DimensionError(f"generator of shape {ex.shape(A)}, expected {(n, n)}")
    rows = []
    Id = ex.identity(n)
    for A in gens:
        rows += ex.sub(ex.kron(A, Id), ex.kron(Id, ex.transpose(A)))
    return EndoSubspace(n, ex.solve_homogeneous(rows, cols=n * n))


# ---------------------------------------------------------------------------
# invariant tensors

VALENCES = {
    "1,0": "vectors",
    "0,1": "covectors",
    "0,2": "bilinear forms",
    "2,0": "bivectors",
    "1,1": "endomorphisms",
    "0,2s": "symmetric bilinear forms",
    "top": "top forms",
}


def parse_valence(text: str) -> str:
    key = text.replace(" ", "").lower()
    aliases = {"sym": "0,2s", "0,2-symmetric": "0,2s", "0,2sym": "0,2s", "top-form": "top"}
    key = aliases.get(key, key)
    if key not in VALENCES:
        raise ValueError(f"unsupported valence {text!r}; choose from {', '.join(VALENCES)}")
    return key


def _action_rows(A, valence: str, n: int) -> list[list]:
    Id = ex.identity(n)
    At = ex.transpose(A)
    if valence == "1,0":
        return A
    if valence == "0,1":
        return At
    if valence == "0,2" or valence == "0,2s":
        # B -> A^T B + B A
        return ex.add(ex.kron(At, Id), ex.kron(Id, At))
    if valence == "2,0":
        # T -> A T + T A^T
        return ex.add(ex.kron(A, Id), ex.kron(Id, A))
    if valence == "1,1":
        return ex.sub(ex.kron(A, Id), ex.kron(Id, At))
    raise ValueError(valence)


def invariant_tensor_dims(hol: EndoSubspace, valence: str) -> int:
    """Dimension of the tensors of ``valence`` killed by every element of hol."""
    valence = parse_valence(valence)
    n = hol.n
    mats = hol.matrices()
    if valence == "top":
        return int(all(ex.trace(A) == 0 for A in mats))
    cols = n if valence in ("1,0", "0,1") else n * n
    rows = []
    for A in mats:
        rows += _action_rows(A, valence, n)
    if valence == "0,2s":
        for i, j in combinations(range(n), 2):
            r = [F(0)] * cols
            r[i * n + j], r[j * n + i] = F(1), F(-1)
            rows.append(r)
    return ex.solve_homogeneous(rows, cols=cols).dim


INVARIANT_NAMES = (("1,0", "vectors"), ("0,1", "covectors"), ("0,2", "bilinear"),
                   ("0,2s", "metrics"), ("2,0", "bivectors"), ("1,1", "endos"),
                   ("top", "top_forms"))


def invariant_profile(hol: EndoSubspace) -> dict[str, int]:
    return {name: invariant_tensor_dims(hol, v) for v, name in INVARIANT_NAMES}


# ---------------------------------------------------------------------------
# the quaternion algebra test for a 4-dimensional matrix algebra


def quaternion_normal_form(alg: EndoSubspace) -> dict | None:
    """Exhibit alg as a generalized quaternion algebra (-a, -b).

    Returns {"a", "b", "is_H"} or None when alg is not of that shape.  The
    algebra is the real quaternions exactly when a > 0 and b > 0.
    """
    n = alg.n
    Id = ex.identity(n)
    if alg.dim != 4 or Id not in alg:
        return None
    # project the basis onto trace zero
    proj = [ex.sub(m, ex.scale(ex.trace(m) / n, Id)) for m in alg.matrices()]
    space = ex.span([ex.flatten(m) for m in proj], n * n)
    if space.dim != 3:
        return None
    t = [ex.unflatten(v, n) for v in space.basis]
    x = _anisotropic(t)
    if x is None:
        return None
    a = -ex.matmul(x, x)[0][0]
    # anticommuting parts: c + (1/a) x c x = 2 * (part of c anticommuting with x)
    anti = [ex.add(c, ex.scale(F(1) / a, ex.matmul(ex.matmul(x, c), x))) for c in t]
    anti_space = ex.span([ex.flatten(m) for m in anti], n * n)
    if anti_space.dim != 2:
        return None
    y = _anisotropic([ex.unflatten(v, n) for v in anti_space.basis])
    if y is None:
        return None
    b = -ex.matmul(y, y)[0][0]
    xy = ex.matmul(x, y)
    if ex.add(xy, ex.matmul(y, x)) != ex.zeros(n) or ex.flatten(xy) not in alg.sub:
        return None
    if ex.matmul(xy, xy) != ex.scale(-a * b, Id):
        return None
    return {"a": a, "b": b, "is_H": a > 0 and b > 0}


def _anisotropic(cands: list) -> list | None:
    """An element among cands or pairwise sums whose square is a nonzero scalar."""
    pool = list(cands) + [ex.add(a, b) for a, b in combinations(cands, 2)]
    for x in pool:
        x2 = ex.matmul(x, x)
        if _is_scalar(x2) and x2[0][0] != 0:
            return x
    return None


def _is_scalar(m) -> bool:
    n = len(m)
    return m == ex.scale(m[0][0], ex.identity(n))


def is_algebra(alg: EndoSubspace) -> bool:
    mats = alg.matrices()
    return all(ex.flatten(ex.matmul(a, b)) in alg.sub for a in mats for b in mats)


# ---------------------------------------------------------------------------
# witnesses


def g0_annihilator(hol: EndoSubspace, H: HypercomplexLieAlgebra) -> ex.Subspace:
    """{A in hol : A g0 = 0}, in coordinates of the flattened ambient space."""
    mats = hol.matrices()
    n = hol.n
    # unknown coefficients c_k; condition sum_k c_k A_k[:, g0] = 0
    rows = [[A[r][c] for A in mats] for r in range(n) for c in H.g0]
    coeff = ex.solve_homogeneous(rows, cols=len(mats))
    vecs = [ex.lincomb(c, hol.sub.basis) for c in coeff.basis]
    return ex.span(vecs, n * n)


def quaternion_scalar_witness(C: Connection, hol: EndoSubspace) -> dict:
    """R(W, IW): zero on g0, right multiplication by a quaternion on g1."""
    H = C.hyper
    n = H.dim
    W = list(H.w)
    IW = H.apply("I", W)
    from .curvature import curvature_endo
    A = curvature_endo(C, W, IW)
    g0, g1 = list(H.g0), list(H.g1)
    kills_g0 = all(A[r][c] == 0 for r in range(n) for c in g0)
    block = [[A[r][c] for c in g1] for r in g1]
    off = all(A[r][c] == 0 for r in g0 for c in g1)
    S = H.structures
    commutes = all(ex.commutator(block, [[M[r][c] for c in g1] for r in g1]) == ex.zeros(len(g1))
                   for M in S.values())
    scalar = _is_scalar(block)
    return {"matrix": A, "in_hol": A in hol, "kills_g0": kills_g0, "preserves_g1": off,
            "H_linear_on_g1": commutes, "nonreal": not scalar and not ex.is_zero(block),
            "eigenvalues": ex.distinct_eigenvalue_count(A)}


def trace_witness(hol: EndoSubspace):
    for A in hol.matrices():
        if ex.trace(A) != 0:
            return A
    return None


# ---------------------------------------------------------------------------
# reports


def identify_gl2h(hol: EndoSubspace, H: HypercomplexLieAlgebra, C: Connection | None = None,
                  prefix: str = "holonomy") -> CheckReport:
    rep = CheckReport()
    n = H.dim
    p = prefix
    thm = "the holonomy of the Obata connection on SU(3) is GL(2,H)"
    rep.add(f"{p}.dim", thm, 16, hol.dim)
    S = H.structures
    Q = commutant(list(S.values()), n)
    rep.add(f"{p}.commutant_IJK_dim", "gl(2,H) = commutant of I, J, K; real dimension 16", 16, Q.dim)
    rep.add(f"{p}.hol_in_commutant", thm, True, hol.issubspace(Q))
    rep.add(f"{p}.commutant_in_hol", thm, True, Q.issubspace(hol))
    rep.add(f"{p}.equals_gl2H", thm, True, hol == Q)

    mats = hol.matrices()
    bad = sum(ex.flatten(ex.commutator(a, b)) not in hol.sub for a, b in combinations(mats, 2))
    rep.add(f"{p}.lie_subalgebra", "holonomy algebra is closed under commutator", 0, bad)
    bad = sum(ex.commutator(A, M) != ex.zeros(n) for A in mats for M in S.values())
    rep.add(f"{p}.commutes_with_IJK", "nabla I = nabla J = nabla K = 0", 0, bad)

    if C is not None:
        again = close(C, hol.sub.basis)
        rep.add(f"{p}.closure_idempotent", "Nomizu closure", True, again == hol)
        seed = ex.span(curvature_seed(C), n * n)
        rep.add(f"{p}.seed_rank", "holonomy algebra contains all R(X,Y)",
                "recorded", seed.dim, seed.issubspace(hol.sub))

    comm = commutant(mats, n)
    rep.add(f"{p}.commutant_of_hol_dim", "does not commute with any non-scalar operator beyond H", 4,
            comm.dim)
    qnf = quaternion_normal_form(comm) if is_algebra(comm) else None
    rep.add(f"{p}.commutant_of_hol_quaternion", "commutant of hol is the quaternions",
            "(-a,-b) with a,b > 0",
            "not a quaternion algebra" if qnf is None
            else f"(-{ex.fmt(qnf['a'])},-{ex.fmt(qnf['b'])})",
            bool(qnf and qnf["is_H"]))
    span_ijk = ex.span([ex.flatten(ex.identity(n))] + [ex.flatten(M) for M in S.values()], n * n)
    rep.add(f"{p}.commutant_of_hol_is_span_1IJK", "commutant of hol is the quaternions", True,
            span_ijk == comm.sub)

    expected = {"vectors": 0, "covectors": 0, "bilinear": 0, "metrics": 0,
                "bivectors": 0, "endos": 4, "top_forms": 0}
    prof = invariant_profile(hol)
    anchors = {"metrics": "does not preserve any metric",
               "top_forms": "would preserve a holomorphic volume form, and this is impossible",
               "endos": "can preserve tensor fields only of type (k,k)"}
    for name, val in prof.items():
        rep.add(f"{p}.invariants.{name}", anchors.get(name, "can preserve tensor fields only of type (k,k)"),
                expected[name], val)

    A = trace_witness(hol)
    rep.add(f"{p}.trace_nonzero_element", "if the holonomy was SL(2,H)", "nonzero trace",
            "none" if A is None else f"trace {ex.fmt(ex.trace(A))}", A is not None)

    if C is not None and H.w is not None:
        wit = quaternion_scalar_witness(C, hol)
        ok = all(wit[k] for k in ("in_hol", "kills_g0", "preserves_g1", "H_linear_on_g1", "nonreal"))
        rep.add(f"{p}.quaternion_scalar_element",
                "an element that acts identically on g0 and multiplies g1 by a non-real quaternion",
                True, ok)
        rep.add(f"{p}.three_eigenvalue_element", "an operator with three distinct eigenvalues", 3,
                wit["eigenvalues"])
    ann = g0_annihilator(hol, H)
    rep.add(f"{p}.g0_annihilator_dim", "at least two-dimensional", ">= 2", ann.dim, ann.dim >= 2)
    return rep


def hopf_report(C: Connection, prefix: str = "holonomy.hopf") -> CheckReport:
    rep = CheckReport()
    hol = nomizu_closure(C)
    rep.add(f"{prefix}.dim", "the Obata connection on G0 is flat", 0, hol.dim)
    prof = invariant_profile(hol)
    n = C.dim
    full = {"vectors": n, "covectors": n, "bilinear": n * n, "metrics": n * (n + 1) // 2,
            "bivectors": n * n, "endos": n * n, "top_forms": 1}
    for name, val in prof.items():
        rep.add(f"{prefix}.invariants.{name}", "flat case: the trivial algebra fixes everything",
                full[name], val)
    return rep


# ---------------------------------------------------------------------------
# three complementary subspaces


def _basis_columns(V: ex.Subspace) -> list[list]:
    return ex.transpose(V.vectors()) if V.dim else []


def _projection(Vi: ex.Subspace, Vj: ex.Subspace) -> list:
    """Projection onto Vi along Vj."""
    n = Vi.dim
    B = ex.transpose(Vi.vectors() + Vj.vectors())
    D = ex.block_diag(ex.identity(n), ex.zeros(n))
    return ex.matmul(ex.matmul(B, D), ex.inverse(B))


def _check_complementary(Vs: Sequence[ex.Subspace]) -> int:
    amb = {V.ambient_dim for V in Vs}
    if len(amb) != 1:
        raise ComplementError("subspaces live in different ambient spaces")
    m = amb.pop()
    if m % 2 or any(V.dim != m // 2 for V in Vs):
        raise ComplementError("each subspace must have half the ambient dimension")
    for a, b in combinations(Vs, 2):
        if ex.span(a.vectors() + b.vectors(), m).dim != m:
            raise ComplementError("subspaces are not pairwise complementary")
    return m // 2


def projection_algebra_dim(V1: ex.Subspace, V2: ex.Subspace, V3: ex.Subspace) -> tuple[int, bool]:
    """Dimension of the algebra generated by the six projections, and whether
    the change of basis through A = P12 P31 puts P12, P21, A and P21 P32 in the
    block forms of the 2x2 matrix units."""
    n = _check_complementary([V1, V2, V3])
    Vs = {1: V1, 2: V2, 3: V3}
    P = {(i, j): _projection(Vs[i], Vs[j]) for i in Vs for j in Vs if i != j}
    m = 2 * n
    gens = [ex.flatten(P[k]) for k in sorted(P)]
    alg = ex.subspace_closure(
        gens, product=lambda u, v: ex.flatten(ex.matmul(ex.unflatten(u, m), ex.unflatten(v, m))),
        ambient_dim=m * m)

    A = ex.matmul(P[1, 2], P[3, 1])
    b1 = _basis_columns(V1)
    v2 = _basis_columns(V2)
    # A maps V2 onto V1: A v2 = b1 M, so c = v2 M^{-1} satisfies A c = b1
    Av2 = ex.matmul(A, v2)
    M = ex.transpose([V1.coordinates(col) for col in ex.transpose(Av2)])
    try:
        c = ex.matmul(v2, ex.inverse(M))
    except ex.SingularMatrix:
        return alg.dim, False
    Q = [r1 + r2 for r1, r2 in zip(b1, c)]
    Qi = ex.inverse(Q)
    conj = lambda X: ex.matmul(ex.matmul(Qi, X), Q)
    I, Z = ex.identity(n), ex.zeros(n)
    unit = lambda a, b, c_, d: [r1 + r2 for r1, r2 in zip(a, b)] + [r1 + r2 for r1, r2 in zip(c_, d)]
    forms = [
        (P[1, 2], unit(I, Z, Z, Z)),
        (P[2, 1], unit(Z, Z, Z, I)),
        (A, unit(Z, I, Z, Z)),
        (ex.matmul(P[2, 1], P[3, 2]), unit(Z, Z, I, Z)),
    ]
    iso = alg.dim == 4 and all(conj(X) == target for X, target in forms)
    return alg.dim, iso


def random_complementary_triple(rng: np.random.Generator, n: int) -> tuple[ex.Subspace, ...]:
    """Three pairwise complementary n-dimensional subspaces of Q^(2n)."""
    m = 2 * n
    while True:
        Vs = []
        for _ in range(3):
            rows = rng.integers(-4, 5, size=(n, m))
            Vs.append(ex.span([[F(int(x)) for x in r] for r in rows], m))
        try:
            _check_complementary(Vs)
        except ComplementError:
            continue
        return tuple(Vs)


# ---------------------------------------------------------------------------
# SL(2,C) acting on S^3 C^2


def _realify(re: list, im: list) -> list:
    """Complex matrix re + i im acting on (Re z, Im z)."""
    top = [a + [-x for x in b] for a, b in zip(re, im)]
    bot = [b + a for a, b in zip(re, im)]
    return top + bot


def s3_generators() -> dict[str, list]:
    """Real 8x8 matrices of H, E, F, iH, iE, iF on S^3 C^2 in a weight basis."""
    d = 4
    Hm = ex.zeros(d)
    Em = ex.zeros(d)
    Fm = ex.zeros(d)
    for k in range(d):
        Hm[k][k] = F(3 - 2 * k)
        if k >= 1:
            Em[k - 1][k] = F(k)
        if k + 1 < d:
            Fm[k + 1][k] = F(3 - k)
    Z = ex.zeros(d)
    out = {}
    for name, m in (("H", Hm), ("E", Em), ("F", Fm)):
        out[name] = _realify(m, Z)
        out["i" + name] = _realify(Z, m)
    return out


def sl2c_s3c2_commutant_dim() -> int:
    return commutant(list(s3_generators().values()), 8).dim


def verify_eliminations(seed: int = 0, trials: int = 10, dims: Sequence[int] = (2, 4, 8)) -> CheckReport:
    rep = CheckReport()
    p = "eliminations"
    gens = s3_generators()
    Hm, Em, Fm = gens["H"], gens["E"], gens["F"]
    rep.add(f"{p}.s3c2.sl2_relations", "the action of SL(2,C) on S^3 C^2", True,
            ex.commutator(Em, Fm) == Hm
            and ex.commutator(Hm, Em) == ex.scale(2, Em)
            and ex.commutator(Hm, Fm) == ex.scale(-2, Fm))
    comm = commutant(list(gens.values()), 8)
    rep.add(f"{p}.s3c2.commutant_dim", "must be equal to a scalar operator", 2, comm.dim)
    Jc = _realify(ex.zeros(4), ex.identity(4))
    rep.add(f"{p}.s3c2.contains_complex_structure", "must be equal to a scalar operator", True, Jc in comm)
    only_h = commutant([Hm], 8).dim
    rep.add(f"{p}.s3c2.negative_control_H_only", "commutant of one generator is larger", "> 2",
            only_h, only_h > 2)

    rng = np.random.default_rng(seed)
    anchor = "the algebra generated by P_ij is isomorphic to Mat_2(R)"
    for m in dims:
        results = [projection_algebra_dim(*random_complementary_triple(rng, m // 2))
                   for _ in range(trials)]
        good = sum(r == (4, True) for r in results)
        rep.add(f"{p}.projections.dim{m}", anchor, f"{trials}/{trials} (4, True)",
                f"{good}/{trials} (4, True)")
    return rep


# ---------------------------------------------------------------------------


def to_json_dict(hol: EndoSubspace) -> dict:
    return {"dim": hol.dim, "n": hol.n,
            "basis": [[ex.fmt(x) for x in v] for v in hol.sub.basis]}


def dumps(hol: EndoSubspace) -> str:
    return json.dumps(to_json_dict(hol), indent=2)


def float_basis(hol: EndoSubspace) -> np.ndarray:
    """Rows are the flattened basis endomorphisms as floats."""
    if not hol.dim:
        return np.zeros((0, hol.n * hol.n))
    return np.array([[float(x) for x in v] for v in hol.sub.basis])
