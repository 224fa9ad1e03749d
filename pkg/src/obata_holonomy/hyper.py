"""Homogeneous hypercomplex structures: the Joyce structure on su(3) and the
flat structure on su(2)+u(1) = H.

Coordinates.  The Joyce algebra is built in an adapted rational basis

    e1, e2, e3 = Iota, Jota, Kota      (the su(2) block d)
    e4         = Euler field E         (the abelian direction b)
    e5..e8     = W, IW, JW, KW         (the f block)

so g0 = span(e1..e4) and g1 = span(e5..e8) are index slices, exactly as in
the matrix basis of :func:`lie.build_su`.  ``phi`` sends g0 coordinates to
quaternion coordinates (1, i, j, k) with Iota, Jota, Kota -> i, j, k and
E -> -1; g1 is identified with H by W -> 1, so I, J, K act on g1 as left
multiplication by i, j, k.

Why not the matrix basis itself: integrability holds for every scale of the
b direction, but the Killing form is quaternionic Hermitian only when
E = +-diag(i, i, -2i)/sqrt(3).  No rational multiple of diag(i, i, -2i) works,
so the adapted basis absorbs the sqrt(3): ad(E) acts on g1 as right
multiplication by a rational imaginary quaternion u with |u|^2 = 3.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

from . import exact as ex
from . import lie
from .lie import LieAlgebra
from .report import CheckReport

F = Fraction


class ConstructionError(RuntimeError):
    """No candidate convention produced a hypercomplex structure."""


# ---------------------------------------------------------------------------
# quaternions as 4-lists (1, i, j, k)


def qmul(a: Sequence, b: Sequence) -> list:
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return [a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0]


def qconj(a: Sequence) -> list:
    return [a[0], -a[1], -a[2], -a[3]]


def qleft(q: Sequence) -> list:
    """Matrix of x -> q x."""
    return ex.transpose([qmul(q, ex.unit(4, k)) for k in range(4)])


def qright(q: Sequence) -> list:
    """Matrix of x -> x q."""
    return ex.transpose([qmul(ex.unit(4, k), q) for k in range(4)])


QI, QJ, QK = ([F(0), F(1), F(0), F(0)], [F(0), F(0), F(1), F(0)], [F(0), F(0), F(0), F(1)])
UNITS = (QI, QJ, QK)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HypercomplexLieAlgebra:
    name: str
    algebra: LieAlgebra
    I: tuple
    J: tuple
    K: tuple
    g0: tuple[int, ...]
    g1: tuple[int, ...]
    euler: tuple
    w: tuple | None
    iota: tuple
    jota: tuple
    kota: tuple
    phi: tuple  # g0 coordinates -> quaternion coordinates
    convention: dict = field(default_factory=dict, compare=False)

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def structures(self) -> dict[str, list]:
        return {"I": [list(r) for r in self.I], "J": [list(r) for r in self.J],
                "K": [list(r) for r in self.K]}

    def apply(self, which: str, v: Sequence) -> list:
        return ex.matvec(self.structures[which], v)

    def bracket(self, x: Sequence, y: Sequence) -> list:
        return lie.bracket(self.algebra, x, y)


def _freeze(m) -> tuple:
    return tuple(tuple(r) for r in m)


def _embed(block: list, idx: Sequence[int], n: int, into: list) -> None:
    for a, i in enumerate(idx):
        for b, j in enumerate(idx):
            into[i][j] = block[a][b]


def _g0_structures(phi: list) -> list[list]:
    phinv = _inverse4(phi)
    return [ex.matmul(phinv, ex.matmul(qleft(q), phi)) for q in UNITS]


def _inverse4(m: list) -> list:
    n = len(m)
    cols = []
    for k in range(n):
        x, null = ex.solve_affine(m, ex.unit(n, k))
        if null.dim:
            raise ValueError("matrix is singular")
        cols.append(x)
    return ex.transpose(cols)


# ---------------------------------------------------------------------------
# Joyce structure on su(3)

# g0 coordinates -> quaternions: Iota, Jota, Kota -> i, j, k; E -> -1
JOYCE_PHI = [[F(0), F(0), F(0), F(-1)],
             [F(1), F(0), F(0), F(0)],
             [F(0), F(1), F(0), F(0)],
             [F(0), F(0), F(1), F(0)]]
JOYCE_LABELS = ("Iota", "Jota", "Kota", "E", "W", "IW", "JW", "KW")


def _joyce_constants(u: Sequence, rho: Fraction) -> list:
    """Structure constants of the adapted su(3) basis.

    [p, q]  on g0      : quaternion commutator
    [p, w]  p in g0    : Im(p) w - Re(p) w u
    [v, w]  on g1      : -rho (Im(v w*) + Re(v u w*)), read back through phi

    The g1 x g1 bracket is the one making h = diag(Id_g0, rho Id_g1) (up to
    an overall factor) ad-invariant, given the g0 x g1 action.
    """
    phi = JOYCE_PHI
    phinv = _inverse4(phi)
    u = ex.vector(u)

    def act(p, w):
        im = [F(0), p[1], p[2], p[3]]
        return ex.vsub(qmul(im, w), ex.vscale(p[0], qmul(w, u)))

    def br(x, y):
        p, q = ex.matvec(phi, x[:4]), ex.matvec(phi, y[:4])
        v, w = x[4:], y[4:]
        z0 = ex.vsub(qmul(p, q), qmul(q, p))
        vw = qmul(v, qconj(w))
        re = qmul(qmul(v, u), qconj(w))[0]
        z0 = ex.vsub(z0, ex.vscale(rho, [re, vw[1], vw[2], vw[3]]))
        z1 = ex.vsub(act(p, w), act(q, v))
        return ex.matvec(phinv, z0) + z1

    e = [ex.unit(8, i) for i in range(8)]
    return [[br(e[i], e[j]) for j in range(8)] for i in range(8)]


def _assemble_joyce(u: Sequence, rho: Fraction) -> HypercomplexLieAlgebra:
    L = lie.from_structure_constants(_joyce_constants(u, rho), JOYCE_LABELS)
    g0, g1 = (0, 1, 2, 3), (4, 5, 6, 7)
    mats = []
    for block0, q in zip(_g0_structures(JOYCE_PHI), UNITS):
        m = ex.zeros(8)
        _embed(block0, g0, 8, m)
        _embed(qleft(q), g1, 8, m)
        mats.append(_freeze(m))
    e = [tuple(ex.unit(8, i)) for i in range(8)]
    return HypercomplexLieAlgebra(
        name="joyce-su3", algebra=L, I=mats[0], J=mats[1], K=mats[2],
        g0=g0, g1=g1, euler=e[3], w=e[4], iota=e[0], jota=e[1], kota=e[2],
        phi=_freeze(JOYCE_PHI),
        convention={"u": [ex.fmt(x) for x in u], "rho": ex.fmt(rho)},
    )


# fixed search order over the rational imaginary quaternions of norm^2 3
_U_CANDIDATES = [[F(0), F(s1), F(s2), F(s3)] for s1, s2, s3 in product((1, -1), repeat=3)]


def build_joyce_su3() -> HypercomplexLieAlgebra:
    """The Joyce hypercomplex structure on su(3) with a frozen convention.

    For each candidate u (in a fixed order), the one continuous unknown rho
    is fixed by the linear condition h(W, W) = h(Iota, Iota) on the Killing
    form; the first candidate passing every structural check wins.
    """
    tried = []
    for u in _U_CANDIDATES:
        trial = _assemble_joyce(u, F(1))
        h = lie.killing_form(trial.algebra)
        hww = h(trial.w, trial.w)
        if not hww:
            tried.append((u, "degenerate"))
            continue
        rho = h(trial.iota, trial.iota) / hww
        H = _assemble_joyce(u, rho)
        rep = verify_lie_axioms_and_structure(H)
        if rep.ok:
            sq = alpha_squared(H)
            H.convention.update({"alpha_squared": ex.fmt(sq),
                                 "sign_choices": {"u": [int(x) for x in u[1:]]},
                                 "search_index": len(tried)})
            return _fix_w(H)
        tried.append((u, [c.id for c in rep.failed]))
    raise ConstructionError(f"no convention passed: {tried}")


def verify_lie_axioms_and_structure(H: HypercomplexLieAlgebra) -> CheckReport:
    rep = lie.verify_lie_axioms(H.algebra, prefix="joyce.algebra")
    rep.extend(verify_hypercomplex(H))
    rep.extend(su3_certificate(H))
    return rep


def alpha_squared(H: HypercomplexLieAlgebra) -> Fraction:
    """Squared scale of E against diag(i, i, -2i).

    ad(diag(i,i,-2i)) multiplies the f block by 3i, so (ad E)^2 = -9 alpha^2
    on g1.
    """
    ad_e = H.algebra.ad(list(H.euler))
    sq = ex.matmul(ad_e, ad_e)
    g1 = H.g1
    c = sq[g1[0]][g1[0]]
    return -c / 9


def _fix_w(H: HypercomplexLieAlgebra) -> HypercomplexLieAlgebra:
    """Keep W = e5 unless the Obata connection has nabla_W W = 0 there."""
    from .obata import obata_lambda, nabla  # circular at import time

    C = obata_lambda(H)
    candidates = [ex.unit(H.dim, i) for i in H.g1]
    candidates += [ex.vadd(a, b) for a, b in combinations(candidates, 2)]
    for w in candidates:
        if not ex.is_zero(nabla(C, w, w)):
            if list(w) != list(H.w):
                H.convention["w_replaced"] = [ex.fmt(x) for x in w]
                return HypercomplexLieAlgebra(**{**H.__dict__, "w": tuple(w)})
            return H
    raise ConstructionError("nabla_W W vanishes for every scanned W")


# ---------------------------------------------------------------------------
# the flat Hopf instance


def build_hopf_g0() -> HypercomplexLieAlgebra:
    """su(2)+u(1) as H in coordinates (1, i, j, k); bracket = commutator."""
    e = [ex.unit(4, k) for k in range(4)]
    c = [[ex.vsub(qmul(e[a], e[b]), qmul(e[b], e[a])) for b in range(4)] for a in range(4)]
    z, one = ex.zeros(2), ex.identity(2)
    realization = (
        (z, one),                                   # 1 -> i Id
        (z, ex.matrix([[1, 0], [0, -1]])),          # i -> diag(i, -i)
        (ex.matrix([[0, 1], [-1, 0]]), z),          # j
        (z, ex.matrix([[0, 1], [1, 0]])),           # k
    )
    L = lie.from_structure_constants(c, ("1", "i", "j", "k"), realization)
    mats = [_freeze(qleft(q)) for q in UNITS]
    return HypercomplexLieAlgebra(
        name="hopf-g0", algebra=L, I=mats[0], J=mats[1], K=mats[2],
        g0=(0, 1, 2, 3), g1=(), euler=(F(-1), F(0), F(0), F(0)), w=None,
        iota=tuple(QI), jota=tuple(QJ), kota=tuple(QK),
        phi=_freeze(ex.identity(4)), convention={},
    )


# ---------------------------------------------------------------------------
# operators


def _is_complex_structure(A) -> bool:
    n = len(A)
    return ex.matmul(A, A) == ex.scale(-1, ex.identity(n))


def nijenhuis(H: HypercomplexLieAlgebra, A, X: Sequence, Y: Sequence) -> list:
    """N_A(X, Y) = [X,Y] + A[AX,Y] + A[X,AY] - [AX,AY]."""
    A = [list(r) for r in A]
    if not _is_complex_structure(A):
        raise ValueError("A is not an almost complex structure (A^2 != -Id)")
    br = H.bracket
    AX, AY = ex.matvec(A, X), ex.matvec(A, Y)
    out = ex.vadd(br(X, Y), ex.matvec(A, ex.vadd(br(AX, Y), br(X, AY))))
    return ex.vsub(out, br(AX, AY))


def dbar(H: HypercomplexLieAlgebra, X: Sequence, Y: Sequence) -> list:
    """(1/2)([X,Y] + I[IX,Y])."""
    I = H.structures["I"]
    s = ex.vadd(H.bracket(X, Y), ex.matvec(I, H.bracket(ex.matvec(I, X), Y)))
    return ex.vscale(F(1, 2), s)


def restrict(m, rows: Sequence[int], cols: Sequence[int] | None = None) -> list:
    cols = rows if cols is None else cols
    return [[m[r][c] for c in cols] for r in rows]


# ---------------------------------------------------------------------------
# verification


def verify_hypercomplex(H: HypercomplexLieAlgebra) -> CheckReport:
    rep = CheckReport()
    p = H.name
    n = H.dim
    S = H.structures
    I, J, K = S["I"], S["J"], S["K"]
    minus_id = ex.scale(-1, ex.identity(n))
    quat = "hypercomplex structure: IJ = -JI = K"

    for name, A in S.items():
        rep.add(f"{p}.quaternion.{name}^2=-Id", quat, True, ex.matmul(A, A) == minus_id)
    rep.add(f"{p}.quaternion.IJ=K", quat, True, ex.matmul(I, J) == K)
    rep.add(f"{p}.quaternion.JI=-K", quat, True, ex.matmul(J, I) == ex.scale(-1, K))

    grading = "Z/2 grading g = g0 + g1"
    g0, g1 = H.g0, H.g1
    ok = all(not A[r][c] for A in S.values() for r in g0 for c in g1) and \
        all(not A[r][c] for A in S.values() for r in g1 for c in g0)
    rep.add(f"{p}.grading.IJK_preserve_blocks", grading, True, ok)
    br_ok = True
    e = [ex.unit(n, i) for i in range(n)]
    for a in range(n):
        for b in range(n):
            z = H.bracket(e[a], e[b])
            deg = (a in g1) + (b in g1)
            target = g1 if deg == 1 else g0
            if any(z[k] for k in range(n) if k not in target):
                br_ok = False
    rep.add(f"{p}.grading.bracket", grading, True, br_ok)

    act = "on f: IX = [Iota, X]"
    if g1:
        for name, elt in zip("IJK", (H.iota, H.jota, H.kota)):
            ad = H.algebra.ad(list(elt))
            rep.add(f"{p}.g1_action.{name}=ad", act, True, restrict(S[name], g1) == restrict(ad, g1))
    else:
        rep.skip(f"{p}.g1_action", act, "g1 is empty")

    left = "g0 = H with left quaternion multiplication"
    phi = [list(r) for r in H.phi]
    for name, q in zip("IJK", UNITS):
        rep.add(f"{p}.g0_action.{name}", left, True,
                ex.matmul(phi, restrict(S[name], g0)) == ex.matmul(qleft(q), phi))
    e0 = [H.euler[i] for i in g0]
    rep.add(f"{p}.euler.phi(E)=-1", "Euler field corresponds to -1", "[-1, 0, 0, 0]",
            [int(x) if x.denominator == 1 else str(x) for x in ex.matvec(phi, e0)])

    hb = "<E, W> is an H-basis"
    gens = [list(H.euler)] + [ex.matvec(A, H.euler) for A in (I, J, K)]
    if H.w is not None:
        gens += [list(H.w)] + [ex.matvec(A, H.w) for A in (I, J, K)]
    rep.add(f"{p}.H_basis", hb, n, ex.span(gens, n).dim)

    integ = "Nijenhuis tensor vanishes"
    for name, A in S.items():
        bad = [(a, b) for a, b in combinations(range(n), 2)
               if not ex.is_zero(nijenhuis(H, A, e[a], e[b]))]
        npairs = n * (n - 1) // 2
        rep.add(f"{p}.nijenhuis.{name}", integ, f"0/{npairs} pairs nonzero",
                f"{len(bad)}/{npairs} pairs nonzero")

    herm = "Killing form quaternionic Hermitian"
    h = lie.killing_form(H.algebra).matrix
    if ex.determinant(h) == 0:
        rep.skip(f"{p}.killing.quaternionic_hermitian", herm, "Killing form is degenerate")
    else:
        ok = all(ex.matmul(ex.transpose(A), ex.matmul(h, A)) == h for A in S.values())
        rep.add(f"{p}.killing.quaternionic_hermitian", herm, True, ok)
    return rep


def su3_certificate(H: HypercomplexLieAlgebra) -> CheckReport:
    """Exact evidence that the adapted algebra is su(3) with Joyce's structure.

    An 8-dimensional algebra with negative definite Killing form is compact
    semisimple, and the only such algebra is su(3).  The characteristic
    polynomials tie Iota to diag(i,-i,0) and E^2 to diag(i,i,-2i)^2 / 3 in
    the matrix basis.
    """
    rep = CheckReport()
    anchor = "su(3): skew-Hermitian trace-free 3x3 matrices"
    p = H.name
    h = lie.killing_form(H.algebra)
    rep.add(f"{p}.su3.dim", anchor, 8, H.dim)
    rep.add(f"{p}.su3.killing_negative_definite", anchor, True, h.is_negative_definite())
    S = lie.build_su(3)
    ad_i = H.algebra.ad(list(H.iota))
    ad_std = S.ad(ex.unit(8, 0))
    rep.add(f"{p}.su3.charpoly_iota", anchor, True, ex.charpoly(ad_i) == ex.charpoly(ad_std))
    ad_e = H.algebra.ad(list(H.euler))
    ad_b = S.ad(ex.unit(8, 3))
    sq = alpha_squared(H)
    rep.add(f"{p}.su3.charpoly_euler_sq", anchor, True,
            ex.charpoly(ex.matmul(ad_e, ad_e)) == ex.charpoly(ex.scale(sq, ex.matmul(ad_b, ad_b))))
    rep.add(f"{p}.su3.alpha_squared", "Killing form quaternionic Hermitian", "1/3", ex.fmt(sq))
    return rep


def to_json_dict(H: HypercomplexLieAlgebra) -> dict:
    fm = lambda m: [[ex.fmt(x) for x in r] for r in m]
    conv = dict(H.convention)
    return {
        "name": H.name,
        "labels": list(H.algebra.basis_labels),
        "I": fm(H.I), "J": fm(H.J), "K": fm(H.K),
        "phi": fm(H.phi),
        "euler": [ex.fmt(x) for x in H.euler],
        "w": [ex.fmt(x) for x in H.w] if H.w is not None else None,
        "alpha": {"squared": conv.get("alpha_squared"),
                  "meaning": "E = +-sqrt(squared) * diag(i, i, -2i) in the matrix model"},
        "sign_choices": conv.get("sign_choices"),
        "u": conv.get("u"),
        "rho": conv.get("rho"),
    }


def dumps(H: HypercomplexLieAlgebra) -> str:
    return json.dumps(to_json_dict(H), indent=2)
