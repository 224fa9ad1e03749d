"""Floating-point parallel transport around small loops.

A left-invariant connection transports a frame along a path with constant
left-logarithmic derivative a by exp(-t * Lambda_a).  Loops are exponential
triangles based at the identity:

    exp(t eps X),  exp(eps X) exp(t eps Y),  exp((1 - t) Z)

with exp(Z) = exp(eps X) exp(eps Y).  Each leg has constant logarithmic
derivative (eps X, eps Y, -Z), so the transport around the loop is a product
of three matrix exponentials and carries no integration error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import lie
from .curvature import curvature_endo
from .holonomy import EndoSubspace, float_basis
from .hyper import HypercomplexLieAlgebra
from .obata import Connection
from .report import CheckReport

# log(loop transport) / eps^2 -> LIMIT_FACTOR * R(X, Y); fixed by comparison
# against the exact curvature (see test_transport) and frozen here.
LIMIT_FACTOR = -0.5
RICHARDSON_SCALES = (0.2, 0.1, 0.05)


class LogBranchError(ArithmeticError):
    """The principal logarithm is not defined (eigenvalue on the negative axis)."""


# ---------------------------------------------------------------------------
# exp and log


def expm(A: np.ndarray, tol: float = 1e-13) -> np.ndarray:
    """Scaling and squaring with a Taylor series."""
    A = np.asarray(A)
    norm = np.linalg.norm(A, 1)
    s = max(0, int(np.ceil(np.log2(norm / 0.5)))) if norm > 0.5 else 0
    X = A / (2 ** s)
    out = np.eye(len(A), dtype=np.result_type(A, float))
    term = out.copy()
    for k in range(1, 40):
        term = term @ X / k
        out = out + term
        if np.linalg.norm(term, 1) <= tol * 1e-3 * max(1.0, np.linalg.norm(out, 1)):
            break
    for _ in range(s):
        out = out @ out
    return out


def _sqrtm(A: np.ndarray, iters: int = 60) -> np.ndarray:
    """Principal square root by the Denman-Beavers iteration."""
    Y, Z = A.copy(), np.eye(len(A), dtype=A.dtype)
    for _ in range(iters):
        Yn = 0.5 * (Y + np.linalg.inv(Z))
        Z = 0.5 * (Z + np.linalg.inv(Y))
        done = np.linalg.norm(Yn - Y, 1) <= 1e-15 * np.linalg.norm(Yn, 1)
        Y = Yn
        if done:
            break
    return Y


def logm(A: np.ndarray, branch_tol: float = 1e-6) -> np.ndarray:
    """Principal logarithm by inverse scaling and squaring."""
    A = np.asarray(A)
    ev = np.linalg.eigvals(A)
    if np.any((np.abs(ev.imag) <= branch_tol) & (ev.real <= branch_tol)):
        raise LogBranchError("eigenvalue on the closed negative real axis")
    n = len(A)
    Id = np.eye(n)
    s = 0
    X = A.astype(np.result_type(A, float))
    while np.linalg.norm(X - Id, 1) > 0.25:
        X = _sqrtm(X)
        s += 1
        if s > 60:
            raise LogBranchError("square roots did not approach the identity")
    E = X - Id
    out = np.zeros_like(E)
    term = Id.astype(E.dtype)
    for k in range(1, 80):
        term = term @ E
        out = out + ((-1) ** (k + 1)) * term / k
        if np.linalg.norm(term, 1) / k <= 1e-17:
            break
    return out * (2 ** s)


def _check_su3(X: np.ndarray, tol: float = 1e-9) -> None:
    X = np.asarray(X)
    if X.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got {X.shape}")
    if np.linalg.norm(X + X.conj().T) > tol or abs(np.trace(X)) > tol:
        raise ValueError("not skew-Hermitian and traceless")


def su3_exp(X: np.ndarray) -> np.ndarray:
    _check_su3(X)
    return expm(np.asarray(X, complex))


def su3_log(U: np.ndarray) -> np.ndarray:
    U = np.asarray(U, complex)
    if U.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got {U.shape}")
    L = logm(U)
    # project away rounding so the result is exactly skew-Hermitian traceless
    L = 0.5 * (L - L.conj().T)
    return L - np.trace(L) / 3 * np.eye(3)


# ---------------------------------------------------------------------------
# matrix models of the two groups


@dataclass
class MatrixModel:
    """Float linear isomorphism from g (in its basis) to matrices."""

    mats: np.ndarray  # (dim, m, m) complex

    def __post_init__(self):
        d = len(self.mats)
        flat = self.mats.reshape(d, -1)
        self._lift = np.vstack([flat.real.T, flat.imag.T])
        self._pinv = np.linalg.pinv(self._lift)

    def to_matrix(self, v) -> np.ndarray:
        return np.tensordot(np.asarray(v, float), self.mats, axes=1)

    def coordinates(self, M) -> np.ndarray:
        flat = np.asarray(M).reshape(-1)
        return self._pinv @ np.concatenate([flat.real, flat.imag])

    def residual(self, structure_constants) -> float:
        """max over basis pairs of |[m_i, m_j] - sum_k c_ijk m_k|."""
        c = np.array([[[float(x) for x in cij] for cij in ci] for ci in structure_constants])
        d = len(self.mats)
        worst = 0.0
        for i in range(d):
            for j in range(d):
                comm = self.mats[i] @ self.mats[j] - self.mats[j] @ self.mats[i]
                worst = max(worst, np.abs(comm - np.tensordot(c[i, j], self.mats, axes=1)).max())
        return worst


def _to_float(m) -> np.ndarray:
    return np.array([[float(x) for x in r] for r in m])


def _su3_standard() -> np.ndarray:
    return np.array([_to_float(re) + 1j * _to_float(im) for re, im in lie.build_su(3).matrix_realization])


def joyce_model(H: HypercomplexLieAlgebra) -> MatrixModel:
    """Send Iota, Jota, Kota to the first three standard matrices and E to
    +-diag(i, i, -2i)/sqrt(3); W is the f-block solution of the [E, W]
    relation, normalized by the Killing form."""
    std = _su3_standard()
    c = np.array([[[float(x) for x in cij] for cij in ci] for ci in H.algebra.structure_constants])
    comm = lambda a, b: a @ b - b @ a
    f_block = std[4:8]
    flat = f_block.reshape(4, -1)
    lift = np.vstack([flat.real.T, flat.imag.T])
    coords = lambda M: np.linalg.lstsq(lift, np.concatenate([M.reshape(-1).real, M.reshape(-1).imag]),
                                       rcond=None)[0]
    e4, w = 3, 4
    hww = float(lie.killing_form(H.algebra)(
        [1 if k == w else 0 for k in range(8)], [1 if k == w else 0 for k in range(8)]))
    best = None
    for s in (1.0, -1.0):
        Eu = s * std[3] / np.sqrt(3)
        phis = [lambda X: X] + [lambda X, a=std[k]: comm(a, X) for k in range(3)]
        T = lambda X: comm(Eu, X) - sum(c[e4, w, 4 + k] * phis[k](X) for k in range(4))
        Mop = np.array([coords(T(f_block[k])) for k in range(4)]).T
        null = np.linalg.svd(Mop)[2][-2:]
        for vec in null:
            Wm = np.tensordot(vec, f_block, axes=1)
            Wm = Wm * np.sqrt(hww / (6 * np.trace(Wm @ Wm).real))
            mats = np.array([std[0], std[1], std[2], Eu, Wm] + [comm(std[k], Wm) for k in range(3)])
            model = MatrixModel(mats)
            res = model.residual(H.algebra.structure_constants)
            if best is None or res < best[0]:
                best = (res, model)
    res, model = best
    if res > 1e-10:
        raise ArithmeticError(f"no matrix model found (residual {res:.2e})")
    return model


def hopf_model(H: HypercomplexLieAlgebra) -> MatrixModel:
    """The exact realization of H: 1 -> i Id and i, j, k into su(2); the group is U(2)."""
    model = MatrixModel(np.array([_to_float(re) + 1j * _to_float(im)
                                  for re, im in H.algebra.matrix_realization]))
    if model.residual(H.algebra.structure_constants) > 1e-12:
        raise ArithmeticError("quaternion model does not match the structure constants")
    return model


def matrix_model(H: HypercomplexLieAlgebra) -> MatrixModel:
    if H.name.startswith("joyce"):
        return joyce_model(H)
    if H.name.startswith("hopf"):
        return hopf_model(H)
    raise ValueError(f"no matrix model for {H.name!r}")


# ---------------------------------------------------------------------------
# loops


@dataclass(frozen=True)
class Loop:
    x: tuple
    y: tuple
    scale: float

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError("loop scale must be positive")


class Transporter:
    """Connection coefficients and matrix model of one hypercomplex instance."""

    def __init__(self, C: Connection, model: MatrixModel | None = None):
        self.C = C
        self.lam = np.array([[[float(x) for x in r] for r in L] for L in C.lam])
        self.model = model if model is not None else matrix_model(C.hyper)

    def Lambda(self, a) -> np.ndarray:
        return np.tensordot(np.asarray(a, float), self.lam, axes=1)

    def closing_vector(self, loop: Loop) -> np.ndarray:
        m = self.model
        eps = loop.scale
        g = expm(eps * m.to_matrix(loop.x)) @ expm(eps * m.to_matrix(loop.y))
        return m.coordinates(logm(g))

    def loop_holonomy(self, loop: Loop) -> np.ndarray:
        eps = loop.scale
        Z = self.closing_vector(loop)
        T1 = expm(-eps * self.Lambda(loop.x))
        T2 = expm(-eps * self.Lambda(loop.y))
        T3 = expm(self.Lambda(Z))
        return T3 @ T2 @ T1


def loop_holonomy(C: Connection, loop: Loop, transporter: Transporter | None = None) -> np.ndarray:
    return (transporter or Transporter(C)).loop_holonomy(loop)


def curvature_limit(tr: Transporter, x, y, scales=RICHARDSON_SCALES) -> np.ndarray:
    """Richardson extrapolation of log(T(eps)) / eps^2 to eps = 0.

    Scales must halve: each level removes the next power of eps.
    """
    vals = [logm(tr.loop_holonomy(Loop(tuple(x), tuple(y), e))) / e ** 2 for e in scales]
    level = 1
    while len(vals) > 1:
        f = 2.0 ** level
        vals = [(f * b - a) / (f - 1) for a, b in zip(vals, vals[1:])]
        level += 1
    return vals[0]


def exact_curvature_float(C: Connection, x, y) -> np.ndarray:
    from fractions import Fraction
    X = [Fraction(v).limit_denominator(10 ** 12) for v in x]
    Y = [Fraction(v).limit_denominator(10 ** 12) for v in y]
    return np.array([[float(v) for v in r] for r in curvature_endo(C, X, Y)])


# ---------------------------------------------------------------------------
# dimension estimate


@dataclass
class HolonomyEstimate:
    dim: int
    max_principal_angle: float
    singular_values: list
    discarded: list
    used: int

    def __iter__(self):
        return iter((self.dim, self.max_principal_angle))


def sample_loop(seed: int, idx: int, dim: int, scale: float) -> Loop:
    """Per-sample substream: the loop depends only on (seed, idx)."""
    rng = np.random.default_rng([seed, idx])
    x, y = rng.standard_normal(dim), rng.standard_normal(dim)
    return Loop(tuple(x / np.linalg.norm(x)), tuple(y / np.linalg.norm(y)), scale)


def _orthonormal_rows(M: np.ndarray, rank: int) -> np.ndarray:
    if rank == 0:
        return np.zeros((0, M.shape[1]))
    return np.linalg.svd(M, full_matrices=False)[2][:rank]


def max_principal_angle(A: np.ndarray, B: np.ndarray) -> float:
    """Largest of the min(p, q) principal angles between the row spaces of
    orthonormal A (p rows) and B (q rows)."""
    if len(A) == 0 or len(B) == 0:
        return 0.0
    if len(A) > len(B):
        A, B = B, A
    # sine of the largest angle; stable for tiny angles where arccos is not
    resid = A - (A @ B.T) @ B
    return float(np.arcsin(min(np.linalg.norm(resid, 2), 1.0)))


def numerical_rank(M: np.ndarray, tol: float, floor: float) -> tuple[int, np.ndarray]:
    """Singular values above tol * max(largest, floor)."""
    if M.size == 0:
        return 0, np.zeros(0)
    s = np.linalg.svd(M, compute_uv=False)
    thresh = tol * max(s[0], floor)
    return int(np.sum(s > thresh)), s


def estimate_holonomy_dimension(C: Connection, n_loops: int, scale: float, seed: int,
                                tol: float = 1e-6, hol: EndoSubspace | None = None,
                                transporter: Transporter | None = None) -> HolonomyEstimate:
    if n_loops < 1:
        raise ValueError("n_loops must be at least 1")
    if not 0 < scale <= 0.5:
        raise ValueError("scale must lie in (0, 0.5]")
    tr = transporter or Transporter(C)
    n = C.dim
    logs, discarded = [], []
    for idx in range(n_loops):
        loop = sample_loop(seed, idx, n, scale)
        try:
            logs.append(logm(tr.loop_holonomy(loop)).reshape(-1))
        except LogBranchError as err:
            discarded.append((idx, str(err)))
    M = np.array(logs) if logs else np.zeros((0, n * n))
    # the logs are O(scale^2); an absolute floor keeps flat cases at rank 0
    rank, s = numerical_rank(M, tol, scale ** 2)
    angle = float("nan")
    if hol is not None:
        A = _orthonormal_rows(M, rank)
        Bf = float_basis(hol)
        B = _orthonormal_rows(Bf, hol.dim) if hol.dim else np.zeros((0, n * n))
        angle = max_principal_angle(A, B)
    return HolonomyEstimate(rank, angle, [float(x) for x in s[:20]], discarded, len(logs))


# ---------------------------------------------------------------------------
# report


def verify_transport(C: Connection, hol: EndoSubspace, n_loops: int = 200, scale: float = 0.1,
                     seed: int = 0, tol: float = 1e-6, angle_scale: float = 0.05,
                     prefix: str | None = None, expected_dim: int | None = None) -> CheckReport:
    H = C.hyper
    p = prefix or f"transport.{H.name}"
    rep = CheckReport()
    tr = Transporter(C)
    n = H.dim
    rep.add(f"{p}.matrix_model_residual", "transport law for left-invariant connections",
            "<= 1e-10", f"{tr.model.residual(H.algebra.structure_constants):.1e}",
            tr.model.residual(H.algebra.structure_constants) <= 1e-10)

    exp_dim = hol.dim if expected_dim is None else expected_dim
    est = estimate_holonomy_dimension(C, n_loops, scale, seed, tol, hol, tr)
    rep.add(f"{p}.dim", "numerical cross-check of the holonomy dimension", exp_dim, est.dim)
    rep.add(f"{p}.discarded", "principal logarithm defined on every sample", 0, len(est.discarded))
    rep.add(f"{p}.max_principal_angle", "numerical span equals the Nomizu span", "<= 1e-6",
            f"{est.max_principal_angle:.1e} at scale {scale}", est.max_principal_angle <= 1e-6)
    est2 = estimate_holonomy_dimension(C, n_loops, angle_scale, seed, tol, hol, tr)
    rep.add(f"{p}.max_principal_angle_small_scale", "numerical span lies in the Nomizu span",
            "<= 1e-6", f"{est2.max_principal_angle:.1e} at scale {angle_scale}, "
            f"sample rank {est2.dim} of {hol.dim}", est2.max_principal_angle <= 1e-6)

    S = H.structures
    mats = [np.array([[float(x) for x in r] for r in A]) for A in S.values()]
    h = np.array([[float(x) for x in r] for r in lie.killing_form(H.algebra).matrix])
    worst, moved, flat_dev = 0.0, 0, 0.0
    k = min(n_loops, 25)
    for idx in range(k):
        T = tr.loop_holonomy(sample_loop(seed, idx, n, scale))
        worst = max(worst, max(np.abs(T @ A - A @ T).max() for A in mats))
        moved += np.abs(T.T @ h @ T - h).max() > 1e-6 * max(1.0, np.abs(h).max())
        flat_dev = max(flat_dev, np.abs(T - np.eye(n)).max())
    rep.add(f"{p}.commutes_with_IJK", "nabla I = nabla J = nabla K = 0", "<= 1e-8",
            f"{worst:.1e}", worst <= 1e-8)
    if hol.dim:
        rep.add(f"{p}.killing_form_moved", "does not preserve any metric", f"{k}/{k}", f"{moved}/{k}")
    else:
        rep.add(f"{p}.flat_identity", "the Obata connection on G0 is flat", "<= 1e-9",
                f"{flat_dev:.1e}", flat_dev <= 1e-9)

    x = sample_loop(seed, 0, n, scale).x
    T = tr.loop_holonomy(Loop(x, x, scale))
    dev = np.abs(T - np.eye(n)).max()
    rep.add(f"{p}.backtracking_identity", "a retraced path has trivial transport", "<= 1e-10",
            f"{dev:.1e}", dev <= 1e-10)

    if hol.dim:
        loop = sample_loop(seed, 1, n, scale)
        lim = curvature_limit(tr, loop.x, loop.y)
        R = exact_curvature_float(C, loop.x, loop.y)
        err = {c: np.abs(lim - c * R).max() / np.abs(R).max() for c in (LIMIT_FACTOR, -LIMIT_FACTOR)}
        rep.add(f"{p}.curvature_limit", "log(transport)/eps^2 tends to a fixed multiple of R(X,Y)",
                f"factor {LIMIT_FACTOR}, rel err <= 5e-3",
                f"rel err {err[LIMIT_FACTOR]:.1e} (opposite sign {err[-LIMIT_FACTOR]:.1e})",
                err[LIMIT_FACTOR] <= 5e-3 and err[LIMIT_FACTOR] < err[-LIMIT_FACTOR])
    return rep
