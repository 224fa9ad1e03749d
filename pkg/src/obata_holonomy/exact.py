"""Exact rational linear algebra.

Vectors are lists of :class:`fractions.Fraction`, matrices are lists of rows.
Nothing here ever rounds.  Subspaces are kept in reduced row-echelon form,
which is canonical, so two subspaces are equal iff their bases are equal.

Endomorphisms of a ``d``-dimensional space are flattened row-major: entry
``(r, c)`` lands at index ``r * d + c``.  Every module uses this convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence, Union

Vec = list
Mat = list

ZERO = Fraction(0)
ONE = Fraction(1)


class DimensionError(ValueError):
    """Operands do not share the required shape."""


class InconsistentSystem(ValueError):
    """An affine linear system has no solution."""


# ---------------------------------------------------------------------------
# dense helpers


def frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        raise TypeError("floats are not accepted by the exact kernel")
    return Fraction(x)


def vector(xs: Iterable) -> Vec:
    return [frac(x) for x in xs]


def matrix(rows: Iterable[Iterable]) -> Mat:
    m = [vector(r) for r in rows]
    if m and any(len(r) != len(m[0]) for r in m):
        raise DimensionError("ragged matrix")
    return m


def zeros(rows: int, cols: int | None = None) -> Mat:
    cols = rows if cols is None else cols
    return [[ZERO] * cols for _ in range(rows)]


def identity(n: int) -> Mat:
    m = zeros(n)
    for i in range(n):
        m[i][i] = ONE
    return m


def unit(n: int, i: int) -> Vec:
    v = [ZERO] * n
    v[i] = ONE
    return v


def shape(m: Mat) -> tuple[int, int]:
    return len(m), (len(m[0]) if m else 0)


def transpose(m: Mat) -> Mat:
    return [list(col) for col in zip(*m)]


def matmul(a: Mat, b: Mat) -> Mat:
    if a and len(a[0]) != len(b):
        raise DimensionError(f"cannot multiply {shape(a)} by {shape(b)}")
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [ZERO] * cols
        for k, x in enumerate(row):
            if x:
                bk = b[k]
                for j in range(cols):
                    y = bk[j]
                    if y:
                        acc[j] += x * y
        out.append(acc)
    return out


def matvec(a: Mat, v: Sequence) -> Vec:
    if a and len(a[0]) != len(v):
        raise DimensionError(f"cannot apply {shape(a)} to length {len(v)}")
    out = []
    for row in a:
        s = ZERO
        for x, y in zip(row, v):
            if x and y:
                s += x * y
        out.append(s)
    return out


def add(a: Mat, b: Mat) -> Mat:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def sub(a: Mat, b: Mat) -> Mat:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def scale(c, a: Mat) -> Mat:
    c = frac(c)
    return [[c * x for x in r] for r in a]


def commutator(a: Mat, b: Mat) -> Mat:
    return sub(matmul(a, b), matmul(b, a))


def trace(a: Mat) -> Fraction:
    return sum((a[i][i] for i in range(len(a))), ZERO)


def is_zero(m) -> bool:
    if m and isinstance(m[0], list):
        return all(not x for r in m for x in r)
    return all(not x for x in m)


def vadd(u: Sequence, v: Sequence) -> Vec:
    return [x + y for x, y in zip(u, v)]


def vsub(u: Sequence, v: Sequence) -> Vec:
    return [x - y for x, y in zip(u, v)]


def vscale(c, v: Sequence) -> Vec:
    c = frac(c)
    return [c * x for x in v]


def lincomb(coeffs: Sequence, vecs: Sequence[Sequence]) -> Vec:
    n = len(vecs[0])
    out = [ZERO] * n
    for c, v in zip(coeffs, vecs):
        if c:
            for k, x in enumerate(v):
                if x:
                    out[k] += c * x
    return out


def flatten(m: Mat) -> Vec:
    return [x for row in m for x in row]


def unflatten(v: Sequence, d: int) -> Mat:
    if len(v) != d * d:
        raise DimensionError(f"length {len(v)} is not {d}x{d}")
    return [list(v[r * d:(r + 1) * d]) for r in range(d)]


def block_diag(*blocks: Mat) -> Mat:
    n = sum(len(b) for b in blocks)
    out = zeros(n)
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[off + i][off + j] = x
        off += len(b)
    return out


def fmt(x: Fraction) -> str:
    """``p/q`` text form used by every dump."""
    return f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# echelon forms


@dataclass(frozen=True)
class Subspace:
    """A subspace of Q^n stored as its reduced row-echelon basis."""

    ambient_dim: int
    basis: tuple[tuple[Fraction, ...], ...]
    pivot_columns: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, v: Sequence) -> Vec:
        """Remainder of ``v`` after eliminating every pivot column."""
        if len(v) != self.ambient_dim:
            raise DimensionError(f"vector of length {len(v)} in Q^{self.ambient_dim}")
        w = vector(v)
        for p, row in zip(self.pivot_columns, self.basis):
            c = w[p]
            if c:
                for k, x in enumerate(row):
                    if x:
                        w[k] -= c * x
        return w

    def __contains__(self, v) -> bool:
        return is_zero(self.reduce(v))

    def coordinates(self, v: Sequence) -> Vec:
        """Coefficients of ``v`` in the echelon basis (``v`` must lie in the span)."""
        if v not in self:
            raise ValueError("vector is not in the subspace")
        return [frac(v[p]) for p in self.pivot_columns]

    def issubspace(self, other: "Subspace") -> bool:
        return all(row in other for row in self.basis)

    def vectors(self) -> list[Vec]:
        return [list(r) for r in self.basis]


class Echelon:
    """Incrementally maintained reduced row-echelon basis.

    Rows are stored sparsely (``{column: value}``); the big Obata solve
    has ~1200 equations in 512 unknowns with only a handful of nonzeros each.
    """

    def __init__(self, ambient_dim: int):
        self.n = ambient_dim
        self.rows: dict[int, dict[int, Fraction]] = {}  # pivot -> row

    def __len__(self) -> int:
        return len(self.rows)

    def _reduce(self, v: dict[int, Fraction]) -> dict[int, Fraction]:
        rows = self.rows
        # each elimination clears one pivot column and only adds non-pivot
        # entries (rows are fully reduced), so one pass over pivots suffices
        for p in [c for c in v if c in rows]:
            c = v.get(p)
            if not c:
                continue
            for k, x in rows[p].items():
                y = v.get(k, ZERO) - c * x
                if y:
                    v[k] = y
                else:
                    v.pop(k, None)
        return v

    def insert(self, v: Sequence | dict) -> bool:
        """Add ``v`` to the span; return True iff the dimension grew."""
        if isinstance(v, dict):
            w = {k: frac(x) for k, x in v.items() if x}
        else:
            if len(v) != self.n:
                raise DimensionError(f"vector of length {len(v)} in Q^{self.n}")
            w = {k: frac(x) for k, x in enumerate(v) if x}
        w = self._reduce(w)
        if not w:
            return False
        p = min(w)
        inv = ONE / w[p]
        w = {k: x * inv for k, x in w.items()}
        for q, row in self.rows.items():
            c = row.get(p)
            if c:
                for k, x in w.items():
                    y = row.get(k, ZERO) - c * x
                    if y:
                        row[k] = y
                    else:
                        row.pop(k, None)
        self.rows[p] = w
        return True

    def contains(self, v: Sequence) -> bool:
        w = {k: frac(x) for k, x in enumerate(v) if x}
        return not self._reduce(w)

    def freeze(self) -> Subspace:
        pivots = tuple(sorted(self.rows))
        basis = []
        for p in pivots:
            row = [ZERO] * self.n
            for k, x in self.rows[p].items():
                row[k] = x
            basis.append(tuple(row))
        return Subspace(self.n, tuple(basis), pivots)


def span(vectors: Iterable[Sequence], ambient_dim: int) -> Subspace:
    ech = Echelon(ambient_dim)
    for v in vectors:
        ech.insert(v)
    return ech.freeze()


def rank_and_basis(m: Mat) -> tuple[int, Subspace]:
    """Rank of ``m`` and its row space in reduced echelon form."""
    rows, cols = shape(m)
    rs = span(m, cols)
    return rs.dim, rs


def rank(m: Mat) -> int:
    return rank_and_basis(m)[0]


def _nullspace_from_rref(rs: Subspace) -> Subspace:
    n = rs.ambient_dim
    pivset = set(rs.pivot_columns)
    gens = []
    for f in range(n):
        if f in pivset:
            continue
        v = [ZERO] * n
        v[f] = ONE
        for p, row in zip(rs.pivot_columns, rs.basis):
            v[p] = -row[f]
        gens.append(v)
    return span(gens, n)


def solve_homogeneous(m: Mat, cols: int | None = None) -> Subspace:
    """Nullspace of ``m``; ``cols`` is needed only when ``m`` has no rows."""
    n = shape(m)[1] if m else cols
    if n is None:
        raise DimensionError("column count of an empty matrix is unknown")
    return _nullspace_from_rref(span(m, n))


def solve_sparse_affine(
    equations: Iterable[tuple[dict[int, Fraction], Fraction]], nvars: int
) -> tuple[Vec, Subspace]:
    """Solve ``sum_k a_k x_k = b`` for sparse equations ``({k: a_k}, b)``.

    Returns a particular solution (free variables set to zero) and the
    nullspace of the coefficient matrix.  Raises :class:`InconsistentSystem`.
    """
    ech = Echelon(nvars + 1)
    for coeffs, rhs in equations:
        row = {k: frac(x) for k, x in coeffs.items() if x}
        if rhs:
            row[nvars] = frac(rhs)
        ech.insert(row)
    if nvars in ech.rows:
        raise InconsistentSystem("system has no solution")
    x = [ZERO] * nvars
    for p, row in ech.rows.items():
        x[p] = row.get(nvars, ZERO)
    homog = []
    for p in sorted(ech.rows):
        r = [ZERO] * nvars
        for k, v in ech.rows[p].items():
            if k < nvars:
                r[k] = v
        homog.append(r)
    return x, _nullspace_from_rref(span(homog, nvars))


def solve_affine(m: Mat, rhs: Sequence) -> tuple[Vec, Subspace]:
    """Dense front end to :func:`solve_sparse_affine`."""
    rows, cols = shape(m)
    if len(rhs) != rows:
        raise DimensionError("right-hand side length does not match rows")
    eqs = (({k: x for k, x in enumerate(r) if x}, b) for r, b in zip(m, rhs))
    return solve_sparse_affine(eqs, cols)


# ---------------------------------------------------------------------------
# closure


LinearMap = Union[Mat, Callable[[Vec], Vec]]


def _as_callable(f: LinearMap, n: int) -> Callable[[Vec], Vec]:
    if callable(f):
        return f
    if shape(f) != (n, n):
        raise DimensionError(f"map of shape {shape(f)} on Q^{n}")
    return lambda v: matvec(f, v)


def subspace_closure(
    seed: Iterable[Sequence],
    maps: Sequence[LinearMap] = (),
    product: Callable[[Vec, Vec], Vec] | None = None,
    ambient_dim: int | None = None,
) -> Subspace:
    """Smallest subspace containing ``seed``, stable under ``maps`` and ``product``.

    Worklist closure: only vectors that enlarged the span are pushed, so the
    loop runs at most ``ambient_dim`` times.
    """
    seed = [vector(v) for v in seed]
    if ambient_dim is None:
        if not seed:
            raise DimensionError("ambient dimension unknown for an empty seed")
        ambient_dim = len(seed[0])
    n = ambient_dim
    for v in seed:
        if len(v) != n:
            raise DimensionError(f"seed vector of length {len(v)} in Q^{n}")
    fs = [_as_callable(f, n) for f in maps]

    ech = Echelon(n)
    accepted: list[Vec] = []
    work: list[Vec] = []

    def push(v: Vec) -> None:
        if len(v) != n:
            raise DimensionError("map returned a vector of the wrong length")
        if ech.insert(v):
            accepted.append(v)
            work.append(v)

    for v in seed:
        push(v)
    while work:
        v = work.pop(0)
        for f in fs:
            push(vector(f(v)))
        if product is not None:
            for u in list(accepted):
                push(vector(product(u, v)))
                if u is not v:
                    push(vector(product(v, u)))
    return ech.freeze()


# ---------------------------------------------------------------------------
# polynomials (coefficient lists, lowest degree first)


def _trim(p: list) -> list:
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def poly_derivative(p: Sequence) -> list:
    return _trim([k * p[k] for k in range(1, len(p))])


def poly_divmod(a: Sequence, b: Sequence) -> tuple[list, list]:
    a, b = _trim(a), _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [ZERO] * max(len(a) - len(b) + 1, 0)
    r = [frac(x) for x in a]
    lead = b[-1]
    while len(r) >= len(b) and r:
        c = r[-1] / lead
        k = len(r) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            r[k + i] -= c * y
        r = _trim(r)
    return _trim(q), r


def poly_gcd(a: Sequence, b: Sequence) -> list:
    """Monic gcd over Q."""
    a, b = _trim(vector(a)), _trim(vector(b))
    while b:
        a, b = b, poly_divmod(a, b)[1]
    if not a:
        return []
    return [x / a[-1] for x in a]


def charpoly(m: Mat) -> list:
    """Characteristic polynomial det(xI - m), lowest degree first.

    Faddeev-LeVerrier recursion; exact over Q.
    """
    n, cols = shape(m)
    if n != cols:
        raise DimensionError("characteristic polynomial of a non-square matrix")
    coeffs = [ZERO] * (n + 1)
    coeffs[n] = ONE
    mk = identity(n)
    for k in range(1, n + 1):
        am = matmul(m, mk)
        c = -trace(am) / k
        coeffs[n - k] = c
        mk = am
        for i in range(n):
            mk[i][i] += c
    return coeffs


def distinct_eigenvalue_count(m: Mat) -> int:
    """Number of distinct complex eigenvalues: degree of the squarefree part."""
    p = charpoly(m)
    g = poly_gcd(p, poly_derivative(p))
    q, r = poly_divmod(p, g)
    assert not r
    return len(q) - 1


# ---------------------------------------------------------------------------
# determinants and definiteness


def determinant(m: Mat) -> Fraction:
    n, cols = shape(m)
    if n != cols:
        raise DimensionError("determinant of a non-square matrix")
    a = [list(r) for r in m]
    det = ONE
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c]), None)
        if p is None:
            return ZERO
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        piv = a[c][c]
        det *= piv
        for r in range(c + 1, n):
            f = a[r][c] / piv
            if f:
                for k in range(c, n):
                    a[r][k] -= f * a[c][k]
    return det


class SingularMatrix(ValueError):
    """Raised when inverting a matrix with zero determinant."""


def inverse(m: Mat) -> Mat:
    """Gauss-Jordan inverse over Q."""
    n, cols = shape(m)
    if n != cols:
        raise DimensionError("inverse of a non-square matrix")
    a = [list(r) + identity(n)[i] for i, r in enumerate(m)]
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c]), None)
        if p is None:
            raise SingularMatrix("matrix is singular")
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for r in range(n):
            f = a[r][c]
            if r != c and f:
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [r[n:] for r in a]


def kron(a: Mat, b: Mat) -> Mat:
    """Kronecker product; vec(A X B) = kron(A, B^T) vec(X) for row-major vec."""
    ra, ca = shape(a)
    rb, cb = shape(b)
    out = zeros(ra * rb, ca * cb)
    for i in range(ra):
        for j in range(ca):
            x = a[i][j]
            if x:
                for k in range(rb):
                    for l, y in enumerate(b[k]):
                        if y:
                            out[i * rb + k][j * cb + l] = x * y
    return out


def leading_minors(m: Mat) -> list[Fraction]:
    return [determinant([row[:k] for row in m[:k]]) for k in range(1, len(m) + 1)]


def is_negative_definite(m: Mat) -> bool:
    """Sylvester's criterion: leading minors alternate in sign, starting negative."""
    if m != transpose(m):
        return False
    return all((d < 0) if k % 2 == 0 else (d > 0) for k, d in enumerate(leading_minors(m)))
