"""Exact and high-precision linear algebra kernel.

Exact scalars are ``fractions.Fraction`` and :class:`QuadExt` (elements
u + v*sqrt(a) of a real quadratic field).  Exact matrices are plain lists
of rows over either scalar type; everything is computed by fraction-free
Gaussian elimination with exact pivots, so ranks and determinants carry
no tolerance.

Numeric work (period lattices, nullspaces of the section systems) runs on
mpmath at a configurable binary precision, 128 bits by default.
"""

from fractions import Fraction
import math

import mpmath
from mpmath import mp

DEFAULT_PRECISION = 128


class ComputationError(Exception):
    """Base for every failure a computation can certify about its input."""


class NonConvergence(ComputationError):
    """Numeric decomposition failed at the configured precision."""


def fraction_sqrt(r):
    """Exact square root of a nonnegative Fraction, or None."""
    if r < 0:
        return None
    ns = math.isqrt(r.numerator)
    ds = math.isqrt(r.denominator)
    if ns * ns == r.numerator and ds * ds == r.denominator:
        return Fraction(ns, ds)
    return None


class QuadExt:
    """u + v*sqrt(rad) with u, v rational and rad a fixed nonsquare > 0."""

    __slots__ = ("u", "v", "rad")

    def __init__(self, u, v=0, rad=None):
        if rad is None:
            raise ValueError("QuadExt needs the radicand")
        rad = Fraction(rad)
        if rad <= 0 or fraction_sqrt(rad) is not None:
            raise ValueError("radicand must be positive and not a rational square")
        self.u = Fraction(u)
        self.v = Fraction(v)
        self.rad = rad

    def _coerce(self, other):
        if isinstance(other, QuadExt):
            if other.rad != self.rad:
                raise ValueError("mixed radicands")
            return other
        return QuadExt(other, 0, self.rad)

    def __add__(self, other):
        o = self._coerce(other)
        return QuadExt(self.u + o.u, self.v + o.v, self.rad)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.u, -self.v, self.rad)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return QuadExt(self.u * o.u + self.rad * self.v * o.v,
                       self.u * o.v + self.v * o.u, self.rad)

    __rmul__ = __mul__

    def inverse(self):
        nm = self.u * self.u - self.rad * self.v * self.v
        if nm == 0:
            raise ZeroDivisionError("zero element of the quadratic field")
        return QuadExt(self.u / nm, -self.v / nm, self.rad)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def conjugate(self):
        return QuadExt(self.u, -self.v, self.rad)

    def is_zero(self):
        return self.u == 0 and self.v == 0

    def __eq__(self, other):
        if isinstance(other, QuadExt):
            return self.rad == other.rad and self.u == other.u and self.v == other.v
        return self.v == 0 and self.u == other

    def __hash__(self):
        return hash((self.u, self.v, self.rad))

    def numeric(self, prec=DEFAULT_PRECISION):
        with mp.workprec(prec):
            s = mpmath.sqrt(mpmath.mpf(self.rad.numerator) / self.rad.denominator)
            return (mpmath.mpf(self.u.numerator) / self.u.denominator
                    + (mpmath.mpf(self.v.numerator) / self.v.denominator) * s)

    def __repr__(self):
        return f"({self.u} + {self.v}*sqrt({self.rad}))"


def _zero_like(x):
    if isinstance(x, QuadExt):
        return QuadExt(0, 0, x.rad)
    return Fraction(0)


def _is_zero(x):
    if isinstance(x, QuadExt):
        return x.is_zero()
    return x == 0


def exact_rref(rows):
    """Reduced row echelon form; returns (rref rows, pivot column list)."""
    m = [list(r) for r in rows]
    if not m:
        return m, []
    nrows, ncols = len(m), len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if not _is_zero(m[i][c]):
                pr = i
                break
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = m[r][c]
        m[r] = [x / inv for x in m[r]]
        for i in range(nrows):
            if i != r and not _is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def exact_rank(rows):
    return len(exact_rref(rows)[1])


def exact_det(rows):
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    m = [list(r) for r in rows]
    det = None
    sign = 1
    for c in range(n):
        pr = None
        for i in range(c, n):
            if not _is_zero(m[i][c]):
                pr = i
                break
        if pr is None:
            return _zero_like(m[0][0])
        if pr != c:
            m[c], m[pr] = m[pr], m[c]
            sign = -sign
        piv = m[c][c]
        det = piv if det is None else det * piv
        for i in range(c + 1, n):
            if not _is_zero(m[i][c]):
                f = m[i][c] / piv
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    if sign < 0:
        det = -det
    return det


def exact_nullspace(rows):
    """Basis of the right nullspace, one vector per free column."""
    if not rows:
        return []
    ncols = len(rows[0])
    rref, pivots = exact_rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    zero = _zero_like(rows[0][0])
    one = zero + 1
    basis = []
    for fc in free:
        vec = [zero] * ncols
        vec[fc] = one
        for r, pc in enumerate(pivots):
            vec[pc] = -rref[r][fc]
        basis.append(vec)
    return basis


def exact_solve(rows, rhs):
    """Solve A x = rhs exactly; None if inconsistent or underdetermined."""
    n = len(rows)
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    rref, pivots = exact_rref(aug)
    ncols = len(rows[0])
    if ncols in pivots:  # pivot in the rhs column
        return None
    if len(pivots) < ncols:
        return None
    zero = _zero_like(rows[0][0])
    x = [zero] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = rref[r][ncols]
    return x


# ---------------------------------------------------------------------------
# numeric kernel


def _to_ap_matrix(rows):
    if isinstance(rows, mpmath.matrix):
        return rows.copy()
    return mpmath.matrix([[mpmath.mpmathify(x) for x in r] for r in rows])


def numeric_svd(m, prec=DEFAULT_PRECISION):
    """Full SVD rows of a complex matrix, zero-padding to square shape.

    Returns (sigma list, V) with the input equal to U*diag(sigma)*V; the
    rows of V beyond the numeric rank span the row-space complement, so
    their conjugates give the right nullspace.
    """
    with mp.workprec(prec):
        A = _to_ap_matrix(m)
        if A.rows < A.cols:
            P = mpmath.zeros(A.cols, A.cols)
            for i in range(A.rows):
                for j in range(A.cols):
                    P[i, j] = A[i, j]
            A = P
        try:
            _, S, V = mpmath.svd_c(A)
        except Exception as exc:  # pragma: no cover - mpmath failure path
            raise NonConvergence(str(exc)) from exc
        return [S[i] for i in range(S.rows)], V


def numeric_rank(m, tol, prec=DEFAULT_PRECISION):
    with mp.workprec(prec):
        sigma, _ = numeric_svd(m, prec)
        if not sigma:
            return 0
        smax = max(sigma)
        if smax < tol:
            return 0
        return sum(1 for s in sigma if s >= tol * smax)


def numeric_nullspace(m, tol, prec=DEFAULT_PRECISION):
    """Orthonormal basis of the right nullspace at relative tolerance tol."""
    with mp.workprec(prec):
        A = _to_ap_matrix(m)
        ncols = A.cols
        sigma, V = numeric_svd(A, prec)
        smax = max(sigma) if sigma else mpmath.mpf(0)
        basis = []
        for i in range(ncols):
            s = sigma[i] if i < len(sigma) else mpmath.mpf(0)
            if smax < tol or s < tol * smax:
                vec = mpmath.matrix([mpmath.conj(V[i, j]) for j in range(ncols)])
                basis.append(vec)
        return basis


def solve_quadratic(c2, c1, c0, prec=DEFAULT_PRECISION):
    """Both roots of c2*T^2 + c1*T + c0 (QuadExt or Fraction coefficients).

    Deterministic order: larger imaginary part first, ties broken by
    larger real part.
    """
    def num(c):
        if isinstance(c, QuadExt):
            return c.numeric(prec)
        c = Fraction(c)
        with mp.workprec(prec):
            return mpmath.mpf(c.numerator) / c.denominator

    with mp.workprec(prec):
        A, B, C = num(c2), num(c1), num(c0)
        if A == 0:
            raise ZeroDivisionError("leading coefficient is zero")
        disc = B * B - 4 * A * C
        sq = mpmath.sqrt(mpmath.mpc(disc))
        r1 = (-B + sq) / (2 * A)
        r2 = (-B - sq) / (2 * A)
        if (r1.imag, r1.real) < (r2.imag, r2.real):
            r1, r2 = r2, r1
        return r1, r2
