"""Rational quaternion algebras B = (a, b / Q) in the normal form a > 0, b < 0.

Elements are written over the basis (1, x, y, xy) with x^2 = a, y^2 = b,
xy = -yx.  The involution, reduced trace/norm, the fixed embedding into
2x2 matrices over Q(sqrt(a)), and the local invariants (Hilbert symbols,
ramified primes) live here.
"""

from fractions import Fraction

from .exactlinalg import ComputationError, QuadExt, fraction_sqrt


class AlgebraSplit(ComputationError):
    """Raised where a construction requires a division algebra."""


class AlgebraParams:
    """The pair (a, b) with a > 0 not a rational square and b < 0."""

    __slots__ = ("a", "b")

    def __init__(self, a, b):
        a = Fraction(a)
        b = Fraction(b)
        if a <= 0:
            raise ValueError("a must be positive")
        if fraction_sqrt(a) is not None:
            raise ValueError("a must not be a rational square")
        if b >= 0:
            raise ValueError("b must be negative")
        self.a = a
        self.b = b

    def __eq__(self, other):
        return isinstance(other, AlgebraParams) and (self.a, self.b) == (other.a, other.b)

    def __hash__(self):
        return hash((self.a, self.b))

    def __repr__(self):
        return f"AlgebraParams({self.a}, {self.b})"


class QuatElement:
    """k + l*x + m*y + n*xy with rational coordinates."""

    __slots__ = ("params", "k", "l", "m", "n")

    def __init__(self, params, k, l=0, m=0, n=0):
        self.params = params
        self.k = Fraction(k)
        self.l = Fraction(l)
        self.m = Fraction(m)
        self.n = Fraction(n)

    def coords(self):
        return (self.k, self.l, self.m, self.n)

    def _coerce(self, other):
        if isinstance(other, QuatElement):
            if other.params != self.params:
                raise ValueError("elements of different algebras")
            return other
        return QuatElement(self.params, Fraction(other))

    def __add__(self, other):
        o = self._coerce(other)
        return QuatElement(self.params, self.k + o.k, self.l + o.l,
                           self.m + o.m, self.n + o.n)

    __radd__ = __add__

    def __neg__(self):
        return QuatElement(self.params, -self.k, -self.l, -self.m, -self.n)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, QuatElement):
            c = Fraction(other)
            return QuatElement(self.params, c * self.k, c * self.l, c * self.m, c * self.n)
        o = self._coerce(other)
        a, b = self.params.a, self.params.b
        k1, l1, m1, n1 = self.coords()
        k2, l2, m2, n2 = o.coords()
        return QuatElement(
            self.params,
            k1 * k2 + a * l1 * l2 + b * m1 * m2 - a * b * n1 * n2,
            k1 * l2 + l1 * k2 - b * m1 * n2 + b * n1 * m2,
            k1 * m2 + m1 * k2 + a * l1 * n2 - a * n1 * l2,
            k1 * n2 + l1 * m2 - m1 * l2 + n1 * k2)

    def __rmul__(self, other):
        # scalars commute
        return self * other

    def __eq__(self, other):
        if isinstance(other, QuatElement):
            return self.params == other.params and self.coords() == other.coords()
        return self.coords() == (Fraction(other), 0, 0, 0)

    def __hash__(self):
        return hash((self.params, self.coords()))

    def is_zero(self):
        return self.coords() == (0, 0, 0, 0)

    def is_scalar(self):
        return self.l == 0 and self.m == 0 and self.n == 0

    def conj(self):
        return QuatElement(self.params, self.k, -self.l, -self.m, -self.n)

    def trd(self):
        return 2 * self.k

    def nrd(self):
        a, b = self.params.a, self.params.b
        return (self.k ** 2 - a * self.l ** 2 - b * self.m ** 2
                + a * b * self.n ** 2)

    def inverse(self):
        nm = self.nrd()
        if nm == 0:
            raise ZeroDivisionError("element of reduced norm zero")
        return self.conj() * (Fraction(1) / nm)

    def __repr__(self):
        return f"QuatElement({self.k}, {self.l}, {self.m}, {self.n})"


def quat_mul(p, q):
    return p * q


def quat_conj(q):
    return q.conj()


def reduced_trace(q):
    return q.trd()


def reduced_norm(q):
    return q.nrd()


def embed(q):
    """The fixed embedding into M_2(Q(sqrt a)).

    x maps to diag(sqrt a, -sqrt a) and y to [[0, b], [1, 0]]; a general
    element lands on [[k + l*sqrt a, b*(m + n*sqrt a)], [m - n*sqrt a, k - l*sqrt a]].
    """
    a, b = q.params.a, q.params.b
    k, l, m, n = q.coords()
    return [[QuadExt(k, l, a), QuadExt(b * m, b * n, a)],
            [QuadExt(m, -n, a), QuadExt(k, -l, a)]]


def mat2_mul(P, Q):
    return [[P[0][0] * Q[0][0] + P[0][1] * Q[1][0], P[0][0] * Q[0][1] + P[0][1] * Q[1][1]],
            [P[1][0] * Q[0][0] + P[1][1] * Q[1][0], P[1][0] * Q[0][1] + P[1][1] * Q[1][1]]]


def mat2_trace(P):
    return P[0][0] + P[1][1]


def mat2_det(P):
    return P[0][0] * P[1][1] - P[0][1] * P[1][0]


# ---------------------------------------------------------------------------
# local invariants

INFINITE_PLACE = "oo"


def _factorize(n):
    """Trial-division factorization of a positive integer; {prime: exponent}."""
    n = int(n)
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _squarefree(r):
    """Squarefree integer with the same square class as the rational r."""
    sign = -1 if r < 0 else 1
    n = abs(r.numerator) * r.denominator  # same class as |r|
    out = 1
    for p, e in _factorize(n).items():
        if e % 2:
            out *= p
    return sign * out


def _legendre(u, p):
    """Legendre symbol (u/p) for p-unit integer u, odd prime p."""
    s = pow(u % p, (p - 1) // 2, p)
    return -1 if s == p - 1 else int(s)


def _val_unit(n, p):
    """(v_p(n), unit) for a nonzero integer n."""
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


def hilbert_symbol(a, b, p):
    """Local Hilbert symbol (a, b)_p in {+1, -1}.

    p is an odd prime, 2, or the infinite place "oo".  Computed by the
    standard explicit formulas after reducing a and b to squarefree
    integers (the symbol only depends on square classes).
    """
    a = Fraction(a)
    b = Fraction(b)
    if a == 0 or b == 0:
        raise ValueError("symbol needs nonzero arguments")
    sa, sb = _squarefree(a), _squarefree(b)
    if p == INFINITE_PLACE:
        return -1 if (sa < 0 and sb < 0) else 1
    p = int(p)
    if p == 2:
        alpha, u = _val_unit(abs(sa), 2)
        beta, v = _val_unit(abs(sb), 2)
        u = u if sa > 0 else -u
        v = v if sb > 0 else -v
        eps_u = ((u - 1) // 2) % 2
        eps_v = ((v - 1) // 2) % 2
        om_u = ((u * u - 1) // 8) % 2
        om_v = ((v * v - 1) // 8) % 2
        e = eps_u * eps_v + alpha * om_v + beta * om_u
        return -1 if e % 2 else 1
    alpha, u = _val_unit(abs(sa), p)
    beta, v = _val_unit(abs(sb), p)
    u = u if sa > 0 else -u
    v = v if sb > 0 else -v
    e = alpha * beta * ((p - 1) // 2)
    s = (-1) ** (e % 2)
    if beta % 2:
        s *= _legendre(u, p)
    if alpha % 2:
        s *= _legendre(v, p)
    return s


def symbol_support(a, b):
    """Finite places where the symbol can be nontrivial: p | 2*num*den of a and b."""
    a = Fraction(a)
    b = Fraction(b)
    n = 2 * a.numerator * a.denominator * b.numerator * b.denominator
    return sorted(_factorize(abs(n)))


def ramified_primes(params):
    """Finite primes where B = (a, b / Q) is ramified."""
    return [p for p in symbol_support(params.a, params.b)
            if hilbert_symbol(params.a, params.b, p) == -1]


def is_indefinite_division(params):
    """True iff B is a division algebra split at the infinite place."""
    if hilbert_symbol(params.a, params.b, INFINITE_PLACE) != 1:
        return False
    return len(ramified_primes(params)) > 0
