"""CM points: fixed points of elliptic elements of the order.

An element mu is elliptic when it is projectively nontrivial, nrd(mu) > 0
and trd(mu)^2 < 4 nrd(mu); it then fixes a unique tau in the upper half
plane, and mu_tau = tau' * (tau, 1)^t for the eigenvalue tau' = C tau + D.
The fiber over such a tau is isogenous to a product of elliptic curves.
"""

import itertools
import math

import mpmath
from mpmath import mp

from .exactlinalg import ComputationError, DEFAULT_PRECISION, solve_quadratic
from .family import UpperHalfPoint, as_complex
from .quaternions import QuatElement, embed


class NotElliptic(ComputationError):
    pass


class EigenMismatch(ComputationError):
    pass


def is_elliptic(mu):
    if mu.is_zero():
        raise ValueError("mu must be nonzero")
    if mu.is_scalar():
        return False
    nrd = mu.nrd()
    return nrd > 0 and mu.trd() ** 2 < 4 * nrd


def fixed_point_quadratic(mu):
    """Exact coefficients (c2, c1, c0) of C T^2 + (D - A) T - B over Q(sqrt a)."""
    M = embed(mu)
    return M[1][0], M[1][1] - M[0][0], -M[0][1]


def fixed_point(mu, prec=DEFAULT_PRECISION):
    """The unique fixed point of mu in the upper half plane."""
    if not is_elliptic(mu):
        raise NotElliptic(f"{mu!r} has no fixed point in the upper half plane")
    c2, c1, c0 = fixed_point_quadratic(mu)
    # c2 = m - n*sqrt(a) is nonzero: otherwise mu is triangular with real
    # eigenvalues, contradicting trd^2 < 4 nrd
    r1, _ = solve_quadratic(c2, c1, c0, prec)
    return UpperHalfPoint(r1, quad=(c2, c1, c0))


def eigenvalue_tau_prime(mu, tau, prec=DEFAULT_PRECISION, tol=None):
    """tau' with mu_tau = tau' * (tau, 1)^t, i.e. tau' = C tau + D.

    Verifies the eigenvector relation in both coordinates.
    """
    with mp.workprec(prec):
        if tol is None:
            tol = mpmath.mpf(10) ** -20
        t = as_complex(tau)
        M = embed(mu)
        C = M[1][0].numeric(prec)
        D = M[1][1].numeric(prec)
        tprime = C * t + D
        r1 = M[0][0].numeric(prec) * t + M[0][1].numeric(prec) - tprime * t
        r2 = C * t + D - tprime
        scale = 1 + abs(tprime)
        if abs(r1) > tol * scale or abs(r2) > tol * scale:
            raise EigenMismatch(
                f"residuals {mpmath.nstr(abs(r1), 5)}, {mpmath.nstr(abs(r2), 5)}")
        return tprime


class CMPoint:
    """mu, its fixed point (with exact quadratic), and the eigenvalue tau'."""

    __slots__ = ("mu", "tau", "tau_prime", "char_poly", "coords")

    def __init__(self, mu, tau, tau_prime, coords=None):
        self.mu = mu
        self.tau = tau
        self.tau_prime = tau_prime
        # tau' is a root of T^2 - trd(mu) T + nrd(mu)
        self.char_poly = (mu.trd(), mu.nrd())
        self.coords = coords

    def quad_key(self):
        """Monic exact quadratic of tau over Q(sqrt a): the dedup key."""
        c2, c1, c0 = self.tau.quad
        return (c1 / c2, c0 / c2)

    def __repr__(self):
        return (f"CMPoint(mu={self.mu.coords()}, "
                f"tau={mpmath.nstr(self.tau.tau, 10)}, "
                f"tau_prime={mpmath.nstr(self.tau_prime, 10)})")


def cm_point(mu, prec=DEFAULT_PRECISION, coords=None):
    """Build the CM point of mu, normalizing the sign so Im(tau') > 0.

    mu and -mu have the same fixed point with conjugate eigenvalues, so
    exactly one sign puts tau' in the upper half plane.
    """
    tau = fixed_point(mu, prec)
    tprime = eigenvalue_tau_prime(mu, tau, prec)
    if tprime.imag <= 0:
        mu = -mu
        tau = fixed_point(mu, prec)
        tprime = eigenvalue_tau_prime(mu, tau, prec)
        coords = tuple(-c for c in coords) if coords is not None else None
    return CMPoint(mu, tau, tprime, coords)


def normalize_isogeny(lam, mu, order):
    """mu' = n * lam^-1 * mu with n minimal positive making mu' integral.

    Replaces the pair (lam, mu) of the covering relation by (id, mu'),
    at the cost of passing to the n-fold cover of the elliptic curve.
    """
    if lam.is_zero():
        raise ValueError("lam must be nonzero")
    v = lam.inverse() * mu
    coords = order.coords_of(v)
    if coords is None:
        raise ValueError("lam^-1 * mu does not lie in the span of the order")
    n = math.lcm(*(c.denominator for c in coords))
    return v * n


def in_window(tau, window):
    if window is None:
        return True
    re_min, re_max, im_min, im_max = window
    t = as_complex(tau)
    return re_min <= t.real <= re_max and im_min <= t.imag <= im_max


def enumerate_cm_points(order, height, window=None, prec=DEFAULT_PRECISION):
    """All CM points of elliptic elements with coordinates in [-height, height]^4.

    Deduplicated by the exact monic quadratic of tau; for each point the
    representative mu with the smallest coordinate norm is kept
    (lexicographic coordinates break ties).
    """
    if height < 1:
        raise ValueError("height must be >= 1")
    gens = order.generators()
    found = {}
    for coeffs in itertools.product(range(-height, height + 1), repeat=4):
        mu = QuatElement(order.params, 0)
        for c, g in zip(coeffs, gens):
            mu = mu + g * c
        if mu.is_zero() or mu.is_scalar():
            continue
        if not is_elliptic(mu):
            continue
        pt = cm_point(mu, prec, coords=coeffs)
        if not in_window(pt.tau, window):
            continue
        key = pt.quad_key()
        rank = (sum(c * c for c in pt.coords), pt.coords)
        if key not in found or rank < found[key][0]:
            found[key] = (rank, pt)
    pts = [pt for _, pt in found.values()]
    pts.sort(key=lambda p: (sum(c * c for c in p.coords), p.coords))
    return pts
