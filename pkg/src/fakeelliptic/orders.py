"""Lattices and orders in a quaternion algebra.

An order is a rank-4 lattice that contains 1, is closed under
multiplication, and consists of integral elements (reduced trace and norm
in Z).  Maximality is certified by the reduced discriminant against the
product of the ramified primes, and reached from the standard order
Z<1, x, y, xy> by saturation.
"""

from fractions import Fraction
import itertools
import math

from .exactlinalg import (ComputationError, exact_det, exact_rank, exact_solve,
                          fraction_sqrt)
from .quaternions import AlgebraSplit, QuatElement, ramified_primes


class NotAnOrder(ComputationError):
    pass


class SearchExhausted(ComputationError):
    """Saturation found no enlargement; carries the best order reached."""

    def __init__(self, message, order):
        super().__init__(message)
        self.order = order


class OrderLattice:
    """Rank-4 lattice given by four generator rows in (1,x,y,xy) coordinates."""

    def __init__(self, params, basis):
        basis = [[Fraction(x) for x in row] for row in basis]
        if len(basis) != 4 or any(len(r) != 4 for r in basis):
            raise ValueError("basis must be 4x4")
        if exact_rank(basis) != 4:
            raise ValueError("basis is not of full rank")
        self.params = params
        self.basis = basis

    def generators(self):
        return [QuatElement(self.params, *row) for row in self.basis]

    def coords_of(self, q):
        """Coordinates of q in the lattice basis, or None."""
        cols = [[self.basis[j][i] for j in range(4)] for i in range(4)]
        return exact_solve(cols, list(q.coords()))

    def element_from(self, coords):
        q = QuatElement(self.params, 0)
        for c, g in zip(coords, self.generators()):
            q = q + g * Fraction(c)
        return q

    def contains(self, q):
        sol = self.coords_of(q)
        return sol is not None and all(c.denominator == 1 for c in sol)

    def __eq__(self, other):
        if not isinstance(other, OrderLattice):
            return NotImplemented
        return (self.params == other.params
                and all(self.contains(g) for g in other.generators())
                and all(other.contains(g) for g in self.generators()))


def standard_order(params):
    return OrderLattice(params, [[1, 0, 0, 0], [0, 1, 0, 0],
                                 [0, 0, 1, 0], [0, 0, 0, 1]])


def is_order(L):
    """Closure certificate: returns (bool, list of violated conditions)."""
    problems = []
    one = QuatElement(L.params, 1)
    if not L.contains(one):
        problems.append("1 is not in the lattice")
    gens = L.generators()
    for g in gens:
        if g.trd().denominator != 1 or g.nrd().denominator != 1:
            problems.append(f"generator {g.coords()} is not integral")
    for gi, gj in itertools.product(gens, gens):
        if not L.contains(gi * gj):
            problems.append(
                f"product {gi.coords()} * {gj.coords()} leaves the lattice")
    return not problems, problems


def reduced_discriminant(L):
    """sqrt|det| of the Gram matrix trd(e_i * conj(e_j)) over the basis."""
    ok, problems = is_order(L)
    if not ok:
        raise NotAnOrder("; ".join(problems))
    gens = L.generators()
    gram = [[(gi * gj.conj()).trd() for gj in gens] for gi in gens]
    d = abs(exact_det(gram))
    root = fraction_sqrt(Fraction(d))
    if root is None or root.denominator != 1:
        raise NotAnOrder("discriminant Gram determinant is not a perfect square")
    return int(root)


def is_maximal(L):
    ram = ramified_primes(L.params)
    if not ram:
        raise AlgebraSplit("the algebra is split; the family needs a division algebra")
    return reduced_discriminant(L) == math.prod(ram)


def saturate(L, max_passes=64):
    """Grow L to a maximal order by adjoining integral coset elements v/q.

    The index of L in any maximal order equals disc(L)/disc(B), so the
    adjoined denominators q run over primes of that gap.  The replaced
    basis row is the last one with a nonzero coset coefficient (the
    representative is scaled so that coefficient is 1 mod q), which keeps
    the leading generators, in particular 1, in place.
    """
    ok, problems = is_order(L)
    if not ok:
        raise NotAnOrder("; ".join(problems))
    ram = ramified_primes(L.params)
    target = math.prod(ram) if ram else 1
    current = L
    for _ in range(max_passes):
        disc = reduced_discriminant(current)
        if disc == target:
            return current
        gap = disc // target
        enlarged = None
        for q in sorted(set(_prime_divisors(gap))):
            enlarged = _adjoin_coset(current, q, disc)
            if enlarged is not None:
                break
        if enlarged is None:
            raise SearchExhausted(
                f"no integral enlargement below discriminant {disc}", current)
        current = enlarged
    raise SearchExhausted("saturation did not terminate", current)


def _prime_divisors(n):
    out = []
    d = 2
    n = int(n)
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def _adjoin_coset(L, q, disc):
    gens = L.generators()
    for coeffs in itertools.product(range(q), repeat=4):
        if all(c == 0 for c in coeffs):
            continue
        j = max(i for i, c in enumerate(coeffs) if c != 0)
        # scale the representative so the replaced coordinate is 1 mod q
        inv = pow(coeffs[j], -1, q)
        scaled = [(c * inv) % q for c in coeffs]
        v = QuatElement(L.params, 0)
        for c, g in zip(scaled, gens):
            v = v + g * Fraction(c, q)
        if v.trd().denominator != 1 or v.nrd().denominator != 1:
            continue
        rows = [list(r) for r in L.basis]
        rows[j] = [Fraction(x) for x in v.coords()]
        if exact_rank(rows) != 4:
            continue
        candidate = OrderLattice(L.params, rows)
        ok, _ = is_order(candidate)
        if ok and reduced_discriminant(candidate) < disc:
            return candidate
    return None


class UnitSample:
    """A lattice element of reduced norm 1, tagged elliptic when trd^2 < 4."""

    __slots__ = ("element", "norm", "is_elliptic", "coords")

    def __init__(self, element, coords):
        self.element = element
        self.coords = tuple(coords)
        self.norm = element.nrd()
        self.is_elliptic = element.trd() ** 2 < 4 * self.norm

    def __repr__(self):
        return f"UnitSample({self.element!r}, elliptic={self.is_elliptic})"


def enumerate_units(L, height):
    """All elements with basis coordinates in [-height, height]^4 and nrd = 1."""
    if height < 0:
        raise ValueError("height must be >= 0")
    gens = L.generators()
    out = []
    for coeffs in itertools.product(range(-height, height + 1), repeat=4):
        q = QuatElement(L.params, 0)
        for c, g in zip(coeffs, gens):
            q = q + g * c
        if q.nrd() == 1:
            out.append(UnitSample(q, coeffs))
    out.sort(key=lambda u: u.coords)
    return out


def congruence_filter(units, N, L):
    """Units congruent to 1 modulo N in the lattice basis (N >= 3 for torsion-freeness)."""
    kept = []
    for u in units:
        delta = L.coords_of(u.element - QuatElement(L.params, 1))
        if delta is not None and all(c.denominator == 1 and c.numerator % N == 0
                                     for c in delta):
            kept.append(u)
    return kept
