"""Dense univariate polynomials over the rationals.

Coefficients are stored low power first as a tuple of Fractions with
trailing zeros stripped, so ``degree == len(coeffs) - 1`` and the zero
polynomial has an empty tuple.  Everything here is exact; nothing ever
rounds.  The helpers at the bottom (integer clearing, Taylor shift,
reversal) exist for Descartes sign-variation counting, which runs on
integer coefficient lists for speed.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _igcd
from typing import Iterable, Sequence

from .errors import ZeroPolynomial


class Poly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Fraction | int]):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    # -- basic queries -------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "Poly(0)"
        terms = [f"{c}*t^{i}" for i, c in enumerate(self.coeffs) if c]
        return "Poly(" + " + ".join(terms) + ")"

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return Poly([c * other for c in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly(())
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        return Poly(out)

    __rmul__ = __mul__

    def __call__(self, x: Fraction | int) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Poly":
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dv = other.coeffs
        dn = len(dv)
        lead = dv[-1]
        if len(rem) < dn:
            return Poly(()), Poly(rem)
        quot = [Fraction(0)] * (len(rem) - dn + 1)
        for i in range(len(rem) - dn, -1, -1):
            q = rem[i + dn - 1] / lead
            if q:
                quot[i] = q
                for j, c in enumerate(dv):
                    rem[i + j] -= q * c
        return Poly(quot), Poly(rem)

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ValueError("division is not exact")
        return q


ZERO = Poly(())
ONE = Poly((1,))
T = Poly((0, 1))


def poly_from_root(r: Fraction) -> Poly:
    """Monic-up-to-scaling integer polynomial with the single root r."""
    r = Fraction(r)
    return Poly((-r.numerator, r.denominator))


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Greatest common divisor, returned in canonical integer form."""
    a, b = p, q
    while not b.is_zero():
        a, b = b, a % b
    return canonicalize(a) if not a.is_zero() else ZERO


def square_free_part(p: Poly) -> Poly:
    """p divided by gcd(p, p'): same distinct roots, all simple.

    The result is in canonical integer form (content 1, positive leading
    coefficient), so equal root structures compare equal.
    """
    if p.is_zero():
        raise ZeroPolynomial("square_free_part of the zero polynomial")
    if p.degree == 0:
        return ONE
    g = poly_gcd(p, p.derivative())
    if g.degree <= 0:
        return canonicalize(p)
    return canonicalize(p.exact_div(g))


def clear_denominators(p: Poly) -> Poly:
    """Scale by the positive lcm of coefficient denominators: integer
    coefficients, same signs and roots, content untouched."""
    den = 1
    for c in p.coeffs:
        den = den * c.denominator // _igcd(den, c.denominator)
    if den == 1:
        return p
    return Poly([c * den for c in p.coeffs])


def canonicalize(p: Poly) -> Poly:
    """Scale to integer coefficients with content 1 and positive lead."""
    if p.is_zero():
        return ZERO
    den = 1
    for c in p.coeffs:
        den = den * c.denominator // _igcd(den, c.denominator)
    ints = [int(c * den) for c in p.coeffs]
    g = 0
    for v in ints:
        g = _igcd(g, v)
    if ints[-1] < 0:
        g = -g
    return Poly([v // g for v in ints])


def int_coeffs(p: Poly) -> list[int]:
    """Canonical integer coefficient list (low power first).

    The canonical form normalizes the leading sign, so this is for
    cache keys and root isolation; use signed_int_coeffs wherever the
    sign of an evaluation matters."""
    return [int(c) for c in canonicalize(p).coeffs]


def signed_int_coeffs(p: Poly) -> list[int]:
    """Integer coefficients with the sign of p preserved (denominators
    cleared by a positive factor, no other normalization)."""
    return [int(c) for c in clear_denominators(p).coeffs]


# -- integer coefficient helpers for root isolation -------------------
# These operate on plain int lists (low power first) so the hot loops of
# Descartes counting never touch Fraction arithmetic.


def ieval_sign(cs: Sequence[int], x: Fraction) -> int:
    """Sign of p(x) for integer coefficients and rational x, exactly.

    Evaluates the homogenized sum c_i * num^i * den^(n-i) with Horner,
    which has the sign of p(x) because den > 0.
    """
    if not cs:
        return 0
    num, den = x.numerator, x.denominator
    total = cs[-1]
    dpow = 1
    for c in reversed(cs[:-1]):
        dpow *= den
        total = total * num + c * dpow
    return (total > 0) - (total < 0)


def taylor_shift_1(cs: Sequence[int]) -> list[int]:
    """Coefficients of p(x + 1) from those of p(x)."""
    out = list(cs)
    n = len(out)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            out[j] += out[j + 1]
    return out


def sign_variations(cs: Sequence[int]) -> int:
    count = 0
    prev = 0
    for c in cs:
        if c:
            if prev and (c > 0) != (prev > 0):
                count += 1
            prev = c
    return count
