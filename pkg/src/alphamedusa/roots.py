"""Exact real-root isolation and algebraic numbers.

Roots of integer polynomials are isolated over a query interval (lo, hi]
by square-free reduction followed by bisection with Descartes sign
counting: the polynomial is mapped onto each candidate interval with a
Moebius transform, and the sign-variation count of the transformed
coefficients bounds the number of roots (0 certifies none, 1 certifies
exactly one).  The left endpoint is excluded and the right endpoint
included, matching the event queue's "smallest root strictly after the
current time" contract.

An AlgebraicReal is a square-free defining polynomial plus a shrinking
isolating interval; the interval refines in place, so comparisons get
cheaper over time.  Comparisons that stay ambiguous after many rounds
fall back to an exact gcd computation, which decides equality.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _igcd
from typing import Optional, Sequence

from .errors import InvalidInterval, ZeroPolynomial
from .polynomial import (
    Poly,
    canonicalize,
    ieval_sign,
    int_coeffs,
    poly_from_root,
    poly_gcd,
    sign_variations,
    signed_int_coeffs,
    square_free_part,
    taylor_shift_1,
)

LT, EQ, GT = -1, 0, 1

_GCD_FALLBACK_ROUNDS = 64


def _transformed_coeffs(cs: Sequence[int], lo: Fraction, hi: Fraction) -> list[int]:
    """Integer coefficients of the Moebius image of p on (lo, hi).

    Substitutes t = lo + (hi-lo)*x (unit interval), reverses, and Taylor
    shifts by one; positive roots of the result correspond one-to-one to
    roots of p in the open interval (lo, hi).
    """
    n = len(cs) - 1
    den = lo.denominator * hi.denominator // _igcd(lo.denominator, hi.denominator)
    a = lo.numerator * (den // lo.denominator)
    b = hi.numerator * (den // hi.denominator)
    d = b - a
    # q(x) = sum_i cs[i] * (a + d*x)^i * den^(n-i), integer coefficients
    q = [0] * (n + 1)
    power = [1]  # (a + d*x)^i, built incrementally
    cpow = [1] * (n + 1)
    for i in range(1, n + 1):
        cpow[i] = cpow[i - 1] * den
    for i, c in enumerate(cs):
        if c:
            scale = c * cpow[n - i]
            for j, pc in enumerate(power):
                q[j] += scale * pc
        if i < n:
            nxt = [0] * (len(power) + 1)
            for j, pc in enumerate(power):
                nxt[j] += a * pc
                nxt[j + 1] += d * pc
            power = nxt
    q.reverse()
    return taylor_shift_1(q)


def _descartes(cs: Sequence[int], lo: Fraction, hi: Fraction) -> int:
    """Sign-variation bound on the number of roots in the open (lo, hi)."""
    if len(cs) <= 1:
        return 0
    return sign_variations(_transformed_coeffs(cs, lo, hi))


def descartes_bound(p: Poly, lo, hi) -> int:
    """Public wrapper: variation count of p mapped onto (lo, hi).

    The count is an upper bound with matching parity on the number of
    roots strictly between lo and hi.
    """
    if p.is_zero():
        raise ZeroPolynomial("descartes_bound of the zero polynomial")
    lo, hi = Fraction(lo), Fraction(hi)
    if not lo < hi:
        raise InvalidInterval(f"empty interval ({lo}, {hi})")
    return _descartes(int_coeffs(p), lo, hi)


class AlgebraicReal:
    """A real algebraic number: square-free defining polynomial plus an
    isolating interval [lo, hi] that refines in place.

    Interval form keeps the root strictly inside (the polynomial is
    nonzero at both endpoints); once the root is discovered to be
    rational, ``exact`` is set and lo == hi == exact.
    """

    __slots__ = ("poly", "icoeffs", "lo", "hi", "exact", "_sign_lo")

    def __init__(self, poly: Poly, icoeffs: Sequence[int], lo: Fraction, hi: Fraction):
        self.poly = poly
        self.icoeffs = list(icoeffs)
        self.lo = lo
        self.hi = hi
        self.exact: Optional[Fraction] = None
        self._sign_lo = ieval_sign(self.icoeffs, lo)
        assert self._sign_lo != 0 and self._sign_lo == -ieval_sign(self.icoeffs, hi)

    @classmethod
    def from_rational(cls, r) -> "AlgebraicReal":
        r = Fraction(r)
        self = object.__new__(cls)
        self.poly = poly_from_root(r)
        self.icoeffs = [int(c) for c in self.poly.coeffs]
        self.lo = self.hi = r
        self.exact = r
        self._sign_lo = 0
        return self

    @classmethod
    def known_root(cls, poly: Poly, icoeffs: Sequence[int], r: Fraction) -> "AlgebraicReal":
        """Rational root r of poly, found during isolation."""
        self = object.__new__(cls)
        self.poly = poly
        self.icoeffs = list(icoeffs)
        self.lo = self.hi = r
        self.exact = r
        self._sign_lo = 0
        return self

    # -- refinement ----------------------------------------------------

    def refine_step(self) -> None:
        if self.exact is not None:
            return
        m = (self.lo + self.hi) / 2
        s = ieval_sign(self.icoeffs, m)
        if s == 0:
            self.exact = m
            self.lo = self.hi = m
        elif s == self._sign_lo:
            self.lo = m
        else:
            self.hi = m

    def refine_below(self, width: Fraction) -> None:
        while self.exact is None and self.hi - self.lo > width:
            self.refine_step()

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    # -- conversions ---------------------------------------------------

    def __float__(self) -> float:
        if self.exact is not None:
            return float(self.exact)
        self.refine_below(Fraction(1, 1 << 60))
        return float((self.lo + self.hi) / 2)

    def __repr__(self) -> str:
        if self.exact is not None:
            return f"AlgebraicReal({self.exact})"
        return f"AlgebraicReal({self.poly!r} in [{self.lo}, {self.hi}])"

    # -- ordering ------------------------------------------------------

    def __lt__(self, other) -> bool:
        return compare(self, other) == LT

    def __le__(self, other) -> bool:
        return compare(self, other) != GT

    def __gt__(self, other) -> bool:
        return compare(self, other) == GT

    def __ge__(self, other) -> bool:
        return compare(self, other) != LT

    def __eq__(self, other) -> bool:
        if not isinstance(other, (AlgebraicReal, Fraction, int)):
            return NotImplemented
        return compare(self, other) == EQ

    __hash__ = None  # mutable; identity hashing would break value equality


def as_algebraic(x) -> AlgebraicReal:
    if isinstance(x, AlgebraicReal):
        return x
    return AlgebraicReal.from_rational(x)


def _isolate_in(icoeffs: Sequence[int], lo: Fraction, hi: Fraction) -> bool:
    """True when the square-free integer polynomial has a root in the
    open interval (lo, hi); both endpoints must be nonroots."""
    v = _descartes(icoeffs, lo, hi)
    if v == 0:
        return False
    if v == 1 or ieval_sign(icoeffs, lo) != ieval_sign(icoeffs, hi):
        return True
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        v = _descartes(icoeffs, a, b)
        if v == 0:
            continue
        if v == 1:
            return True
        m = (a + b) / 2
        if ieval_sign(icoeffs, m) == 0:
            return True
        stack.append((a, m))
        stack.append((m, b))
    return False


def compare(a, b) -> int:
    """Total order on real values: returns LT, EQ, or GT.

    Refines both isolating intervals until they separate; after 64
    fruitless rounds, decides equality exactly through the gcd of the
    defining polynomials (a common root inside the overlap means EQ).
    """
    a = as_algebraic(a)
    b = as_algebraic(b)
    if a is b:
        return EQ
    known_distinct = False
    rounds = 0
    while True:
        if a.exact is not None and b.exact is not None:
            if a.exact < b.exact:
                return LT
            if a.exact > b.exact:
                return GT
            return EQ
        if a.hi <= b.lo:
            return LT
        if b.hi <= a.lo:
            return GT
        rounds += 1
        if rounds > _GCD_FALLBACK_ROUNDS and not known_distinct:
            known_distinct = True
            if _possible_equal(a, b):
                return EQ
        a.refine_step()
        b.refine_step()


def _possible_equal(a: AlgebraicReal, b: AlgebraicReal) -> bool:
    """Exact equality decision for two overlapping algebraic reals."""
    if a.exact is not None:
        return ieval_sign(b.icoeffs, a.exact) == 0
    if b.exact is not None:
        return ieval_sign(a.icoeffs, b.exact) == 0
    g = poly_gcd(a.poly, b.poly)
    if g.degree < 1:
        return False
    lo = max(a.lo, b.lo)
    hi = min(a.hi, b.hi)
    gcs = [int(c) for c in g.coeffs]
    # g divides both defining polynomials, so it cannot vanish at either
    # endpoint; a root of g in the overlap is necessarily both roots.
    return _isolate_in(gcs, lo, hi)


def refine(a: AlgebraicReal, width) -> AlgebraicReal:
    """Shrink the isolating interval to at most the given width."""
    width = Fraction(width)
    if width <= 0:
        raise InvalidInterval("refinement width must be positive")
    a.refine_below(width)
    return a


def sign_at(g: Poly, x) -> int:
    """Exact sign of g evaluated at the real value x.

    For interval arguments, refines until the interval certifies a
    constant sign of g; if g and the defining polynomial share the root
    (detected by gcd after persistent overlap), the sign is 0.
    """
    if not isinstance(x, AlgebraicReal) or x.exact is not None:
        v = g(x.exact if isinstance(x, AlgebraicReal) else Fraction(x))
        return (v > 0) - (v < 0)
    if g.is_zero():
        return 0
    gcs = signed_int_coeffs(g)
    if not gcs:
        return 0
    if len(gcs) == 1:
        return (gcs[0] > 0) - (gcs[0] < 0)
    checked_common = False
    rounds = 0
    while True:
        s_lo = ieval_sign(gcs, x.lo)
        s_hi = ieval_sign(gcs, x.hi)
        if s_lo != 0 and s_lo == s_hi and _descartes(gcs, x.lo, x.hi) == 0:
            return s_lo
        rounds += 1
        if rounds > _GCD_FALLBACK_ROUNDS and not checked_common:
            checked_common = True
            d = poly_gcd(x.poly, g)
            if d.degree >= 1 and _isolate_in(
                [int(c) for c in d.coeffs], x.lo, x.hi
            ):
                return 0
        x.refine_step()
        if x.exact is not None:
            v = g(x.exact)
            return (v > 0) - (v < 0)


def root_transition(p: Poly, root: AlgebraicReal) -> tuple[int, int]:
    """Signs of p just before and just after one of its roots.

    ``root`` must come from isolating (the square-free part of) p, so in
    interval form the endpoints flank exactly this root and p is nonzero
    at both.  For an exact rational root the linear factor is divided
    out to find the multiplicity m, and the flanking signs follow from
    sign(q(r)) and the parity of m.
    """
    if root.exact is None:
        pcs = signed_int_coeffs(p)
        s_lo = ieval_sign(pcs, root.lo)
        s_hi = ieval_sign(pcs, root.hi)
        assert s_lo != 0 and s_hi != 0
        return s_lo, s_hi
    r = root.exact
    lin = poly_from_root(r)
    m = 0
    q = p
    while True:
        cand, rem = divmod(q, lin)
        if not rem.is_zero():
            break
        q = cand
        m += 1
    assert m >= 1, "root_transition called at a non-root"
    v = q(r)
    s_after = (v > 0) - (v < 0)
    s_before = s_after if m % 2 == 0 else -s_after
    return s_before, s_after


def rational_between(a, b) -> Fraction:
    """A rational strictly between two distinct real values a < b."""
    a = as_algebraic(a)
    b = as_algebraic(b)
    while not a.hi < b.lo:
        a.refine_step()
        b.refine_step()
        if a.exact is not None and b.exact is not None:
            return (a.exact + b.exact) / 2
    return (a.hi + b.lo) / 2


class RootCache:
    """Cache of isolated roots per canonical polynomial within one epoch.

    An epoch is a maximal span with unchanged motions (between global
    bending times); every certificate built inside it is isolated up to
    the same right endpoint, so entries are keyed by polynomial alone
    and cleared whenever the epoch advances.
    """

    __slots__ = ("entries", "epoch_end", "hits")

    def __init__(self):
        self.entries: dict = {}
        self.epoch_end: Optional[Fraction] = None
        self.hits = 0

    def set_epoch(self, end: Fraction) -> None:
        if end != self.epoch_end:
            self.entries.clear()
            self.epoch_end = end

    def lookup(self, key, lo: Fraction, hi: Fraction):
        if hi != self.epoch_end:
            return None
        entry = self.entries.get(key)
        if entry is None:
            return None
        lo0, roots = entry
        if lo0 > lo:
            return None
        self.hits += 1
        return [r for r in roots if compare(r, lo) == GT]

    def store(self, key, lo: Fraction, hi: Fraction, roots) -> None:
        if hi != self.epoch_end:
            return
        old = self.entries.get(key)
        if old is None or old[0] > lo:
            self.entries[key] = (lo, list(roots))


def isolate_roots(
    p: Poly,
    lo,
    hi,
    cache: Optional[RootCache] = None,
    *,
    use_filter: bool = True,
    stats: Optional[dict] = None,
) -> list[AlgebraicReal]:
    """All distinct real roots of p in (lo, hi], in increasing order.

    With ``use_filter`` set, a single Descartes count over the whole
    interval certifies emptiness before any square-free reduction or
    subdivision happens (the common case for certificates).  The cache,
    when given, short-circuits repeated isolation of the same canonical
    polynomial within the current epoch.
    """
    if p.is_zero():
        raise ZeroPolynomial("isolate_roots of the zero polynomial")
    lo, hi = Fraction(lo), Fraction(hi)
    if not lo < hi:
        raise InvalidInterval(f"empty interval ({lo}, {hi})")

    if use_filter:
        pcs = int_coeffs(p)
        if ieval_sign(pcs, hi) != 0 and _descartes(pcs, lo, hi) == 0:
            if stats is not None:
                stats["filtered"] = stats.get("filtered", 0) + 1
                stats["no_root"] = stats.get("no_root", 0) + 1
            return []

    sf = square_free_part(p)
    scs = [int(c) for c in sf.coeffs]
    key = tuple(scs)
    if cache is not None:
        hit = cache.lookup(key, lo, hi)
        if hit is not None:
            if stats is not None and not hit:
                stats["no_root"] = stats.get("no_root", 0) + 1
            return hit
    roots = _isolate_squarefree(sf, scs, lo, hi)
    if cache is not None:
        cache.store(key, lo, hi, roots)
    if stats is not None and not roots:
        stats["no_root"] = stats.get("no_root", 0) + 1
    return roots


def _buffer_toward(
    scs: Sequence[int], anchor: Fraction, limit: Fraction
) -> Fraction:
    """A point strictly between anchor and limit such that the open
    interval between it and anchor contains no root and the point itself
    is not a root.  ``anchor`` is a root; the polynomial is square-free,
    so a small enough step works."""
    span = limit - anchor
    k = 1
    while True:
        cand = anchor + span / (1 << k)
        if ieval_sign(scs, cand) != 0:
            inner_lo, inner_hi = (anchor, cand) if cand > anchor else (cand, anchor)
            if _descartes(scs, inner_lo, inner_hi) == 0:
                return cand
        k += 1


def _isolate_squarefree(
    sf: Poly, scs: list[int], lo: Fraction, hi: Fraction
) -> list[AlgebraicReal]:
    out: list[AlgebraicReal] = []
    hi_root = ieval_sign(scs, hi) == 0

    left = lo
    if ieval_sign(scs, left) == 0:
        left = _buffer_toward(scs, lo, hi)
    right = hi
    if hi_root:
        right = _buffer_toward(scs, hi, left)

    # In-order traversal with an explicit stack; "interval" work items
    # subdivide, "root" items emit.
    stack: list[tuple] = [("interval", left, right)]
    while stack:
        kind, a, b = stack.pop()
        if kind == "root":
            out.append(AlgebraicReal.known_root(sf, scs, a))
            continue
        v = _descartes(scs, a, b)
        if v == 0:
            continue
        if v == 1:
            out.append(AlgebraicReal(sf, scs, a, b))
            continue
        m = (a + b) / 2
        if ieval_sign(scs, m) == 0:
            ml = _buffer_toward(scs, m, a)
            mr = _buffer_toward(scs, m, b)
            stack.append(("interval", mr, b))
            stack.append(("root", m, m))
            stack.append(("interval", a, ml))
        else:
            stack.append(("interval", m, b))
            stack.append(("interval", a, m))
    if hi_root:
        out.append(AlgebraicReal.known_root(sf, scs, hi))
    return out
