"""Piecewise-linear point trajectories over the unit time interval.

A trajectory is a sequence of breakpoint times with one exact rational
position per breakpoint; between consecutive breakpoints the point moves
with constant velocity.  ``LinearMotion`` is one such segment, and it is
the thing certificates are built from: each coordinate is a polynomial
in t of degree at most one, valid on [t0, t1].
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .polynomial import Poly

Point = tuple[Fraction, Fraction, Fraction]


def as_point(coords) -> Point:
    x, y, z = coords
    return (Fraction(x), Fraction(y), Fraction(z))


@dataclass(frozen=True)
class LinearMotion:
    start: Point
    end: Point
    t0: Fraction
    t1: Fraction

    def position(self, t) -> Point:
        t = Fraction(t)
        lam = (t - self.t0) / (self.t1 - self.t0)
        return tuple(s + (e - s) * lam for s, e in zip(self.start, self.end))

    def coord_polys(self) -> tuple[Poly, Poly, Poly]:
        span = self.t1 - self.t0
        polys = []
        for s, e in zip(self.start, self.end):
            slope = (e - s) / span
            polys.append(Poly((s - slope * self.t0, slope)))
        return tuple(polys)

    @classmethod
    def stationary(cls, p: Point, t0, t1) -> "LinearMotion":
        return cls(as_point(p), as_point(p), Fraction(t0), Fraction(t1))


class Trajectory:
    """Breakpoint times with positions; the domain is [times[0], times[-1]]."""

    __slots__ = ("tid", "times", "points")

    def __init__(self, tid: int, times: Sequence, points: Sequence):
        self.tid = int(tid)
        self.times = tuple(Fraction(t) for t in times)
        self.points = tuple(as_point(p) for p in points)
        if len(self.times) != len(self.points):
            raise ValueError("breakpoint count mismatch")
        if len(self.times) < 2:
            raise ValueError("a trajectory needs at least two breakpoints")
        for a, b in zip(self.times, self.times[1:]):
            if not a < b:
                raise ValueError("breakpoint times must strictly increase")

    @property
    def domain_start(self) -> Fraction:
        return self.times[0]

    @property
    def domain_end(self) -> Fraction:
        return self.times[-1]

    def segment_index(self, t) -> int:
        t = Fraction(t)
        if not self.domain_start <= t <= self.domain_end:
            raise ValueError(f"t={t} outside domain of trajectory {self.tid}")
        # the segment starting at t, except at the domain end
        for i in range(len(self.times) - 1):
            if self.times[i] <= t < self.times[i + 1]:
                return i
        return len(self.times) - 2

    def segment(self, t) -> LinearMotion:
        i = self.segment_index(t)
        return LinearMotion(
            self.points[i], self.points[i + 1], self.times[i], self.times[i + 1]
        )

    def position(self, t) -> Point:
        return self.segment(t).position(t)

    def interior_breakpoints(self) -> tuple[Fraction, ...]:
        return self.times[1:-1]
