"""Eventually affine piecewise-linear homeomorphisms of the line, in exact arithmetic.

A map is stored as an ordered list of knots ``(x, y)`` plus the slopes of the
two affine tails.  Every operation returns a canonical representative, so two
maps are equal as functions exactly when they compare equal as values.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Union[Fraction, int, str]

PRESERVING = "preserving"
REVERSING = "reversing"


def as_fraction(value: Rational) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted; use int, str or Fraction")
    return Fraction(value)


@dataclass(frozen=True)
class FinitePLMap:
    knots: tuple[tuple[Fraction, Fraction], ...]
    left_slope: Fraction
    right_slope: Fraction

    def __post_init__(self) -> None:
        knots = tuple((as_fraction(x), as_fraction(y)) for x, y in self.knots)
        if not knots:
            raise ValueError("a map needs at least one knot")
        left = as_fraction(self.left_slope)
        right = as_fraction(self.right_slope)
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "left_slope", left)
        object.__setattr__(self, "right_slope", right)

        for (x0, _), (x1, _) in zip(knots, knots[1:]):
            if not x0 < x1:
                raise ValueError(f"knot abscissae must be strictly increasing, got {x0} then {x1}")
        slopes = self.slopes()
        if any(s == 0 for s in slopes):
            raise ValueError("zero slope: not a homeomorphism")
        if not (all(s > 0 for s in slopes) or all(s < 0 for s in slopes)):
            raise ValueError("slopes change sign: not a homeomorphism")

    def __call__(self, t: Rational) -> Fraction:
        return evaluate(self, t)

    @property
    def xs(self) -> tuple[Fraction, ...]:
        return tuple(x for x, _ in self.knots)

    @property
    def preserving(self) -> bool:
        return self.right_slope > 0

    def segment_slopes(self) -> list[Fraction]:
        return [(y1 - y0) / (x1 - x0) for (x0, y0), (x1, y1) in zip(self.knots, self.knots[1:])]

    def slopes(self) -> list[Fraction]:
        """All slopes from left to right, tails included."""
        return [self.left_slope, *self.segment_slopes(), self.right_slope]

    def left_germ(self) -> tuple[Fraction, Fraction]:
        """``(a, b)`` with f(t) = a*t + b for t <= first knot."""
        x, y = self.knots[0]
        return self.left_slope, y - self.left_slope * x

    def right_germ(self) -> tuple[Fraction, Fraction]:
        """``(a, b)`` with f(t) = a*t + b for t >= last knot."""
        x, y = self.knots[-1]
        return self.right_slope, y - self.right_slope * x

    def is_canonical(self) -> bool:
        return canonicalize(self) == self


@dataclass(frozen=True)
class SlopeSummary:
    slopes: frozenset[Fraction]
    breaks: frozenset[Fraction]
    bound: Fraction
    orientation: str


def evaluate(f: FinitePLMap, t: Rational) -> Fraction:
    t = as_fraction(t)
    knots = f.knots
    i = bisect_right(f.xs, t)
    if i == 0:
        x, y = knots[0]
        return y + f.left_slope * (t - x)
    if i == len(knots):
        x, y = knots[-1]
        return y + f.right_slope * (t - x)
    (x0, y0), (x1, y1) = knots[i - 1], knots[i]
    return y0 + (y1 - y0) * (t - x0) / (x1 - x0)


def canonicalize(f: FinitePLMap) -> FinitePLMap:
    slopes = f.slopes()
    kept = tuple(k for i, k in enumerate(f.knots) if slopes[i] != slopes[i + 1])
    if not kept:
        # affine: anchor the single knot at the origin
        return FinitePLMap(((Fraction(0), evaluate(f, 0)),), f.left_slope, f.right_slope)
    return FinitePLMap(kept, f.left_slope, f.right_slope)


def _from_points(xs: Iterable[Fraction], fn, left: Fraction, right: Fraction) -> FinitePLMap:
    xs = sorted(set(xs))
    return canonicalize(FinitePLMap(tuple((x, fn(x)) for x in xs), left, right))


def compose(f: FinitePLMap, g: FinitePLMap) -> FinitePLMap:
    """Return f∘g (apply g first)."""
    g_inv = invert(g)
    xs = list(g.xs) + [evaluate(g_inv, x) for x in f.xs]
    if g.preserving:
        left, right = f.left_slope * g.left_slope, f.right_slope * g.right_slope
    else:
        left, right = f.right_slope * g.left_slope, f.left_slope * g.right_slope
    return _from_points(xs, lambda x: evaluate(f, evaluate(g, x)), left, right)


def invert(f: FinitePLMap) -> FinitePLMap:
    knots = tuple((y, x) for x, y in f.knots)
    if f.preserving:
        return canonicalize(FinitePLMap(knots, 1 / f.left_slope, 1 / f.right_slope))
    return canonicalize(FinitePLMap(knots[::-1], 1 / f.right_slope, 1 / f.left_slope))


def slope_summary(f: FinitePLMap) -> SlopeSummary:
    f = canonicalize(f)
    slopes = frozenset(f.slopes())
    all_slopes = f.slopes()
    breaks = frozenset(x for i, (x, _) in enumerate(f.knots) if all_slopes[i] != all_slopes[i + 1])
    bound = max(max(abs(s), 1 / abs(s)) for s in slopes)
    return SlopeSummary(slopes, breaks, bound, PRESERVING if f.preserving else REVERSING)


def make_affine(a: Rational, b: Rational) -> FinitePLMap:
    a, b = as_fraction(a), as_fraction(b)
    if a == 0:
        raise ValueError("make_affine: slope must be nonzero")
    return FinitePLMap(((Fraction(0), b),), a, a)


def make_identity() -> FinitePLMap:
    return make_affine(1, 0)


def make_reflection() -> FinitePLMap:
    return make_affine(-1, 0)


def make_translation(c: Rational) -> FinitePLMap:
    return make_affine(1, c)


def from_pieces(knots: Sequence[tuple[Rational, Rational]], left: Rational, right: Rational) -> FinitePLMap:
    """Build and canonicalize a map; a convenience for callers holding raw tuples."""
    return canonicalize(FinitePLMap(tuple(knots), left, right))


IDENTITY = make_identity()
REFLECTION = make_reflection()
