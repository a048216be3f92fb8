"""Witness maps that fail to commute, up to bounded distance, with a given map.

For a map ``f`` that is the identity near -inf and has right tail slope s > 1,
:func:`extract_divergent_sequence` picks points b_1 < b_2 < ... with
b_{k+1} = 3 f(b_k) + 1.  :func:`build_witness_g` then builds a map g fixing
every b_k, with a single break at f(b_k) sent to the midpoint of b_k and
f(b_k).  The commutator displacement f(g(b_k)) - g(f(b_k)) equals
(f(b_k) - b_k)/2, which grows geometrically.

g has infinitely many break points, so it is generated lazily.
"""

from __future__ import annotations

import math
import threading
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .pl_core import FinitePLMap, Rational, as_fraction, evaluate, invert
from .structure import identity_near_minus_infinity

DIRECT = "direct"
INVERSE = "inverse"

HALF = Fraction(1, 2)
FIVE_QUARTERS = Fraction(5, 4)

PLMapLike = Callable[[Fraction], Fraction]


@dataclass(frozen=True)
class DivergentSequence:
    b1: Fraction
    rule: tuple[Fraction, Fraction]  # (a, c): b_{k+1} = a*b_k + c
    prefix: tuple[Fraction, ...]
    case: str

    def terms(self, n: int) -> list[Fraction]:
        """First ``n`` terms, continuing past the prefix with the recurrence."""
        out = list(self.prefix[:n])
        a, c = self.rule
        while len(out) < n:
            out.append(a * out[-1] + c)
        return out


def lemma_start(driver: FinitePLMap) -> Fraction:
    """Smallest admissible first term: >= 1, past every knot, and past the
    point where the right tail crosses the diagonal."""
    s, c0 = driver.right_germ()
    start = max(Fraction(1), driver.knots[-1][0] + 1)
    if s > 1:
        start = max(start, Fraction(math.floor(-c0 / (s - 1)) + 1))
    return start


def driver_for(f: FinitePLMap) -> tuple[FinitePLMap, str]:
    """Choose f or f⁻¹, whichever pushes points towards +inf."""
    if not f.preserving or not identity_near_minus_infinity(f):
        raise ValueError("expected an orientation-preserving map that is the identity near -inf")
    if f.right_slope == 1:
        raise ValueError("map is at bounded distance from the identity; no divergent sequence exists")
    if f.right_slope > 1:
        return f, DIRECT
    return invert(f), INVERSE


def extract_divergent_sequence(f: FinitePLMap, terms: int = 4) -> DivergentSequence:
    if terms < 1:
        raise ValueError("terms must be positive")
    driver, case = driver_for(f)
    s, c0 = driver.right_germ()
    prefix = [lemma_start(driver)]
    while len(prefix) < terms:
        prefix.append(3 * evaluate(driver, prefix[-1]) + 1)
    return DivergentSequence(prefix[0], (3 * s, 3 * c0 + 1), tuple(prefix), case)


def check_lemma_prefix(driver: FinitePLMap, bs: Sequence[Fraction]) -> str | None:
    """Return a description of the first violated condition, or None."""
    if not bs:
        return "empty prefix"
    if bs[0] < 1:
        return "first term below 1"
    gaps = []
    for k, b in enumerate(bs):
        fb = evaluate(driver, b)
        if fb <= b:
            return f"driver(b_{k + 1}) <= b_{k + 1}"
        gaps.append(fb - b)
        if k + 1 < len(bs) and not bs[k + 1] > 3 * fb:
            return f"b_{k + 2} <= 3*driver(b_{k + 1})"
    if any(g1 <= g0 for g0, g1 in zip(gaps, gaps[1:])):
        return "driver(b_k) - b_k not strictly increasing"
    return None


class LazyPLMap:
    """The witness g, generated interval by interval on demand.

    Identity on (-inf, b_1]; on each [b_k, b_{k+1}] it is linear through
    (b_k, b_k), (f(b_k), (b_k + f(b_k))/2), (b_{k+1}, b_{k+1}).  The knot memo
    only grows; extension is serialized by a lock.
    """

    def __init__(self, driver: FinitePLMap, sequence: DivergentSequence):
        self.driver = driver
        self.sequence = sequence
        self.threshold = sequence.b1
        self._bs: list[Fraction] = list(sequence.prefix)
        self._knots: list[tuple[Fraction, Fraction]] = [(self._bs[0], self._bs[0])]
        self._xs: list[Fraction] = [self._bs[0]]
        self._lock = threading.RLock()

    def _b(self, k: int) -> Fraction:
        a, c = self.sequence.rule
        with self._lock:
            while len(self._bs) <= k:
                self._bs.append(a * self._bs[-1] + c)
            return self._bs[k]

    def ensure(self, intervals: int) -> None:
        """Materialize the first ``intervals`` intervals J_1..J_n."""
        with self._lock:
            while (len(self._knots) - 1) // 2 < intervals:
                k = (len(self._knots) - 1) // 2
                b, b_next = self._b(k), self._b(k + 1)
                fb = evaluate(self.driver, b)
                for knot in ((fb, (b + fb) / 2), (b_next, b_next)):
                    self._knots.append(knot)
                    self._xs.append(knot[0])

    @property
    def intervals(self) -> int:
        return (len(self._knots) - 1) // 2

    def knots(self, intervals: int) -> list[tuple[Fraction, Fraction]]:
        self.ensure(intervals)
        return self._knots[: 2 * intervals + 1]

    def breakpoints(self, intervals: int) -> list[Fraction]:
        return [x for x, _ in self.knots(intervals)[1::2]]

    def segment_slopes(self, segments: int) -> list[Fraction]:
        """Slopes of the first ``segments`` segments to the right of b_1."""
        knots = self.knots((segments + 1) // 2)
        return [(y1 - y0) / (x1 - x0) for (x0, y0), (x1, y1) in zip(knots, knots[1:])][:segments]

    def truncation(self, intervals: int) -> FinitePLMap:
        """Finite map agreeing with g up to b_{n+1} and the identity beyond."""
        return FinitePLMap(tuple(self.knots(intervals)), 1, 1)

    def __call__(self, t: Rational) -> Fraction:
        return lazy_evaluate(self, t)


def build_witness_g(f: FinitePLMap, seq: DivergentSequence) -> LazyPLMap:
    driver = f if seq.case == DIRECT else invert(f)
    if not driver.preserving:
        raise ValueError("driver must preserve orientation")
    if seq.b1 != seq.prefix[0]:
        raise ValueError("sequence threshold does not match its first term")
    if seq.b1 <= driver.knots[-1][0]:
        raise ValueError("sequence starts before the last knot of the driver")
    a, c = seq.rule
    if any(b1 != a * b0 + c for b0, b1 in zip(seq.prefix, seq.prefix[1:])):
        raise ValueError("sequence prefix does not follow its recurrence")
    problem = check_lemma_prefix(driver, seq.prefix)
    if problem:
        raise ValueError(f"sequence does not match map: {problem}")
    return LazyPLMap(driver, seq)


def lazy_evaluate(g: LazyPLMap, t: Rational) -> Fraction:
    t = as_fraction(t)
    if t <= g.threshold:
        return t
    with g._lock:
        n = 1
        while g._b(n) <= t:
            n += 1
        g.ensure(n)
        i = bisect_right(g._xs, t)
        (x0, y0), (x1, y1) = g._knots[i - 1], g._knots[i]
    return y0 + (y1 - y0) * (t - x0) / (x1 - x0)


def build_witness_h() -> FinitePLMap:
    """Identity on t <= 0, slope 2 on t >= 0."""
    return FinitePLMap(((Fraction(0), Fraction(0)),), 1, 2)


def reflected(w: PLMapLike) -> PLMapLike:
    """t ↦ -w(-t)."""
    return lambda t: -w(-as_fraction(t))


def displacement_series(
    f: PLMapLike, w: PLMapLike, points: Iterable[Rational]
) -> list[tuple[Fraction, Fraction]]:
    """Pairs ``(t, f(w(t)) - w(f(t)))``, by pointwise evaluation only."""
    out = []
    for t in points:
        t = as_fraction(t)
        out.append((t, f(w(t)) - w(f(t))))
    return out


__all__ = [
    "DIRECT",
    "INVERSE",
    "DivergentSequence",
    "LazyPLMap",
    "build_witness_g",
    "build_witness_h",
    "check_lemma_prefix",
    "displacement_series",
    "extract_divergent_sequence",
    "lazy_evaluate",
    "reflected",
]
