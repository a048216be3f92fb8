"""Quasi-isometry classes of eventually affine maps.

Two eventually affine maps are at bounded distance exactly when their tail
slopes agree at both ends; the distance is then attained at a knot.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .pl_core import FinitePLMap, compose, evaluate, make_translation, slope_summary

PLUS_INF = "+inf"
MINUS_INF = "-inf"
BOTH = "both"


@dataclass(frozen=True)
class DifferenceVerdict:
    kind: str  # "bounded" or "unbounded"
    sup: Optional[Fraction] = None
    divergent_end: Optional[str] = None

    @property
    def bounded(self) -> bool:
        return self.kind == "bounded"


@dataclass(frozen=True)
class QIParameters:
    K: Fraction


def sup_difference(f: FinitePLMap, g: FinitePLMap) -> DifferenceVerdict:
    left_ok = f.left_slope == g.left_slope
    right_ok = f.right_slope == g.right_slope
    if left_ok and right_ok:
        xs = set(f.xs) | set(g.xs)
        return DifferenceVerdict("bounded", sup=max(abs(evaluate(f, x) - evaluate(g, x)) for x in xs))
    if left_ok:
        end = PLUS_INF
    elif right_ok:
        end = MINUS_INF
    else:
        end = BOTH
    return DifferenceVerdict("unbounded", divergent_end=end)


def qi_equivalent(f: FinitePLMap, g: FinitePLMap) -> bool:
    return sup_difference(f, g).bounded


def in_kernel(f: FinitePLMap) -> bool:
    """True iff f is at bounded distance from the identity, i.e. [f] = [id]."""
    return f.left_slope == 1 and f.right_slope == 1


def qi_parameters(f: FinitePLMap) -> QIParameters:
    # bi-Lipschitz constant; the additive constant is 0 for homeomorphisms
    return QIParameters(slope_summary(f).bound)


def end_action(f: FinitePLMap) -> str:
    return "fix" if f.preserving else "swap"


def normalize_at_zero(f: FinitePLMap) -> FinitePLMap:
    return compose(make_translation(-evaluate(f, 0)), f)
