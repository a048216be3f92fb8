"""Orientation splitting, the f = f₊∘f₋ factorization and reflection conjugation."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .pl_core import REFLECTION, FinitePLMap, canonicalize, compose, evaluate

ZERO = Fraction(0)


@dataclass(frozen=True)
class PlusMinusSplit:
    plus: FinitePLMap
    minus: FinitePLMap


@dataclass(frozen=True)
class MembershipFlags:
    in_P: bool
    in_P_plus_orient: bool
    in_P_sub_plus: bool
    in_P_sub_minus: bool
    in_P_kappa: bool


def split_orientation(f: FinitePLMap) -> tuple[FinitePLMap, int]:
    """Return ``(p, e)`` with p orientation preserving and f = p∘ρ^e."""
    if f.preserving:
        return f, 0
    return compose(f, REFLECTION), 1


def plus_minus_split(f: FinitePLMap) -> PlusMinusSplit:
    if not f.preserving:
        raise ValueError("plus_minus_split needs an orientation-preserving map")
    if evaluate(f, 0) != 0:
        raise ValueError("plus_minus_split needs f(0) = 0; normalize first")
    origin = ((ZERO, ZERO),)
    plus = FinitePLMap(origin + tuple(k for k in f.knots if k[0] > 0), 1, f.right_slope)
    minus = FinitePLMap(tuple(k for k in f.knots if k[0] < 0) + origin, f.left_slope, 1)
    return PlusMinusSplit(canonicalize(plus), canonicalize(minus))


def rho_conjugate(f: FinitePLMap) -> FinitePLMap:
    """t ↦ -f(-t)."""
    knots = tuple((-x, -y) for x, y in reversed(f.knots))
    return canonicalize(FinitePLMap(knots, f.right_slope, f.left_slope))


def identity_near_minus_infinity(f: FinitePLMap) -> bool:
    x, y = f.knots[0]
    return f.left_slope == 1 and x == y


def identity_near_plus_infinity(f: FinitePLMap) -> bool:
    x, y = f.knots[-1]
    return f.right_slope == 1 and x == y


def classify_membership(f: FinitePLMap) -> MembershipFlags:
    sub_plus = identity_near_minus_infinity(f)
    sub_minus = identity_near_plus_infinity(f)
    return MembershipFlags(
        in_P=evaluate(f, 0) == 0,
        in_P_plus_orient=f.preserving,
        in_P_sub_plus=sub_plus,
        in_P_sub_minus=sub_minus,
        in_P_kappa=sub_plus and sub_minus,
    )
