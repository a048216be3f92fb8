"""Non-centrality certificates and their independent checker.

A certificate records, for a map f whose class is not the identity class, a
witness map w together with sample points where |f(w(t)) - w(f(t))| is large,
plus an affine recurrence for the displacements that lets the checker push
them past any bound.  Only the witness descriptor is stored; the checker
regenerates the witness from it with plain evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .pl_core import FinitePLMap, evaluate, invert
from .qi import in_kernel, normalize_at_zero
from .structure import identity_near_minus_infinity, plus_minus_split, rho_conjugate
from .witness import (
    DIRECT,
    INVERSE,
    DivergentSequence,
    LazyPLMap,
    build_witness_g,
    build_witness_h,
    check_lemma_prefix,
    displacement_series,
    driver_for,
    extract_divergent_sequence,
    reflected,
)

REVERSING_BRANCH = "orientation_reversing"
PLUS = "plus"
PLUS_INVERSE = "plus_inverse"
MINUS = "minus"
MINUS_INVERSE = "minus_inverse"
BRANCHES = (REVERSING_BRANCH, PLUS, PLUS_INVERSE, MINUS, MINUS_INVERSE)

HALF = Fraction(1, 2)
FIVE_QUARTERS = Fraction(5, 4)
MAX_EXTENSION_STEPS = 10_000


@dataclass(frozen=True)
class Witness:
    kind: str  # "h" or "g"
    threshold: Optional[Fraction] = None
    driver: Optional[FinitePLMap] = None
    rule: Optional[tuple[Fraction, Fraction]] = None
    prefix: tuple[Fraction, ...] = ()


@dataclass(frozen=True)
class NonCentralityCertificate:
    input: FinitePLMap
    normalized: FinitePLMap
    branch: str
    witness: Witness
    samples: tuple[tuple[Fraction, Fraction], ...]
    claim: tuple[Fraction, Fraction]  # D_{k+1} = a*D_k + c in the tail regime


@dataclass(frozen=True)
class KernelReport:
    input: FinitePLMap
    normalized: FinitePLMap
    reason: str = "[f] = [id]: both tail slopes of the normalized map equal 1"


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    reason: Optional[str] = None

    def __bool__(self) -> bool:
        return self.accepted


def _h_claim(normalized: FinitePLMap) -> tuple[Fraction, Fraction]:
    # f(2t) = 2 f(t) - c0 once t is left of every knot
    _, c0 = normalized.left_germ()
    return Fraction(2), -c0


def _g_claim(driver: FinitePLMap, rule: tuple[Fraction, Fraction]) -> tuple[Fraction, Fraction]:
    # D_k = ((s-1) b_k + c0)/2 and b_{k+1} = a b_k + c
    s, c0 = driver.right_germ()
    a, c = rule
    return a, ((s - 1) * c + (1 - a) * c0) / 2


def _h_points(count: int) -> list[Fraction]:
    return [-Fraction(2) ** j for j in range(1, count + 1)]


def _g_branch(normalized: FinitePLMap) -> tuple[str, FinitePLMap] | None:
    """The branch to use and the P₊ element it works with, or None for kernel."""
    split = plus_minus_split(normalized)
    if not in_kernel(split.plus):
        return (PLUS if split.plus.right_slope > 1 else PLUS_INVERSE), split.plus
    if not in_kernel(split.minus):
        conj = rho_conjugate(split.minus)
        return (MINUS if conj.right_slope > 1 else MINUS_INVERSE), conj
    return None


def _witness_in_place(branch: str, g: LazyPLMap):
    return reflected(g) if branch in (MINUS, MINUS_INVERSE) else g


def _g_sample_points(branch: str, bs) -> list[Fraction]:
    return [-b for b in bs] if branch in (MINUS, MINUS_INVERSE) else list(bs)


def certify_noncentral(f: FinitePLMap, sample_count: int) -> NonCentralityCertificate | KernelReport:
    if sample_count < 1:
        raise ValueError("sample_count must be positive")
    normalized = normalize_at_zero(f)

    if not normalized.preserving:
        h = build_witness_h()
        series = displacement_series(h, normalized, _h_points(sample_count))
        return NonCentralityCertificate(
            f, normalized, REVERSING_BRANCH, Witness("h"),
            tuple((t, abs(d)) for t, d in series), _h_claim(normalized),
        )

    chosen = _g_branch(normalized)
    if chosen is None:
        return KernelReport(f, normalized)
    branch, p = chosen
    seq = extract_divergent_sequence(p, terms=sample_count + 1)
    g = build_witness_g(p, seq)
    driver = g.driver
    in_place = rho_conjugate(driver) if branch in (MINUS, MINUS_INVERSE) else driver
    points = _g_sample_points(branch, seq.prefix[:sample_count])
    series = displacement_series(in_place, _witness_in_place(branch, g), points)
    witness = Witness("g", seq.b1, driver, seq.rule, seq.prefix)
    return NonCentralityCertificate(
        f, normalized, branch, witness,
        tuple((t, abs(d)) for t, d in series), _g_claim(driver, seq.rule),
    )


def _expected_driver(branch: str, normalized: FinitePLMap) -> FinitePLMap | None:
    chosen = _g_branch(normalized)
    if chosen is None or chosen[0] != branch:
        return None
    driver, _ = driver_for(chosen[1])
    return driver


def _check_increasing(ds) -> bool:
    return all(d > 0 for d in ds) and all(d1 > d0 for d0, d1 in zip(ds, ds[1:]))


def _extend(d: Fraction, claim, bound: Fraction) -> bool:
    a, c = claim
    for _ in range(MAX_EXTENSION_STEPS):
        if d > bound:
            return True
        d = a * d + c
    return d > bound


def _verify_h(cert: NonCentralityCertificate, bound: Fraction) -> Verdict:
    f = cert.normalized
    if f.preserving:
        return Verdict(False, "branch mismatch: h witness needs an orientation-reversing map")
    if cert.witness != Witness("h"):
        return Verdict(False, "witness shape: h descriptor carries extra fields")
    h = build_witness_h()
    points = _h_points(len(cert.samples))
    if [t for t, _ in cert.samples] != points:
        return Verdict(False, "sample points: expected t_j = -2^j")
    for (t, d), (_, recomputed) in zip(cert.samples, displacement_series(h, f, points)):
        if abs(recomputed) != d:
            return Verdict(False, f"sample mismatch at t={t}")
    ds = [d for _, d in cert.samples]
    if not _check_increasing(ds):
        return Verdict(False, "displacements not positive and strictly increasing")

    claim = _h_claim(f)
    if cert.claim != claim:
        return Verdict(False, "claim: recurrence constants disagree with the map's left tail")
    first_x = f.knots[0][0]
    for (t0, d0), (_, d1) in zip(cert.samples, cert.samples[1:]):
        if t0 <= first_x and d1 != claim[0] * d0 + claim[1]:
            return Verdict(False, "claim: recurrence fails on samples")

    # walk into the affine left tail by evaluation, then follow the recurrence
    j, t, d = len(points), points[-1], ds[-1]
    while t > first_x and d <= bound:
        j += 1
        t = -Fraction(2) ** j
        d = abs(displacement_series(h, f, [t])[0][1])
    if not _extend(d, claim, bound):
        return Verdict(False, "bound: displacement does not exceed the bound")
    return Verdict(True)


def _verify_g(cert: NonCentralityCertificate, bound: Fraction) -> Verdict:
    w = cert.witness
    f = cert.normalized
    branch = cert.branch
    if w.kind != "g" or w.driver is None or w.rule is None or w.threshold is None or not w.prefix:
        return Verdict(False, "witness shape: incomplete g descriptor")
    if not f.preserving:
        return Verdict(False, "branch mismatch: g witness needs an orientation-preserving map")
    driver = w.driver
    if _expected_driver(branch, f) != driver:
        return Verdict(False, "driver: does not match the branch factor of the normalized map")
    if not (driver.preserving and identity_near_minus_infinity(driver) and driver.right_slope > 1):
        return Verdict(False, "driver: not an element of P+ with right slope > 1")

    prefix = list(w.prefix)
    a, c = w.rule
    s, c0 = driver.right_germ()
    if w.threshold != prefix[0]:
        return Verdict(False, "threshold: differs from b_1")
    if prefix[0] <= driver.knots[-1][0]:
        return Verdict(False, "threshold: b_1 not beyond the driver's break points")
    if any(b1 != a * b0 + c for b0, b1 in zip(prefix, prefix[1:])):
        return Verdict(False, "rule: prefix does not follow the recurrence")
    problem = check_lemma_prefix(driver, prefix)
    if problem:
        return Verdict(False, f"lemma: {problem}")
    # the recurrence keeps b_{k+1} > 3 driver(b_k) past the prefix
    if a < 3 * s or (a - 3 * s) * prefix[-1] + c - 3 * c0 <= 0:
        return Verdict(False, "lemma: recurrence does not keep b_(k+1) > 3*driver(b_k)")

    case = INVERSE if branch in (PLUS_INVERSE, MINUS_INVERSE) else DIRECT
    g = LazyPLMap(driver, DivergentSequence(w.threshold, w.rule, tuple(prefix), case))
    slopes = g.segment_slopes(2 * (len(prefix) - 1))
    if not all(HALF <= lam <= FIVE_QUARTERS for lam in slopes):
        return Verdict(False, "slopes: witness slope outside [1/2, 5/4]")
    if any(lam != HALF for lam in slopes[0::2]) or any(not 1 < lam < FIVE_QUARTERS for lam in slopes[1::2]):
        return Verdict(False, "slopes: witness segments do not have the 1/2 | (1, 5/4) pattern")

    if len(cert.samples) > len(prefix):
        return Verdict(False, "sample points: more samples than materialized terms")
    points = _g_sample_points(branch, prefix[: len(cert.samples)])
    if [t for t, _ in cert.samples] != points:
        return Verdict(False, "sample points: expected the sequence terms")

    reflect = branch in (MINUS, MINUS_INVERSE)
    in_place = rho_conjugate(driver) if reflect else driver
    # the same displacement seen through the normalized map itself
    direct_map = f if case == DIRECT else invert(f)
    witness = _witness_in_place(branch, g)
    via_driver = displacement_series(in_place, witness, points)
    via_map = displacement_series(direct_map, witness, points)
    for (t, d), (_, d1), (_, d2) in zip(cert.samples, via_driver, via_map):
        if abs(d1) != d or abs(d2) != d:
            return Verdict(False, f"sample mismatch at t={t}")
    ds = [d for _, d in cert.samples]
    for b, d in zip(prefix, ds):
        if d != (evaluate(driver, b) - b) / 2:
            return Verdict(False, "sample mismatch: displacement is not (driver(b)-b)/2")
    if not _check_increasing(ds):
        return Verdict(False, "displacements not positive and strictly increasing")

    claim = _g_claim(driver, w.rule)
    if cert.claim != claim:
        return Verdict(False, "claim: recurrence constants disagree with driver and rule")
    if any(d1 != claim[0] * d0 + claim[1] for d0, d1 in zip(ds, ds[1:])):
        return Verdict(False, "claim: recurrence fails on samples")
    if not _extend(ds[-1], claim, bound):
        return Verdict(False, "bound: displacement does not exceed the bound")
    return Verdict(True)


def verify_certificate(cert: NonCentralityCertificate, bound: Union[Fraction, int]) -> Verdict:
    """Recheck ``cert`` from its stored data; accept iff every check passes
    and the displacements provably exceed ``bound``."""
    try:
        return _verify(cert, Fraction(bound))
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        return Verdict(False, f"malformed certificate: {exc}")


def _verify(cert: NonCentralityCertificate, bound: Fraction) -> Verdict:
    if cert.branch not in BRANCHES:
        return Verdict(False, f"branch: unknown branch {cert.branch!r}")
    if normalize_at_zero(cert.input) != cert.normalized:
        return Verdict(False, "normalized: not the normalization of the input")
    if evaluate(cert.normalized, 0) != 0:
        return Verdict(False, "normalized: does not fix 0")
    if not cert.samples:
        return Verdict(False, "samples: empty")
    if cert.branch == REVERSING_BRANCH:
        return _verify_h(cert, bound)
    if cert.witness.kind != "g":
        return Verdict(False, "witness shape: branch needs a g witness")
    return _verify_g(cert, bound)
