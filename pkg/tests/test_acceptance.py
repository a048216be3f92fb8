"""Exit criteria.  Every check is exact (zero tolerance).

Run ``pytest tests/test_acceptance.py`` for one PASS/FAIL line per criterion
in the terminal summary.
"""

import json
import random
import tempfile
from fractions import Fraction
from pathlib import Path

import pytest

from corpus import (
    ACCEPTANCE_LINES,
    random_compact,
    random_map,
    random_normalized_preserving,
    random_p_plus,
    random_p_plus_fixing_zero,
    random_right_slope_above_one,
    random_translation,
    rand_rational,
    tamper,
)
from plqi import documents as docs
from plqi.certificate import KernelReport, certify_noncentral, verify_certificate
from plqi.cli import run
from plqi.pl_core import IDENTITY, FinitePLMap, compose, evaluate, invert
from plqi.qi import in_kernel, normalize_at_zero, sup_difference
from plqi.structure import classify_membership, plus_minus_split, rho_conjugate
from plqi.witness import (
    build_witness_g,
    build_witness_h,
    displacement_series,
    extract_divergent_sequence,
)

HALF, FIVE_QUARTERS = Fraction(1, 2), Fraction(5, 4)
SEED = 20241016


def record(name: str, failures: list, detail: str) -> None:
    ok = not failures
    ACCEPTANCE_LINES.append((name, ok, detail if ok else f"{len(failures)} failure(s); first: {failures[0]}"))
    assert ok, f"{name}: {failures[:3]}"


@pytest.fixture(scope="module")
def p_plus_corpus():
    """500 maps identity near -inf with right tail slope in (1, 8]."""
    rng = random.Random(SEED)
    maps = []
    for i in range(500):
        s = random_right_slope_above_one(rng)
        maps.append(random_p_plus_fixing_zero(rng, s) if i % 2 else random_p_plus(rng, s))
    return maps


def test_c01_slope_confinement(p_plus_corpus):
    failures = []
    for f in p_plus_corpus:
        g = build_witness_g(f, extract_divergent_sequence(f))
        slopes = g.segment_slopes(64)
        if len(slopes) != 64:
            failures.append((f, "fewer than 64 segments"))
        elif not all(HALF <= lam <= FIVE_QUARTERS for lam in slopes):
            failures.append((f, "slope outside [1/2, 5/4]"))
        elif any(lam != HALF for lam in slopes[0::2]):
            failures.append((f, "left sub-segment slope != 1/2"))
        elif not all(1 < lam < FIVE_QUARTERS for lam in slopes[1::2]):
            failures.append((f, "right sub-segment slope not in (1, 5/4)"))
    record("1 slope confinement", failures, "500 maps x 64 segments in [1/2, 5/4]")


def test_c02_displacement_identity(p_plus_corpus):
    failures = []
    for f in p_plus_corpus:
        seq = extract_divergent_sequence(f, terms=64)
        g = build_witness_g(f, seq)
        driver = g.driver
        bs = seq.prefix
        series = displacement_series(driver, g, bs)
        ds = [d for _, d in series]
        if any(d != (evaluate(driver, b) - b) / 2 for b, d in zip(bs[:32], ds[:32])):
            failures.append((f, "D_k != (driver(b_k) - b_k)/2"))
        elif any(d1 <= d0 for d0, d1 in zip(ds, ds[1:])):
            failures.append((f, "not strictly increasing"))
        elif not any(d > 10**9 for d in ds):
            failures.append((f, "never exceeds 1e9 within 64 terms"))
    record("2 displacement identity", failures, "D_k = (f(b_k)-b_k)/2 for k<=32, increasing, >1e9 by k<=64")


def test_c03_lemma_conditions(p_plus_corpus):
    failures = []
    for f in p_plus_corpus + [invert(f) for f in p_plus_corpus]:
        seq = extract_divergent_sequence(f, terms=64)
        driver = f if seq.case == "direct" else invert(f)
        bs = seq.prefix
        if not all(b1 > 3 * evaluate(driver, b0) for b0, b1 in zip(bs, bs[1:])):
            failures.append((f, "b_(k+1) <= 3 driver(b_k)"))
            continue
        gaps = [evaluate(driver, b) - b for b in bs]
        if not all(g1 > g0 for g0, g1 in zip(gaps, gaps[1:])):
            failures.append((f, "driver(b_k) - b_k not increasing"))
    record("3 lemma conditions", failures, "1000 sequences (direct and inverse), 64-term prefixes")


def test_c04_orientation_reversing_identity():
    rng = random.Random(SEED + 4)
    h = build_witness_h()
    failures = []
    for _ in range(100):
        f = normalize_at_zero(random_map(rng, -1))
        series = displacement_series(h, f, [-Fraction(2) ** j for j in range(1, 33)])
        if any(d != evaluate(f, t) for t, d in series[:16]):
            failures.append((f, "h(f(t)) - f(h(t)) != f(t)"))
        elif not any(d > 10**6 for _, d in series):
            failures.append((f, "no divergence past 1e6 by j = 32"))
    record("4 orientation-reversing identity", failures, "100 maps, j = 1..16 exact, > 1e6 by j <= 32")


def test_c05_group_algebra():
    rng = random.Random(SEED + 5)
    failures = []
    maps = [random_map(rng) for _ in range(1000)]
    for f in maps:
        if compose(f, invert(f)) != IDENTITY or invert(invert(f)) != f:
            failures.append(f)
    for _ in range(300):
        f, g, h = rng.sample(maps, 3)
        if compose(compose(f, g), h) != compose(f, compose(g, h)):
            failures.append((f, g, h))
    record("5 group algebra", failures, "1000 inverse checks, 300 associativity triples")


def _sampled_sup(f, g, w):
    return max(abs(evaluate(f, t) - evaluate(g, t)) for t in range(-w, w + 1))


def test_c06_equivalence_oracle():
    rng = random.Random(SEED + 6)
    failures = []
    for i in range(300):
        f = random_map(rng, integer_knots=True)
        if i % 2:
            # shared tail slopes, so the pair is at bounded distance
            g = random_map(rng, 1 if f.preserving else -1, integer_knots=True)
            g = FinitePLMap(g.knots, f.left_slope, f.right_slope)
        else:
            g = random_map(rng, integer_knots=True)
        w = int(2 * max(abs(x) for x in f.xs + g.xs)) + 16
        v = sup_difference(f, g)
        if v.bounded:
            if _sampled_sup(f, g, w) != v.sup:
                failures.append((i, "bounded: sampled sup != exact sup"))
        elif not _sampled_sup(f, g, 4 * w) > _sampled_sup(f, g, w) + 1:
            failures.append((i, "unbounded: sup at 4W not above sup at W plus 1"))
    record("6 equivalence-decision oracle", failures, "300 pairs against brute-force integer sampling")


def test_c07_decomposition_round_trip():
    rng = random.Random(SEED + 7)
    failures = []
    for _ in range(300):
        f = random_normalized_preserving(rng)
        s = plus_minus_split(f)
        if compose(s.plus, s.minus) != f:
            failures.append((f, "plus∘minus != f"))
            continue
        ts = [-abs(rand_rational(rng, -60, 60)) for _ in range(100)]
        if any(evaluate(s.plus, t) != t for t in ts) or any(evaluate(s.minus, -t) != -t for t in ts):
            failures.append((f, "factor not identity on its half-line"))
            continue
        mp, mm = classify_membership(s.plus), classify_membership(s.minus)
        if not (mp.in_P and mp.in_P_sub_plus and mm.in_P and mm.in_P_sub_minus):
            failures.append((f, "membership flags"))
    record("7 decomposition round trip", failures, "300 maps in P+ fixing 0")


def test_c08_rho_conjugation_swap():
    rng = random.Random(SEED + 8)
    failures = []
    for _ in range(200):
        f = random_p_plus(rng)
        c = rho_conjugate(f)
        flags = classify_membership(c)
        if not flags.in_P_sub_minus or rho_conjugate(c) != f:
            failures.append(f)
        if classify_membership(f).in_P_sub_minus != flags.in_P_sub_plus:
            failures.append((f, "flag swap"))
    record("8 rho-conjugation swap", failures, "200 P+ maps land in P-, involution exact")


def test_c09_kernel_facts():
    rng = random.Random(SEED + 9)
    failures = []
    failures += [f for f in (random_translation(rng) for _ in range(100)) if not in_kernel(f)]
    failures += [f for f in (random_compact(rng) for _ in range(100)) if not in_kernel(f)]
    count = 0
    while count < 100:
        f = random_map(rng, 1)
        if f.left_slope == 1 and f.right_slope == 1:
            continue
        count += 1
        if in_kernel(f):
            failures.append(f)
    record("9 kernel facts", failures, "100 translations, 100 compact maps in; 100 tail-slope maps out")


def mixed_corpus(rng):
    out = []
    for _ in range(50):
        out.append(random_map(rng, -1))
    for _ in range(50):
        out.append(random_map(rng, 1))
    for _ in range(40):
        # nontrivial only in the f+ factor
        out.append(random_p_plus_fixing_zero(rng, rng.choice((Fraction(3, 2), Fraction(1, 3), Fraction(7)))))
    for _ in range(40):
        # nontrivial only in the f- factor
        p = random_p_plus_fixing_zero(rng, rng.choice((Fraction(5, 4), Fraction(2, 7), Fraction(4))))
        out.append(rho_conjugate(p))
    for _ in range(10):
        out.append(random_translation(rng))
    for _ in range(10):
        out.append(random_compact(rng))
    return out


def test_c10_end_to_end():
    rng = random.Random(SEED + 10)
    corpus = mixed_corpus(rng)
    assert len(corpus) == 200
    failures = []
    certs = []
    branches = set()
    for f in corpus:
        result = certify_noncentral(f, rng.randint(1, 8))
        n = normalize_at_zero(f)
        kernel = n.preserving and in_kernel(n)
        if isinstance(result, KernelReport):
            if not kernel:
                failures.append((f, "kernel report for a non-kernel map"))
            continue
        if kernel:
            failures.append((f, "certificate for a kernel map"))
        branches.add(result.branch)
        verdict = verify_certificate(result, 10**6)
        if not verdict:
            failures.append((f, verdict.reason))
        certs.append(result)
    if branches != {"orientation_reversing", "plus", "plus_inverse", "minus", "minus_inverse"}:
        failures.append(("branches exercised", sorted(branches)))
    tampered = 0
    while tampered < 200:
        cert = certs[tampered % len(certs)]
        name, bad = tamper(cert, rng)
        tampered += 1
        if verify_certificate(bad, 10**6):
            failures.append((name, "tampered certificate accepted"))
    record(
        "10 end-to-end non-centrality",
        failures,
        f"{len(certs)} certificates accepted at bound 1e6, 200 tampered rejected",
    )


def test_c11_cli_round_trip():
    rng = random.Random(SEED + 11)
    failures = []
    for _ in range(100):
        text = docs.emit_map(random_map(rng))
        if docs.emit_map(docs.parse_map(text)) != text:
            failures.append(text)
    certs = []
    while len(certs) < 50:
        cert = certify_noncentral(random_map(rng), rng.randint(1, 6))
        if not isinstance(cert, KernelReport):
            certs.append(cert)
    for cert in certs:
        text = docs.emit_certificate(cert)
        if docs.emit_certificate(docs.parse_certificate(text)) != text:
            failures.append(text)

    # CLI output equals library results on the parsed values
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        for i, cert in enumerate(certs[:10]):
            fpath = tmp / f"f{i}.json"
            fpath.write_text(docs.emit_map(cert.input))
            cpath = tmp / f"c{i}.json"
            if run(["certify", "-f", str(fpath), "-n", str(len(cert.samples)), "-o", str(cpath)]) != 0:
                failures.append((i, "certify exit code"))
            elif cpath.read_text() != docs.emit_certificate(cert):
                failures.append((i, "certify output differs from library"))
            elif run(["verify", "-c", str(cpath), "--bound", "1000000", "-o", str(tmp / "v.txt")]) != 0:
                failures.append((i, "verify exit code"))
            out = tmp / "e.txt"
            run(["eval", "-f", str(fpath), "-t", "-7/3", "-o", str(out)])
            if out.read_text() != f"{evaluate(cert.input, Fraction(-7, 3))}\n":
                failures.append((i, "eval output"))
            run(["normalize", "-f", str(fpath), "-o", str(out)])
            if out.read_text() != docs.emit_map(cert.normalized):
                failures.append((i, "normalize output"))
            run(["plot", "-c", str(cpath), "-o", str(out)])
            rows = out.read_text().splitlines()[1:]
            if rows != [f"{k},{t},{d}" for k, (t, d) in enumerate(cert.samples, start=1)]:
                failures.append((i, "plot rows"))
            json.loads(cpath.read_text())
    record("11 CLI round trip", failures, "100 map docs, 50 certificate docs byte-identical; CLI == library")
