"""JSON documents for maps and certificates.

Rationals travel as strings (``"p/q"`` or ``"p"``).  Emission is canonical:
fixed field order and fixed indentation, so a canonical document survives
parse/emit byte for byte.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any

from .certificate import KernelReport, NonCentralityCertificate, Witness
from .pl_core import FinitePLMap
from .witness import DivergentSequence

RATIONAL_RE = re.compile(r"-?[0-9]+(/[1-9][0-9]*)?")


class DocumentError(ValueError):
    """Malformed document; ``field`` names the offending location."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def rational_str(q: Fraction) -> str:
    return str(q)


def parse_rational(value: Any, field: str) -> Fraction:
    if not isinstance(value, str) or not RATIONAL_RE.fullmatch(value):
        raise DocumentError(field, f"expected a rational string like '3' or '-7/2', got {value!r}")
    return Fraction(value)


def _require(doc: Any, keys: tuple[str, ...], field: str) -> dict:
    if not isinstance(doc, dict):
        raise DocumentError(field, "expected an object")
    missing = [k for k in keys if k not in doc]
    if missing:
        raise DocumentError(field, f"missing key(s) {', '.join(missing)}")
    extra = sorted(set(doc) - set(keys))
    if extra:
        raise DocumentError(field, f"unexpected key(s) {', '.join(extra)}")
    return doc


def _list(doc: Any, field: str) -> list:
    if not isinstance(doc, list):
        raise DocumentError(field, "expected a list")
    return doc


def map_to_doc(f: FinitePLMap) -> dict:
    return {
        "knots": [[rational_str(x), rational_str(y)] for x, y in f.knots],
        "left_slope": rational_str(f.left_slope),
        "right_slope": rational_str(f.right_slope),
    }


def map_from_doc(doc: Any, field: str = "map") -> FinitePLMap:
    _require(doc, ("knots", "left_slope", "right_slope"), field)
    knots = []
    for i, pair in enumerate(_list(doc["knots"], f"{field}.knots")):
        where = f"{field}.knots[{i}]"
        if not isinstance(pair, list) or len(pair) != 2:
            raise DocumentError(where, "expected [x, y]")
        knots.append((parse_rational(pair[0], f"{where}[0]"), parse_rational(pair[1], f"{where}[1]")))
    left = parse_rational(doc["left_slope"], f"{field}.left_slope")
    right = parse_rational(doc["right_slope"], f"{field}.right_slope")
    try:
        return FinitePLMap(tuple(knots), left, right)
    except ValueError as exc:
        raise DocumentError(field, str(exc)) from None


def certificate_to_doc(cert: NonCentralityCertificate) -> dict:
    w = cert.witness
    if w.kind == "h":
        witness: dict = {"kind": "h"}
    else:
        witness = {
            "kind": "g",
            "threshold": rational_str(w.threshold),
            "driver": map_to_doc(w.driver),
            "rule": {"a": rational_str(w.rule[0]), "c": rational_str(w.rule[1])},
            "prefix": [rational_str(b) for b in w.prefix],
        }
    return {
        "input": map_to_doc(cert.input),
        "normalized": map_to_doc(cert.normalized),
        "branch": cert.branch,
        "witness": witness,
        "samples": [{"t": rational_str(t), "displacement": rational_str(d)} for t, d in cert.samples],
        "claim": {"kind": "affine_recurrence", "a": rational_str(cert.claim[0]), "c": rational_str(cert.claim[1])},
    }


def _witness_from_doc(doc: Any) -> Witness:
    if not isinstance(doc, dict) or "kind" not in doc:
        raise DocumentError("witness", "expected an object with a kind")
    if doc["kind"] == "h":
        _require(doc, ("kind",), "witness")
        return Witness("h")
    if doc["kind"] != "g":
        raise DocumentError("witness.kind", f"expected 'h' or 'g', got {doc['kind']!r}")
    _require(doc, ("kind", "threshold", "driver", "rule", "prefix"), "witness")
    rule = _require(doc["rule"], ("a", "c"), "witness.rule")
    prefix = _list(doc["prefix"], "witness.prefix")
    if not prefix:
        raise DocumentError("witness.prefix", "must not be empty")
    return Witness(
        "g",
        parse_rational(doc["threshold"], "witness.threshold"),
        map_from_doc(doc["driver"], "witness.driver"),
        (parse_rational(rule["a"], "witness.rule.a"), parse_rational(rule["c"], "witness.rule.c")),
        tuple(parse_rational(b, f"witness.prefix[{i}]") for i, b in enumerate(prefix)),
    )


def certificate_from_doc(doc: Any) -> NonCentralityCertificate:
    _require(doc, ("input", "normalized", "branch", "witness", "samples", "claim"), "certificate")
    if not isinstance(doc["branch"], str):
        raise DocumentError("branch", "expected a string")
    samples = []
    for i, s in enumerate(_list(doc["samples"], "samples")):
        where = f"samples[{i}]"
        _require(s, ("t", "displacement"), where)
        samples.append((parse_rational(s["t"], f"{where}.t"), parse_rational(s["displacement"], f"{where}.displacement")))
    claim = _require(doc["claim"], ("kind", "a", "c"), "claim")
    if claim["kind"] != "affine_recurrence":
        raise DocumentError("claim.kind", "expected 'affine_recurrence'")
    return NonCentralityCertificate(
        map_from_doc(doc["input"], "input"),
        map_from_doc(doc["normalized"], "normalized"),
        doc["branch"],
        _witness_from_doc(doc["witness"]),
        tuple(samples),
        (parse_rational(claim["a"], "claim.a"), parse_rational(claim["c"], "claim.c")),
    )


def kernel_report_to_doc(report: KernelReport) -> dict:
    return {
        "kind": "kernel_report",
        "input": map_to_doc(report.input),
        "normalized": map_to_doc(report.normalized),
        "reason": report.reason,
    }


def sequence_to_doc(seq: DivergentSequence) -> dict:
    return {
        "b1": rational_str(seq.b1),
        "rule": {"a": rational_str(seq.rule[0]), "c": rational_str(seq.rule[1])},
        "prefix": [rational_str(b) for b in seq.prefix],
        "case": seq.case,
    }


def emit(doc: Any) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def loads(text: str, source: str = "<input>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{source}:{exc.lineno}:{exc.colno}", exc.msg) from None


def emit_map(f: FinitePLMap) -> str:
    return emit(map_to_doc(f))


def parse_map(text: str, source: str = "<input>") -> FinitePLMap:
    return map_from_doc(loads(text, source))


def emit_certificate(cert: NonCentralityCertificate) -> str:
    return emit(certificate_to_doc(cert))


def parse_certificate(text: str, source: str = "<input>") -> NonCentralityCertificate:
    return certificate_from_doc(loads(text, source))
