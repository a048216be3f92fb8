"""Command-line front end.

Exit codes: 0 success/true/accepted, 1 false/rejected/kernel report,
2 malformed input.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import documents as docs
from .certificate import KernelReport, certify_noncentral, verify_certificate
from .pl_core import canonicalize, compose, evaluate, invert, slope_summary
from .qi import end_action, in_kernel, normalize_at_zero, qi_parameters, sup_difference
from .structure import classify_membership, plus_minus_split, rho_conjugate, split_orientation
from .witness import extract_divergent_sequence

EXIT_OK, EXIT_FALSE, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def _load_map(path: Optional[str], flag: str, canonical: bool = True):
    if path is None:
        raise InputError(f"missing {flag} <map.json>")
    f = docs.parse_map(_read(path), path)
    return canonicalize(f) if canonical else f


def _rational(text: Optional[str], flag: str) -> Fraction:
    if text is None:
        raise InputError(f"missing {flag} <rational>")
    return docs.parse_rational(text, flag)


def _write(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _bool(value: bool, out: Optional[str]) -> int:
    _write("true\n" if value else "false\n", out)
    return EXIT_OK if value else EXIT_FALSE


def samples_csv(samples) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["k", "t", "displacement"])
    for k, (t, d) in enumerate(samples, start=1):
        writer.writerow([k, str(t), str(d)])
    return buf.getvalue()


def samples_svg(samples, width: int = 640, height: int = 400) -> str:
    """Polyline of (k, D_k) with a log-scaled vertical axis."""
    pad = 40
    ks = list(range(1, len(samples) + 1))
    logs = [math.log10(d) if d > 0 else 0.0 for _, d in samples]
    lo, hi = min(logs), max(logs)
    span_y = (hi - lo) or 1.0
    span_x = (len(ks) - 1) or 1

    def px(k: int) -> float:
        return pad + (k - 1) * (width - 2 * pad) / span_x

    def py(v: float) -> float:
        return height - pad - (v - lo) * (height - 2 * pad) / span_y

    points = " ".join(f"{px(k):.2f},{py(v):.2f}" for k, v in zip(ks, logs))
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">\n'
        f'  <rect width="{width}" height="{height}" fill="white"/>\n'
        f'  <line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>\n'
        f'  <line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>\n'
        f'  <text x="{width / 2}" y="{height - 8}" text-anchor="middle" font-size="12">k</text>\n'
        f'  <text x="12" y="{pad - 12}" font-size="12">log10 D_k ({lo:.3g} .. {hi:.3g})</text>\n'
        f'  <polyline fill="none" stroke="steelblue" stroke-width="2" points="{points}"/>\n'
        "</svg>\n"
    )


def cmd_eval(args) -> int:
    f = _load_map(args.f, "-f")
    _write(f"{evaluate(f, _rational(args.t, '-t'))}\n", args.o)
    return EXIT_OK


def cmd_compose(args) -> int:
    _write(docs.emit_map(compose(_load_map(args.f, "-f"), _load_map(args.g, "-g"))), args.o)
    return EXIT_OK


def _unary_map(op):
    def run(args) -> int:
        _write(docs.emit_map(op(_load_map(args.f, "-f"))), args.o)
        return EXIT_OK

    return run


def cmd_canon(args) -> int:
    _write(docs.emit_map(canonicalize(_load_map(args.f, "-f", canonical=False))), args.o)
    return EXIT_OK


def cmd_slopes(args) -> int:
    s = slope_summary(_load_map(args.f, "-f"))
    doc = {
        "slopes": [str(q) for q in sorted(s.slopes)],
        "breaks": [str(q) for q in sorted(s.breaks)],
        "bound": str(s.bound),
        "orientation": s.orientation,
    }
    _write(docs.emit(doc), args.o)
    return EXIT_OK


def cmd_qi_const(args) -> int:
    _write(f"{qi_parameters(_load_map(args.f, '-f')).K}\n", args.o)
    return EXIT_OK


def cmd_equivalent(args) -> int:
    v = sup_difference(_load_map(args.f, "-f"), _load_map(args.g, "-g"))
    if v.bounded:
        _write(f"bounded sup={v.sup}\n", args.o)
        return EXIT_OK
    _write(f"unbounded end={v.divergent_end}\n", args.o)
    return EXIT_FALSE


def cmd_kernel(args) -> int:
    return _bool(in_kernel(_load_map(args.f, "-f")), args.o)


def cmd_ends(args) -> int:
    _write(f"{end_action(_load_map(args.f, '-f'))}\n", args.o)
    return EXIT_OK


def cmd_split_orientation(args) -> int:
    p, e = split_orientation(_load_map(args.f, "-f"))
    _write(docs.emit({"map": docs.map_to_doc(p), "exponent": e}), args.o)
    return EXIT_OK


def cmd_split_pm(args) -> int:
    try:
        split = plus_minus_split(_load_map(args.f, "-f"))
    except ValueError as exc:
        raise InputError(f"-f: {exc}") from None
    _write(docs.emit({"plus": docs.map_to_doc(split.plus), "minus": docs.map_to_doc(split.minus)}), args.o)
    return EXIT_OK


def cmd_classify(args) -> int:
    flags = classify_membership(_load_map(args.f, "-f"))
    _write(docs.emit(dict(vars(flags))), args.o)
    return EXIT_OK


def cmd_extract_seq(args) -> int:
    try:
        seq = extract_divergent_sequence(_load_map(args.f, "-f"), terms=args.n)
    except ValueError as exc:
        raise InputError(f"-f: {exc}") from None
    _write(docs.emit(docs.sequence_to_doc(seq)), args.o)
    return EXIT_OK


def cmd_certify(args) -> int:
    result = certify_noncentral(_load_map(args.f, "-f"), args.n)
    if isinstance(result, KernelReport):
        _write(docs.emit(docs.kernel_report_to_doc(result)), args.o)
        return EXIT_FALSE
    _write(docs.emit_certificate(result), args.o)
    return EXIT_OK


def _load_certificate(args):
    if args.c is not None:
        return docs.parse_certificate(_read(args.c), args.c)
    if args.f is not None:
        result = certify_noncentral(_load_map(args.f, "-f"), args.n)
        if isinstance(result, KernelReport):
            raise InputError("-f: map is in the kernel; nothing to plot")
        return result
    raise InputError("missing -c <cert.json> (or -f <map.json>)")


def cmd_verify(args) -> int:
    if args.c is None:
        raise InputError("missing -c <cert.json>")
    cert = docs.parse_certificate(_read(args.c), args.c)
    verdict = verify_certificate(cert, _rational(args.bound, "--bound"))
    if verdict:
        _write("accepted\n", args.o)
        return EXIT_OK
    _write(f"rejected: {verdict.reason}\n", args.o)
    return EXIT_FALSE


def cmd_plot(args) -> int:
    cert = _load_certificate(args)
    if args.o is not None and args.o.endswith(".svg"):
        _write(samples_svg(cert.samples), args.o)
    else:
        _write(samples_csv(cert.samples), args.o)
    return EXIT_OK


COMMANDS = {
    "eval": (cmd_eval, "evaluate f at t"),
    "compose": (cmd_compose, "emit f∘g"),
    "invert": (_unary_map(invert), "emit f⁻¹"),
    "canon": (cmd_canon, "emit the canonical form of f"),
    "slopes": (cmd_slopes, "slope set, break points, slope bound and orientation"),
    "qi-const": (cmd_qi_const, "bi-Lipschitz constant K of f"),
    "equivalent": (cmd_equivalent, "decide whether f and g are at bounded distance"),
    "kernel": (cmd_kernel, "decide whether [f] = [id]"),
    "ends": (cmd_ends, "whether f fixes or swaps the ends"),
    "normalize": (_unary_map(normalize_at_zero), "translate f so that it fixes 0"),
    "split-orientation": (cmd_split_orientation, "write f = p∘ρ^e with p orientation preserving"),
    "split-pm": (cmd_split_pm, "write f = plus∘minus"),
    "rho-conj": (_unary_map(rho_conjugate), "emit t ↦ -f(-t)"),
    "classify": (cmd_classify, "membership flags"),
    "extract-seq": (cmd_extract_seq, "divergent sequence for a map that is the identity near -inf"),
    "certify": (cmd_certify, "non-centrality certificate for [f]"),
    "verify": (cmd_verify, "check a certificate against a bound"),
    "plot": (cmd_plot, "CSV (or SVG with -o *.svg) of certificate displacements"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plqi", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (func, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("-f", metavar="MAP.json")
        p.add_argument("-g", metavar="MAP.json")
        p.add_argument("-t", metavar="RATIONAL")
        p.add_argument("-n", type=int, default=8, metavar="COUNT")
        p.add_argument("-c", metavar="CERT.json")
        p.add_argument("-o", metavar="OUT")
        p.add_argument("--bound", metavar="RATIONAL", default="1000000")
        p.set_defaults(func=func)
    return parser


def _glue_negative_values(argv: Sequence[str]) -> list[str]:
    # argparse would read "-7/3" as an option
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


VALUE_FLAGS = ("-t", "--bound")


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    argv = _glue_negative_values(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.n < 1:
        print("plqi: -n must be positive", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (InputError, docs.DocumentError) as exc:
        print(f"plqi {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
