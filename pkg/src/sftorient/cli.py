"""Command-line front end: ``sftorient <command> [options]``.

Exit status is 0 on success, 1 on a domain error and 2 on malformed input
(missing file, invalid JSON, schema violation, bad arguments).  Errors are
reported on stderr as ``error: CODE: message``.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import selftest as st
from .algebra import format_element, verify_d_squared
from .document import Document, load_document, validate_schema
from .errors import SchemaError, SFTError
from .index import fredholm_index, moduli_dimension
from .orbits import classify, cz_index
from .scenarios import choices, describe_cover, evaluate_all, format_choice
from .symplectic import NONDEGENERACY_TOL, maslov_index_rs

EXIT_OK, EXIT_DOMAIN, EXIT_INPUT = 0, 1, 2


class Outcome:
    def __init__(self, lines: list[str], results: list[dict], status: str = "ok", code: int = EXIT_OK):
        self.lines, self.results, self.status, self.code = lines, results, status, code


def _cz(args, doc: Document) -> Outcome:
    mu = maslov_index_rs(doc.path(args.path), args.tol)
    return Outcome([f"mu = {mu}"], [{"path": args.path, "mu": mu}])


def _classify(args, doc: Document) -> Outcome:
    orbit = doc.orbit_by_label(args.orbit)
    covers = [orbit] if args.max_cover is None else [orbit.cover(m) for m in range(1, args.max_cover + 1)]
    lines, results = [], []
    for o in covers:
        lines.append(describe_cover(o, args.tol))
        results.append(
            {
                "orbit": o.label(),
                "class": str(classify(o, args.tol)),
                "mu_1": cz_index(o.cover(1), args.tol),
                "mu": cz_index(o, args.tol),
            }
        )
    return Outcome(lines, results)


def _dim(args, doc: Document) -> Outcome:
    surface = doc.surface(args.surface)
    ind = fredholm_index(surface, args.tol)
    dim = moduli_dimension(surface, args.tol)
    return Outcome(
        [f"fredholm_index = {ind}", f"moduli_dimension = {dim}"],
        [{"surface": args.surface, "fredholm_index": ind, "moduli_dimension": dim}],
    )


def _sign(args, doc: Document) -> Outcome:
    names = None if args.scenario is None else [args.scenario]
    results = evaluate_all(doc, names, args.tol)
    lines = [line for r in results for line in r.lines()]
    return Outcome(lines, [r.as_json() for r in results])


def _choices(args, doc: Document) -> Outcome:
    family = [f for f in args.family.split(",") if f]
    if not family:
        raise SchemaError("--family needs at least one orbit id")
    result = choices(doc, family, args.n, args.tol)
    return Outcome(
        [format_choice(oid, m) for oid, m in result],
        [{"choices": {oid: list(m) for oid, m in result}}],
    )


def _verify(args, doc: Document) -> Outcome:
    d = doc.differential()
    report = verify_d_squared(d)
    total = len(d.images)
    lines = [f"d^2({r.generator.label()}) = {format_element(r.value)}" for r in report]
    results = [{"generator": r.generator.label(), "residual": format_element(r.value)} for r in report]
    if report:
        lines.append(f"d^2 != 0 on {len(report)} of {total} generators")
        return Outcome(lines, results, "fail")
    lines.append(f"d^2 = 0 on all {total} generators")
    return Outcome(lines, results)


def _selftest(args, doc) -> Outcome:
    checks = st.run_checks()
    results = [
        {"section": s, "check": c.name, "ok": c.ok, "expected": str(c.expected), "got": str(c.got)}
        for s, c in checks
    ]
    ok = all(c.ok for _, c in checks)
    return Outcome(st.report_lines(checks), results, "ok" if ok else "fail", EXIT_OK if ok else EXIT_DOMAIN)


COMMANDS = {
    "cz": _cz,
    "classify": _classify,
    "dim": _dim,
    "sign": _sign,
    "choices": _choices,
    "verify": _verify,
    "selftest": _selftest,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sftorient",
        description="Conley-Zehnder indices, SFT index formulas and orientation signs.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument(
        "--tol", type=float, default=NONDEGENERACY_TOL, help=f"nondegeneracy tolerance (default {NONDEGENERACY_TOL})"
    )
    with_file = argparse.ArgumentParser(add_help=False, parents=[common])
    with_file.add_argument("--file", "-f", required=True, help="input document (JSON)")

    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    p = sub.add_parser("cz", parents=[with_file], help="Conley-Zehnder index of a named path")
    p.add_argument("--path", required=True)
    p = sub.add_parser("classify", parents=[with_file], help="good/bad classification of an orbit")
    p.add_argument("--orbit", required=True, help="orbit label, e.g. h or h^2")
    p.add_argument("--max-cover", type=int, help="classify the covers 1..M of the underlying simple orbit")
    p = sub.add_parser("dim", parents=[with_file], help="Fredholm index and expected dimension")
    p.add_argument("--surface", required=True)
    p = sub.add_parser("sign", parents=[with_file], help="evaluate sign scenarios with traces")
    p.add_argument("--scenario", help="scenario name (default: all, in document order)")
    p = sub.add_parser("choices", parents=[with_file], help="minimal orientation choices for orbit families")
    p.add_argument("--family", required=True, help="comma-separated simple orbit ids")
    p.add_argument("--n", type=int, required=True)
    p = sub.add_parser("verify", parents=[common], help="check d o d = 0 on a differential")
    p.add_argument("--differential", required=True, metavar="FILE")
    sub.add_parser("selftest", parents=[common], help="analytic cross-checks")
    return parser


def _report(command: str, status: str, results=None, error=None) -> str:
    report = {"version": 1, "command": command, "status": status}
    if results is not None:
        report["results"] = results
    if error is not None:
        report["error"] = error
    validate_schema(report, "report")
    return json.dumps(report, indent=2, sort_keys=True)


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if getattr(args, "max_cover", None) is not None and args.max_cover < 1:
        print("error: E_ARGS: --max-cover must be at least 1", file=err)
        return EXIT_INPUT
    try:
        source = getattr(args, "file", None) or getattr(args, "differential", None)
        doc = load_document(source) if source else None
        outcome = COMMANDS[args.command](args, doc)
    except (OSError, SFTError) as e:
        if isinstance(e, OSError):
            code, message, status = "E_FILE", f"{e.strerror}: {e.filename}", EXIT_INPUT
        else:
            code, message = e.code, str(e)
            status = EXIT_INPUT if isinstance(e, SchemaError) else EXIT_DOMAIN
        print(f"error: {code}: {message}", file=err)
        if args.format == "json":
            print(_report(args.command, "error", error={"code": code, "message": message}), file=out)
        return status
    if args.format == "json":
        print(_report(args.command, outcome.status, outcome.results), file=out)
    else:
        for line in outcome.lines:
            print(line, file=out)
    return outcome.code


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
