"""Command-line client for the checkers.

By default the commands run in-process through the same handler layer the
HTTP service uses; with ``--server URL`` the document is POSTed to a
running service instead and the returned report is rendered identically.

Exit codes: 0 every verdict passed, 1 some verdict failed, 2 usage or
document error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .documents import SchemaError
from .handlers import JobOptions, run_command
from .reports import Report

COMMANDS = ("check-frobenius", "check-wdvv", "build-vhs", "solve-gamma",
            "recover-potential", "canonical-coords")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qhodge",
        description="Exact checks for quantum potentials and their period data.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        cmd = sub.add_parser(name, help=f"run the {name} checks")
        cmd.add_argument("input", help="path to the input JSON document")
        cmd.add_argument("--order", type=int, default=6,
                         help="truncation order (default 6)")
        cmd.add_argument("--format", choices=("json", "text"), default="text",
                         help="report format on stdout")
        cmd.add_argument("--seed", type=int, default=0,
                         help="seed for sampled certificates")
        cmd.add_argument("--cone-samples", type=int, default=2,
                         help="extra interior samples for cone certification")
        cmd.add_argument("--emit", metavar="PATH",
                         help="write the canonical JSON report to PATH")
        cmd.add_argument("--server", metavar="URL",
                         help="POST to a running service instead of running "
                              "in-process")
        if name == "recover-potential":
            cmd.add_argument("--reference", metavar="PATH",
                             help="potential document to round-trip against")
    return parser


def load_document(path: str):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise SchemaError(path, f"cannot read file: {exc}")
    except json.JSONDecodeError as exc:
        raise SchemaError(path, f"invalid JSON: {exc}")


def run_remote(server: str, command: str, doc, options: JobOptions) -> Report:
    import httpx

    payload = {"document": doc,
               "options": {"order": options.order, "seed": options.seed,
                           "cone_samples": options.cone_samples}}
    response = httpx.post(f"{server.rstrip('/')}/{command}", json=payload,
                          timeout=300.0)
    if response.status_code == 400:
        raise SchemaError("server", response.json().get("detail", "bad request"))
    response.raise_for_status()
    body = response.json()
    report = Report(body["command"], body["order"], body["seed"])
    for check in body["checks"]:
        report.record(check["name"], check["passed"], check.get("witness"))
    report.outputs = body.get("outputs") or {}
    report.error = body.get("error")
    return report


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    options = JobOptions(order=args.order, seed=args.seed,
                         cone_samples=args.cone_samples)
    started = time.monotonic()
    try:
        doc = load_document(args.input)
        reference = None
        if getattr(args, "reference", None):
            reference = load_document(args.reference)
        if args.server:
            if reference is not None:
                doc = dict(doc)
                doc["reference_potential"] = reference
            report = run_remote(args.server, args.command, doc, options)
        else:
            report = run_command(args.command, doc, options, reference)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    elapsed_ms = int((time.monotonic() - started) * 1000)
    if args.format == "json":
        sys.stdout.write(report.to_json())
    else:
        sys.stdout.write(report.to_text())
    if args.emit:
        with open(args.emit, "w", encoding="utf-8") as handle:
            handle.write(report.to_json())
    print(f"elapsed_ms={elapsed_ms}", file=sys.stderr)
    return report.exit_code()


if __name__ == "__main__":
    sys.exit(main())
