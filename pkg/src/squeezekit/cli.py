"""Command-line scenario runner.

``squeezekit run --scenario FILE --out FILE [--format csv|json] [--seed N]``
writes a table; ``squeezekit validate --scenario FILE`` only checks the file.

Exit status: 0 on success, 2 on a validation error (nothing is written),
3 when the run completed but raised numerical flags.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile

from . import __version__
from .scenarios import Result, ScenarioError, load, prepare, thread_cap

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_FLAGGED = 3
FORMATS = ("csv", "json")


def _fmt(v) -> str:
    v = float(v) + 0.0  # folds -0.0 into 0.0
    if math.isnan(v):
        return "nan"
    return "%.12e" % v


def _json_number(v) -> str:
    v = float(v) + 0.0
    return "null" if not math.isfinite(v) else "%.12e" % v


def _row_flags(result: Result):
    per_row: dict[int, list[str]] = {}
    for row, code, _ in result.flags:
        if row >= 0:
            per_row.setdefault(row, []).append(code)
    return per_row


def emit(result: Result, fmt: str = "csv") -> bytes:
    """Serialize a result table.

    CSV has a header row and a trailing ``flags`` column (codes joined by
    ``;``); run-level flags appear as ``#`` comment lines after the header.
    JSON has the top-level keys ``scenario``, ``columns``, ``rows`` and
    ``flags``.  Numbers are always written with ``%.12e``.
    """
    if fmt == "csv":
        per_row = _row_flags(result)
        lines = [",".join(result.columns + ["flags"])]
        for row, code, message in result.flags:
            if row < 0:
                lines.append(f"# {code}: {message}")
        for i, row in enumerate(result.rows):
            lines.append(",".join([_fmt(v) for v in row] + [";".join(per_row.get(i, []))]))
        return ("\n".join(lines) + "\n").encode("utf-8")
    if fmt == "json":
        rows = ",\n    ".join("[" + ", ".join(_json_number(v) for v in row) + "]" for row in result.rows)
        flags = ",\n    ".join(
            json.dumps({"row": row if row >= 0 else None, "code": code, "message": message}) for row, code, message in result.flags
        )
        text = (
            "{\n"
            f'  "scenario": {json.dumps(result.scenario)},\n'
            f'  "columns": {json.dumps(result.columns)},\n'
            f'  "rows": [{"" if not rows else chr(10) + "    " + rows + chr(10) + "  "}],\n'
            f'  "flags": [{"" if not flags else chr(10) + "    " + flags + chr(10) + "  "}]\n'
            "}\n"
        )
        return text.encode("utf-8")
    raise ValueError(f"unsupported format {fmt!r}; expected one of {', '.join(FORMATS)}")


def _write_atomic(path: str, payload: bytes):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".squeezekit-", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="squeezekit", description="Run squeezed-state scenarios from JSON files.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a scenario and write its table")
    run.add_argument("--scenario", required=True, help="scenario JSON file")
    run.add_argument("--out", required=True, help="output file")
    run.add_argument("--format", default=None, choices=FORMATS, help="output format (default: from --out suffix, else csv)")
    run.add_argument("--seed", type=int, default=None, help="seed for randomized sweeps (overrides the scenario's seed)")
    val = sub.add_parser("validate", help="check a scenario without running it")
    val.add_argument("--scenario", required=True, help="scenario JSON file")
    val.add_argument("--seed", type=int, default=None)
    return parser


def _fail(message: str) -> int:
    print(f"squeezekit: error: {message}", file=sys.stderr)
    return EXIT_INVALID


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        threads = thread_cap()
        prepared = prepare(load(args.scenario), args.seed)
    except ScenarioError as exc:
        return _fail(str(exc))

    if args.command == "validate":
        print(f"ok: {prepared.name} ({type(prepared).__name__}, {len(prepared.columns)} columns)")
        return EXIT_OK

    if not os.path.isdir(os.path.dirname(os.path.abspath(args.out))):
        return _fail(f"--out: directory of {args.out} does not exist")
    fmt = args.format or ("json" if args.out.endswith(".json") else "csv")
    result = prepared.execute(threads)
    _write_atomic(args.out, emit(result, fmt))
    if result.flags:
        print(f"squeezekit: {len(result.flags)} numerical flag(s) raised; see {args.out}", file=sys.stderr)
        return EXIT_FLAGGED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
