"""``jacobipath run --config FILE`` and ``jacobipath emit --manifest FILE --kind KIND``.

Exit status: 0 all checks pass, 2 a numerical check failed, 64 usage or
configuration error, 66 the requested data is missing.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import tempfile
from datetime import datetime, timezone

from . import __version__
from .config import ConfigError, RunConfig, load_config
from .experiments import ExperimentResult, run_experiment
from .propagator import QuadratureError

EXIT_OK = 0
EXIT_TOLERANCE = 2
EXIT_USAGE = 64
EXIT_NOT_FOUND = 66

EMIT_KINDS = {
    "convergence": ("N [slices]", "max_rel_error [dimensionless]"),
    "kernel-slice": ("q [length]", "abs_K [1/length]"),
    "residual": ("hbar [action]", "leading_coefficient [energy]"),
}

log = logging.getLogger("jacobipath")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _atomic_write(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _jsonable(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if hasattr(v, "item"):
        return v.item()
    return v


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(x) if isinstance(x, float) else x for x in r])
    return buf.getvalue()


def write_run(cfg: RunConfig, result: ExperimentResult | None, started: str, error: str | None = None) -> str:
    outdir = cfg.resolved_output_dir()
    data = {}
    if result is not None:
        for kind, table in result.tables.items():
            fname = f"{cfg.stem}-{kind}.csv"
            _atomic_write(os.path.join(outdir, fname), csv_text(table.header, table.rows))
            data[kind] = fname
        for kind, doc in result.documents.items():
            fname = f"{cfg.stem}-{kind}.json"
            _atomic_write(os.path.join(outdir, fname), json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n")
            data[kind] = fname
    checks = {} if result is None else {k: c.as_dict() for k, c in result.checks.items()}
    manifest = {
        "tool": "jacobipath",
        "version": __version__,
        "experiment": cfg.experiment,
        "config": cfg.echo(),
        "timestamps": {"started_utc": started, "finished_utc": _now()},
        "passed": bool(result is not None and result.passed and error is None),
        "checks": _jsonable(checks),
        "summary": _jsonable({} if result is None else result.summary),
        "data": data,
    }
    if error:
        manifest["error"] = error
    path = os.path.join(outdir, f"{cfg.stem}-manifest.json")
    _atomic_write(path, json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def cmd_run(args) -> int:
    cfg = load_config(args.config)
    started = _now()
    try:
        result = run_experiment(cfg)
    except QuadratureError as exc:
        path = write_run(cfg, None, started, error=str(exc))
        log.error("quadrature failure: %s (manifest %s)", exc, path)
        return EXIT_TOLERANCE
    path = write_run(cfg, result, started)
    for name, chk in result.checks.items():
        print(f"{'PASS' if chk.passed else 'FAIL'} {name}: value={chk.value} threshold={chk.threshold}")
    print(f"manifest: {path}")
    return EXIT_OK if result.passed else EXIT_TOLERANCE


def cmd_emit(args) -> int:
    if args.kind not in EMIT_KINDS:
        raise UsageError(f"unknown kind {args.kind!r}; choose from {', '.join(EMIT_KINDS)}")
    try:
        with open(args.manifest, encoding="utf-8") as fh:
            manifest = json.load(fh)
    except FileNotFoundError:
        print(f"manifest not found: {args.manifest}", file=sys.stderr)
        return EXIT_NOT_FOUND
    except json.JSONDecodeError as exc:
        raise UsageError(f"manifest is not valid JSON: {exc}") from exc
    base = os.path.dirname(os.path.abspath(args.manifest))
    fname = manifest.get("data", {}).get(args.kind)
    src = os.path.join(base, fname) if fname else None
    if src is None or not os.path.exists(src):
        print(f"manifest has no {args.kind} data", file=sys.stderr)
        return EXIT_NOT_FOUND
    with open(src, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))[1:]
    stem = os.path.basename(args.manifest).removesuffix("-manifest.json")
    outdir = os.environ.get("JACOBIPATH_OUTPUT_DIR") or base
    out = os.path.join(outdir, f"{stem}-plot-{args.kind}.csv")
    _atomic_write(out, csv_text(EMIT_KINDS[args.kind], [r[:2] for r in rows]))
    print(out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="jacobipath", description="Jacobi-function path integral experiments")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    r = sub.add_parser("run", help="run an experiment from a config file")
    r.add_argument("--config", required=True)
    e = sub.add_parser("emit", help="write two-column plot data from a manifest")
    e.add_argument("--manifest", required=True)
    e.add_argument("--kind", required=True)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
        if args.command == "run":
            return cmd_run(args)
        if args.command == "emit":
            return cmd_emit(args)
        raise UsageError("missing command (run or emit)")
    except (UsageError, ConfigError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
