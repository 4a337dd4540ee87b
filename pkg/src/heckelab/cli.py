"""Command-line interface for the exact toolkits in this package.

Four subcommands cover the public surface: ``tables`` prints the small
reference tables (d-numbers, change-of-basis matrix, named operators),
``verify`` runs a check suite and emits its JSON report, ``eval``
evaluates a named operator at a modular parameter, and ``count`` prints
one census family of lattice-point counts.

Output goes to stdout (or ``--out``) and is byte-stable for a fixed
command line and seed: CSV uses ``\\n`` line endings and JSON is emitted
with sorted keys.  Logging goes to stderr only, at a level taken from
the ``HECKELAB_LOG`` environment variable, a config file, or the
default ``warn``.

Exit codes: 0 on success (for ``verify``: every check passed), 1 when a
check fails, a resource budget is exceeded, or output cannot be
written, and 2 for usage errors (including bad config files).
"""

import argparse
import csv
import io
import json
import logging
import os
import sys
from fractions import Fraction

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .errors import DomainError, InvariantError, ResourceError
from .finitegeom import census
from .hecke import EvalContext, SatakeMatrix, SatakeParam, eval_phi, named_operator
from .qcalc import d_bullet_number, d_number
from .verify import SUITE_NAMES, closed_form_eval, run_suite

_log = logging.getLogger("heckelab.cli")

_LOG_LEVELS = {
    "error": logging.ERROR,
    "warn": logging.WARNING,
    "info": logging.INFO,
    "debug": logging.DEBUG,
}

_OPERATOR_NAMES = (
    "Icirc",
    "Rbullet",
    "Rcirc",
    "TbulletEven",
    "TbulletOdd",
    "TcircEven",
    "Tstar",
)

_EVEN_OPERATORS = ("Icirc", "Rbullet", "Rcirc", "TbulletEven", "TcircEven")
_ODD_OPERATORS = ("Icirc", "TbulletOdd", "Tstar")


# ---------------------------------------------------------------------------
# configuration


def _default_config():
    return {"format": "csv", "seed": 0, "log": "warn", "ranges": {}}


def _validate_config(doc, path):
    if not isinstance(doc, dict):
        raise DomainError(f"config file {path} must hold a table of settings")
    for key in doc:
        if key not in ("format", "seed", "log", "ranges"):
            raise DomainError(f"unknown config key {key!r} in {path}")
    if "format" in doc and doc["format"] not in ("csv", "json"):
        raise DomainError(f"config format must be 'csv' or 'json', got {doc['format']!r}")
    if "seed" in doc and (not isinstance(doc["seed"], int) or isinstance(doc["seed"], bool)):
        raise DomainError("config seed must be an integer")
    if "log" in doc and doc["log"] not in _LOG_LEVELS:
        raise DomainError(f"config log level must be one of {sorted(_LOG_LEVELS)}")
    if "ranges" in doc:
        ranges = doc["ranges"]
        if not isinstance(ranges, dict):
            raise DomainError("config ranges must map suite names to tables")
        for suite, table in ranges.items():
            if suite not in SUITE_NAMES:
                raise DomainError(f"unknown suite {suite!r} in config ranges")
            if not isinstance(table, dict):
                raise DomainError(f"config ranges for {suite!r} must be a table")
            for key, value in table.items():
                if not isinstance(value, int) or isinstance(value, bool):
                    raise DomainError(f"config range {suite}.{key} must be an integer")


def _load_config(path):
    """Parse and validate a TOML or JSON config file."""
    with open(path, "rb") as fh:
        raw = fh.read()
    if path.endswith(".json"):
        try:
            doc = json.loads(raw)
        except ValueError as exc:
            raise DomainError(f"config file {path} is not valid JSON: {exc}")
    elif path.endswith(".toml"):
        try:
            doc = tomllib.loads(raw.decode("utf-8"))
        except tomllib.TOMLDecodeError as exc:
            raise DomainError(f"config file {path} is not valid TOML: {exc}")
    else:
        raise DomainError(f"config file {path} must end in .toml or .json")
    _validate_config(doc, path)
    return doc


def _effective_config(args):
    cfg = _default_config()
    if getattr(args, "config", None):
        cfg.update(_load_config(args.config))
    return cfg


def _setup_logging(cfg):
    level_name = os.environ.get("HECKELAB_LOG")
    if level_name is None:
        level_name = cfg["log"]
    if level_name not in _LOG_LEVELS:
        raise DomainError(
            f"unknown log level {level_name!r}; choose from {sorted(_LOG_LEVELS)}"
        )
    logger = logging.getLogger("heckelab")
    logger.handlers.clear()
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    logger.addHandler(handler)
    logger.setLevel(_LOG_LEVELS[level_name])
    logger.propagate = False


# ---------------------------------------------------------------------------
# serialization helpers


def _emit(text, out_path):
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _json_text(doc):
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _specialize(poly, q):
    """Evaluate a symbolic table entry at an integer q, exactly."""
    value = poly.eval_at(q)
    if isinstance(value, Fraction):
        if value.denominator != 1:
            raise InvariantError(f"table entry {poly} is not integral at q={q}")
        return int(value)
    return value


def _flag(match):
    if match is None:
        return ""
    return "true" if match else "false"


# ---------------------------------------------------------------------------
# tables


def _dnumber_rows(r_max, q):
    rows = []
    for r in range(r_max + 1):
        d = d_number(r)
        bullet = d_bullet_number(r) if r > 0 else None
        if q is None:
            rows.append({"r": r, "d": d, "dbullet": bullet})
        else:
            rows.append(
                {
                    "r": r,
                    "d": _specialize(d, q),
                    "dbullet": None if bullet is None else _specialize(bullet, q),
                }
            )
    return rows


def _satake_rows(N, q):
    mat = SatakeMatrix(N)
    rows = []
    for delta in range(N // 2 + 1):
        for i in range(delta + 1):
            entry = mat.entry(delta, i)
            rows.append(
                {
                    "delta": delta,
                    "i": i,
                    "entry": entry if q is None else _specialize(entry, q),
                }
            )
    return rows


def _expression(element, q):
    parts = []
    for delta in sorted(element.coeffs, reverse=True):
        coeff = element.coeffs[delta]
        shown = str(coeff) if q is None else str(_specialize(coeff, q))
        parts.append(f"T{delta}" if shown == "1" else f"({shown})*T{delta}")
    return " + ".join(parts)


def _operator_rows(N, q):
    names = _EVEN_OPERATORS if N % 2 == 0 else _ODD_OPERATORS
    rows = []
    for name in names:
        element = named_operator(name, N)
        if q is None:
            entries = element.to_entries()
        else:
            entries = [
                [delta, _specialize(coeff, q)]
                for delta, coeff in sorted(element.coeffs.items())
            ]
        rows.append(
            {
                "name": name,
                "flavor": element.flavor,
                "expression": _expression(element, q),
                "entries": entries,
            }
        )
    return rows


def _poly_cell(value):
    if value is None:
        return "-"
    return str(value)


def _poly_json(value):
    from .qcalc import LaurentPoly

    if isinstance(value, LaurentPoly):
        return value.to_pairs()
    return value


def cmd_tables(args):
    cfg = _effective_config(args)
    _setup_logging(cfg)
    fmt = args.format or cfg["format"]
    q = args.q
    if args.kind == "dnumbers":
        rows = _dnumber_rows(args.r_max, q)
        header = ("r", "d", "dbullet")
        csv_rows = [(row["r"], _poly_cell(row["d"]), _poly_cell(row["dbullet"])) for row in rows]
        doc_rows = [
            {"r": row["r"], "d": _poly_json(row["d"]), "dbullet": _poly_json(row["dbullet"])}
            for row in rows
        ]
    elif args.kind == "satake_matrix":
        rows = _satake_rows(args.N, q)
        header = ("delta", "i", "entry")
        csv_rows = [(row["delta"], row["i"], _poly_cell(row["entry"])) for row in rows]
        doc_rows = [
            {"delta": row["delta"], "i": row["i"], "entry": _poly_json(row["entry"])}
            for row in rows
        ]
    else:
        rows = _operator_rows(args.N, q)
        header = ("name", "expression")
        csv_rows = [(row["name"], row["expression"]) for row in rows]
        doc_rows = [
            {
                "name": row["name"],
                "flavor": row["flavor"],
                "entries": [[delta, _poly_json(value)] for delta, value in row["entries"]],
            }
            for row in rows
        ]
    _log.info("tables %s: %d rows", args.kind, len(csv_rows))
    if fmt == "csv":
        text = _csv_text(header, csv_rows)
    else:
        doc = {"kind": args.kind, "q": "symbolic" if q is None else q, "rows": doc_rows}
        if args.kind != "dnumbers":
            doc["N"] = args.N
        text = _json_text(doc)
    _emit(text, args.out)
    return 0


# ---------------------------------------------------------------------------
# verify


def cmd_verify(args):
    cfg = _effective_config(args)
    _setup_logging(cfg)
    ranges = {}
    if args.suite != "all":
        ranges.update(cfg["ranges"].get(args.suite, {}))
    flag_ranges = {
        "r_max": args.r_max,
        "k_max": args.k_max,
        "q_max": args.q_max,
        "n_max": args.N,
    }
    ranges.update({key: value for key, value in flag_ranges.items() if value is not None})
    seed = args.seed if args.seed is not None else cfg["seed"]
    report = run_suite(args.suite, ranges, seed)
    counts = {}
    for check in report.checks:
        counts[check.status] = counts.get(check.status, 0) + 1
    _log.info("suite %s: %s", args.suite, counts)
    _emit(report.to_json(), args.out)
    return 0 if report.overall_pass else 1


# ---------------------------------------------------------------------------
# eval


def cmd_eval(args):
    cfg = _effective_config(args)
    _setup_logging(cfg)
    fmt = args.format or cfg["format"]
    N = args.N
    prime = args.prime
    r = N // 2
    if len(args.alpha) != r:
        raise DomainError(f"expected {r} alpha entries for N={N}, got {len(args.alpha)}")
    try:
        inverses = [pow(a, -1, prime) for a in args.alpha]
    except ValueError:
        raise DomainError("alpha entries must be invertible mod the prime")
    entries = list(args.alpha) + ([1] if N % 2 else []) + list(reversed(inverses))
    alpha = SatakeParam.inert(entries, p=prime)
    ctx = EvalContext(args.q % prime, p=prime)
    element = named_operator(args.op, N)
    value = eval_phi(element, alpha, ctx)
    closed = closed_form_eval(args.op, N, alpha, ctx)
    match = (value == closed) if closed is not None else None
    _log.info("eval %s at N=%d: value %d", args.op, N, value)
    if fmt == "csv":
        text = _csv_text(
            ("op", "N", "prime", "q", "alpha", "value", "closed_form", "match"),
            [
                (
                    args.op,
                    N,
                    prime,
                    args.q,
                    ";".join(str(a) for a in args.alpha),
                    value,
                    "" if closed is None else closed,
                    _flag(match),
                )
            ],
        )
    else:
        text = _json_text(
            {
                "op": args.op,
                "N": N,
                "prime": prime,
                "q": args.q,
                "alpha": list(args.alpha),
                "value": value,
                "closed_form": closed,
                "match": match,
            }
        )
    _emit(text, args.out)
    return 0


# ---------------------------------------------------------------------------
# count


def cmd_count(args):
    cfg = _effective_config(args)
    _setup_logging(cfg)
    fmt = args.format or cfg["format"]
    rows = census(args.kind, args.q, args.N)
    _log.info("count %s at q=%d N=%d: %d rows", args.kind, args.q, args.N, len(rows))
    if fmt == "csv":
        text = _csv_text(
            ("q", "N", "parameter", "count", "closed_form", "match"),
            [
                (
                    row["q"],
                    row["N"],
                    row["parameter"],
                    row["count"],
                    "" if row["closed_form"] is None else row["closed_form"],
                    _flag(row["match"]),
                )
                for row in rows
            ],
        )
    else:
        text = _json_text({"kind": args.kind, "q": args.q, "N": args.N, "rows": rows})
    _emit(text, args.out)
    return 0


# ---------------------------------------------------------------------------
# parser and entry point


def _q_argument(text):
    if text == "symbolic":
        return None
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected an integer or 'symbolic', got {text!r}"
        )


def _add_common(parser):
    parser.add_argument("--format", choices=("csv", "json"), default=None)
    parser.add_argument("--out", default=None, metavar="PATH")
    parser.add_argument("--config", default=None, metavar="PATH")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="heckelab",
        description="Exact tables, identity checks, evaluations and lattice counts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    tables = sub.add_parser("tables", help="print a reference table")
    tables.add_argument("kind", choices=("dnumbers", "satake_matrix", "operators"))
    tables.add_argument("--r-max", dest="r_max", type=int, default=4)
    tables.add_argument("--N", dest="N", type=int, default=2)
    tables.add_argument("--q", type=_q_argument, default=None, metavar="Q|symbolic")
    _add_common(tables)
    tables.set_defaults(handler=cmd_tables)

    verify = sub.add_parser("verify", help="run a check suite, emit a JSON report")
    verify.add_argument("--suite", choices=("all",) + SUITE_NAMES, default="all")
    verify.add_argument("--r-max", dest="r_max", type=int, default=None)
    verify.add_argument("--k-max", dest="k_max", type=int, default=None)
    verify.add_argument("--q-max", dest="q_max", type=int, default=None)
    verify.add_argument("--N", dest="N", type=int, default=None)
    verify.add_argument("--seed", type=int, default=None)
    verify.add_argument("--out", default=None, metavar="PATH")
    verify.add_argument("--config", default=None, metavar="PATH")
    verify.set_defaults(handler=cmd_verify)

    evalp = sub.add_parser("eval", help="evaluate a named operator at a parameter")
    evalp.add_argument("op", choices=_OPERATOR_NAMES)
    evalp.add_argument("alpha", nargs="+", type=int)
    evalp.add_argument("--N", dest="N", type=int, required=True)
    evalp.add_argument("--prime", type=int, default=10007)
    evalp.add_argument("--q", type=int, default=2)
    _add_common(evalp)
    evalp.set_defaults(handler=cmd_eval)

    count = sub.add_parser("count", help="print one lattice-point census family")
    count.add_argument("kind", choices=("isotropic", "meeting", "dl", "dlbullet", "window"))
    count.add_argument("--q", type=int, default=2)
    count.add_argument("--N", dest="N", type=int, default=2)
    _add_common(count)
    count.set_defaults(handler=cmd_count)

    return parser


def main(argv=None):
    """Entry point; returns the process exit code."""
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ResourceError, InvariantError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
