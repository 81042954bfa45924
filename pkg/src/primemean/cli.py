"""Command-line front end: ``primemean {table,verify,sharpness,seq,approx,bounds}``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Sequence

from .approx import ApproxSpec, approx_error_scan, approx_ratio, approx_ratio_strict
from .bounds import (
    BOUNDS,
    BoundCheckReport,
    Verdict,
    reference_bound_report,
    sharpness_scan,
    verify_theorem_range,
)
from .errors import CapacityError, ConfigurationError
from .mean_stream import MeanSnapshot, iter_snapshot_blocks, rows_at_targets, strict_snapshots
from .numerics import CertifiedDecimal, Interval, certified_round
from .oeis import SequenceId, emit_bfile, sequence_values

__all__ = ["CliConfig", "run", "main", "EXIT_OK", "EXIT_VIOLATION", "EXIT_INDETERMINATE", "EXIT_USAGE", "EXIT_CAPACITY"]

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INDETERMINATE = 2
EXIT_USAGE = 64
EXIT_CAPACITY = 65

COMMANDS = ("table", "verify", "sharpness", "seq", "approx", "bounds")
FORMATS = ("tsv", "json", "bfile")
PRECISIONS = ("standard", "strict")
TABLE_COLUMNS = ("n", "p_n", "s_n", "ratio", "approx")
DEFAULT_TABLE_LIMIT = 10**8 + 100


@dataclass(frozen=True)
class CliConfig:
    command: str
    limit: int = DEFAULT_TABLE_LIMIT
    output_format: str = "tsv"
    precision_mode: str = "standard"
    places: int = 6
    targets: tuple[int, ...] = ()
    lo: int | None = None
    hi: int | None = None
    seq_id: str = SequenceId.A062049.value
    order: int = 2
    at: int | None = None
    below: int = BOUNDS.theorem_threshold

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigurationError(f"unknown command {self.command!r}")
        if self.output_format not in FORMATS:
            raise ConfigurationError(f"unknown format {self.output_format!r}")
        if self.output_format == "bfile" and self.command != "seq":
            raise ConfigurationError("--format bfile is only valid for seq")
        if self.precision_mode not in PRECISIONS:
            raise ConfigurationError(f"unknown precision {self.precision_mode!r}")
        if self.limit < 2:
            raise ConfigurationError("limit must be >= 2")
        if not 0 <= self.places <= 17:
            raise ConfigurationError("places must be in [0, 17]")
        if any(t < 2 for t in self.targets):
            raise ConfigurationError("targets must be >= 2")
        if self.command in ("verify", "seq", "approx") and (self.lo is None or self.hi is None):
            raise ConfigurationError(f"{self.command} needs --from and --to")
        if self.lo is not None and self.hi is not None and self.lo > self.hi:
            raise ConfigurationError("--from must not exceed --to")
        if self.command == "bounds" and (self.at is None or self.at < 2):
            raise ConfigurationError("bounds needs --at X with X >= 2")
        if self.order < 0:
            raise ConfigurationError("order must be >= 0")

    def table_targets(self) -> tuple[int, ...]:
        if self.targets:
            return tuple(sorted(self.targets))
        return tuple(10**k for k in range(1, 10) if 10**k <= self.limit)


# -- rendering -------------------------------------------------------------


def _iv(x: Interval | None):
    return None if x is None else [repr(float(x.lo)), repr(float(x.hi))]


def _iv_text(x: Interval | None) -> str:
    return "-" if x is None else f"[{float(x.lo)!r}, {float(x.hi)!r}]"


def _tsv(header: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    lines = ["\t".join(header)]
    lines += ["\t".join(str(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _kv(obj: dict) -> str:
    return "".join(f"{k}\t{v}\n" for k, v in obj.items())


# -- commands --------------------------------------------------------------


def _render_row(snap: MeanSnapshot, places: int) -> tuple[CertifiedDecimal, CertifiedDecimal, CertifiedDecimal]:
    spec = ApproxSpec(2)
    approx = approx_ratio_strict(snap.p_n, spec) if snap.strict else approx_ratio(snap.p_n, spec)
    return certified_round(snap.s, places), certified_round(snap.ratio, places), certified_round(approx, places)


def _table(config: CliConfig) -> tuple[int, str]:
    targets = config.table_targets()
    strict = config.precision_mode == "strict"
    snaps = rows_at_targets(config.limit, targets, strict=strict)
    rendered = [_render_row(s, config.places) for s in snaps]
    # standard mode: rows that fail to certify are redone once in double-double
    redo = [i for i, cells in enumerate(rendered) if not all(c.certified for c in cells) and not snaps[i].strict]
    if redo:
        for i, snap in zip(redo, strict_snapshots([(snaps[i].n, snaps[i].p_n) for i in redo])):
            print(f"row n={snap.n}: binary64 interval too wide, re-evaluated in double-double", file=sys.stderr)
            snaps[i] = snap
            rendered[i] = _render_row(snap, config.places)
    rows = [(s.n, s.p_n, *map(str, cells)) for s, cells in zip(snaps, rendered)]
    certified = all(c.certified for cells in rendered for c in cells)
    status = EXIT_OK if certified else EXIT_INDETERMINATE
    if config.output_format == "json":
        return status, _json([dict(zip(TABLE_COLUMNS, (str(v) for v in row))) for row in rows])
    return status, _tsv(TABLE_COLUMNS, rows)


def _verify(config: CliConfig) -> tuple[int, str]:
    report = verify_theorem_range(config.lo, config.hi)
    if report.violations:
        status = EXIT_VIOLATION
    elif report.indeterminate:
        status = EXIT_INDETERMINATE
    else:
        status = EXIT_OK
    summary = {
        "from": report.range[0],
        "to": report.range[1],
        "primes_checked": report.primes_checked,
        "certified_holds": report.certified_holds,
        "violations": len(report.violations),
        "indeterminate": len(report.indeterminate),
        "strict_rechecked": report.strict_rechecked,
        "min_lower_margin": _iv(report.min_lower_margin),
        "min_lower_prime": report.min_lower_prime,
        "min_upper_margin": _iv(report.min_upper_margin),
        "min_upper_prime": report.min_upper_prime,
    }
    if config.output_format == "json":
        summary["violation_list"] = [
            {"p": v.p, "n": v.n, "side": v.side, "margin": _iv(v.margin)} for v in report.violations
        ]
        summary["indeterminate_list"] = list(report.indeterminate)
        return status, _json(summary)
    text = {k: (_iv_text(report.min_lower_margin) if k == "min_lower_margin"
                else _iv_text(report.min_upper_margin) if k == "min_upper_margin" else v)
            for k, v in summary.items()}
    out = _kv(text)
    if report.violations:
        out += _tsv(("p", "n", "side", "margin"), [(v.p, v.n, v.side, _iv_text(v.margin)) for v in report.violations])
    return status, out


def _sharpness(config: CliConfig) -> tuple[int, str]:
    result = sharpness_scan(config.below)
    lv = result.largest_violation
    oracle = {(c.violation.p, c.violation.side): c for c in result.oracle_checks}
    violations = sorted(result.report.violations, key=lambda v: (v.p, v.side))
    checks = [oracle.get((v.p, v.side)) for v in violations]
    summary = {
        "below": config.below,
        "primes_checked": result.report.primes_checked,
        "violations": len(violations),
        "indeterminate": len(result.report.indeterminate),
        "largest_violating_prime": None if lv is None else lv.p,
        "largest_violation_side": None if lv is None else lv.side,
        "largest_violation_confirmed": result.largest_confirmed,
    }
    if config.output_format == "json":
        table = [
            {
                "p": v.p,
                "n": v.n,
                "side": v.side,
                "margin": _iv(v.margin),
                "oracle_margin": None if c is None else [repr(c.margin_lo), repr(c.margin_hi)],
                "oracle_confirmed": c is not None and c.confirmed,
            }
            for v, c in zip(violations, checks)
        ]
        return EXIT_OK, _json({**summary, "margins": table})
    rows = [(v.p, v.n, v.side, _iv_text(v.margin), "yes" if c is not None and c.confirmed else "no")
            for v, c in zip(violations, checks)]
    return EXIT_OK, _kv(summary) + _tsv(("p", "n", "side", "margin", "oracle_confirmed"), rows)


def _seq(config: CliConfig) -> tuple[int, str]:
    if config.output_format == "bfile":
        return EXIT_OK, emit_bfile(config.seq_id, config.lo, config.hi)
    values = sequence_values(config.seq_id, config.lo, config.hi)
    pairs = list(zip(range(config.lo, config.hi + 1), values))
    if config.output_format == "json":
        return EXIT_OK, _json({"id": SequenceId(config.seq_id).value, "values": [[n, str(v)] for n, v in pairs]})
    return EXIT_OK, _tsv(("n", "value"), pairs)


def _approx(config: CliConfig) -> tuple[int, str]:
    report = approx_error_scan(config.hi, ApproxSpec(config.order), config.lo)
    summary = {
        "order": report.order,
        "from": report.floor_p,
        "to": report.limit,
        "primes_checked": report.primes_checked,
        "max_rel_error": _iv(report.max_rel_error),
        "argmax_prime": report.argmax_prime,
    }
    if config.output_format == "json":
        return EXIT_OK, _json(summary)
    summary["max_rel_error"] = _iv_text(report.max_rel_error)
    return EXIT_OK, _kv(summary)


def _snapshot_at_most(x: int, strict: bool) -> MeanSnapshot:
    last = None
    for sb in iter_snapshot_blocks(x):
        last = sb
    snap = last.snapshot(len(last) - 1)
    return strict_snapshots([(snap.n, snap.p_n)])[0] if strict else snap


def _bound_report(config: CliConfig) -> BoundCheckReport:
    snap = _snapshot_at_most(config.at, config.precision_mode == "strict")
    report = reference_bound_report(snap)
    if not snap.strict and any(c.verdict is Verdict.INDETERMINATE for c in report.checks if c.applicable):
        print("indeterminate check: re-evaluating in double-double", file=sys.stderr)
        report = reference_bound_report(strict_snapshots([(snap.n, snap.p_n)])[0])
    return report


def _bounds(config: CliConfig) -> tuple[int, str]:
    report = _bound_report(config)
    applicable = [c for c in report.checks if c.applicable]
    if any(c.verdict is Verdict.FAILS for c in applicable):
        status = EXIT_VIOLATION
    elif any(c.verdict is Verdict.INDETERMINATE for c in applicable):
        status = EXIT_INDETERMINATE
    else:
        status = EXIT_OK
    if config.output_format == "json":
        return status, _json({
            "x": report.x,
            "n": report.n,
            "checks": [
                {"name": c.name, "applicable": c.applicable, "verdict": c.verdict.value,
                 "margin": _iv(c.margin), "statement": c.statement}
                for c in report.checks
            ],
        })
    rows = [(c.name, "yes" if c.applicable else "no", c.verdict.value, _iv_text(c.margin)) for c in report.checks]
    return status, _kv({"x": report.x, "n": report.n}) + _tsv(("check", "applicable", "verdict", "margin"), rows)


_HANDLERS = {
    "table": _table,
    "verify": _verify,
    "sharpness": _sharpness,
    "seq": _seq,
    "approx": _approx,
    "bounds": _bounds,
}


def run(config: CliConfig) -> tuple[int, str]:
    """Execute one command; returns ``(exit status, text for stdout)``."""
    return _HANDLERS[config.command](config)


# -- argument parsing --------------------------------------------------------


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: error: {message}")


def _int(text: str) -> int:
    # accept 1e8 and 10**8 style shorthands as well as plain integers
    text = text.strip().replace("_", "")
    if "**" in text:
        base, exp = text.split("**")
        return int(base) ** int(exp)
    if "e" in text.lower():
        mant, exp = text.lower().split("e")
        if not mant.isdigit() or not exp.isdigit():
            raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
        return int(mant) * 10 ** int(exp)
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(_int(t) for t in text.split(",") if t.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="primemean", description="Certified geometric mean of the first n primes.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p: argparse.ArgumentParser, formats=("tsv", "json")) -> None:
        p.add_argument("--format", dest="output_format", choices=formats, default=formats[0])

    p = sub.add_parser("table", help="rows n, p_n, s_n, p_n/s_n, order-2 approximation")
    p.add_argument("--limit", type=_int, default=DEFAULT_TABLE_LIMIT)
    p.add_argument("--targets", type=_int_list, default=())
    p.add_argument("--precision", dest="precision_mode", choices=PRECISIONS, default="standard")
    p.add_argument("--places", type=int, default=6)
    common(p)

    p = sub.add_parser("verify", help="check the ratio bounds at every prime in [from, to)")
    p.add_argument("--from", dest="lo", type=_int, required=True)
    p.add_argument("--to", dest="hi", type=_int, required=True)
    common(p)

    p = sub.add_parser("sharpness", help="where the ratio bounds fail below their threshold")
    p.add_argument("--below", type=_int, default=BOUNDS.theorem_threshold)
    common(p)

    p = sub.add_parser("seq", help="emit an integer sequence")
    p.add_argument("--id", dest="seq_id", choices=[s.value for s in SequenceId], default=SequenceId.A062049.value)
    p.add_argument("--from", dest="lo", type=_int, required=True)
    p.add_argument("--to", dest="hi", type=_int, required=True)
    common(p, ("bfile", "tsv", "json"))

    p = sub.add_parser("approx", help="max relative error of the order-m approximation over (from, to]")
    p.add_argument("--order", type=int, default=2)
    p.add_argument("--from", dest="lo", type=_int, required=True)
    p.add_argument("--to", dest="hi", type=_int, required=True)
    common(p)

    p = sub.add_parser("bounds", help="prime-counting and ratio inequalities at the largest prime <= X")
    p.add_argument("--at", type=_int, required=True)
    p.add_argument("--precision", dest="precision_mode", choices=PRECISIONS, default="standard")
    common(p)
    return parser


def parse_config(argv: Sequence[str]) -> CliConfig:
    ns = vars(build_parser().parse_args(argv))
    return CliConfig(**{k: v for k, v in ns.items() if v is not None})


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        config = parse_config(argv)
    except UsageError as exc:
        build_parser().print_usage(sys.stderr)
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except ConfigurationError as exc:
        print(f"primemean: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        status, text = run(config)
    except CapacityError as exc:
        print(f"primemean: capacity exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except ConfigurationError as exc:
        print(f"primemean: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(text)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
