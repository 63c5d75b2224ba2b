"""Command-line entry point.

    artinstat predict --a 5 --stat omega-quotient --max-n 5
    artinstat empirical --a 2 --stat omega-diff --x 1e6
    artinstat compare --a 3 --x 1e7
    artinstat degree --a 5 --ell 2 --m 5
    artinstat genfun --a 4
    artinstat expectation --a 4

Statistic names: omega-quotient = omega((p-1)/ord), big-omega-quotient =
Omega((p-1)/ord), omega-diff = omega(p-1) - omega(ord).  Exit codes: 2 bad
arguments, 3 excluded base or other domain error, 4 resource limit.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import __version__
from .arith import as_fraction, decompose
from .coeffs import CoefficientTable, PrimeCutoff, predict
from .errors import DomainError, MismatchError, ResourceError
from .genfun import correction_factors
from .kummer import DegreeQuery, epsilon, kummer_degree
from .statistic import ALL_STATISTICS, StatisticKind

SCHEMA_VERSION = 1
EXIT_CONFIG, EXIT_DOMAIN, EXIT_RESOURCE = 2, 3, 4


class ConfigError(Exception):
    pass


def fmt(v) -> str:
    """12 significant digits, shared by json and csv output."""
    return format(float(v), ".12g")


def num(v) -> float:
    return float(fmt(v))


@dataclass
class RunConfig:
    command: str
    a: Optional[Fraction] = None
    statistic: Optional[str] = None
    max_n: int = 5
    x: Optional[int] = None
    xi: Optional[int] = None
    prime_cutoff: Optional[int] = None
    format: str = "table"
    threads: Optional[int] = None
    output: Optional[str] = None
    ell: Optional[int] = None
    m: int = 1
    sigmas: float = 4.0
    slack: float = 0.01
    checkpoint_dir: Optional[str] = None

    def validate(self):
        needs_a = {"empirical", "compare", "degree", "genfun", "expectation"}
        if self.command in needs_a and self.a is None:
            raise ConfigError(f"{self.command} needs --a")
        if self.command in ("empirical", "compare") and self.x is None:
            raise ConfigError(f"{self.command} needs --x")
        if self.command == "degree" and self.ell is None:
            raise ConfigError("degree needs --ell")
        for name in ("x", "xi", "prime_cutoff", "ell", "m", "threads"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise ConfigError(f"--{name.replace('_', '-')} must be positive")
        if self.max_n < 0:
            raise ConfigError("--max-n must be >= 0")
        if self.format not in ("table", "json", "csv"):
            raise ConfigError(f"unknown format {self.format}")

    def statistics(self) -> list[StatisticKind]:
        if self.statistic in (None, "all"):
            return list(ALL_STATISTICS)
        return [StatisticKind.parse(self.statistic)]

    def cutoff(self) -> PrimeCutoff:
        return PrimeCutoff.coerce(self.prime_cutoff)


# ---------------------------------------------------------------------------
# rendering


def tables_to_json(tables: list[CoefficientTable]) -> str:
    out = []
    for t in tables:
        d = t.to_dict()
        d["values"] = [num(v) for v in d["values"]]
        d["errors"] = [num(v) for v in d["errors"]]
        if d["expectation"] is not None:
            d["expectation"] = [num(v) for v in d["expectation"]]
        out.append(d)
    return json.dumps({"schema_version": SCHEMA_VERSION, "tables": out}, indent=1)


def tables_from_json(text: str) -> list[CoefficientTable]:
    d = json.loads(text)
    if d.get("schema_version") != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {d.get('schema_version')}")
    return [CoefficientTable.from_dict(t) for t in d["tables"]]


def tables_to_csv(tables: list[CoefficientTable]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n"] + [c for t in tables for c in (t.statistic.value, t.statistic.value + "_error")])
    for n in range(max(len(t) for t in tables)):
        row = [n]
        for t in tables:
            row += [fmt(t.values[n]), fmt(t.errors[n])] if n < len(t) else ["", ""]
        w.writerow(row)
    if all(t.expectation is not None for t in tables):
        w.writerow(["E"] + [fmt(v) for t in tables for v in t.expectation])
    return buf.getvalue()


def tables_from_csv(text: str, a=None) -> list[CoefficientTable]:
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    header, body = rows[0], rows[1:]
    stats = header[1::2]
    tables = []
    for k, s in enumerate(stats):
        col = 1 + 2 * k
        vals, errs, ex = [], [], None
        for r in body:
            if r[0] == "E":
                ex = (float(r[col]), float(r[col + 1]))
            elif r[col] != "":
                vals.append(float(r[col]))
                errs.append(float(r[col + 1]))
        tables.append(CoefficientTable(a, StatisticKind.parse(s), vals, errs, expectation=ex))
    return tables


def tables_to_text(tables: list[CoefficientTable], title: str) -> str:
    lines = [title]
    head = f"{'n':>3}  " + "  ".join(f"{t.statistic.value:>20}" for t in tables)
    lines += [head, "-" * len(head)]
    for n in range(max(len(t) for t in tables)):
        cells = [f"{t.values[n]:>20.6f}" if n < len(t) else " " * 20 for t in tables]
        lines.append(f"{n:>3}  " + "  ".join(cells))
    if all(t.expectation is not None for t in tables):
        lines.append("-" * len(head))
        lines.append(f"{'E':>3}  " + "  ".join(f"{t.expectation[0]:>20.5f}" for t in tables))
    return "\n".join(lines)


def _emit(cfg: RunConfig, text: str):
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------------------
# commands


def cmd_predict(cfg: RunConfig) -> int:
    if cfg.a is not None:
        decompose(cfg.a)  # validate early: -1, 0, 1 are DomainErrors
    tables = [predict(cfg.a, s, cfg.max_n, cfg.cutoff()) for s in cfg.statistics()]
    if cfg.format == "json":
        _emit(cfg, tables_to_json(tables))
    elif cfg.format == "csv":
        _emit(cfg, tables_to_csv(tables))
    else:
        title = "uncorrected products" if cfg.a is None else f"a = {cfg.a}"
        _emit(cfg, tables_to_text(tables, title))
    return 0


def cmd_empirical(cfg: RunConfig) -> int:
    from .empirical import empirical_densities

    decompose(cfg.a)
    stats = cfg.statistics()
    if cfg.xi and cfg.statistic in (None, "all"):
        stats = [StatisticKind.OMEGA_QUOTIENT]
    results = [
        empirical_densities(cfg.a, s, cfg.x, cfg.max_n, cfg.xi, cfg.threads, checkpoint_dir=cfg.checkpoint_dir)
        for s in stats
    ]
    if cfg.format == "json":
        tallies = [t.to_dict() for t, _ in results]
        _emit(cfg, json.dumps(tallies[0] if len(tallies) == 1 else {"schema_version": SCHEMA_VERSION, "tallies": tallies}, indent=1))
    elif cfg.format == "csv":
        _emit(cfg, tables_to_csv([tab for _, tab in results]))
    else:
        t0 = results[0][0]
        title = f"a = {cfg.a}, x = {cfg.x}, primes used = {t0.primes_used}" + (f", xi = {cfg.xi}" if cfg.xi else "")
        _emit(cfg, tables_to_text([tab for _, tab in results], title))
    return 0


def cmd_compare(cfg: RunConfig) -> int:
    from .empirical import compare, empirical_densities

    decompose(cfg.a)
    reports = []
    for s in cfg.statistics():
        pred = predict(cfg.a, s, cfg.max_n, cfg.cutoff())
        _, emp = empirical_densities(cfg.a, s, cfg.x, cfg.max_n, None, cfg.threads, checkpoint_dir=cfg.checkpoint_dir)
        reports.append(compare(pred, emp, cfg.sigmas, cfg.slack))
    if cfg.format == "json":
        _emit(cfg, json.dumps({"schema_version": SCHEMA_VERSION, "reports": [r.to_dict() for r in reports]}, indent=1))
    elif cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["statistic", "n", "predicted", "empirical", "diff", "sigma", "threshold", "passed"])
        for r in reports:
            for row in r.rows:
                w.writerow([r.statistic.value, row.n, fmt(row.predicted), fmt(row.empirical), fmt(row.diff),
                            fmt(row.sigma), fmt(row.threshold), int(row.passed)])
        _emit(cfg, buf.getvalue())
    else:
        lines = [f"a = {cfg.a}, x = {cfg.x}, threshold = {cfg.sigmas} sigma + {cfg.slack}"]
        for r in reports:
            lines.append(f"{r.statistic.value}: {'pass' if r.passed else 'FAIL'}")
            for row in r.rows:
                lines.append(
                    f"  n={row.n:<2d} predicted {row.predicted:.6f}  empirical {row.empirical:.6f}"
                    f"  diff {row.diff:+.6f}  sigma {row.sigma:.2e}  {'ok' if row.passed else 'out'}"
                )
        _emit(cfg, "\n".join(lines))
    return 0 if all(r.passed for r in reports) else 1


def cmd_degree(cfg: RunConfig) -> int:
    q = DegreeQuery.of(cfg.a, cfg.ell, cfg.m)
    eps, deg = epsilon(q), kummer_degree(q)
    if cfg.format == "json":
        _emit(cfg, json.dumps({"schema_version": SCHEMA_VERSION, "a": str(cfg.a), "ell": cfg.ell, "m": cfg.m,
                               "epsilon": str(eps), "degree": deg}))
    elif cfg.format == "csv":
        _emit(cfg, f"a,ell,m,epsilon,degree\n{cfg.a},{cfg.ell},{cfg.m},{eps},{deg}")
    else:
        _emit(cfg, f"epsilon={eps} degree={deg}")
    return 0


def cmd_genfun(cfg: RunConfig) -> int:
    base = decompose(cfg.a)
    rows = []
    for s in cfg.statistics():
        cf = correction_factors(base, s)
        rows.append((s.value, cf.F.to_str(), cf.H.to_str(), cf.combined.to_str()))
    if cfg.format == "json":
        out = [{"statistic": s, "F": F, "H": H, "combined": C} for s, F, H, C in rows]
        _emit(cfg, json.dumps({"schema_version": SCHEMA_VERSION, "a": str(cfg.a), "factors": out}, indent=1))
    elif cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["statistic", "F", "H", "combined"])
        w.writerows(rows)
        _emit(cfg, buf.getvalue())
    else:
        lines = [f"a = {cfg.a}  (h = {base.h}, a0 = {base.a0}, b0 = {base.b0})"]
        for s, F, H, C in rows:
            lines += [f"{s}:", f"  F   = {F}", f"  H   = {H}", f"  F*H = {C}"]
        _emit(cfg, "\n".join(lines))
    return 0


def cmd_expectation(cfg: RunConfig) -> int:
    from .coeffs import expectation

    vals = [(s, *expectation(cfg.a, s, cfg.cutoff())) for s in cfg.statistics()]
    if cfg.format == "json":
        _emit(cfg, json.dumps({"schema_version": SCHEMA_VERSION, "a": str(cfg.a),
                               "expectations": {s.value: {"value": num(v), "error": num(e)} for s, v, e in vals}}))
    elif cfg.format == "csv":
        _emit(cfg, "statistic,value,error\n" + "\n".join(f"{s.value},{fmt(v)},{fmt(e)}" for s, v, e in vals))
    else:
        _emit(cfg, "\n".join(f"E[{s.value}] = {v:.8f}  (+/- {e:.1e})" for s, v, e in vals))
    return 0


COMMANDS = {
    "predict": cmd_predict,
    "empirical": cmd_empirical,
    "compare": cmd_compare,
    "degree": cmd_degree,
    "genfun": cmd_genfun,
    "expectation": cmd_expectation,
}


def run(cfg: RunConfig) -> int:
    cfg.validate()
    return COMMANDS[cfg.command](cfg)


# ---------------------------------------------------------------------------
# argument parsing


def _positive_int(s: str) -> int:
    try:
        v = int(float(s)) if ("e" in s.lower() or "." in s) else int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {s}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {s}")
    return v


def _rational(s: str) -> Fraction:
    try:
        return as_fraction(s)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {s}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="artinstat", description=__doc__.split("\n\n")[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, a_required=False, stat=True):
        p.add_argument("--a", type=_rational, required=a_required, help="base, integer or num/den")
        if stat:
            p.add_argument("--stat", dest="statistic", default="all",
                           help="omega-quotient | big-omega-quotient | omega-diff | all")
        p.add_argument("--format", choices=("table", "json", "csv"), default="table")
        p.add_argument("--output", "-o", help="write to this file instead of stdout")

    p = sub.add_parser("predict", help="predicted densities D_a(n) and the expectation")
    common(p)
    p.add_argument("--max-n", type=int, default=5)
    p.add_argument("--prime-cutoff", type=_positive_int, help="single prime bound for all sums")

    p = sub.add_parser("empirical", help="tally the statistic over primes p <= x")
    common(p, a_required=True)
    p.add_argument("--x", type=_positive_int, required=True)
    p.add_argument("--max-n", type=int, default=5)
    p.add_argument("--xi", type=_positive_int, help="ignore index prime factors above xi (omega-quotient only)")
    p.add_argument("--threads", type=_positive_int)
    p.add_argument("--checkpoint-dir")

    p = sub.add_parser("compare", help="predicted vs empirical densities")
    common(p, a_required=True)
    p.add_argument("--x", type=_positive_int, required=True)
    p.add_argument("--max-n", type=int, default=3)
    p.add_argument("--prime-cutoff", type=_positive_int)
    p.add_argument("--threads", type=_positive_int)
    p.add_argument("--sigmas", type=float, default=4.0)
    p.add_argument("--slack", type=float, default=0.01)
    p.add_argument("--checkpoint-dir")

    p = sub.add_parser("degree", help="degree of Q(a^(1/ell), zeta_(m ell))")
    common(p, a_required=True, stat=False)
    p.add_argument("--ell", type=_positive_int, required=True)
    p.add_argument("--m", type=_positive_int, default=1)

    p = sub.add_parser("genfun", help="correction factors F, H and F*H")
    common(p, a_required=True)

    p = sub.add_parser("expectation", help="expected values of the statistics")
    common(p, a_required=True)
    p.add_argument("--prime-cutoff", type=_positive_int)
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    d = vars(ns).copy()
    fields = RunConfig.__dataclass_fields__
    cfg = RunConfig(**{k: v for k, v in d.items() if k in fields})
    if cfg.statistic not in (None, "all"):
        try:
            StatisticKind.parse(cfg.statistic)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    if "threads" in d and cfg.threads is None and os.environ.get("ARTIN_THREADS"):
        try:
            cfg.threads = int(os.environ["ARTIN_THREADS"])
        except ValueError:
            raise ConfigError(f"ARTIN_THREADS must be an integer, got {os.environ['ARTIN_THREADS']!r}") from None
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return run(config_from_args(ns))
    except ConfigError as exc:
        print(f"artinstat: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DomainError, MismatchError) as exc:
        print(f"artinstat: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ResourceError as exc:
        print(f"artinstat: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
