"""Command-line front end.

Subcommands ``invariants``, ``coeffs``, ``audit`` and ``table``. Exit codes:
0 success, 1 a normative audit check failed, 2 usage error or bad lattice,
3 output could not be written.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass

from . import audit, classical, hermite, quad, taylor
from .errors import DegenerateLatticeError, SigmaLabError
from .lattice import PANEL, PRESETS, Lattice, TruncationPolicy, make_lattice, preset

SCHEMA_VERSION = "1.0"

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


@dataclass(frozen=True)
class RunConfig:
    lattice: tuple[float, float, float, float] | None = None
    preset: str | None = None
    max_shell: int = 12
    target_tol: float = 1e-10
    quad_order: int = 32
    r_max: int = 6
    output_format: str = "json"
    output_path: str | None = None

    def __post_init__(self):
        if self.max_shell < 1:
            raise ValueError("max_shell must be >= 1")
        if self.quad_order < 2:
            raise ValueError("quad_order must be >= 2")
        if not self.target_tol > 0:
            raise ValueError("target_tol must be > 0")
        if self.r_max < 0:
            raise ValueError("r_max must be >= 0")
        if self.output_format not in ("json", "csv", "text"):
            raise ValueError(f"unknown format {self.output_format!r}")
        if self.lattice is not None and self.preset is not None:
            raise ValueError("give either a lattice or a preset, not both")

    @property
    def policy(self) -> TruncationPolicy:
        return TruncationPolicy(max_shell=self.max_shell, target_tol=self.target_tol)

    def lattices(self) -> list[tuple[str, Lattice]]:
        """Selected lattice, or the default panel when none is given."""
        if self.lattice is not None:
            a, b, c, d = self.lattice
            return [("custom", make_lattice(complex(a, b), complex(c, d)))]
        if self.preset is not None:
            return [(self.preset, preset(self.preset))]
        return [(name, preset(name)) for name in PANEL]

    def to_json(self) -> dict:
        d = asdict(self)
        d.pop("output_path")
        if d["lattice"] is not None:
            d["lattice"] = list(d["lattice"])
        return d


class UsageError(Exception):
    pass


def _c(z) -> dict:
    z = complex(z)
    return {"re": _f(z.real), "im": _f(z.imag)}


def _f(x):
    return None if x is None or not math.isfinite(x) else float(x)


def _dump_json(config: RunConfig, results) -> str:
    doc = {"schema_version": SCHEMA_VERSION, "config": config.to_json(), "results": results}
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _fmt(z) -> str:
    z = complex(z)
    return f"{z.real:.15g}{z.imag:+.15g}j"


# ----------------------------------------------------------------------------
# commands

def cmd_invariants(config: RunConfig) -> tuple[str, int]:
    records = []
    for label, lat in config.lattices():
        inv = classical.invariants(lat, config.policy)
        rec = {
            "label": label,
            "omega1": lat.omega1,
            "omega2": lat.omega2,
            "S": lat.cell_area,
            "nu": lat.nu,
            "mu": inv.mu,
            "eta1": inv.eta1,
            "eta2": inv.eta2,
            "g2": inv.g2,
            "g3": inv.g3,
            **{f"G{k}": inv.G[k] for k in sorted(inv.G)},
            "legendre_residual": inv.legendre_residual,
        }
        records.append(rec)
    real_keys = ("S", "nu", "legendre_residual")
    if config.output_format == "json":
        results = [
            {k: (v if k == "label" else _f(v) if k in real_keys else _c(v)) for k, v in rec.items()}
            for rec in records
        ]
        return _dump_json(config, results), EXIT_OK
    if config.output_format == "csv":
        rows = [
            [rec["label"], k, _f(complex(v).real), _f(complex(v).imag)]
            for rec in records for k, v in rec.items() if k != "label"
        ]
        return _csv(["lattice", "quantity", "re", "im"], rows), EXIT_OK
    lines = []
    for rec in records:
        lines.append(f"[{rec['label']}]")
        lines += [f"  {k:<18} {v:.15g}" if k in real_keys else f"  {k:<18} {_fmt(v)}"
                  for k, v in rec.items() if k != "label"]
    return "\n".join(lines) + "\n", EXIT_OK


def coeff_rows(lat: Lattice, config: RunConfig) -> list[dict]:
    """``W_r`` by recursion, Hermite-Gauss series and quadrature, r = 0..r_max."""
    policy = config.policy
    inv = classical.invariants(lat, policy)
    rule = quad.build_rule(lat.nu, config.quad_order)
    table = taylor.build_coeff_table(max(config.r_max, 1))
    rows = []
    for r in range(config.r_max + 1):
        rec = taylor.w_r_value(taylor.w_r_polynomial(table, r), inv)
        ser = hermite.w_r_series_route(lat, inv, r, policy)
        itg = quad.w_r_integral_route(lat, inv, rule, r, policy)

        def dev(a, b):
            return abs(a - b) / max(1.0, abs(b))

        rows.append({
            "r": r, "W_recursion": rec, "W_series": ser, "W_integral": itg,
            "dev_series_recursion": dev(ser, rec),
            "dev_integral_recursion": dev(itg, rec),
            "dev_integral_series": dev(itg, ser),
        })
    return rows


_DEV_KEYS = ("dev_series_recursion", "dev_integral_recursion", "dev_integral_series")
_W_KEYS = ("W_recursion", "W_series", "W_integral")


def cmd_coeffs(config: RunConfig) -> tuple[str, int]:
    per_lattice = [(label, coeff_rows(lat, config)) for label, lat in config.lattices()]
    if config.output_format == "json":
        results = [
            {"lattice": label, **{k: (_c(v) if k in _W_KEYS else _f(v) if k in _DEV_KEYS else v) for k, v in row.items()}}
            for label, rows in per_lattice for row in rows
        ]
        return _dump_json(config, results), EXIT_OK
    if config.output_format == "csv":
        header = ["lattice", "r"]
        for k in _W_KEYS:
            header += [f"{k}_re", f"{k}_im"]
        header += list(_DEV_KEYS)
        out = []
        for label, rows in per_lattice:
            for row in rows:
                line = [label, row["r"]]
                for k in _W_KEYS:
                    line += [_f(row[k].real), _f(row[k].imag)]
                line += [_f(row[k]) for k in _DEV_KEYS]
                out.append(line)
        return _csv(header, out), EXIT_OK
    lines = []
    for label, rows in per_lattice:
        lines.append(f"[{label}]")
        lines.append(f"  {'r':>2}  {'W_recursion':>44}  {'W_series':>44}  {'W_integral':>44}  max dev")
        for row in rows:
            d = max(row[k] for k in _DEV_KEYS)
            lines.append(f"  {row['r']:>2}  " + "  ".join(f"{_fmt(row[k]):>44}" for k in _W_KEYS) + f"  {d:.1e}")
    return "\n".join(lines) + "\n", EXIT_OK


_REPORT_FIELDS = ("identity_id", "lattice_label", "verdict", "normative", "mode", "abs_residual", "tol")


def cmd_audit(config: RunConfig) -> tuple[str, int]:
    reports = audit.run_audit(config.lattices(), config.policy, config.quad_order, config.r_max)
    code = EXIT_OK if audit.normative_ok(reports) else EXIT_FAIL
    if config.output_format == "json":
        return _dump_json(config, [r.to_dict() for r in reports]), code
    if config.output_format == "csv":
        header = list(_REPORT_FIELDS[:5]) + ["lhs_re", "lhs_im", "rhs_re", "rhs_im", "ratio_re", "ratio_im",
                                             "abs_residual", "tol", "note"]
        rows = []
        for r in reports:
            ratio = r.ratio if r.ratio is not None else complex(math.nan, math.nan)
            rows.append([
                r.identity_id, r.lattice_label, r.verdict, r.normative, r.mode,
                _f(r.lhs.real), _f(r.lhs.imag), _f(r.rhs.real), _f(r.rhs.imag),
                _f(ratio.real), _f(ratio.imag), _f(r.abs_residual), _f(r.tol), r.note,
            ])
        return _csv(header, rows), code
    counts: dict[tuple[bool, str], int] = {}
    lines = []
    for r in reports:
        counts[(r.normative, r.verdict)] = counts.get((r.normative, r.verdict), 0) + 1
        if r.verdict != audit.HOLDS:
            kind = "normative" if r.normative else "claim"
            lines.append(f"  {r.verdict:<13} {kind:<9} {r.identity_id:<28} {r.lattice_label:<15} {r.note}")
    head = [f"{len(reports)} reports"]
    for (normative, verdict), n in sorted(counts.items()):
        head.append(f"  {'normative' if normative else 'claim':<9} {verdict:<13} {n}")
    head.append("normative suite: " + ("holds" if code == EXIT_OK else "FAILS"))
    head.append("non-holding reports:")
    return "\n".join(head + lines) + "\n", code


def cmd_table(config: RunConfig) -> tuple[str, int]:
    table = taylor.build_coeff_table(config.r_max)
    if config.output_format == "json":
        results = [
            {"m": m, "n": n, "numerator": c.numerator, "denominator": c.denominator}
            for r in range(table.max_r + 1) for (m, n) in taylor._pairs(r)
            for c in (table.entries[(m, n)],)
        ]
        return _dump_json(config, results), EXIT_OK
    text = taylor.table_csv(table)
    if config.output_format == "csv":
        return text, EXIT_OK
    rows = [line.split(",") for line in text.splitlines()[1:]]
    return "".join(f"a[{m},{n}] = {p}/{q}\n" for m, n, p, q in rows), EXIT_OK


COMMANDS = {
    "invariants": cmd_invariants,
    "coeffs": cmd_coeffs,
    "audit": cmd_audit,
    "table": cmd_table,
}


# ----------------------------------------------------------------------------
# argument handling

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    group = common.add_mutually_exclusive_group()
    group.add_argument("--lattice", nargs=4, type=float, metavar=("A", "B", "C", "D"),
                       help="periods omega1 = A + iB, omega2 = C + iD")
    group.add_argument("--preset", choices=sorted(PRESETS))
    group.add_argument("--lattice-file", metavar="PATH",
                       help='JSON file {"omega1": [re, im], "omega2": [re, im]}')
    common.add_argument("--max-shell", type=int, default=12)
    common.add_argument("--tol", type=float, default=1e-10)
    common.add_argument("--quad-order", type=int, default=32)
    common.add_argument("--rmax", type=int, default=6)
    common.add_argument("--format", choices=("json", "csv", "text"), default=None)
    common.add_argument("--out", metavar="PATH")

    parser = argparse.ArgumentParser(prog="sigmalab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("invariants", parents=[common], help="periods, quasi-periods, mu, g2, g3, G4..G12")
    sub.add_parser("coeffs", parents=[common], help="W_r by recursion, series and quadrature")
    sub.add_parser("audit", parents=[common], help="identity audit (default: preset panel)")
    sub.add_parser("table", parents=[common], help="exact recursion coefficients a_{m,n}")
    return parser


def _read_lattice_file(path: str) -> tuple[float, float, float, float]:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read lattice file: {exc}") from exc
    try:
        (a, b), (c, d) = doc["omega1"], doc["omega2"]
        return float(a), float(b), float(c), float(d)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed lattice file {path!r}") from exc


def config_from_args(args) -> RunConfig:
    lattice = tuple(args.lattice) if args.lattice else None
    if args.lattice_file:
        lattice = _read_lattice_file(args.lattice_file)
    if args.command == "invariants" and lattice is None and args.preset is None:
        raise UsageError("invariants needs --lattice, --preset or --lattice-file")
    fmt = args.format or ("csv" if args.command == "table" else "json")
    try:
        return RunConfig(
            lattice=lattice, preset=args.preset, max_shell=args.max_shell, target_tol=args.tol,
            quad_order=args.quad_order, r_max=args.rmax, output_format=fmt, output_path=args.out,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
        text, code = COMMANDS[args.command](config)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"sigmalab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DegenerateLatticeError as exc:
        print(f"sigmalab: bad lattice: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SigmaLabError as exc:
        print(f"sigmalab: error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if config.output_path:
        try:
            with open(config.output_path, "w", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"sigmalab: cannot write {config.output_path}: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
