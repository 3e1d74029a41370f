"""Command-line surface: tabulate symbols, export matrices, run the verifier.

Subcommands
-----------
tabulate-cg        coupling coefficients (j1 j2 alpha1 alpha2 | j alpha; r)
tabulate-fbar      the symmetric 3-symbols fbar(j1 j2 j3; alpha1 alpha2 alpha3)
tabulate-standard  exact m-scheme symbols (cg | threejm | sixj)
export-ops         generator matrices on one multiplet as JSON/CSV
verify             run every invariant suite and emit a pass/fail report

Complex numbers serialize as [re, im]; half-integers as reduced strings
("3/2", "2"); tables are sorted by label tuple. CSV output adds magnitude
and phase columns. A config file in key = value form may supply any long
flag's value; explicit flags win. Exit status: 0 success, 1 verification
failure, 2 bad arguments.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .halfint import HalfInt, coupled_j_values, m_values
from .nonstandard import (
    SymbolValue,
    alpha_labels,
    cg_nonstandard_tensor,
    fbar_tensor,
)
from .standard_wra import cg, sixj, threejm
from .su2gen import SpinSpace, build_spin_ops
from .verify import VerifyConfig, default_thread_count, report_dict, run_suites

MAX_TWICE_J = 128


class ConfigError(ValueError):
    """Bad flag/config-file input; maps to exit status 2."""


def parse_half(text: str) -> HalfInt:
    try:
        value = HalfInt.parse(text)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if value.twice < 0 or value.twice > MAX_TWICE_J:
        raise ConfigError(f"j = {text} outside the supported range [0, {MAX_TWICE_J}/2]")
    return value


def parse_r_list(text: str) -> tuple[float, ...]:
    """Comma-separated r values, each a decimal or a rational p/q."""
    values = []
    for piece in text.split(","):
        piece = piece.strip()
        if not piece:
            continue
        try:
            if "/" in piece:
                values.append(float(Fraction(piece)))
            else:
                values.append(float(piece))
        except (ValueError, ZeroDivisionError):
            raise ConfigError(f"cannot parse r value {piece!r}") from None
    if not values:
        raise ConfigError("empty r list")
    return tuple(values)


def parse_k_list(text: str) -> tuple[int, ...]:
    """Comma-separated integers; an item may be a span like 2-8."""
    values: list[int] = []
    for piece in text.split(","):
        piece = piece.strip()
        if not piece:
            continue
        try:
            if "-" in piece.lstrip("-"):
                lo_text, hi_text = piece.split("-", 1)
                values.extend(range(int(lo_text), int(hi_text) + 1))
            else:
                values.append(int(piece))
        except ValueError:
            raise ConfigError(f"cannot parse k value {piece!r}") from None
    if not values or any(k < 2 for k in values):
        raise ConfigError("k list must be non-empty with every k >= 2")
    return tuple(values)


def parse_tol(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ConfigError(f"cannot parse tolerance {text!r}") from None
    if not value > 0:
        raise ConfigError("tol must be positive")
    return value


def read_config_file(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected key = value")
                key, _, value = line.partition("=")
                out[key.strip()] = value.strip()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from None
    return out


@dataclass
class JobConfig:
    """Fully resolved job: one subcommand plus its validated inputs."""

    command: str
    j1: HalfInt | None = None
    j2: HalfInt | None = None
    j3: HalfInt | None = None
    j: HalfInt | None = None
    sixj_labels: tuple[HalfInt, ...] = ()
    symbol: str = "cg"
    # None means "not given": tabulation falls back to r = 0, verify to its
    # own four-value sweep
    r_values: tuple[float, ...] | None = None
    k_values: tuple[int, ...] = tuple(range(2, 13))
    j_max: HalfInt = HalfInt(25)
    tol: float | None = None
    seed: int = 20260823
    threads: int = field(default_factory=default_thread_count)
    fmt: str = "json"
    output: str | None = None


def _fmt_float(value: float) -> str:
    return repr(float(value))


def _complex_pair(value: complex) -> list[float]:
    return [float(value.real), float(value.imag)]


def _label_sort_key(labels: tuple[str, ...]):
    key = []
    for text in labels:
        try:
            key.append((0, float(Fraction(text))))
            continue
        except ValueError:
            pass
        try:
            key.append((0, float(text)))
        except ValueError:
            key.append((1, text))
    return key


# ---------------------------------------------------------------------------
# table builders; each returns (column names, rows of SymbolValue, extra cols)

def _cg_table(config: JobConfig) -> tuple[list[str], list[SymbolValue], dict]:
    if config.j1 is None or config.j2 is None:
        raise ConfigError("tabulate-cg needs --j1 and --j2")
    columns = ["j1", "j2", "j", "r", "alpha1", "alpha2", "alpha"]
    rows = []
    for r in config.r_values:
        sp1, sp2 = SpinSpace(config.j1, r), SpinSpace(config.j2, r)
        for j in coupled_j_values(config.j1, config.j2):
            sp = SpinSpace(j, r)
            tensor = cg_nonstandard_tensor(sp1, sp2, sp)
            labs1, labs2, labs = alpha_labels(sp1), alpha_labels(sp2), alpha_labels(sp)
            for s1, l1 in enumerate(labs1):
                for s2, l2 in enumerate(labs2):
                    for s, l in enumerate(labs):
                        rows.append(SymbolValue(
                            labels=(str(config.j1), str(config.j2), str(j),
                                    _fmt_float(r), _fmt_float(l1.alpha),
                                    _fmt_float(l2.alpha), _fmt_float(l.alpha)),
                            value=complex(tensor[s1, s2, s]),
                            scheme="nonstandard", formula="cg"))
    return columns, rows, {}


def _fbar_table(config: JobConfig) -> tuple[list[str], list[SymbolValue], dict]:
    if config.j1 is None or config.j2 is None or config.j3 is None:
        raise ConfigError("tabulate-fbar needs --j1, --j2 and --j3")
    columns = ["j1", "j2", "j3", "r", "alpha1", "alpha2", "alpha3"]
    rows = []
    for r in config.r_values:
        spaces = (SpinSpace(config.j1, r), SpinSpace(config.j2, r), SpinSpace(config.j3, r))
        tensor = fbar_tensor(*spaces)
        all_labels = [alpha_labels(sp) for sp in spaces]
        for s1, l1 in enumerate(all_labels[0]):
            for s2, l2 in enumerate(all_labels[1]):
                for s3, l3 in enumerate(all_labels[2]):
                    rows.append(SymbolValue(
                        labels=(str(config.j1), str(config.j2), str(config.j3),
                                _fmt_float(r), _fmt_float(l1.alpha),
                                _fmt_float(l2.alpha), _fmt_float(l3.alpha)),
                        value=complex(tensor[s1, s2, s3]),
                        scheme="nonstandard", formula="fbar"))
    return columns, rows, {}


def _standard_table(config: JobConfig) -> tuple[list[str], list[SymbolValue], dict]:
    exact: dict[tuple[str, ...], str] = {}
    rows = []
    if config.symbol == "cg":
        if config.j1 is None or config.j2 is None or config.j is None:
            raise ConfigError("tabulate-standard --symbol cg needs --j1, --j2 and --j")
        columns = ["j1", "j2", "j", "m1", "m2", "m"]
        for m1 in m_values(config.j1):
            for m2 in m_values(config.j2):
                for m in m_values(config.j):
                    value = cg(config.j1, config.j2, m1, m2, config.j, m)
                    labels = (str(config.j1), str(config.j2), str(config.j),
                              str(m1), str(m2), str(m))
                    rows.append(SymbolValue(labels=labels, value=complex(float(value)),
                                            scheme="standard", formula="cg"))
                    exact[labels] = str(value)
    elif config.symbol == "threejm":
        if config.j1 is None or config.j2 is None or config.j3 is None:
            raise ConfigError("tabulate-standard --symbol threejm needs --j1, --j2 and --j3")
        columns = ["j1", "j2", "j3", "m1", "m2", "m3"]
        for m1 in m_values(config.j1):
            for m2 in m_values(config.j2):
                for m3 in m_values(config.j3):
                    value = threejm(config.j1, config.j2, config.j3, m1, m2, m3)
                    labels = (str(config.j1), str(config.j2), str(config.j3),
                              str(m1), str(m2), str(m3))
                    rows.append(SymbolValue(labels=labels, value=complex(float(value)),
                                            scheme="standard", formula="threejm"))
                    exact[labels] = str(value)
    elif config.symbol == "sixj":
        if len(config.sixj_labels) != 6:
            raise ConfigError("tabulate-standard --symbol sixj needs --labels with six entries")
        columns = ["j1", "j2", "j3", "j4", "j5", "j6"]
        value = sixj(*config.sixj_labels)
        labels = tuple(str(x) for x in config.sixj_labels)
        rows.append(SymbolValue(labels=labels, value=complex(float(value)),
                                scheme="standard", formula="sixj"))
        exact[labels] = str(value)
    else:
        raise ConfigError(f"unknown symbol {config.symbol!r}; pick cg, threejm or sixj")
    return columns, rows, {"exact": exact}


def _table_json(columns: list[str], rows: list[SymbolValue], extras: dict) -> str:
    exact = extras.get("exact", {})
    payload = {
        "columns": columns,
        "scheme": rows[0].scheme if rows else None,
        "formula": rows[0].formula if rows else None,
        "rows": [],
    }
    for row in sorted(rows, key=lambda r: _label_sort_key(r.labels)):
        entry = {"labels": list(row.labels), "value": _complex_pair(row.value)}
        if row.labels in exact:
            entry["exact"] = exact[row.labels]
        payload["rows"].append(entry)
    return json.dumps(payload, indent=2) + "\n"


def _table_csv(columns: list[str], rows: list[SymbolValue], extras: dict) -> str:
    exact = extras.get("exact", {})
    buf = io.StringIO()
    writer = csv.writer(buf)
    header = columns + ["re", "im", "magnitude", "phase"]
    if exact:
        header.append("exact")
    writer.writerow(header)
    for row in sorted(rows, key=lambda r: _label_sort_key(r.labels)):
        record = list(row.labels) + [
            repr(row.value.real), repr(row.value.imag),
            repr(row.magnitude), repr(row.phase),
        ]
        if exact:
            record.append(exact.get(row.labels, ""))
        writer.writerow(record)
    return buf.getvalue()


def _export_ops_payload(config: JobConfig) -> dict:
    if config.j is None:
        raise ConfigError("export-ops needs --j")

    def matrix(entries: np.ndarray) -> list:
        return [[_complex_pair(entries[i, kcol]) for kcol in range(entries.shape[1])]
                for i in range(entries.shape[0])]

    exports = []
    for r in config.r_values:
        space = SpinSpace(config.j, r)
        ops = build_spin_ops(space)
        exports.append({
            "j": str(config.j),
            "r": r,
            "basis_m": [str(m) for m in space.m_list],
            "alpha": [label.alpha for label in alpha_labels(space)],
            "operators": {
                "h": matrix(ops.h),
                "u_r": matrix(ops.u_r),
                "j_plus": matrix(ops.j_plus),
                "j_minus": matrix(ops.j_minus),
                "j3": matrix(ops.j3),
                "j_squared": matrix(np.asarray(ops.j_squared)),
            },
        })
    return {"exports": exports}


def _export_ops_csv(payload: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["j", "r", "operator", "row", "col", "re", "im", "magnitude", "phase"])
    for export in payload["exports"]:
        for name, entries in sorted(export["operators"].items()):
            for i, row in enumerate(entries):
                for kcol, (re, im) in enumerate(row):
                    mag = math.hypot(re, im)
                    ph = math.atan2(im, re) if (re, im) != (0.0, 0.0) else 0.0
                    writer.writerow([export["j"], repr(export["r"]), name, i, kcol,
                                     repr(re), repr(im), repr(mag), repr(ph)])
    return buf.getvalue()


def write_output(text: str, path: str | None) -> None:
    """Write atomically: temp file in the target directory, then rename."""
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".wigner-nonstd-", suffix=".part")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def run(config: JobConfig) -> int:
    """Execute one job; returns the process exit status."""
    if config.fmt not in ("json", "csv"):
        raise ConfigError(f"unknown format {config.fmt!r}")
    if config.command in ("tabulate-cg", "tabulate-fbar", "tabulate-standard"):
        if config.r_values is None:
            config.r_values = (0.0,)
        builder = {
            "tabulate-cg": _cg_table,
            "tabulate-fbar": _fbar_table,
            "tabulate-standard": _standard_table,
        }[config.command]
        columns, rows, extras = builder(config)
        text = (_table_json if config.fmt == "json" else _table_csv)(columns, rows, extras)
        write_output(text, config.output)
        return 0
    if config.command == "export-ops":
        if config.r_values is None:
            config.r_values = (0.0,)
        payload = _export_ops_payload(config)
        if config.fmt == "json":
            write_output(json.dumps(payload, indent=2) + "\n", config.output)
        else:
            write_output(_export_ops_csv(payload), config.output)
        return 0
    if config.command == "verify":
        vconfig = VerifyConfig(
            j_max=config.j_max, k_values=config.k_values,
            tol=config.tol, seed=config.seed, threads=config.threads)
        if config.r_values is not None:
            vconfig.r_values = config.r_values
        results = run_suites(vconfig)
        report = report_dict(results, vconfig)
        if config.fmt == "json":
            write_output(json.dumps(report, indent=2) + "\n", config.output)
        else:
            buf = io.StringIO()
            writer = csv.writer(buf)
            writer.writerow(["check", "parameters", "residual", "tolerance", "pass"])
            for check in report["checks"]:
                writer.writerow([check["check"], json.dumps(check["parameters"]),
                                 repr(check["residual"]), repr(check["tolerance"]),
                                 check["pass"]])
            write_output(buf.getvalue(), config.output)
        passed = report["total"] - report["failed"]
        print(f"verify: {passed}/{report['total']} checks passed", file=sys.stderr)
        return 0 if report["all_pass"] else 1
    raise ConfigError(f"unknown command {config.command!r}")


# ---------------------------------------------------------------------------
# argument handling

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wigner-nonstd",
        description="SU(2) coupling tables and verification in the cyclic-phase eigenscheme.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="key = value file; explicit flags win")
        p.add_argument("--r", help="comma list of winding parameters (decimal or p/q)")
        p.add_argument("--format", dest="fmt", choices=["json", "csv"])
        p.add_argument("--output", help="write here atomically instead of stdout")

    p = sub.add_parser("tabulate-cg", help="non-standard coupling coefficients")
    add_common(p)
    p.add_argument("--j1")
    p.add_argument("--j2")

    p = sub.add_parser("tabulate-fbar", help="non-standard 3-symbols")
    add_common(p)
    p.add_argument("--j1")
    p.add_argument("--j2")
    p.add_argument("--j3")

    p = sub.add_parser("tabulate-standard", help="exact m-scheme symbols")
    add_common(p)
    p.add_argument("--symbol", choices=["cg", "threejm", "sixj"])
    p.add_argument("--j1")
    p.add_argument("--j2")
    p.add_argument("--j3")
    p.add_argument("--j")
    p.add_argument("--labels", help="six comma-separated j's for --symbol sixj")

    p = sub.add_parser("export-ops", help="generator matrices for one multiplet")
    add_common(p)
    p.add_argument("--j")

    p = sub.add_parser("verify", help="run all invariant suites")
    add_common(p)
    p.add_argument("--j-max", dest="j_max")
    p.add_argument("--k", help="comma list of k values; spans like 2-8 allowed")
    p.add_argument("--tol", help="override every per-check default tolerance")
    p.add_argument("--seed")
    p.add_argument("--threads")
    return parser


def make_config(args: argparse.Namespace) -> JobConfig:
    """Merge flags over config-file values over defaults."""
    file_values = read_config_file(args.config) if getattr(args, "config", None) else {}

    def pick(flag: str, key: str | None = None) -> str | None:
        value = getattr(args, flag, None)
        if value is not None:
            return value
        return file_values.get(key or flag.replace("_", "-"))

    config = JobConfig(command=args.command)
    if pick("j1") is not None:
        config.j1 = parse_half(pick("j1"))
    if pick("j2") is not None:
        config.j2 = parse_half(pick("j2"))
    if pick("j3") is not None:
        config.j3 = parse_half(pick("j3"))
    if pick("j") is not None:
        config.j = parse_half(pick("j"))
    if pick("labels") is not None:
        config.sixj_labels = tuple(parse_half(x) for x in pick("labels").split(","))
    if pick("symbol") is not None:
        config.symbol = pick("symbol")
    if pick("r") is not None:
        config.r_values = parse_r_list(pick("r"))
    if pick("k") is not None:
        config.k_values = parse_k_list(pick("k"))
    if pick("j_max", "j-max") is not None:
        config.j_max = parse_half(pick("j_max", "j-max"))
    if pick("tol") is not None:
        config.tol = parse_tol(pick("tol"))
    if pick("seed") is not None:
        try:
            config.seed = int(pick("seed"))
        except ValueError:
            raise ConfigError(f"cannot parse seed {pick('seed')!r}") from None
    if pick("threads") is not None:
        try:
            config.threads = max(1, int(pick("threads")))
        except ValueError:
            raise ConfigError(f"cannot parse threads {pick('threads')!r}") from None
    if pick("fmt", "format") is not None:
        config.fmt = pick("fmt", "format")
    if pick("output") is not None:
        config.output = pick("output")
    return config


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = make_config(args)
        return run(config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
