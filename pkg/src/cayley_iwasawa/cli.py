"""Command-line front end.

    cayley-iwasawa chartab --group gl2:4
    cayley-iwasawa tower   --group cyclic:5 --gens all --beta 1:1,2:1 --ell 2 --levels 3
    cayley-iwasawa verify  factorization growth --group heisenberg:3 --gens all --beta z:1 --ell 2
    cayley-iwasawa batch   manifests/acceptance.json --out summary.csv

Exit status: 0 when every selected check passes, 1 when one fails, 2 for
configuration errors, 3 for unsupported domains (ramified primes, cycle
graphs, oversized groups).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, field, fields
from functools import cached_property
from pathlib import Path
from typing import Callable

from . import __version__
from .chartab import CharacterTable, character_table
from .cyclo import DEFAULT_PRECISION, CyclotomicInteger
from .errors import (ArtifactError, BetaConditionError, CheckFailed, ConfigError, DeterminantDegenerate,
                     EulerCharacteristicZero, MalformedSpec, UnsupportedDomain)
from .graphs import (BetaAssignment, VoltageAssignment, artin_corollary_check, cayley_graph,
                     class_number_formula_check, validate_beta, voltage_connectivity)
from .groups import FiniteGroup, all_nonidentity, build_group, split_top, validate_connection_set
from .iwasawa import (IwasawaData, character_record, congruence_invariant_check,
                      evaluation_identity_check, growth_check, iwasawa_laurent, iwasawa_polynomial,
                      sum_rule_check, tower_levels, verify_factorization)
from .laurent import XLaurent
from .reports import CheckReport, _jsonable

CHECKS = ("factorization", "class-number", "artin", "evaluation", "sum-rule", "congruence", "growth")
CSV_COLUMNS = ("group", "ell", "mu", "lambda", "nu", "n0", "checks_passed")

EXIT_OK, EXIT_CHECK, EXIT_CONFIG, EXIT_UNSUPPORTED = 0, 1, 2, 3


# -- job configuration -----------------------------------------------------------

@dataclass
class JobConfig:
    group: str = ""
    gens: str = "all"
    beta: str = ""
    ell: int | None = None
    levels: int = 3
    artin_levels: int = 1
    precision: int = DEFAULT_PRECISION
    format: str = "json"
    out: str | None = None
    checks: list[str] = field(default_factory=list)
    chars: str | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict, where: str = "job") -> JobConfig:
        known = {f.name for f in fields(cls)}
        extra = set(data) - known
        if extra:
            raise ConfigError(f"{where}: unknown keys {sorted(extra)}")
        cfg = cls(**{k: v for k, v in data.items()})
        if isinstance(cfg.checks, str):
            cfg.checks = [c for c in cfg.checks.replace(",", " ").split() if c]
        if isinstance(cfg.beta, dict):
            cfg.beta = ",".join(f"{k}:{v}" for k, v in cfg.beta.items())
        cfg.validate(where)
        return cfg

    def validate(self, where: str = "config") -> None:
        if not self.group:
            raise ConfigError(f"{where}: a group descriptor is required")
        for name in ("levels", "artin_levels", "precision"):
            try:
                setattr(self, name, int(getattr(self, name)))
            except (TypeError, ValueError):
                raise ConfigError(f"{where}: {name} must be an integer") from None
        if self.ell is not None:
            try:
                self.ell = int(self.ell)
            except (TypeError, ValueError):
                raise ConfigError(f"{where}: ell must be an integer") from None
            if self.ell < 2 or any(self.ell % p == 0 for p in range(2, int(self.ell ** 0.5) + 1)):
                raise ConfigError(f"{where}: ell = {self.ell} is not prime")
        if self.levels < 0 or self.precision < 1:
            raise ConfigError(f"{where}: levels must be >= 0 and precision >= 1")
        if self.format not in ("json", "text", "csv"):
            raise ConfigError(f"{where}: format must be json, text or csv")
        bad = [c for c in self.checks if c not in CHECKS]
        if bad:
            raise ConfigError(f"{where}: unknown checks {bad}; choose from {', '.join(CHECKS)}")


def read_config_file(path: str | Path) -> dict:
    """key = value lines; '#' starts a comment."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}:1: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in {f.name for f in fields(JobConfig)}:
            raise ConfigError(f"{path}:{lineno}:1: unknown key {key!r}")
        out[key] = value
    return out


def _lookup(G: FiniteGroup, token: str, what: str, column: int) -> int:
    token = token.strip()
    try:
        return G.index_of(token)
    except (KeyError, ValueError, MalformedSpec):
        pass
    if token.lstrip("-").isdigit() and 0 <= int(token) < G.order:
        return int(token)
    raise ConfigError(f"{what}:{column}: no element labelled {token!r} in {G.name}")


def parse_gens(G: FiniteGroup, text: str):
    if text.strip() == "all":
        return all_nonidentity(G)
    idx, col = [], 1
    for tok in split_top(text):
        idx.append(_lookup(G, tok, "--gens", col))
        col += len(tok) + 1
    return validate_connection_set(G, idx)


def parse_beta(G: FiniteGroup, S, text: str) -> BetaAssignment:
    """'label:int,...' on class representatives, completed by class invariance and antisymmetry."""
    partial: dict[int, int] = {}
    col = 1
    if text.strip():
        for tok in split_top(text):
            if ":" not in tok:
                raise ConfigError(f"--beta:{col}: expected label:value, got {tok!r}")
            label, value = tok.rsplit(":", 1)
            try:
                v = int(value)
            except ValueError:
                raise ConfigError(f"--beta:{col + len(label) + 1}: {value!r} is not an integer") from None
            g = _lookup(G, label, "--beta", col)
            if g in partial and partial[g] != v:
                raise ConfigError(f"--beta:{col}: {label} given twice")
            partial[g] = v
            col += len(tok) + 1
    return BetaAssignment.from_partial(G, S, partial)


# -- per-job pipeline ----------------------------------------------------------------

class Job:
    """Lazily computed objects shared by the checks of one configuration."""

    def __init__(self, cfg: JobConfig) -> None:
        self.cfg = cfg
        self.G = build_group(cfg.group)
        self.S = parse_gens(self.G, cfg.gens)
        self.beta = parse_beta(self.G, self.S, cfg.beta)
        self.X = cayley_graph(self.G, self.S)
        self.alpha = VoltageAssignment.from_beta(self.X, self.beta)

    @cached_property
    def table(self) -> CharacterTable:
        return character_table(self.G)

    @cached_property
    def f(self) -> XLaurent:
        return iwasawa_laurent(self.X, self.alpha)

    @cached_property
    def data(self) -> IwasawaData:
        return iwasawa_polynomial(self.f, self.cfg.ell, self.cfg.precision)

    @property
    def ell(self) -> int:
        if self.cfg.ell is None:
            raise ConfigError("this check needs --ell")
        return self.cfg.ell

    def require_tower(self) -> None:
        if not self.S.not_cycle:
            raise EulerCharacteristicZero("the Cayley graph is a cycle (r < 3)")
        validate_beta(self.beta, self.ell).raise_if_invalid()

    @cached_property
    def levels(self):
        self.require_tower()
        return tower_levels(self.X, self.alpha, self.ell, self.cfg.levels)

    def connected_up_to(self, n: int) -> bool:
        return all(voltage_connectivity(self.X, self.alpha, self.ell, k) for k in range(n + 1))

    # individual checks; each returns a list of reports
    def check_factorization(self) -> list[CheckReport]:
        return [verify_factorization(self.table, self.beta, self.f)]

    def check_class_number(self) -> list[CheckReport]:
        if not self.S.not_cycle:
            raise EulerCharacteristicZero("the Cayley graph is a cycle (r < 3)")
        return [class_number_formula_check(self.X)]

    def check_artin(self) -> list[CheckReport]:
        self.require_tower()
        # covers grow like ell^n |V|; the full Smith form is the bottleneck
        top = min(self.cfg.levels, self.cfg.artin_levels)
        return [artin_corollary_check(self.X, self.alpha, self.ell, n) for n in range(1, top + 1)]

    def check_evaluation(self) -> list[CheckReport]:
        top = max(1, min(self.cfg.levels, 2))
        return [evaluation_identity_check(self.X, self.alpha, self.ell, n, self.f) for n in range(1, top + 1)]

    def check_sum_rule(self) -> list[CheckReport]:
        return [sum_rule_check(self.table, self.beta, self.ell, self.data, self.cfg.precision)]

    def check_congruence(self) -> list[CheckReport]:
        T = self.table
        if self.cfg.chars:
            try:
                i, j = (int(x) for x in self.cfg.chars.split(","))
            except ValueError:
                raise ConfigError("--chars expects two row indices, e.g. 1,4") from None
            pairs = [(i, j)]
        else:
            pairs = [(i, j) for i in range(len(T)) for j in range(i + 1, len(T))
                     if T.degrees[i] == T.degrees[j] and T.degrees[i] % self.ell]
        return [congruence_invariant_check(T, i, j, self.beta, self.ell, self.cfg.precision)
                for i, j in pairs]

    def check_growth(self) -> list[CheckReport]:
        self.require_tower()
        return [growth_check(self.beta, self.ell, self.cfg.levels, self.data, self.levels)]

    def run(self, name: str) -> list[CheckReport]:
        fn: Callable[[], list[CheckReport]] = getattr(self, "check_" + name.replace("-", "_"))
        return fn()


def _status_entry(reports: list[CheckReport]) -> dict:
    passed = all(r.passed for r in reports)
    entry: dict = {"passed": passed, "status": "pass" if passed else next(
        r.status for r in reports if not r.passed)}
    if len(reports) == 1:
        entry.update(_jsonable(reports[0].details))
    else:
        entry["runs"] = [_jsonable(r.details) | {"passed": r.passed, "status": r.status} for r in reports]
    return entry


def run_checks(job: Job, names: list[str]) -> dict[str, dict]:
    """Run checks by name; unsupported ones are recorded as skipped, not raised."""
    out = {}
    for name in names:
        key = name.replace("-", "_")
        try:
            out[key] = _status_entry(job.run(name))
        except (UnsupportedDomain, BetaConditionError) as exc:
            out[key] = {"passed": None, "status": f"SKIPPED({type(exc).__name__})", "reason": str(exc)}
        except CheckFailed as exc:
            out[key] = {"passed": False, "status": type(exc).__name__, "reason": str(exc)}
    ev = out.get("evaluation")
    if ev and ev.get("passed"):
        conv = ev.get("convention") or next((r.get("convention") for r in ev.get("runs", [])), None)
        ev["convention"] = conv
    return out


def tower_report(job: Job, checks: list[str] | None = None) -> dict:
    cfg = job.cfg
    G = job.G
    report: dict = {
        "group": G.name,
        "S": [G.labels[s] for s in job.S],
        "beta": job.beta.serialize(),
        "ell": cfg.ell,
        "precision": cfg.precision,
    }
    try:
        data = job.data
        report.update({"K": data.K, "f_coeffs": [str(c) for c in data.fT], "mu": data.mu,
                       "lambda": data.lam})
    except DeterminantDegenerate as exc:
        data = None
        report.update({"K": None, "f_coeffs": [], "mu": None, "lambda": None, "degenerate": str(exc)})
    chars = []
    for k in range(len(job.table)):
        try:
            rec = character_record(job.table, k, job.beta, cfg.ell, cfg.precision)
            chars.append(rec.serialize())
        except ArtifactError as exc:
            rec = character_record(job.table, k, job.beta)
            chars.append(rec.serialize() | {"note": f"{type(exc).__name__}: {exc}"})
    report["characters"] = chars
    try:
        report["tower"] = [lv.serialize() for lv in job.levels] if cfg.ell else []
    except (UnsupportedDomain, ConfigError) as exc:
        report["tower"] = []
        report["tower_skipped"] = f"{type(exc).__name__}: {exc}"
    names = checks or [c for c in CHECKS if cfg.ell is not None or c in ("factorization", "class-number")]
    report["checks"] = run_checks(job, names)
    return report


def summary_row(report: dict) -> dict:
    checks = report.get("checks", {})
    ran = [c for c in checks.values() if c.get("passed") is not None]
    growth = checks.get("growth", {})
    return {"group": report["group"], "ell": report.get("ell"), "mu": report.get("mu"),
            "lambda": report.get("lambda"), "nu": growth.get("nu"), "n0": growth.get("n0"),
            "checks_passed": f"{sum(1 for c in ran if c['passed'])}/{len(ran)}"}


def exit_status(report: dict) -> int:
    return EXIT_CHECK if any(c.get("passed") is False for c in report.get("checks", {}).values()) else EXIT_OK


# -- rendering -----------------------------------------------------------------------------

def render(obj: dict | list, fmt: str, kind: str) -> str:
    if fmt == "json":
        return json.dumps(_jsonable(obj), indent=2) + "\n"
    if fmt == "csv":
        rows = obj if isinstance(obj, list) else [summary_row(obj)]
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: "" if r.get(k) is None else r.get(k) for k in CSV_COLUMNS})
        return buf.getvalue()
    if kind == "chartab":
        return _chartab_text(obj)
    return _report_text(obj)


def _table(rows: list[list[str]]) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() for r in rows) + "\n"


def _chartab_text(obj: dict) -> str:
    head = [["", *[c["representative"] for c in obj["classes"]]],
            ["size", *[str(c["size"]) for c in obj["classes"]]]]
    body = [[f"X{ch['index']}", *[str(CyclotomicInteger.deserialize(v)) for v in ch["values"]]]
            for ch in obj["characters"]]
    return f"{obj['group']}  order {obj['order']}  exponent {obj['exponent']}  (z = exp(2 pi i / {obj['exponent']}))\n" \
        + _table(head + body)


def _report_text(obj: dict) -> str:
    lines = [f"group      {obj['group']}", f"r          {len(obj['S'])}", f"ell        {obj['ell']}",
             f"beta       {', '.join(f'{k}:{v}' for k, v in obj['beta'].items() if v)}",
             f"K          {obj.get('K')}", f"f(T)       {' '.join(obj.get('f_coeffs', []))}",
             f"mu lambda  {obj.get('mu')} {obj.get('lambda')}", ""]
    out = "\n".join(lines) + "\n"
    rows = [["chi", "deg", "mu", "lambda"]] + [[str(c["index"]), str(c["degree"]), str(c["mu_chi"]),
                                                str(c["lambda_chi"])] for c in obj["characters"]]
    out += _table(rows) + "\n"
    if obj.get("tower"):
        rows = [["n", "vertices", "v(kappa)"]] + [[str(t["n"]), str(t["vertices"]), str(t["kappa_ell_valuation"])]
                                                 for t in obj["tower"]]
        out += _table(rows) + "\n"
    rows = [["check", "status"]] + [[k, str(v["status"])] for k, v in obj["checks"].items()]
    return out + _table(rows)


def emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# -- commands ------------------------------------------------------------------------------

def cmd_chartab(cfg: JobConfig) -> int:
    table = character_table(build_group(cfg.group))
    emit(render(table.serialize(), cfg.format if cfg.format != "csv" else "json", "chartab"), cfg.out)
    return EXIT_OK


def cmd_tower(cfg: JobConfig) -> int:
    report = tower_report(Job(cfg), cfg.checks or None)
    emit(render(report, cfg.format, "tower"), cfg.out)
    return exit_status(report)


def cmd_verify(cfg: JobConfig, which: list[str]) -> int:
    names = list(CHECKS) if not which or "all" in which else which
    bad = [w for w in names if w not in CHECKS]
    if bad:
        raise ConfigError(f"unknown checks {bad}; choose from {', '.join(CHECKS)}")
    job = Job(cfg)
    results = {}
    for name in names:
        try:
            results[name.replace("-", "_")] = _status_entry(job.run(name))
        except CheckFailed as exc:
            results[name.replace("-", "_")] = {"passed": False, "status": type(exc).__name__, "reason": str(exc)}
    report = {"group": job.G.name, "S": [job.G.labels[s] for s in job.S], "beta": job.beta.serialize(),
              "ell": cfg.ell, "precision": cfg.precision, "checks": results}
    if cfg.format == "csv":
        try:
            report.update({"mu": job.data.mu, "lambda": job.data.lam})
        except ArtifactError:
            pass
    emit(render(report, cfg.format, "verify") if cfg.format != "text" else _verify_text(report), cfg.out)
    return exit_status(report)


def _verify_text(report: dict) -> str:
    rows = [["check", "status"]] + [[k, str(v["status"])] for k, v in report["checks"].items()]
    return f"{report['group']}  ell={report['ell']}\n" + _table(rows)


def load_manifest(path: str | Path) -> list[JobConfig]:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read manifest {path}: {exc}") from exc
    if isinstance(data, dict):
        data = data.get("jobs", [])
    if not isinstance(data, list):
        raise ConfigError("manifest must be a JSON list of job objects")
    return [JobConfig.from_dict(d, f"{path}[{i}]") for i, d in enumerate(data)]


def cmd_batch(manifest: str, fmt: str, out: str | None) -> int:
    jobs = load_manifest(manifest)
    rows, reports, status = [], [], EXIT_OK
    for cfg in jobs:
        try:
            rep = tower_report(Job(cfg), cfg.checks or None)
            rows.append(summary_row(rep))
            reports.append(rep)
            if exit_status(rep):
                status = EXIT_CHECK
        except UnsupportedDomain as exc:
            rows.append({"group": cfg.group, "ell": cfg.ell,
                         "checks_passed": f"SKIPPED({type(exc).__name__})"})
            reports.append({"group": cfg.group, "ell": cfg.ell, "skipped": type(exc).__name__, "reason": str(exc)})
        except ArtifactError as exc:
            rows.append({"group": cfg.group, "ell": cfg.ell, "checks_passed": f"ERROR({type(exc).__name__})"})
            reports.append({"group": cfg.group, "ell": cfg.ell, "error": type(exc).__name__, "reason": str(exc)})
            status = EXIT_CHECK
    if fmt == "json":
        emit(render({"summary": rows, "reports": reports}, "json", "batch"), out)
    else:
        emit(render(rows, "csv", "batch"), out)
    return status


# -- argument parsing ---------------------------------------------------------------------

def _add_job_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key = value file; flags given on the command line win")
    p.add_argument("--group", help="group descriptor, e.g. cyclic:5, heisenberg:3, product(cyclic:3,symmetric:3)")
    p.add_argument("--gens", help="'all' for G minus the identity, or comma-separated labels/indices")
    p.add_argument("--beta", help="label:int,... on class representatives")
    p.add_argument("--ell", type=int, help="the prime ell")
    p.add_argument("--levels", type=int, help="top tower level n_max (default 3)")
    p.add_argument("--artin-levels", type=int, help="levels checked by the artin check (default 1)")
    p.add_argument("--precision", type=int, help=f"ell-adic precision N (default {DEFAULT_PRECISION})")
    p.add_argument("--format", choices=("json", "text", "csv"))
    p.add_argument("--out", help="output path (default: standard output)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cayley-iwasawa",
                                     description="Iwasawa invariants of Z_ell-towers of Cayley graphs.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    _add_job_flags(sub.add_parser("chartab", help="character table of a group"))
    p = sub.add_parser("tower", help="full report: f(T), invariants, characters, tower, checks")
    _add_job_flags(p)
    p.add_argument("--checks", help="comma-separated subset of checks to run")
    p = sub.add_parser("verify", help="run verification checks; exit 1 if any fails")
    p.add_argument("which", nargs="*", help=f"any of {', '.join(CHECKS)} or all")
    _add_job_flags(p)
    p.add_argument("--chars", help="row pair i,j for the congruence check")
    p = sub.add_parser("batch", help="run a JSON manifest of jobs and write a CSV summary")
    p.add_argument("manifest")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    return parser


def config_from_args(args: argparse.Namespace) -> JobConfig:
    data: dict = read_config_file(args.config) if getattr(args, "config", None) else {}
    for name in ("group", "gens", "beta", "ell", "levels", "artin_levels", "precision", "format", "out",
                 "checks", "chars"):
        v = getattr(args, name, None)
        if v is not None:
            data[name] = v
    return JobConfig.from_dict(data, "config")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "batch":
            return cmd_batch(args.manifest, args.format, args.out)
        cfg = config_from_args(args)
        if args.command == "chartab":
            return cmd_chartab(cfg)
        if args.command == "tower":
            return cmd_tower(cfg)
        return cmd_verify(cfg, args.which)
    except ConfigError as exc:
        _report_error(exc)
        return EXIT_CONFIG
    except UnsupportedDomain as exc:
        _report_error(exc)
        return EXIT_UNSUPPORTED
    except CheckFailed as exc:
        _report_error(exc)
        return EXIT_CHECK


def _report_error(exc: ArtifactError) -> None:
    print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
    if exc.hint:
        print(f"hint: {exc.hint}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
