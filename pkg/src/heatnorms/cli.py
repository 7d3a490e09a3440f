"""Command-line front end.

Subcommands: constants, kernel, norm, verify, sweep, report.  Exit status is
0 when every executed check passes, 1 on any check failure, 2 on usage or
configuration errors (including inadmissible exponent tuples, which are
reported with the violated constraint's name).

A run is reproducible from its config alone: flat key-value sections in an
INI file (section [run], plus one [family.NAME] section per test-function
family member), with command-line flags overriding config keys.  Reports go
to line-delimited JSON with a fixed field order; --no-timestamp suppresses
the timestamp and runtime fields so reruns are byte-identical.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import constants as C
from .errors import (CapabilityError, DivergenceError, DomainError,
                     InadmissibleError, UsageError)

__all__ = ["main", "RunConfig"]

_ERRORS = (DomainError, DivergenceError, InadmissibleError, CapabilityError,
           UsageError)


@dataclass
class RunConfig:
    """Everything a run needs; serializable to the INI config format."""

    command: str = ""
    seed: int = 42
    jobs: int = 1
    quick: bool = False
    timestamp: bool = True
    out_dir: str = "."
    families: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    @classmethod
    def from_file(cls, path: str) -> "RunConfig":
        parser = configparser.ConfigParser()
        if not parser.read(path):
            raise UsageError(f"cannot read config file {path}")
        cfg = cls()
        run = parser["run"] if parser.has_section("run") else {}
        cfg.seed = int(run.get("seed", cfg.seed))
        cfg.jobs = int(run.get("jobs", cfg.jobs))
        cfg.quick = str(run.get("quick", cfg.quick)).lower() in ("1", "true", "yes")
        cfg.timestamp = str(run.get("timestamp", cfg.timestamp)).lower() \
            in ("1", "true", "yes")
        cfg.out_dir = run.get("out_dir", cfg.out_dir)
        for section in parser.sections():
            if section.startswith("family."):
                from .serialize import from_text
                cfg.families[section.split(".", 1)[1]] = from_text(
                    parser[section]["function"])
        return cfg

    def to_ini(self) -> str:
        lines = ["[run]", f"seed = {self.seed}", f"jobs = {self.jobs}",
                 f"quick = {str(self.quick).lower()}",
                 f"timestamp = {str(self.timestamp).lower()}",
                 f"out_dir = {self.out_dir}"]
        from .serialize import to_text
        for name, fn in self.families.items():
            lines += [f"[family.{name}]", f"function = {to_text(fn)}"]
        return "\n".join(lines) + "\n"


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="INI config file; flags override its keys")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--jobs", type=int, default=None,
                   help="size of the check job pool")
    p.add_argument("--quick", action="store_true", default=None,
                   help="smaller grids, suitable for smoke runs")
    p.add_argument("--no-timestamp", action="store_true",
                   help="suppress timestamp/runtime fields for byte-stable output")
    p.add_argument("--out-dir", default=None,
                   help="output directory (default: $HEATNORMS_OUT or cwd)")


def _config_from_args(args) -> RunConfig:
    cfg = RunConfig.from_file(args.config) if args.config else RunConfig()
    if args.seed is not None:
        cfg.seed = args.seed
    if args.jobs is not None:
        cfg.jobs = args.jobs
    if getattr(args, "quick", None):
        cfg.quick = True
    if args.no_timestamp:
        cfg.timestamp = False
    env_out = os.environ.get("HEATNORMS_OUT")
    cfg.out_dir = args.out_dir or cfg.out_dir if args.out_dir else \
        (cfg.out_dir if cfg.out_dir != "." else (env_out or "."))
    cfg.command = args.command
    return cfg


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def _cmd_constants(args, cfg: RunConfig) -> int:
    kind = args.kind
    if kind == "gamma":
        print(f"{C.gamma_fn(args.x):.10g}")
        return 0
    if kind == "beta":
        print(f"{C.beta_fn(args.a, args.b):.10g}")
        return 0
    if kind == "Kw":
        cv = C.heat_lp_constant(args.d, args.Q)
    elif kind == "D":
        cv = C.heat_time_constant(args.d, args.r)
    elif kind == "V":
        cv = C.riesz_factor(args.d, args.p, args.r)
    elif kind == "A":
        print(f"{C.beckner_A(args.p):.10g}")
        return 0
    elif kind == "KB":
        cv = C.beckner_constant(args.d, args.p, args.q)
    else:
        raise UsageError(f"unknown constant kind {kind!r}")
    print(f"{cv.value:.7f}")
    if cv.note:
        print(f"note: {cv.note}")
    if cv.extras:
        extras = {k: v for k, v in cv.extras.items() if isinstance(v, float)}
        if extras:
            print("extras:", json.dumps(extras, sort_keys=True))
    return 0


def _cmd_kernel(args, cfg: RunConfig) -> int:
    import numpy as np
    from .kernels import KernelSpec, export_kernel_csv, tail_fit
    if args.tail_fit:
        fit = tail_fit(args.d, args.alpha, (args.x_min, args.x_max))
        print(f"slope: {fit.slope:.6f}  constant: {fit.constant:.6g}  "
              f"r2: {fit.goodness:.6f}")
        if fit.note:
            print(f"note: {fit.note}")
        return 0
    spec = KernelSpec(kind=args.kind, d=args.d, alpha=args.alpha,
                      theta=args.theta, tau=args.tau,
                      integer_alpha_ok=args.integer_alpha_ok)
    xs = np.linspace(args.x_min, args.x_max, args.x_count)
    ts = [float(t) for t in args.t]
    out = Path(cfg.out_dir) / (args.out or "kernel.csv")
    export_kernel_csv(out, spec, ts, xs)
    print(f"wrote {out}")
    return 0


def _cmd_norm(args, cfg: RunConfig) -> int:
    from .grids import SpaceGrid
    from .norms import lp_norm
    from .serialize import from_text
    fn = from_text(args.function)
    grid = SpaceGrid(fn.d, args.L, args.n)
    res = lp_norm(fn, math.inf if args.p == "inf" else float(args.p),
                  grid, with_report=True)
    print(f"{res.value:.10g}")
    print(f"truncation-estimate: {res.truncation_estimate:.3g}  "
          f"excluded-measure: {res.excluded_measure:.3g}")
    for w in res.warnings:
        print(f"warning: {w}")
    return 0


def _cmd_verify(args, cfg: RunConfig) -> int:
    from . import verify as V
    names = args.suite
    if args.d is not None or args.p is not None:
        # single parameterized check, e.g. `verify young --p 2 --q 1.3333`
        if names != ["young"]:
            raise UsageError("exponent flags are supported for `verify young`")
        if args.p is not None and args.p <= 1:
            raise InadmissibleError(f"requires p > 1, got p = {args.p}")
        if args.q is not None and args.q <= 1:
            raise InadmissibleError(f"requires q > 1, got q = {args.q}")
        profile = V.GridProfile.quick() if cfg.quick else V.GridProfile()
        reports = V.verify_young(args.d or 1, args.p or 2.0, args.q or 4.0 / 3.0,
                                 trials=args.trials, seed=cfg.seed,
                                 profile=profile)
    else:
        reports = V.run_suite(names, seed=cfg.seed, quick=cfg.quick,
                              jobs=cfg.jobs)
    for r in reports:
        print(r.line())
    out = Path(cfg.out_dir) / (args.out or "report.jsonl")
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(V.reports_to_jsonl(reports, with_timestamp=cfg.timestamp))
    print(f"wrote {out}")
    bad = [r for r in reports if r.verdict == "fail"]
    return 1 if bad else 0


def _cmd_sweep(args, cfg: RunConfig) -> int:
    import numpy as np
    out = Path(cfg.out_dir) / (args.out or f"sweep_{args.kind}.csv")
    rows = []
    if args.kind == "kernel-time-constant":
        for r in np.linspace(args.lo, args.hi, args.count):
            if args.d * r <= 2:
                continue
            cv = C.heat_time_constant(args.d, float(r))
            rows.append({"d": args.d, "r": float(r), "value": cv.value,
                         "printed_simplification":
                             cv.extras["printed_simplification"]})
    elif args.kind == "kernel-lp-constant":
        for Q in np.linspace(max(args.lo, 1.0), args.hi, args.count):
            cv = C.heat_lp_constant(args.d, float(Q))
            rows.append({"d": args.d, "Q": float(Q), "value": cv.value})
    elif args.kind == "admissibility":
        from .exponents import admissibility
        for p in np.linspace(args.lo, args.hi, args.count):
            tup = admissibility("G0", d=args.d, p=float(p), r=args.r)
            rows.append({"d": args.d, "p": float(p), "r": args.r,
                         "q": tup.exponents.get("q", math.inf),
                         "admissible": tup.admissible,
                         "failures": "; ".join(tup.failures)})
    elif args.kind == "tail-slope":
        from .kernels import tail_fit
        for alpha in np.linspace(args.lo, args.hi, args.count):
            fit = tail_fit(args.d, float(alpha), (10.0, 200.0))
            rows.append({"d": args.d, "alpha": float(alpha),
                         "slope": fit.slope, "predicted": -args.d - 2 * alpha,
                         "constant": fit.constant, "r2": fit.goodness})
    else:
        raise UsageError(f"unknown sweep kind {args.kind!r}")
    if not rows:
        raise UsageError("sweep produced no rows; check the parameter range")
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)
    print(f"wrote {out} ({len(rows)} rows)")
    return 0


def _cmd_report(args, cfg: RunConfig) -> int:
    path = Path(args.infile)
    if not path.exists():
        raise UsageError(f"no such report file: {path}")
    records = [json.loads(line) for line in path.read_text().splitlines()
               if line.strip()]
    counts = {"pass": 0, "fail": 0, "inadmissible-skipped": 0}
    for rec in records:
        counts[rec["verdict"]] = counts.get(rec["verdict"], 0) + 1
        print(f"{rec['verdict'].upper():6s} {rec['id']:24s} "
              f"measured={rec['measured']:.6g} reference={rec['reference']:.6g}")
    print(f"total: {len(records)}  pass: {counts['pass']}  "
          f"fail: {counts['fail']}  skipped: {counts['inadmissible-skipped']}")
    if args.csv:
        out = Path(args.csv)
        with open(out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["id", "verdict", "measured", "reference",
                             "tolerance", "kind", "seed"])
            for rec in records:
                writer.writerow([rec["id"], rec["verdict"], rec["measured"],
                                 rec["reference"], rec["tolerance"],
                                 rec["kind"], rec["seed"]])
        print(f"wrote {out}")
    return 1 if counts["fail"] else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="heatnorms",
        description="mixed-norm estimate laboratory for heat-type equations")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constants", help="print a closed-form constant")
    p.add_argument("--kind", required=True,
                   choices=["gamma", "beta", "Kw", "D", "V", "A", "KB"])
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--x", type=float, default=1.0)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--q", type=float, default=2.0)
    p.add_argument("--r", type=float, default=4.0)
    p.add_argument("--Q", type=float, default=2.0)
    _add_common(p)

    p = sub.add_parser("kernel", help="tabulate a kernel to CSV")
    p.add_argument("--kind", default="heat", choices=["heat", "transstable"])
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--tau", type=float, default=0.0)
    p.add_argument("--t", nargs="+", default=[1.0], type=float)
    p.add_argument("--x-min", type=float, default=0.0)
    p.add_argument("--x-max", type=float, default=10.0)
    p.add_argument("--x-count", type=int, default=101)
    p.add_argument("--tail-fit", action="store_true",
                   help="fit the large-|x| power law instead of tabulating")
    p.add_argument("--integer-alpha-ok", action="store_true")
    p.add_argument("--out")
    _add_common(p)

    p = sub.add_parser("norm", help="L^p norm of a test function")
    p.add_argument("--function", required=True,
                   help="test function in the text schema, e.g. 'gaussian(sigma=1)'")
    p.add_argument("--p", default="2")
    p.add_argument("--L", type=float, default=32.0)
    p.add_argument("--n", type=int, default=2048)
    _add_common(p)

    p = sub.add_parser("verify", help="run verification checks")
    p.add_argument("suite", nargs="+",
                   help="suite (smoke|standard|extended|all) or check names")
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--q", type=float, default=None)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--out", help="report path (default report.jsonl)")
    _add_common(p)

    p = sub.add_parser("sweep", help="parameter sweeps to CSV")
    p.add_argument("--kind", required=True,
                   choices=["kernel-time-constant", "kernel-lp-constant",
                            "admissibility", "tail-slope"])
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--r", type=float, default=8.0)
    p.add_argument("--lo", type=float, default=1.1)
    p.add_argument("--hi", type=float, default=4.0)
    p.add_argument("--count", type=int, default=25)
    p.add_argument("--out")
    _add_common(p)

    p = sub.add_parser("report", help="summarize a report file")
    p.add_argument("infile")
    p.add_argument("--csv", help="also convert to CSV")
    _add_common(p)
    return ap


_DISPATCH = {
    "constants": _cmd_constants,
    "kernel": _cmd_kernel,
    "norm": _cmd_norm,
    "verify": _cmd_verify,
    "sweep": _cmd_sweep,
    "report": _cmd_report,
}


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        cfg = _config_from_args(args)
        return _DISPATCH[args.command](args, cfg)
    except _ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
