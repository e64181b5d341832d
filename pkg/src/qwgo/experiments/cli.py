"""`qwgo` command line: optimize | experiment | pdf | validate | baseline.

Every flag may also come from `--config file.json`, a flat object whose keys
are flag names (dashes or underscores); flags given on the command line win.
Exit codes: 0 ok, 1 usage/config error, 2 numerical or validation failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace

import numpy as np

from qwgo.baselines import GAConfig, SAConfig
from qwgo.ctqw import DEFAULT_TAU
from qwgo.errors import DomainError, NumericalFailure
from qwgo.experiments import output, runner
from qwgo.experiments.validate import CHECKS, check_expm
from qwgo.objectives import dense_scan_minimum
from qwgo.optimizer import START_POLICIES, RunConfig, build_problem, resolve_objective, run

log = logging.getLogger("qwgo")

EXIT_OK, EXIT_USAGE, EXIT_FAILURE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


DEFAULTS = {
    "objective": "rastrigin",
    "domain": None,
    "qubits": 9,
    "tau": DEFAULT_TAU,
    "z": None,
    "seed": 0,
    "jobs": None,
    "max_iter": 44,
    "tol": 1e-4,
    "start_policy": "current-best",
    "early_stop": False,
    "svg": None,
    "budget": None,
}
COMMAND_DEFAULTS = {
    "optimize": {"algo": "bbw-qw", "r0": "2", "out": "trace.csv"},
    "experiment": {"algo": "bbw,bbw-qw", "r0": "0,1,2", "runs": 200, "out": "curve.csv"},
    "pdf": {"algo": "bbw-qw", "r0": "2", "runs": 20, "out": "pdf.csv"},
    "validate": {"check": None, "n": 256, "z": 20.0},
    "baseline": {"method": "sa", "t0": "100,1000", "pop": "5,25,50", "runs": 200, "budget": 10_000,
                 "out": "curve.csv"},
}


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat JSON document of flag values")
    p.add_argument("--objective", help="rastrigin | schwefel | ackley | path to an x,f CSV")
    p.add_argument("--domain", help="search interval lo:hi")
    p.add_argument("--qubits", type=int)
    p.add_argument("--tau", type=float, help="walk time step")
    p.add_argument("--z", type=float, help="walk spread b*tau/delta^2 (default N/2)")
    p.add_argument("--seed", type=int, help="base seed; run i uses seed + i")
    p.add_argument("--jobs", type=int, help="worker processes (default: available CPUs)")
    p.add_argument("--out", help="output CSV path, '-' for stdout")
    p.add_argument("--tol", type=float, help="success distance to the optimum")
    p.add_argument("--max-iter", type=int, dest="max_iter")
    p.add_argument("--start-policy", choices=START_POLICIES, dest="start_policy")
    p.add_argument("--svg", help="also render an SVG plot to this path")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qwgo", description=__doc__.splitlines()[0],
                     argument_default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("optimize", help="one seeded run, writes trace.csv", argument_default=argparse.SUPPRESS)
    _common(p)
    p.add_argument("--algo", choices=("bbw", "bbw-qw"))
    p.add_argument("--r0", help="rotation threshold; walks replace iterations with Rc[i] <= r0")
    p.add_argument("--early-stop", action="store_true", dest="early_stop")

    p = sub.add_parser("experiment", help="success-probability curves, writes curve.csv",
                       argument_default=argparse.SUPPRESS)
    _common(p)
    p.add_argument("--algo", help="comma list of bbw, bbw-qw")
    p.add_argument("--r0", help="comma list of rotation thresholds")
    p.add_argument("--runs", type=int)
    p.add_argument("--budget", type=int, help="last evaluation-axis point (default: longest run)")

    p = sub.add_parser("pdf", help="run-averaged pre-measurement PDFs, writes pdf.csv",
                       argument_default=argparse.SUPPRESS)
    _common(p)
    p.add_argument("--algo", choices=("bbw", "bbw-qw"))
    p.add_argument("--r0")
    p.add_argument("--runs", type=int)

    p = sub.add_parser("validate", help="theory checks; exit 0 iff all pass", argument_default=argparse.SUPPRESS)
    p.add_argument("--config")
    p.add_argument("--check", action="append", choices=tuple(CHECKS), help="repeatable; default all")
    p.add_argument("--n", type=int, help="lattice size for the expm check")
    p.add_argument("--z", type=float, help="walk spread for the expm check")
    p.add_argument("-v", "--verbose", action="store_true")

    p = sub.add_parser("baseline", help="SA / GA success curves, writes curve.csv",
                       argument_default=argparse.SUPPRESS)
    _common(p)
    p.add_argument("--method", choices=("sa", "ga"))
    p.add_argument("--t0", help="comma list of SA initial temperatures")
    p.add_argument("--pop", help="comma list of GA population sizes")
    p.add_argument("--runs", type=int)
    p.add_argument("--budget", type=int, help="evaluations per run")
    return parser


def _merge(command: str, ns: dict) -> dict:
    opts = {**DEFAULTS, **COMMAND_DEFAULTS[command]}
    path = ns.pop("config", None)
    if path:
        try:
            with open(path) as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {path}: {exc}") from None
        if not isinstance(doc, dict):
            raise UsageError("config must be a flat JSON object")
        for key, value in doc.items():
            key = key.replace("-", "_")
            if key not in opts and key != "verbose":
                raise UsageError(f"unknown config key {key!r} for {command}")
            if isinstance(value, list) and key != "domain":
                value = ",".join(map(str, value))
            opts[key] = value
    opts.update(ns)
    return opts


def _int_list(text) -> list[int]:
    try:
        return [int(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text) -> list[float]:
    try:
        return [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None


def _domain(text) -> tuple[float, float] | None:
    if text in (None, ""):
        return None
    if isinstance(text, (list, tuple)):
        lo, hi = text
    else:
        try:
            lo, hi = str(text).split(":")
        except ValueError:
            raise UsageError(f"--domain must look like lo:hi, got {text!r}") from None
    try:
        return float(lo), float(hi)
    except ValueError:
        raise UsageError(f"--domain bounds must be numbers, got {text!r}") from None


def _run_config(opts: dict, r0: int) -> RunConfig:
    cfg = RunConfig(
        objective=str(opts["objective"]),
        domain=_domain(opts["domain"]),
        q=int(opts["qubits"]),
        r0=r0,
        z=None if opts["z"] is None else float(opts["z"]),
        tau=float(opts["tau"]),
        seed=int(opts["seed"]),
        max_iter=int(opts["max_iter"]),
        success_tolerance=float(opts["tol"]),
        walk_start_policy=str(opts["start_policy"]),
        early_stop_on_success=bool(opts["early_stop"]),
    )
    build_problem(cfg)  # surface objective/domain errors before any run
    return cfg


def _algorithms(text) -> list[str]:
    algos = [a.strip() for a in str(text).split(",") if a.strip()]
    for a in algos:
        if a not in ("bbw", "bbw-qw"):
            raise UsageError(f"unknown algorithm {a!r}")
    return algos


def _jobs(opts) -> int:
    jobs = opts["jobs"]
    return runner.default_jobs() if jobs is None else max(1, int(jobs))


def _check_runs(opts) -> int:
    runs = int(opts["runs"])
    if runs < 1:
        raise UsageError("--runs must be at least 1")
    return runs


def _aborted(traces) -> bool:
    bad = [t for t in traces if t.error]
    for t in bad:
        print(f"numerical failure (seed {t.config.seed}): {t.error}", file=sys.stderr)
    return bool(bad)


def cmd_optimize(opts: dict) -> int:
    r0s = _int_list(opts["r0"])
    if len(r0s) != 1:
        raise UsageError("optimize takes a single --r0")
    cfg = _run_config(opts, r0s[0])
    trace = run(opts["algo"], cfg)
    if _aborted([trace]):
        return EXIT_FAILURE
    output.write_rows(opts["out"], output.TRACE_COLUMNS, output.trace_rows(trace))
    first = trace.first_success
    log.info("total evaluations %d, first success %s", trace.total_evals,
             "none" if first is None else f"iteration {first.iteration} ({first.cum_evals} evals)")
    return EXIT_OK


def cmd_experiment(opts: dict) -> int:
    runs = _check_runs(opts)
    algos = _algorithms(opts["algo"])
    r0s = _int_list(opts["r0"])
    jobs = _jobs(opts)
    results = {}
    for algo in algos:
        # BBW ignores r0, so its runs are shared by every r0 group.
        for r0 in (r0s[:1] if algo == "bbw" else r0s):
            traces = runner.run_many(algo, _run_config(opts, r0), runs, jobs)
            if _aborted(traces):
                return EXIT_FAILURE
            results[algo, r0] = traces
    budget = opts["budget"]
    if budget is None:
        budget = max(t.total_evals for ts in results.values() for t in ts)
    objective = str(opts["objective"])
    curves = []
    for algo in algos:
        for r0 in r0s:
            traces = results[algo, r0s[0] if algo == "bbw" else r0]
            curves.extend(runner.quantum_curves(traces, algo, objective, r0, int(budget)))
    output.write_rows(opts["out"], output.CURVE_COLUMNS, output.curve_rows(curves))
    if opts["svg"]:
        series = [(f"{c.algorithm} r0={c.r0}", [p.axis_value for p in c.points], [p.success_prob for p in c.points])
                  for c in curves if c.axis == "evaluations"]
        output.write_svg(opts["svg"], output.polyline_svg(series, f"{objective}: success vs evaluations",
                                                          "functional evaluations", "success probability"))
    return EXIT_OK


def cmd_pdf(opts: dict) -> int:
    runs = _check_runs(opts)
    r0s = _int_list(opts["r0"])
    if len(r0s) != 1:
        raise UsageError("pdf takes a single --r0")
    cfg = _run_config(opts, r0s[0])
    traces = runner.run_many(opts["algo"], cfg, runs, _jobs(opts), record_pdf=True)
    if _aborted(traces):
        return EXIT_FAILURE
    pdfs = runner.average_pdfs(traces)
    coords = build_problem(cfg).domain.coords()
    output.write_rows(opts["out"], output.PDF_COLUMNS, output.pdf_rows(pdfs, coords))
    if opts["svg"]:
        series = [(f"iteration {a.iteration}", coords, a.mean_probability) for a in pdfs]
        output.write_svg(opts["svg"], output.polyline_svg(series, f"{opts['algo']} average PDF ({runs} runs)",
                                                          "x", "probability", opacity=0.5))
    return EXIT_OK


def cmd_validate(opts: dict) -> int:
    names = opts["check"] or list(CHECKS)
    if isinstance(names, str):
        names = [names]
    failed = False
    for name in names:
        if name not in CHECKS:
            raise UsageError(f"unknown check {name!r}")
        if name == "expm":
            result = check_expm(int(opts["n"]), float(opts["z"]))
        else:
            result = CHECKS[name]()
        print(result.line())
        failed |= not result.passed
    return EXIT_FAILURE if failed else EXIT_OK


def cmd_baseline(opts: dict) -> int:
    runs = _check_runs(opts)
    method = opts["method"]
    if method not in ("sa", "ga"):
        raise UsageError(f"unknown method {method!r}")
    budget = int(opts["budget"])
    spec, grid = resolve_objective(str(opts["objective"]), _domain(opts["domain"]), int(opts["qubits"]))
    if _domain(opts["domain"]) is not None and not spec.tabulated:
        x_opt, f_opt = dense_scan_minimum(spec.f, grid.x_lo, grid.x_hi)
        spec = replace(spec, default_domain=(grid.x_lo, grid.x_hi), known_optimum_x=x_opt, known_optimum_f=f_opt)
    values = spec.f(grid.coords())
    if np.ptp(values) == 0:
        raise UsageError("objective is constant; success needs a unique known optimum")
    tol = float(opts["tol"])
    jobs = _jobs(opts)
    seed = int(opts["seed"])
    if method == "sa":
        groups = [(f"sa-t0-{t0:g}", SAConfig(t0=t0, max_evals=budget)) for t0 in _float_list(opts["t0"])]
    else:
        groups = [(f"ga-pop-{p}", GAConfig(population=p, max_evals=budget)) for p in _int_list(opts["pop"])]
    curves = []
    for label, config in groups:
        traces = runner.run_baseline_many(method, spec, config, runs, seed, jobs)
        firsts = [t.first_success_evals(spec.known_optimum_x, tol) for t in traces]
        curves.append(runner.success_curve(firsts, range(1, budget + 1), algorithm=label,
                                           objective=spec.name, r0=None, axis="evaluations"))
    output.write_rows(opts["out"], output.CURVE_COLUMNS, output.curve_rows(curves))
    if opts["svg"]:
        series = [(c.algorithm, [p.axis_value for p in c.points], [p.success_prob for p in c.points]) for c in curves]
        output.write_svg(opts["svg"], output.polyline_svg(series, f"{spec.name}: baseline success",
                                                          "functional evaluations", "success probability"))
    return EXIT_OK


COMMANDS = {
    "optimize": cmd_optimize,
    "experiment": cmd_experiment,
    "pdf": cmd_pdf,
    "validate": cmd_validate,
    "baseline": cmd_baseline,
}


def main(argv=None) -> int:
    parser = build_parser()
    ns = vars(parser.parse_args(argv))
    command = ns.pop("command")
    verbose = ns.pop("verbose", False)
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        opts = _merge(command, ns)
        return COMMANDS[command](opts)
    except (UsageError, DomainError) as exc:
        parser.print_usage(sys.stderr)
        print(f"qwgo {command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TypeError, ValueError) as exc:
        print(f"qwgo {command}: bad configuration value: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalFailure as exc:
        print(f"qwgo {command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
