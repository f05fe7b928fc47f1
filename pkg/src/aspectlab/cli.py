"""Command-line front end.

Every subcommand writes a metadata header (tool version, subcommand, seed,
parameters) followed by its tables, as CSV (default) or JSON.  Exit codes:
0 success, 2 invalid input, 3 infeasible joint (``joint`` only).  Output
depends only on the inputs and the seed, never on ``--workers``.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Sequence


from . import __version__
from .distributions import PAIRS, ExperimentQuartet, Settings
from .ensembles import noisy_pr_quartet, pr_box_quartet, random_quad_quartet
from .hidden import MonteCarlo, chsh_sigma, hv_quartet
from .inequalities import bchs_all_variants, quartet_bell_lhs
from .io import (
    InputError,
    csv_lines,
    experiment_config_from_json,
    experiment_config_to_json,
    fmt,
    hv_model_from_json,
    load_json,
    macro_model_from_json,
    metadata,
    metadata_header,
    quad_csv_rows,
    quartet_csv_rows,
    quartet_from_json,
    quartet_to_json,
    relaxation_params_from_json,
    settings_from_json,
    settings_to_json,
    state_from_json,
)
from .joint import FeasibilityResult, joint_exists
from .macro import attempt_quad_construction, contextual_values_demo, macro_quartet
from .povm import CHSH_ANGLES, ExperimentConfig, quad_probabilities, standard_aspect_configs, standard_aspect_quartet
from .quantum import bell_state
from .relax import RelaxationParams, crossing_window, relaxation_sweep
from .sampling import chunk_generator

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INFEASIBLE = 0, 1, 2, 3

MAX_SEED = 2**64 - 1


class Report:
    """Sections of one run, rendered as CSV or JSON."""

    def __init__(self, subcommand: str, seed: int, parameters: dict) -> None:
        self.subcommand = subcommand
        self.seed = seed
        self.parameters = parameters
        self.tables: list[tuple[str, list[list[str]]]] = []
        self.summary: list[tuple[str, Any]] = []
        self.data: dict[str, Any] = {}
        self.verdict: str | None = None

    def table(self, name: str, rows: list[list[str]], data: Any) -> None:
        self.tables.append((name, rows))
        self.data[name] = data

    def add(self, key: str, value: Any) -> None:
        self.summary.append((key, value))

    def render(self, form: str) -> str:
        if form == "json":
            doc = {
                "metadata": metadata(self.subcommand, self.seed, self.parameters),
                **self.data,
                "summary": {k: v for k, v in self.summary},
            }
            return json.dumps(doc, indent=2, sort_keys=True) + "\n"
        lines = metadata_header(self.subcommand, self.seed, self.parameters)
        for name, rows in self.tables:
            lines.append(f"# {name}")
            lines.extend(csv_lines(rows))
        if self.summary:
            lines.append("# summary")
            lines.extend(csv_lines([("quantity", "value"), *((k, _cell(v)) for k, v in self.summary)]))
        if self.verdict:
            lines.append(f"# {self.verdict}")
        return "\n".join(lines) + "\n"


def _cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return fmt(v)
    return str(v)


def _floats(text: str, what: str) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise InputError(f"{what}: {exc}") from exc
    if not vals:
        raise InputError(f"{what}: empty list")
    if any(math.isnan(v) for v in vals):
        raise InputError(f"{what}: NaN not allowed")
    return vals


def _seed(args: argparse.Namespace, fallback: int = 0) -> int:
    seed = fallback if args.seed is None else args.seed
    if not 0 <= seed <= MAX_SEED:
        raise InputError("seed must be a 64-bit unsigned integer")
    return seed


def _pmap(fn: Callable, items: Sequence, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _quartet_data(q: ExperimentQuartet) -> dict:
    return quartet_to_json(q)["pairs"]


def _feasibility(report: Report, res: FeasibilityResult) -> None:
    report.add("joint_exists", res.status)
    report.add("infeasibility", res.infeasibility)
    if res.certificate is not None:
        report.add("certificate_variant", res.certificate.variant_index)
        report.add("certificate_value", res.certificate.value)
        report.add("certificate_label", res.certificate.label)
    report.verdict = f"joint exists: {res.status}"


def _bchs(report: Report, q: ExperimentQuartet) -> None:
    b = bchs_all_variants(q)
    report.add("bchs_worst_low", b.worst_low)
    report.add("bchs_worst_high", b.worst_high)
    report.add("bchs_satisfied", b.satisfied)


# --- subcommands ---------------------------------------------------------


def cmd_aspect(args: argparse.Namespace) -> tuple[Report, int]:
    if args.config:
        cfg = experiment_config_from_json(load_json(args.config))
    else:
        try:
            cfg = ExperimentConfig.from_angles(args.gamma1, args.gamma2, CHSH_ANGLES, bell_state())
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    quad = quad_probabilities(cfg)
    marg = quad.quartet()
    angles = Settings(cfg.arm1.theta, cfg.arm1.theta_prime, cfg.arm2.theta, cfg.arm2.theta_prime)
    standard = standard_aspect_quartet(angles, cfg.state)

    report = Report("aspect", _seed(args), experiment_config_to_json(cfg))
    report.table("quad", quad_csv_rows(quad), quad.atoms.ravel().tolist())
    report.table("pair_marginals", quartet_csv_rows(marg), _quartet_data(marg))
    report.table("standard_quartet", quartet_csv_rows(standard), _quartet_data(standard))
    report.add("bell_lhs", quartet_bell_lhs(standard))
    report.add("quad_bell_lhs", quartet_bell_lhs(marg))
    _bchs(report, marg)
    _feasibility(report, joint_exists(marg))
    return report, EXIT_OK


def _sweep_point(cfg: ExperimentConfig) -> list:
    marg = quad_probabilities(cfg).quartet()
    b = bchs_all_variants(marg)
    res = joint_exists(marg)
    return [cfg.arm1.gamma, cfg.arm2.gamma, quartet_bell_lhs(marg), b.worst_low, b.worst_high, res.status]


def cmd_gamma_sweep(args: argparse.Namespace) -> tuple[Report, int]:
    g1 = _floats(args.gammas, "--gammas")
    g2 = _floats(args.gammas2, "--gammas2") if args.gammas2 else g1
    if any(not 0.0 <= g <= 1.0 for g in g1 + g2):
        raise InputError("gamma grid must lie in [0, 1]")
    if args.config:
        base = experiment_config_from_json(load_json(args.config))
        angles = Settings(base.arm1.theta, base.arm1.theta_prime, base.arm2.theta, base.arm2.theta_prime)
        state = base.state
    else:
        angles, state = CHSH_ANGLES, bell_state()
    cfgs = [ExperimentConfig.from_angles(a, b, angles, state) for a in g1 for b in g2]
    rows = _pmap(_sweep_point, cfgs, args.workers)

    params = {"gammas1": g1, "gammas2": g2, "settings": settings_to_json(angles)}
    report = Report("gamma-sweep", _seed(args), params)
    header = ["gamma1", "gamma2", "quad_bell_lhs", "bchs_worst_low", "bchs_worst_high", "joint_exists"]
    table = [header] + [[fmt(r[0]), fmt(r[1]), fmt(r[2]), fmt(r[3]), fmt(r[4]), r[5]] for r in rows]
    report.table("sweep", table, [dict(zip(header, r)) for r in rows])
    report.add("points", len(rows))
    report.add("infeasible_points", sum(r[5] != "feasible" for r in rows))
    return report, EXIT_OK


def cmd_joint(args: argparse.Namespace) -> tuple[Report, int]:
    if args.quartet:
        q = quartet_from_json(load_json(args.quartet))
        source = {"quartet": args.quartet}
    elif args.preset == "pr-box":
        q, source = pr_box_quartet(), {"preset": "pr-box"}
    else:
        settings = settings_from_json(load_json(args.settings) if args.settings else None)
        q = standard_aspect_quartet(settings, bell_state())
        source = {"preset": "quantum", "settings": settings_to_json(settings)}
    report = Report("joint", _seed(args), source)
    report.table("quartet", quartet_csv_rows(q), _quartet_data(q))
    report.add("bell_lhs", quartet_bell_lhs(q))
    res = joint_exists(q)
    _bchs(report, q.normalized())
    if res.witness is not None:
        report.table("witness", quad_csv_rows(res.witness), res.witness.atoms.ravel().tolist())
    _feasibility(report, res)
    return report, EXIT_OK if res.feasible else EXIT_INFEASIBLE


def cmd_hv(args: argparse.Namespace) -> tuple[Report, int]:
    doc = load_json(args.model) if args.model else None
    model = hv_model_from_json(doc)
    settings = settings_from_json(load_json(args.settings) if args.settings else None)
    params: dict = {"model": doc if doc is not None else {"kind": "finite_grid", "response": {"family": "sawtooth"}},
                    "settings": settings_to_json(settings)}
    seed = _seed(args)
    if args.samples < 0:
        raise InputError("--samples must be nonnegative")
    if args.samples:
        method: Any = MonteCarlo(args.samples, seed, workers=args.workers)
        params["monte_carlo_samples_per_pair"] = args.samples
    else:
        method = "exact"
    q = hv_quartet(model, settings, method)
    chsh = quartet_bell_lhs(q)
    report = Report("hv-run", seed, params)
    report.table("quartet", quartet_csv_rows(q), _quartet_data(q))
    report.add("method", "monte_carlo" if args.samples else "exact")
    report.add("chsh", chsh)
    sigma = chsh_sigma(q, args.samples) if args.samples else 0.0
    report.add("sigma", sigma)
    # exact mode is checked to rounding, sampling to three standard errors
    report.add("bell_bound_respected", chsh <= 2.0 + (3 * sigma if args.samples else 1e-9))
    return report, EXIT_OK


def cmd_macro(args: argparse.Namespace) -> tuple[Report, int]:
    doc = load_json(args.model) if args.model else {}
    model = macro_model_from_json(doc)
    seed = _seed(args)
    q = macro_quartet(model)
    report = Report("macro-run", seed, {"model": doc, "rounds": args.rounds})
    report.table("quartet", quartet_csv_rows(q), _quartet_data(q))
    report.add("model", model.description)
    report.add("bell_lhs", quartet_bell_lhs(q))
    _bchs(report, q)
    res = attempt_quad_construction(model)
    report.add("construction_method", res.method)
    _feasibility(report, res)
    if args.rounds:
        state = state_from_json(doc.get("state") if isinstance(doc, dict) else None)
        cfgs = standard_aspect_configs(model.settings, state)
        demo = contextual_values_demo({p: quad_probabilities(cfgs[p]) for p in PAIRS}, args.rounds, seed)
        report.add("rounds", demo.rounds)
        report.add("consistent_fraction", demo.consistent_fraction)
        report.add("remote_dependence_fraction", demo.remote_dependence_fraction)
        report.add("local_dependence_fraction", demo.local_dependence_fraction)
        report.add("measured_chsh", demo.measured_chsh)
        report.add("consistent_chsh", demo.consistent_chsh)
    return report, EXIT_OK


def cmd_relax(args: argparse.Namespace) -> tuple[Report, int]:
    base = relaxation_params_from_json(load_json(args.params) if args.params else None)
    fields = base.to_dict()
    fields["tau"] = base.tau
    for key in ("tau", "diffusion", "step"):
        if getattr(args, key) is not None:
            fields[key] = getattr(args, key)
    if args.samples is not None:
        fields["n_samples"] = args.samples
    fields["seed"] = _seed(args, base.seed)
    try:
        params = RelaxationParams(**fields)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    windows = _floats(args.windows, "--windows") if args.windows else None
    try:
        curve = relaxation_sweep(params, windows, workers=args.workers)
    except ValueError as exc:
        raise InputError(str(exc)) from exc

    meta = params.to_dict()
    meta["windows"] = [p.window for p in curve.points]
    report = Report("relax-sweep", params.seed, meta)
    header = ["window", "window_over_tau", "chsh", "sigma"]
    rows = [[fmt(p.window), fmt(p.ratio), fmt(p.chsh), fmt(p.sigma)] for p in curve.points]
    report.table("sweep", [header] + rows, [dict(zip(header, (p.window, p.ratio, p.chsh, p.sigma))) for p in curve.points])
    report.add("n_per_context", curve.n_per_context)
    report.add("equilibrium_chsh", curve.equilibrium_chsh)
    report.add("crossing_window", crossing_window(curve))
    return report, EXIT_OK


def _fine_instance(job: tuple[int, str, int]) -> tuple[bool, bool]:
    seed, family, i = job
    rng = chunk_generator(seed, (0 if family == "random_quad" else 1,), i)
    q = random_quad_quartet(rng) if family == "random_quad" else noisy_pr_quartet(rng)
    lp = joint_exists(q).feasible
    return lp, bchs_all_variants(q.normalized()).satisfied


def cmd_fine(args: argparse.Namespace) -> tuple[Report, int]:
    if args.n_quads < 0 or args.n_pr < 0:
        raise InputError("instance counts must be nonnegative")
    seed = _seed(args)
    report = Report("fine-check", seed, {"n_quads": args.n_quads, "n_pr": args.n_pr})
    header = ["family", "instances", "lp_feasible", "bchs_satisfied", "agreements"]
    table, data, disagreements = [header], [], 0
    for family, n in (("random_quad", args.n_quads), ("noisy_pr", args.n_pr)):
        res = _pmap(_fine_instance, [(seed, family, i) for i in range(n)], args.workers)
        feas = sum(a for a, _ in res)
        sat = sum(b for _, b in res)
        agree = sum(a == b for a, b in res)
        disagreements += n - agree
        row = [family, str(n), str(feas), str(sat), str(agree)]
        table.append(row)
        data.append(dict(zip(header, [family, n, feas, sat, agree])))
    report.table("fine_check", table, data)
    report.add("disagreements", disagreements)
    report.verdict = "fine equivalence: " + ("holds" if disagreements == 0 else "FAILS")
    return report, EXIT_OK if disagreements == 0 else EXIT_FAIL


# --- parser --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="base seed for stochastic runs (default 0)")
    common.add_argument("--workers", type=int, default=1, help="worker threads; output does not depend on it")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("-o", "--output", help="write to this file instead of stdout")

    parser = argparse.ArgumentParser(prog="aspectlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"aspectlab {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("aspect", parents=[common], help="generalized Aspect experiment at one (gamma1, gamma2)")
    p.add_argument("--config", help="experiment config JSON (arms, angles, state)")
    p.add_argument("--gamma1", type=float, default=1.0, help="arm-1 transmissivity without --config")
    p.add_argument("--gamma2", type=float, default=1.0, help="arm-2 transmissivity without --config")
    p.set_defaults(func=cmd_aspect)

    p = sub.add_parser("gamma-sweep", parents=[common], help="BCHS and joint feasibility over a gamma grid")
    p.add_argument("--gammas", default="0,0.5,1", help="comma-separated gamma grid (both arms)")
    p.add_argument("--gammas2", help="separate grid for arm 2")
    p.add_argument("--config", help="experiment config JSON supplying angles and state")
    p.set_defaults(func=cmd_gamma_sweep)

    p = sub.add_parser("joint", parents=[common], help="decide whether a quartet has a joint distribution")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--quartet", help="quartet JSON")
    src.add_argument("--preset", choices=("quantum", "pr-box"), default="quantum")
    p.add_argument("--settings", help="settings JSON for the quantum preset")
    p.set_defaults(func=cmd_joint)

    p = sub.add_parser("hv-run", parents=[common], help="quartet and CHSH of a hidden-variables model")
    p.add_argument("--model", help="hidden-variables model JSON (default: saw-tooth on a 3600-point grid)")
    p.add_argument("--settings", help="settings JSON")
    p.add_argument("--samples", type=int, default=0, help="Monte Carlo samples per pair (0: exact)")
    p.set_defaults(func=cmd_hv)

    p = sub.add_parser("macro-run", parents=[common], help="macrostate model quartet and joint construction")
    p.add_argument("--model", help="macrostate model JSON (default: quantum target for phi_plus)")
    p.add_argument("--rounds", type=int, default=10_000, help="contextual value-assignment rounds (0: skip)")
    p.set_defaults(func=cmd_macro)

    p = sub.add_parser("relax-sweep", parents=[common], help="CHSH against measurement window")
    p.add_argument("--params", help="relaxation parameters JSON")
    p.add_argument("--tau", type=float, help="relaxation time ('inf' freezes the microstate)")
    p.add_argument("--diffusion", type=float, help="diffusion rate in units of 1/tau")
    p.add_argument("--step", type=int, help="diffusion step in grid points")
    p.add_argument("--samples", type=int, help="samples per window, split over the four contexts")
    p.add_argument("--windows", help="comma-separated windows (default: multiples of tau from 0 to 100)")
    p.set_defaults(func=cmd_relax)

    p = sub.add_parser("fine-check", parents=[common], help="LP feasibility against BCHS on random quartets")
    p.add_argument("--n-quads", type=int, default=1000, help="quartets from random joints")
    p.add_argument("--n-pr", type=int, default=1000, help="noisy PR-box quartets")
    p.set_defaults(func=cmd_fine)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.workers < 1:
            raise InputError("--workers must be at least 1")
        report, code = args.func(args)
    except (InputError, ValueError) as exc:
        print(f"aspectlab {args.subcommand}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = report.render(args.format)
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"aspectlab {args.subcommand}: error: {exc}", file=sys.stderr)
            return EXIT_INPUT
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
