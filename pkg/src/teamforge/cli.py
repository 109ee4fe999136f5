"""``team-forge`` command line."""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from pathlib import Path

from . import generators as gen
from .audit import untruthful_upper_bound
from .baselines import rsd
from .game_exact import DEFAULT_NODE_BUDGET, ProposerOrder, SearchBudgetExceeded, default_order, solve
from .harness import ExperimentConfig, MechanismSpec, compare, rows_to_csv, run_experiment, with_overrides
from .heuristics import hrpm, rpm_alpha
from .ims import run_ims
from .prefs import ProfileError, load_profile, save_profile, validate


def _emit(doc) -> None:
    json.dump(doc, sys.stdout, indent=2, sort_keys=False)
    sys.stdout.write("\n")


def _load(args):
    profile = load_profile(args.profile)
    problems = validate(profile)
    if problems:
        raise ProfileError("invalid profile: " + ", ".join(problems))
    return profile


def _order(args, profile) -> ProposerOrder:
    if getattr(args, "order", None):
        order = ProposerOrder.from_text(Path(args.order).read_text())
        if not order.covers(profile.n):
            raise ValueError("order file must give every player at least one slot")
        return order
    return default_order(profile, random.Random(args.seed))


def _outcome_doc(out, order) -> dict:
    doc = out.to_dict()
    doc["order"] = list(order.slots)
    return doc


def cmd_generate(args) -> int:
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    if args.model == "newfrat":
        profiles = gen.load_newfrat(args.newfrat)
    else:
        profiles = []
        for t in range(args.trials):
            rng = gen.trial_rng(args.seed, t)
            if args.model == "scale-free":
                net = gen.gen_scale_free(gen.GeneratorConfig(n=args.n, m=args.m, seed=args.seed), rng)
            else:
                net = gen.load_karate()
            profiles.append(gen.profile_from_network(net, rng))
    for t, p in enumerate(profiles):
        save_profile(p, outdir / f"profile_{t:04d}.json")
    print(f"wrote {len(profiles)} profiles to {outdir}")
    return 0


def cmd_ims(args) -> int:
    profile = _load(args)
    res = run_ims(profile, omega=args.omega)
    _emit({"matched": [sorted(t) for t in res.matched], "residual": sorted(res.residual),
           "rounds": res.rounds})
    return 0


def cmd_rpm(args) -> int:
    profile = _load(args)
    order = _order(args, profile)
    out = solve(profile, order, omega=args.omega, use_ims=not args.no_ims, node_budget=args.node_budget)
    _emit(_outcome_doc(out, order))
    return 0


def cmd_rpm_alpha(args) -> int:
    profile = _load(args)
    order = _order(args, profile)
    out = rpm_alpha(profile, order, alpha=args.alpha, use_ims=not args.no_ims,
                    node_budget=args.node_budget, omega=args.omega)
    _emit(_outcome_doc(out, order))
    return 0


def cmd_hrpm(args) -> int:
    profile = _load(args)
    order = _order(args, profile)
    _emit(_outcome_doc(hrpm(profile, order, omega=args.omega, beta=args.beta), order))
    return 0


def cmd_rsd(args) -> int:
    profile = _load(args)
    order = _order(args, profile)
    _emit(_outcome_doc(rsd(profile, order, omega=args.omega), order))
    return 0


def cmd_audit(args) -> int:
    profile = _load(args)
    order = _order(args, profile)
    if args.mech == "rpm":
        out = solve(profile, order, node_budget=args.node_budget)
    elif args.mech == "rpm-alpha":
        out = rpm_alpha(profile, order, alpha=args.alpha, node_budget=args.node_budget)
    else:
        out = hrpm(profile, order, omega=2, beta=args.beta)
    rep = untruthful_upper_bound(profile, order, out.teammate)
    _emit({"partition": [sorted(t) for t in out.partition], "sum": rep.sum, "dedup": rep.dedup,
           "flagged": [{"player": p, "reason": why} for p, why in rep.flagged]})
    return 0


def cmd_run(args) -> int:
    config = ExperimentConfig.from_json(Path(args.config).read_text()) if args.config else ExperimentConfig()
    defaults = {k: v for k, v in (("alpha", args.alpha), ("beta", args.beta), ("omega", args.omega))
                if v is not None}
    mechs = None
    if args.mech:
        mechs = tuple(MechanismSpec.parse(m, **defaults) for m in args.mech)
    elif defaults:
        mechs = tuple(MechanismSpec.parse(m.tag if m.label else m.name, **{
            "use_ims": m.use_ims, "node_budget": m.node_budget, "alpha": m.alpha, "beta": m.beta,
            "omega": m.omega, **defaults}) for m in config.mechanisms)
    config = with_overrides(config, model=args.model, n=args.n, m=args.m, trials=args.trials,
                            seed=args.seed, mechanisms=mechs, out=args.out, profile_path=args.profile,
                            newfrat_path=args.newfrat)
    if args.no_time:
        config = with_overrides(config, record_time=False)
    result = run_experiment(config, workers=args.workers)
    if not config.out:
        sys.stdout.write(rows_to_csv(result.rows))
    for trial, mech, msg in result.errors:
        print(f"error: trial {trial}, {mech}: {msg}", file=sys.stderr)
    return 1 if result.errors else 0


def cmd_compare(args) -> int:
    summary = compare(args.csv, args.a, args.b, metric=args.metric, alternative=args.alternative)
    _emit(summary.to_dict())
    return 0


def _common(p, omega=True, seed=True, solver=False):
    p.add_argument("--profile", required=True, help="profile JSON file")
    if omega:
        p.add_argument("--omega", type=int, default=2, help="maximum team size")
    if seed:
        p.add_argument("--seed", type=int, default=0, help="seed for the random proposer order")
        p.add_argument("--order", help="file with a whitespace-separated slot list")
    if solver:
        p.add_argument("--no-ims", action="store_true", help="disable IMS pruning")
        p.add_argument("--node-budget", type=int, default=DEFAULT_NODE_BUDGET)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="team-forge", description="Rotating proposer team formation")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write random or bundled preference profiles")
    p.add_argument("--model", choices=("scale-free", "karate", "newfrat"), default="scale-free")
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--newfrat", help="path to the Newfrat rank matrices")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("ims", help="iterated matching of soulmates")
    _common(p, seed=False)
    p.set_defaults(func=cmd_ims)

    p = sub.add_parser("rpm", help="exact rotating proposer mechanism")
    _common(p, solver=True)
    p.set_defaults(func=cmd_rpm)

    p = sub.add_parser("rpm-alpha", help="threshold-approximate RPM (omega = 2)")
    _common(p, solver=True)
    p.add_argument("--alpha", type=float, default=0.1)
    p.set_defaults(func=cmd_rpm_alpha)

    p = sub.add_parser("hrpm", help="heuristic RPM")
    _common(p)
    p.add_argument("--beta", type=float, default=0.6)
    p.set_defaults(func=cmd_hrpm)

    p = sub.add_parser("rsd", help="random serial dictatorship")
    _common(p)
    p.set_defaults(func=cmd_rsd)

    p = sub.add_parser("audit", help="upper bound on untruthful players (omega = 2)")
    _common(p, omega=False)
    p.add_argument("--mech", choices=("rpm", "rpm-alpha", "hrpm"), default="rpm")
    p.add_argument("--alpha", type=float, default=0.1)
    p.add_argument("--beta", type=float, default=0.6)
    p.add_argument("--node-budget", type=int, default=DEFAULT_NODE_BUDGET)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("run", help="seeded experiment, CSV output")
    p.add_argument("--config", help="JSON experiment config")
    p.add_argument("--model", choices=("scale-free", "karate", "newfrat", "file"))
    p.add_argument("--profile", help="profile JSON for --model file")
    p.add_argument("--newfrat", help="path to the Newfrat rank matrices")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--mech", action="append",
                   help="mechanism, repeatable: rpm, rpm-alpha, hrpm, rsd; options as name:key=val,...")
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--omega", type=int)
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.add_argument("--no-time", action="store_true", help="leave time_ms empty for byte-stable output")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("compare", help="paired comparison of two mechanisms in a result CSV")
    p.add_argument("--csv", required=True)
    p.add_argument("--a", required=True, help="mechanism label A")
    p.add_argument("--b", required=True, help="mechanism label B")
    p.add_argument("--metric", default="usw")
    p.add_argument("--alternative", choices=("two-sided", "greater", "less"), default="two-sided")
    p.set_defaults(func=cmd_compare)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ProfileError, ValueError, SearchBudgetExceeded, gen.DataLoadError, OSError) as exc:
        print(f"team-forge: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
