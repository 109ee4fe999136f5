"""Seeded experiment driver: trial generation, mechanism runs, CSV rows, paired comparison."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

from scipy import stats as sps

from . import generators as gen
from .audit import untruthful_upper_bound
from .baselines import rsd
from .game_exact import DEFAULT_NODE_BUDGET, default_order, solve
from .heuristics import hrpm, rpm_alpha
from .metrics import UndefinedMetric, gini, partition_overlap, rank_utility_correlation, realized_utilities, usw
from .prefs import load_profile

log = logging.getLogger(__name__)

COLUMNS = [
    "trial", "model", "n", "m", "mechanism", "alpha", "beta", "omega", "usw", "gini",
    "rank_corr", "overlap", "untruthful_ub", "untruthful_dedup", "nodes", "time_ms", "seed",
]
MODELS = ("scale-free", "karate", "newfrat", "file")
MECHANISMS = ("rpm", "rpm-alpha", "hrpm", "rsd")


@dataclass(frozen=True)
class MechanismSpec:
    name: str
    alpha: float = 0.1
    beta: float = 0.6
    omega: int = 2
    use_ims: bool = True
    node_budget: int | None = DEFAULT_NODE_BUDGET
    label: str | None = None

    def __post_init__(self):
        if self.name not in MECHANISMS:
            raise ValueError(f"unknown mechanism {self.name!r}; choose from {', '.join(MECHANISMS)}")

    @property
    def tag(self) -> str:
        if self.label:
            return self.label
        return self.name + ("-noims" if not self.use_ims and self.name.startswith("rpm") else "")

    @classmethod
    def parse(cls, text: str, **defaults) -> MechanismSpec:
        """``name[:key=value,...]``, e.g. ``hrpm:beta=0.5,omega=3`` or ``rpm:use_ims=false``."""
        name, _, rest = text.partition(":")
        kw = dict(defaults)
        for item in filter(None, rest.split(",")):
            key, _, val = item.partition("=")
            kw[key.strip()] = _coerce(key.strip(), val.strip())
        return cls(name=name.strip(), **kw)

    @classmethod
    def from_dict(cls, doc: dict) -> MechanismSpec:
        return cls(**{k: _coerce(k, v) if isinstance(v, str) and k != "name" and k != "label" else v
                      for k, v in doc.items()})


def _coerce(key, val):
    if key in ("alpha", "beta"):
        return float(val)
    if key in ("omega", "node_budget"):
        return None if str(val).lower() in ("none", "") else int(val)
    if key == "use_ims":
        return str(val).lower() in ("1", "true", "yes", "on")
    if key in ("name", "label"):
        return val
    raise ValueError(f"unknown mechanism option {key!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    model: str = "scale-free"
    n: int = 20
    m: int = 2
    trials: int = 200
    seed: int = 0
    mechanisms: tuple = field(default_factory=lambda: (MechanismSpec("rpm-alpha"), MechanismSpec("rsd")))
    out: str | None = None
    profile_path: str | None = None
    newfrat_path: str | None = None
    record_time: bool = True

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}")
        if not self.mechanisms:
            raise ValueError("configure at least one mechanism")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.model == "scale-free":
            gen.GeneratorConfig(n=self.n, m=self.m, trials=self.trials, seed=self.seed)
        if self.model == "file" and not self.profile_path:
            raise ValueError("model 'file' needs profile_path")

    @classmethod
    def from_json(cls, text: str) -> ExperimentConfig:
        doc = json.loads(text)
        mechs = tuple(MechanismSpec.from_dict(d) if isinstance(d, dict) else MechanismSpec.parse(d)
                      for d in doc.pop("mechanisms", ()))
        if mechs:
            doc["mechanisms"] = mechs
        return cls(**doc)


@dataclass
class ExperimentResult:
    rows: list
    errors: list  # (trial, mechanism tag, message)

    def to_csv(self) -> str:
        return rows_to_csv(self.rows)


def trial_profile(config: ExperimentConfig, trial: int, rng):
    if config.model == "scale-free":
        net = gen.gen_scale_free(gen.GeneratorConfig(n=config.n, m=config.m, seed=config.seed), rng)
        return gen.profile_from_network(net, rng)
    if config.model == "karate":
        return gen.profile_from_network(gen.load_karate(), rng)
    if config.model == "newfrat":
        weeks = gen.load_newfrat(config.newfrat_path)
        return weeks[trial % len(weeks)]
    return load_profile(config.profile_path)


def _run_mechanism(spec: MechanismSpec, profile, order):
    if spec.name == "rpm":
        return solve(profile, order, omega=spec.omega, use_ims=spec.use_ims, node_budget=spec.node_budget)
    if spec.name == "rpm-alpha":
        return rpm_alpha(profile, order, alpha=spec.alpha, use_ims=spec.use_ims,
                         node_budget=spec.node_budget, omega=spec.omega)
    if spec.name == "hrpm":
        return hrpm(profile, order, omega=spec.omega, beta=spec.beta)
    return rsd(profile, order, omega=spec.omega)


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(round(x, 12))
    return str(x)


def run_trial(config: ExperimentConfig, trial: int):
    """Rows and errors of one trial; depends only on (config, trial)."""
    rng = gen.trial_rng(config.seed, trial)
    profile = trial_profile(config, trial, rng)
    order = default_order(profile, rng)
    rows, errors = [], []
    reference = None
    outcomes = []
    for spec in config.mechanisms:
        t0 = time.perf_counter()
        try:
            out = _run_mechanism(spec, profile, order)
        except Exception as exc:  # one failing mechanism must not sink the trial
            log.warning("trial %d, %s: %s", trial, spec.tag, exc)
            errors.append((trial, spec.tag, f"{type(exc).__name__}: {exc}"))
            outcomes.append((spec, None, None))
            continue
        elapsed = (time.perf_counter() - t0) * 1000.0
        outcomes.append((spec, out, elapsed))
        if reference is None and spec.name == "rpm":
            reference = (spec, out)
    for spec, out, elapsed in outcomes:
        row = {
            "trial": trial,
            "model": config.model,
            "n": profile.n,
            "m": config.m if config.model == "scale-free" else None,
            "mechanism": spec.tag,
            "alpha": spec.alpha if spec.name == "rpm-alpha" else None,
            "beta": spec.beta if spec.name == "hrpm" else None,
            "omega": spec.omega,
            "seed": config.seed,
        }
        if out is not None:
            row["usw"] = usw(profile, out.partition)
            try:
                row["gini"] = gini(realized_utilities(profile, out.partition))
            except UndefinedMetric:
                row["gini"] = None
            row["rank_corr"] = rank_utility_correlation(order, profile, out.partition)
            if reference is not None and reference[0] is not spec:
                row["overlap"] = partition_overlap(reference[1].partition, out.partition)
            if spec.omega == 2 and out.teammate is not None:
                rep = untruthful_upper_bound(profile, order, out.teammate)
                row["untruthful_ub"] = rep.sum
                row["untruthful_dedup"] = rep.dedup
            if spec.name in ("rpm", "rpm-alpha"):
                row["nodes"] = out.stats.nodes
            if config.record_time:
                row["time_ms"] = elapsed
        rows.append({c: _fmt(row.get(c)) for c in COLUMNS})
    return rows, errors


def _sort_key(row):
    return (int(row["trial"]), row["mechanism"], row["alpha"], row["beta"], row["omega"])


def run_experiment(config: ExperimentConfig, workers: int = 1) -> ExperimentResult:
    """Run every trial, return rows sorted by (trial, mechanism)."""
    rows, errors = [], []
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(run_trial, config, t) for t in range(config.trials)]
            for f in futures:
                r, e = f.result()
                rows += r
                errors += e
    else:
        for t in range(config.trials):
            r, e = run_trial(config, t)
            rows += r
            errors += e
    rows.sort(key=_sort_key)
    result = ExperimentResult(rows=rows, errors=errors)
    if config.out:
        Path(config.out).write_text(result.to_csv())
    return result


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def read_rows(source) -> list[dict]:
    """Rows from a CSV path or CSV text."""
    text = source if "\n" in str(source) else Path(source).read_text()
    return list(csv.DictReader(io.StringIO(text)))


@dataclass(frozen=True)
class Comparison:
    metric: str
    mech_a: str
    mech_b: str
    pairs: int
    excluded: int
    mean_a: float
    mean_b: float
    mean_diff: float
    pct_improvement: float
    wins: int
    losses: int
    ties: int
    sign_p: float
    t_stat: float

    def significant(self, level: float = 0.01) -> bool:
        return self.sign_p < level

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def compare(rows, mech_a: str, mech_b: str, metric: str = "usw", alternative: str = "two-sided") -> Comparison:
    """Paired comparison of ``metric`` between two mechanisms over shared trials.

    ``alternative`` follows scipy's convention for the sign test; "greater"
    means mech_a tends to exceed mech_b.
    """
    if metric not in COLUMNS:
        raise ValueError(f"unknown metric {metric!r}")
    if isinstance(rows, (str, Path)):
        rows = read_rows(rows)
    by = {}
    for r in rows:
        if r["mechanism"] in (mech_a, mech_b):
            key = (r.get("model"), r.get("n"), r.get("m"), r["trial"])
            slot = by.setdefault(key, {})
            if r["mechanism"] in slot:
                raise ValueError(f"duplicate {r['mechanism']} row for trial {r['trial']}")
            slot[r["mechanism"]] = r
    if not by:
        raise ValueError(f"no rows for {mech_a} or {mech_b}")
    diffs, xa, xb = [], [], []
    excluded = 0
    for key, pair in by.items():
        if mech_a not in pair or mech_b not in pair:
            raise ValueError(f"trial {key[-1]} lacks a row for {mech_b if mech_a in pair else mech_a}")
        va, vb = pair[mech_a][metric], pair[mech_b][metric]
        if va == "" or vb == "":
            excluded += 1
            continue
        a, b = float(va), float(vb)
        xa.append(a)
        xb.append(b)
        diffs.append(a - b)
    if not diffs:
        raise ValueError("no trial has the metric for both mechanisms")
    eps = 1e-12
    wins = sum(1 for d in diffs if d > eps)
    losses = sum(1 for d in diffs if d < -eps)
    ties = len(diffs) - wins - losses
    if wins + losses:
        p = sps.binomtest(wins, wins + losses, 0.5, alternative=alternative).pvalue
    else:
        p = 1.0
    mean_a = sum(xa) / len(xa)
    mean_b = sum(xb) / len(xb)
    mean_diff = sum(diffs) / len(diffs)
    pct = 100.0 * mean_diff / abs(mean_b) if mean_b else (0.0 if mean_diff == 0 else math.inf)
    if len(diffs) > 1:
        sd = math.sqrt(sum((d - mean_diff) ** 2 for d in diffs) / (len(diffs) - 1))
        t = mean_diff / (sd / math.sqrt(len(diffs))) if sd > eps else (0.0 if abs(mean_diff) <= eps else math.inf)
    else:
        t = 0.0
    return Comparison(metric, mech_a, mech_b, len(diffs), excluded, mean_a, mean_b, mean_diff, pct,
                      wins, losses, ties, float(p), t)


def with_overrides(config: ExperimentConfig, **kw) -> ExperimentConfig:
    return replace(config, **{k: v for k, v in kw.items() if v is not None})
