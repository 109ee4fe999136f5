"""Rotating proposer team formation over social networks."""

from .audit import AuditReport, untruthful_upper_bound
from .baselines import rsd
from .game_exact import (
    MechanismOutcome,
    ProposerOrder,
    SearchBudgetExceeded,
    UnsupportedConfiguration,
    default_order,
    solve,
)
from .generators import GeneratorConfig, load_karate, load_newfrat, scale_free_profile
from .heuristics import hrpm, opportunity_score, rpm_alpha, team_score
from .ims import run_ims, top_team
from .metrics import gini, partition_overlap, rank_utility_correlation, usw
from .prefs import PreferenceProfile, borda_utility, team_utility, validate

__version__ = "0.1.0"

__all__ = [
    "AuditReport", "GeneratorConfig", "MechanismOutcome", "PreferenceProfile", "ProposerOrder",
    "SearchBudgetExceeded", "UnsupportedConfiguration", "borda_utility", "default_order", "gini",
    "hrpm", "load_karate", "load_newfrat", "opportunity_score", "partition_overlap",
    "rank_utility_correlation", "rpm_alpha", "rsd", "run_ims", "scale_free_profile", "solve",
    "team_score", "team_utility", "top_team", "untruthful_upper_bound", "usw", "validate",
]
