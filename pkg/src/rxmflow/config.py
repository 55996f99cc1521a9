"""Dataclass configuration blocks with engine defaults.

All cutoffs that drive rule-based behavior live here so they can be
overridden in one place; the rule logic itself stays in the agent modules.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class QualityConfig:
    """Cutoffs for data-quality issue detection."""

    high_missingness_cutoff: float = 0.5
    suspicious_cardinality_cutoff: float = 0.95
    numeric_parse_threshold: float = 0.95
    datetime_parse_threshold: float = 0.95


@dataclass(frozen=True)
class PatternConfig:
    """Name-pattern sets for schema discovery.

    identifier_patterns are regexes matched against the normalized column
    name (lowercased, spaces replaced by underscores). timestamp_tokens and
    target_tokens match tokens of the normalized name: timestamp matching is
    token-prefix (so "downtime" does not match "time"), target matching is
    substring on the whole normalized name.
    """

    identifier_patterns: tuple[str, ...] = (
        r"^id$", r"_id$", r"^machine", r"^serial", r"^asset",
    )
    timestamp_tokens: tuple[str, ...] = ("time", "date", "stamp")
    target_tokens: tuple[str, ...] = (
        "priority", "status", "failure", "target", "label", "quality", "efficiency",
    )
    identifier_uniqueness_cutoff: float = 0.95
    datetime_parse_cutoff: float = 0.90


@dataclass(frozen=True)
class PlanConfig:
    """Thresholds for the rule-based preprocessing tool decider."""

    knn_missing_cutoff: float = 0.20        # strictly above: knn imputation
    median_missing_cutoff: float = 0.10     # closed interval [0.10, 0.20]: median
    knn_neighbors: int = 3
    memory_cutoff_bytes: int = 100 * 2**20  # above: robust scaling
    high_cardinality_cutoff: int = 50       # strictly above: target-encode or drop
    redundancy_r_cutoff: float = 0.95
    mi_bins: int = 10
    importance_trees: int = 25
    importance_depth: int = 8
    importance_subsample: float = 0.5


@dataclass(frozen=True)
class ActionEntry:
    action: str
    cost: float     # currency units
    hours: float


DEFAULT_ACTION_TABLE: dict[str, ActionEntry] = {
    "Critical": ActionEntry(
        "Immediately dispatch maintenance team; inspect and restore", 1000.0, 4.0
    ),
    "Elevated": ActionEntry("Schedule inspection within 48 h", 400.0, 2.0),
    "Routine": ActionEntry("Continue monitoring", 50.0, 0.5),
}

DEFAULT_PRIORITY_MAP: dict[str, str] = {
    "High": "Critical",
    "Medium": "Elevated",
    "Low": "Routine",
}


@dataclass(frozen=True)
class RecommendationConfig:
    """Knobs for turning model output into ranked recommendations."""

    priority_map: dict[str, str] = field(
        default_factory=lambda: dict(DEFAULT_PRIORITY_MAP)
    )
    action_table: dict[str, ActionEntry] = field(
        default_factory=lambda: dict(DEFAULT_ACTION_TABLE)
    )
    max_recommendations: int = 10
    max_advisories: int = 50
    include_routine: bool = False
    top_k_features: int = 3
    extreme_z_cutoff: float = 3.0
    min_extreme_features: int = 2
    confidence_high: float = 0.8
    confidence_medium: float = 0.6
