"""Turn model output into ranked prescriptive recommendations.

Priority bands for regression come from the training target statistics:

    high threshold     = mean + 2 * std
    critical threshold = mean + 3 * std
    priority score     = (predicted - mean) / std

Label rule (strict on both boundaries): prediction > critical is Critical,
high < prediction <= critical is Elevated, anything else Routine. Routine
recommendations are suppressed unless configured otherwise; anomaly-mode
output is advisory and keeps its Routine monitoring entries.

Classification has no z-score, so its priority score is a surrogate:
priority rank plus the model's predicted-class probability, labeled
"class_rank_surrogate" in the serialized output. Per-machine contributing
features are likewise a deterministic surrogate: the top-k global
importances re-weighted by that row's absolute standard-scaled feature
value.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .config import RecommendationConfig
from .errors import DegenerateStdError, MissingImportancesError

if TYPE_CHECKING:      # avoids a circular import; analytics imports TargetStats
    from .analytics import Metrics, ModelResult

logger = logging.getLogger(__name__)

CRITICAL = "Critical"
ELEVATED = "Elevated"
ROUTINE = "Routine"

_RANK = {CRITICAL: 3, ELEVATED: 2, ROUTINE: 1}

SCORE_Z = "z_score"
SCORE_CLASS_SURROGATE = "class_rank_surrogate"
SCORE_ANOMALY = "anomaly_score"


@dataclass(frozen=True)
class TargetStats:
    mean: float
    std: float          # population convention
    n: int


@dataclass(frozen=True)
class Thresholds:
    high: float
    critical: float
    degenerate: bool = False


@dataclass
class Recommendation:
    machine_id: str
    priority: str
    priority_score: float
    contributing_features: list[tuple[str, float]]
    action: str
    cost_estimate: float
    time_estimate: float
    advisory: bool = False
    score_kind: str = SCORE_Z

    def to_json(self) -> dict:
        return {
            "machine_id": self.machine_id,
            "priority": self.priority,
            "priority_score": self.priority_score,
            "score_kind": self.score_kind,
            "contributing_features": [
                {"feature": f, "weight": w} for f, w in self.contributing_features
            ],
            "action": self.action,
            "cost_estimate": self.cost_estimate,
            "time_estimate": self.time_estimate,
            "advisory": self.advisory,
        }


@dataclass(frozen=True)
class ConfidenceAssessment:
    level: str                       # high | medium | low
    warning: str | None = None


def thresholds(stats: TargetStats) -> Thresholds:
    high = stats.mean + 2.0 * stats.std
    critical = stats.mean + 3.0 * stats.std
    return Thresholds(high=high, critical=critical, degenerate=stats.std == 0.0)


def priority_score(predicted: float, stats: TargetStats) -> float:
    if stats.std <= 0.0:
        raise DegenerateStdError("target std is zero; priority score undefined")
    return (predicted - stats.mean) / stats.std


def _rank_sort(recommendations: list[Recommendation]) -> list[Recommendation]:
    return sorted(
        recommendations,
        key=lambda r: (-_RANK[r.priority], -r.priority_score, r.machine_id),
    )


def _standardized(feature_matrix: np.ndarray) -> np.ndarray:
    matrix = np.asarray(feature_matrix, dtype=float)
    mean = matrix.mean(axis=0)
    std = matrix.std(axis=0)
    std = np.where(std == 0.0, 1.0, std)
    return (matrix - mean) / std


def _contributing(importances, feature_names, z_row, k):
    """Top-k global importances re-weighted by the row's |z| values."""
    ranked = sorted(importances.items(), key=lambda kv: (-kv[1], kv[0]))[:k]
    weighted = []
    for name, weight in ranked:
        j = feature_names.index(name) if name in feature_names else None
        z = abs(float(z_row[j])) if j is not None else 0.0
        weighted.append((name, weight * z))
    weighted.sort(key=lambda kv: (-kv[1], kv[0]))
    return weighted


def _dedupe_best(recommendations: list[Recommendation]) -> list[Recommendation]:
    best: dict[str, Recommendation] = {}
    for rec in recommendations:
        seen = best.get(rec.machine_id)
        if seen is None or (_RANK[rec.priority], rec.priority_score) > (
            _RANK[seen.priority], seen.priority_score
        ):
            best[rec.machine_id] = rec
    return list(best.values())


def _finalize(recommendations, config, cap):
    if not config.include_routine:
        recommendations = [r for r in recommendations if r.priority != ROUTINE]
    return _rank_sort(recommendations)[:cap]


def recommend_classification(
    result: "ModelResult",
    identifiers: list[str],
    feature_matrix,
    feature_names: list[str],
    config: RecommendationConfig | None = None,
) -> list[Recommendation]:
    """Map predicted class labels onto priorities and actions."""
    config = config or RecommendationConfig()
    importances = result.feature_importances
    if not importances:
        raise MissingImportancesError(
            "classification recommendations need feature importances"
        )
    z = _standardized(feature_matrix)
    confidences = result.prediction_confidence or [0.5] * len(identifiers)

    drafts = []
    for k, (machine, label) in enumerate(zip(identifiers, result.test_predictions)):
        priority = config.priority_map.get(str(label), ROUTINE)
        entry = config.action_table[priority]
        drafts.append(Recommendation(
            machine_id=machine,
            priority=priority,
            priority_score=_RANK[priority] + float(confidences[k]),
            contributing_features=_contributing(
                importances, feature_names, z[k], config.top_k_features
            ),
            action=entry.action,
            cost_estimate=entry.cost,
            time_estimate=entry.hours,
            score_kind=SCORE_CLASS_SURROGATE,
        ))
    return _finalize(_dedupe_best(drafts), config, config.max_recommendations)


def recommend_regression(
    result: "ModelResult",
    identifiers: list[str],
    feature_matrix,
    feature_names: list[str],
    config: RecommendationConfig | None = None,
) -> list[Recommendation]:
    """Band predictions against the training-statistics thresholds."""
    config = config or RecommendationConfig()
    stats = result.train_target_stats
    bands = thresholds(stats)
    importances = result.feature_importances or {}
    z = _standardized(feature_matrix)

    if bands.degenerate:
        logger.warning(
            "target std is zero; every prediction lands in the Routine band"
        )

    drafts = []
    for k, (machine, predicted) in enumerate(zip(identifiers, result.test_predictions)):
        predicted = float(predicted)
        if bands.degenerate:
            priority, score = ROUTINE, 0.0
        else:
            score = priority_score(predicted, stats)
            if predicted > bands.critical:
                priority = CRITICAL
            elif predicted > bands.high:
                priority = ELEVATED
            else:
                priority = ROUTINE
        entry = config.action_table[priority]
        drafts.append(Recommendation(
            machine_id=machine,
            priority=priority,
            priority_score=score,
            contributing_features=_contributing(
                importances, feature_names, z[k], config.top_k_features
            ),
            action=entry.action,
            cost_estimate=entry.cost,
            time_estimate=entry.hours,
        ))
    return _finalize(_dedupe_best(drafts), config, config.max_recommendations)


def recommend_anomaly(
    scores,
    flags,
    feature_matrix,
    identifiers: list[str],
    feature_names: list[str],
    config: RecommendationConfig | None = None,
) -> list[Recommendation]:
    """Group flagged rows per machine and recommend inspections when two or
    more features show extreme z-scores. All output is advisory; machines
    without extreme deviations get a Routine monitoring entry."""
    config = config or RecommendationConfig()
    scores = np.asarray(scores, dtype=float)
    flags = np.asarray(flags, dtype=bool)
    # full-dataset statistics: the anomaly task runs without a split
    z = _standardized(feature_matrix)

    by_machine: dict[str, list[int]] = {}
    for i in np.nonzero(flags)[0]:
        by_machine.setdefault(identifiers[i], []).append(int(i))

    drafts = []
    for machine, rows in by_machine.items():
        z_max = np.abs(z[rows]).max(axis=0)
        extremes = [
            (feature_names[j], float(z_max[j]))
            for j in np.nonzero(z_max >= config.extreme_z_cutoff)[0]
        ]
        extremes.sort(key=lambda kv: (-kv[1], kv[0]))
        if len(extremes) >= config.min_extreme_features:
            priority = ELEVATED
            action = (
                "Inspect; multiple signals outside the normal band: "
                + ", ".join(name for name, _ in extremes)
            )
            features = extremes
        else:
            priority = ROUTINE
            order = np.argsort(-z_max)[: config.top_k_features]
            features = [(feature_names[j], float(z_max[j])) for j in order]
            action = "Monitor closely over the next observation window"
        entry = config.action_table[priority]
        drafts.append(Recommendation(
            machine_id=machine,
            priority=priority,
            priority_score=float(scores[rows].max()),
            contributing_features=features,
            action=action,
            cost_estimate=entry.cost,
            time_estimate=entry.hours,
            advisory=True,
            score_kind=SCORE_ANOMALY,
        ))
    # advisory mode keeps Routine monitoring entries
    return _rank_sort(drafts)[: config.max_advisories]


def assess_confidence(
    metrics: "Metrics", task: str, config: RecommendationConfig | None = None
) -> ConfidenceAssessment:
    config = config or RecommendationConfig()
    if task == "anomaly_detection":
        return ConfidenceAssessment(
            level="medium",
            warning="unsupervised run: no ground truth to validate against",
        )
    value = metrics.primary(task)
    if value is None:
        return ConfidenceAssessment(level="low", warning="reduced reliability: no metric available")
    if value >= config.confidence_high:
        return ConfidenceAssessment(level="high")
    if value >= config.confidence_medium:
        return ConfidenceAssessment(level="medium")
    return ConfidenceAssessment(
        level="low",
        warning=f"reduced reliability: primary metric {value:.4f} below "
                f"{config.confidence_medium}",
    )


def recommendations_to_json(recommendations: list[Recommendation]) -> list[dict]:
    return [r.to_json() for r in recommendations]
