"""The tool decider: a rule table mapping dataset traits to preprocessing
directives.

Rule table, per column:
  missing share  > 0.20          -> knn imputation, k = 3
  missing share in [0.10, 0.20]  -> median (numeric) / most_frequent (categorical)
  missing share in (0, 0.10)     -> same as the moderate band (rule extended
                                    downward so small gaps are still filled)
  estimated memory > 100 MiB     -> robust scaling on every numeric feature,
                                    otherwise standard scaling
  categorical uniques > 50       -> target encoding when a supervised target
                                    exists, otherwise drop
  categorical uniques <= 50      -> one-hot encoding
  identifiers                    -> passthrough everywhere
  the target column              -> excluded from every directive

Both missingness interval boundaries are closed on the median path. knn on
a categorical column imputes the mode of the neighbors instead of the mean.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..config import PlanConfig
from ..perception import DatasetMetadata
from .schema import (
    FEATURE_CATEGORICAL, FEATURE_NUMERIC, IDENTIFIER, SchemaMap,
)

IMPUTE_KNN = "knn"
IMPUTE_MEDIAN = "median"
IMPUTE_MOST_FREQUENT = "most_frequent"
IMPUTE_NONE = "none"

SCALE_STANDARD = "standard"
SCALE_ROBUST = "robust"
SCALE_NONE = "none"

ENCODE_ONE_HOT = "one_hot"
ENCODE_TARGET = "target_encoding"
ENCODE_PASSTHROUGH = "passthrough"
ENCODE_DROP = "drop"


@dataclass
class ColumnDirective:
    imputation: str
    scaling: str
    encoding: str
    rationale: str
    knn_neighbors: int = 0


@dataclass
class PreprocessPlan:
    directives: dict[str, ColumnDirective]
    advisory_notes: list[str] = field(default_factory=list)

    def to_json(self, schema: SchemaMap) -> dict:
        return {
            name: {
                "role": schema.roles.get(name, "unknown"),
                "imputation": d.imputation,
                "scaling": d.scaling,
                "encoding": d.encoding,
                "rationale": d.rationale,
                "fitted": None,
            }
            for name, d in self.directives.items()
        }


def _imputation_for(missing_pct: float, numeric: bool, cfg: PlanConfig):
    if missing_pct > cfg.knn_missing_cutoff:
        return IMPUTE_KNN, f"{missing_pct:.0%} missing exceeds {cfg.knn_missing_cutoff:.0%}"
    if missing_pct >= cfg.median_missing_cutoff:
        kind = IMPUTE_MEDIAN if numeric else IMPUTE_MOST_FREQUENT
        return kind, (
            f"{missing_pct:.0%} missing within "
            f"[{cfg.median_missing_cutoff:.0%}, {cfg.knn_missing_cutoff:.0%}]"
        )
    if missing_pct > 0:
        kind = IMPUTE_MEDIAN if numeric else IMPUTE_MOST_FREQUENT
        return kind, f"{missing_pct:.0%} missing, light-gap rule"
    return IMPUTE_NONE, "no missing values"


def decide_tools(
    metadata: DatasetMetadata,
    schema: SchemaMap,
    cfg: PlanConfig | None = None,
) -> PreprocessPlan:
    """Deterministic, total rule table over the metadata and schema."""
    cfg = cfg or PlanConfig()
    big = metadata.estimated_memory_bytes > cfg.memory_cutoff_bytes
    numeric_scale = SCALE_ROBUST if big else SCALE_STANDARD
    scale_why = (
        "memory estimate above 100 MiB, robust scaling"
        if big else "memory estimate within 100 MiB, standard scaling"
    )
    has_target = schema.chosen_target is not None

    directives: dict[str, ColumnDirective] = {}
    for profile in metadata.profiles:
        name = profile.name
        role = schema.roles.get(name)
        if name == schema.chosen_target:
            continue
        if role == IDENTIFIER:
            directives[name] = ColumnDirective(
                IMPUTE_NONE, SCALE_NONE, ENCODE_PASSTHROUGH,
                "identifier, passed through unchanged",
            )
            continue
        if role == FEATURE_NUMERIC:
            imputation, why = _imputation_for(profile.missing_pct, True, cfg)
            directives[name] = ColumnDirective(
                imputation, numeric_scale, ENCODE_PASSTHROUGH,
                f"{why}; {scale_why}",
                knn_neighbors=cfg.knn_neighbors if imputation == IMPUTE_KNN else 0,
            )
        elif role == FEATURE_CATEGORICAL:
            imputation, why = _imputation_for(profile.missing_pct, False, cfg)
            if profile.unique_count > cfg.high_cardinality_cutoff:
                if has_target:
                    encoding = ENCODE_TARGET
                    enc_why = (
                        f"{profile.unique_count} categories exceed "
                        f"{cfg.high_cardinality_cutoff}, target encoding"
                    )
                else:
                    encoding = ENCODE_DROP
                    enc_why = (
                        f"{profile.unique_count} categories exceed "
                        f"{cfg.high_cardinality_cutoff} with no target, dropped"
                    )
            else:
                encoding = ENCODE_ONE_HOT
                enc_why = f"{profile.unique_count} categories, one-hot"
            directives[name] = ColumnDirective(
                imputation, SCALE_NONE, encoding, f"{why}; {enc_why}",
                knn_neighbors=cfg.knn_neighbors if imputation == IMPUTE_KNN else 0,
            )
        else:
            # timestamps and non-chosen target candidates stay out of the
            # feature matrix but are recorded for the audit trail
            directives[name] = ColumnDirective(
                IMPUTE_NONE, SCALE_NONE, ENCODE_DROP,
                f"role {role}, excluded from the feature matrix",
            )
    return PreprocessPlan(directives=directives)


def mark_removed(plan: PreprocessPlan, removed: list[tuple[str, str]]) -> PreprocessPlan:
    """Override directives for columns the feature analysis removed."""
    for name, reason in removed:
        if name in plan.directives:
            plan.directives[name] = ColumnDirective(
                IMPUTE_NONE, SCALE_NONE, ENCODE_DROP,
                f"removed by feature analysis: {reason}",
            )
    return plan


def simplified_backup_plan(
    metadata: DatasetMetadata,
    schema: SchemaMap,
    cfg: PlanConfig | None = None,
) -> PreprocessPlan:
    """Backup strategy after a preprocessing failure: median/most_frequent
    imputation, standard scaling, and high-cardinality columns dropped."""
    cfg = cfg or PlanConfig()
    directives: dict[str, ColumnDirective] = {}
    for profile in metadata.profiles:
        name = profile.name
        role = schema.roles.get(name)
        if name == schema.chosen_target:
            continue
        if role == IDENTIFIER:
            directives[name] = ColumnDirective(
                IMPUTE_NONE, SCALE_NONE, ENCODE_PASSTHROUGH,
                "identifier, passed through unchanged",
            )
        elif role == FEATURE_NUMERIC:
            imputation = IMPUTE_MEDIAN if profile.missing_pct > 0 else IMPUTE_NONE
            directives[name] = ColumnDirective(
                imputation, SCALE_STANDARD, ENCODE_PASSTHROUGH,
                "backup plan: median imputation, standard scaling",
            )
        elif role == FEATURE_CATEGORICAL:
            if profile.unique_count > cfg.high_cardinality_cutoff:
                directives[name] = ColumnDirective(
                    IMPUTE_NONE, SCALE_NONE, ENCODE_DROP,
                    "backup plan: high-cardinality column dropped",
                )
            else:
                imputation = (
                    IMPUTE_MOST_FREQUENT if profile.missing_pct > 0 else IMPUTE_NONE
                )
                directives[name] = ColumnDirective(
                    imputation, SCALE_NONE, ENCODE_ONE_HOT,
                    "backup plan: most-frequent imputation, one-hot",
                )
        else:
            directives[name] = ColumnDirective(
                IMPUTE_NONE, SCALE_NONE, ENCODE_DROP,
                f"role {role}, excluded from the feature matrix",
            )
    plan = PreprocessPlan(directives=directives)
    plan.advisory_notes.append("simplified backup plan in effect")
    return plan
