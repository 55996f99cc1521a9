"""Feature redundancy analysis: correlations, mutual information, and
advisory importances.

Mutual information uses the plug-in estimator in nats on a contingency
table, with continuous variables discretized into 10 equal-frequency bins.
Redundant pairs (|r| above the cutoff) lose the member with lower MI
against the target; with no target, or on a tie, the later column goes.
Forest importances are advisory only and never a removal criterion.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..config import PlanConfig
from ..errors import NoFeaturesError
from ..models.forest import RandomForestClassifier, RandomForestRegressor
from ..perception import DatasetFrame
from .schema import FEATURE_CATEGORICAL, FEATURE_NUMERIC, SchemaMap

REASON_CONSTANT = "constant"
REASON_REDUNDANT = "redundant"
REASON_HIGH_CARDINALITY = "high_cardinality_unencodable"


@dataclass
class FeatureReport:
    pearson_correlations: dict[tuple[str, str], float] = field(default_factory=dict)
    mutual_information: dict[str, float] = field(default_factory=dict)
    importances: dict[str, float] | None = None
    removed: list[tuple[str, str]] = field(default_factory=list)
    kept: list[str] = field(default_factory=list)
    target_name: str | None = None


def pearson(x_cells: list, y_cells: list) -> float | None:
    """Pearson r with pairwise missing dropping; None when degenerate."""
    pairs = [
        (x, y) for x, y in zip(x_cells, y_cells)
        if isinstance(x, float) and isinstance(y, float)
    ]
    if len(pairs) < 2:
        return None
    x = np.array([p[0] for p in pairs])
    y = np.array([p[1] for p in pairs])
    sx, sy = x.std(), y.std()
    if sx == 0.0 or sy == 0.0:
        return None
    return float(((x - x.mean()) * (y - y.mean())).mean() / (sx * sy))


def equal_frequency_bins(values: np.ndarray, n_bins: int) -> np.ndarray:
    """Bin indices via interior quantile boundaries (linear interpolation)."""
    edges = np.quantile(values, np.linspace(0, 1, n_bins + 1)[1:-1])
    return np.searchsorted(edges, values, side="right")


def mutual_information(x_codes: np.ndarray, y_codes: np.ndarray) -> float:
    """Plug-in MI in nats over the joint contingency table."""
    n = x_codes.shape[0]
    if n == 0:
        return 0.0
    xs = np.unique(x_codes, return_inverse=True)[1]
    ys = np.unique(y_codes, return_inverse=True)[1]
    nx = xs.max() + 1
    ny = ys.max() + 1
    joint = np.bincount(xs * ny + ys, minlength=nx * ny).reshape(nx, ny) / n
    px = joint.sum(axis=1)
    py = joint.sum(axis=0)
    mask = joint > 0
    return float(np.sum(joint[mask] * np.log(joint[mask] / np.outer(px, py)[mask])))


def _is_numeric_cell(cell) -> bool:
    return isinstance(cell, float)


def _mode(values: list[str]) -> str:
    """Most frequent value; ties break to the lexicographically smallest."""
    if not values:
        return ""
    counts: dict[str, int] = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    return min(counts, key=lambda v: (-counts[v], v))


def _discrete_codes(cells: list, numeric: bool, n_bins: int):
    """(row_indices, codes) for non-missing cells of one column."""
    if numeric:
        rows = [i for i, c in enumerate(cells) if _is_numeric_cell(c)]
        values = np.array([cells[i] for i in rows], dtype=float)
        if rows:
            codes = equal_frequency_bins(values, n_bins)
        else:
            codes = np.array([], dtype=int)
    else:
        rows = [i for i, c in enumerate(cells) if c is not None]
        vocab = {v: k for k, v in enumerate(sorted({str(cells[i]) for i in rows}))}
        codes = np.array([vocab[str(cells[i])] for i in rows], dtype=int)
    return rows, codes


def _mi_against_target(frame, feature, numeric, target, target_numeric, n_bins):
    f_rows, f_codes = _discrete_codes(frame.column(feature), numeric, n_bins)
    t_rows, t_codes = _discrete_codes(frame.column(target), target_numeric, n_bins)
    f_map = dict(zip(f_rows, f_codes.tolist()))
    t_map = dict(zip(t_rows, t_codes.tolist()))
    shared = sorted(set(f_rows) & set(t_rows))
    if not shared:
        return 0.0
    return mutual_information(
        np.array([f_map[i] for i in shared]),
        np.array([t_map[i] for i in shared]),
    )


def _advisory_importances(frame, kept, schema, cfg, seed):
    """25-tree depth-8 forest on a 50% row subsample; advisory only."""
    target = schema.chosen_target
    target_cells = frame.column(target)
    usable_rows = [i for i, c in enumerate(target_cells) if c is not None]
    if len(usable_rows) < 10:
        return None

    columns = []
    for name in kept:
        cells = frame.column(name)
        if schema.roles[name] == FEATURE_NUMERIC:
            values = [c for c in cells if _is_numeric_cell(c)]
            fill = float(np.median(values)) if values else 0.0
            columns.append([
                c if _is_numeric_cell(c) else fill for c in cells
            ])
        else:
            present = [str(c) for c in cells if c is not None]
            vocab = {v: float(k) for k, v in enumerate(sorted(set(present)))}
            fill = vocab.get(_mode(present), 0.0)
            columns.append([
                vocab[str(c)] if c is not None else fill for c in cells
            ])
    X = np.array(columns, dtype=float).T[usable_rows]
    y_raw = [target_cells[i] for i in usable_rows]

    numeric_target = all(_is_numeric_cell(v) for v in y_raw)
    classify = (not numeric_target) or len(set(y_raw)) <= 20

    rng = np.random.default_rng(seed)
    take = max(10, int(round(cfg.importance_subsample * len(usable_rows))))
    take = min(take, len(usable_rows))
    sub = rng.choice(len(usable_rows), size=take, replace=False)

    if classify:
        forest = RandomForestClassifier(
            n_estimators=cfg.importance_trees,
            max_depth=cfg.importance_depth,
            seed=seed,
        ).fit(X[sub], np.array([str(v) for v in y_raw])[sub])
    else:
        forest = RandomForestRegressor(
            n_estimators=cfg.importance_trees,
            max_depth=cfg.importance_depth,
            seed=seed,
        ).fit(X[sub], np.array(y_raw, dtype=float)[sub])
    return dict(zip(kept, forest.feature_importances_.tolist()))


def analyze_features(
    frame: DatasetFrame,
    schema: SchemaMap,
    cfg: PlanConfig | None = None,
    seed: int = 0,
) -> FeatureReport:
    """Partition features into kept and removed with full evidence."""
    cfg = cfg or PlanConfig()
    features = [c for c in frame.column_names if c in schema.feature_columns()]
    if not features:
        raise NoFeaturesError("schema has no feature columns")

    report = FeatureReport(target_name=schema.chosen_target)
    removed: dict[str, str] = {}

    for name in features:
        distinct = {str(c) for c in frame.column(name) if c is not None}
        if len(distinct) <= 1:
            removed[name] = REASON_CONSTANT

    numeric = [
        c for c in features
        if schema.roles[c] == FEATURE_NUMERIC and c not in removed
    ]
    for i, a in enumerate(numeric):
        for b in numeric[i + 1:]:
            r = pearson(frame.column(a), frame.column(b))
            if r is not None:
                report.pearson_correlations[(a, b)] = r

    target = schema.chosen_target
    if target is not None:
        target_numeric = all(
            _is_numeric_cell(c)
            for c in frame.column(target) if c is not None
        )
        for name in features:
            if name in removed:
                continue
            report.mutual_information[name] = _mi_against_target(
                frame, name, schema.roles[name] == FEATURE_NUMERIC,
                target, target_numeric, cfg.mi_bins,
            )

    # redundancy pass in deterministic column order
    for (a, b), r in sorted(
        report.pearson_correlations.items(),
        key=lambda kv: (features.index(kv[0][0]), features.index(kv[0][1])),
    ):
        if abs(r) <= cfg.redundancy_r_cutoff:
            continue
        if a in removed or b in removed:
            continue
        mi = report.mutual_information
        if target is not None and mi.get(a, 0.0) != mi.get(b, 0.0):
            victim = a if mi.get(a, 0.0) < mi.get(b, 0.0) else b
        else:
            victim = b      # tie or unsupervised: the later column goes
        removed[victim] = REASON_REDUNDANT

    if target is None:
        for name in features:
            if name in removed or schema.roles[name] != FEATURE_CATEGORICAL:
                continue
            distinct = {str(c) for c in frame.column(name) if c is not None}
            if len(distinct) > cfg.high_cardinality_cutoff:
                removed[name] = REASON_HIGH_CARDINALITY

    report.removed = [(name, removed[name]) for name in features if name in removed]
    report.kept = [name for name in features if name not in removed]

    if target is not None and report.kept:
        report.importances = _advisory_importances(
            frame, report.kept, schema, cfg, seed
        )
    return report
