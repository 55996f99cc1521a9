"""Leakage-safe transform pipeline.

Every fitted statistic (medians, modes, scaler parameters, vocabularies,
target means, knn neighbor store) is computed from the training rows only;
apply_pipeline then transforms any row subset with those frozen statistics.
The target column never enters the feature matrix and identifier columns
are passed through on a separate channel.

Conventions worth pinning down:
  - standard scaling stores (mean, population std); robust scaling stores
    (median, IQR = Q3 - Q1) with linear-interpolation quantiles
  - a zero-spread column keeps spread 1 and is flagged degenerate
  - one-hot vocabularies are the sorted training categories; unseen test
    categories produce an all-zero block
  - target encoding stores per-category training-target means plus the
    global training mean for unseen categories; a categorical target is
    first mapped to integer codes by sorted class order
  - knn imputation searches the 3 nearest training rows that have the value
    present, with Euclidean distance over standard-scaled numeric features,
    coordinates missing on either side excluded; numeric columns impute the
    neighbor mean, categorical columns the neighbor mode
  - a missing cell under imputation "none" still falls back to the fitted
    train median/mode so the matrix stays finite
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import EmptyTrainSetError, MissingColumnError
from ..perception import DatasetFrame
from .plan import (
    ENCODE_DROP, ENCODE_ONE_HOT, ENCODE_PASSTHROUGH, ENCODE_TARGET,
    IMPUTE_KNN, IMPUTE_MEDIAN, IMPUTE_MOST_FREQUENT, IMPUTE_NONE,
    SCALE_ROBUST, SCALE_STANDARD, PreprocessPlan,
)
from .schema import FEATURE_NUMERIC, SchemaMap


def _category_key(cell) -> str:
    if isinstance(cell, float):
        return "%g" % cell
    return str(cell)


def _mode(values: list[str]) -> str:
    counts: dict[str, int] = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    return min(counts, key=lambda v: (-counts[v], v)) if counts else ""


@dataclass
class ColumnFit:
    name: str
    numeric: bool
    imputation: str
    scaling: str
    encoding: str
    knn_neighbors: int = 0
    impute_value: object = None          # train median (numeric) or mode (categorical)
    center: float | None = None
    spread: float | None = None
    degenerate: bool = False
    vocabulary: list[str] | None = None
    target_means: dict[str, float] | None = None
    global_target_mean: float | None = None

    def fitted_json(self) -> dict:
        out: dict = {"impute_value": self.impute_value}
        if self.center is not None:
            out["center"] = self.center
            out["spread"] = self.spread
            out["degenerate"] = self.degenerate
        if self.vocabulary is not None:
            out["vocabulary"] = self.vocabulary
        if self.target_means is not None:
            out["target_means"] = self.target_means
            out["global_target_mean"] = self.global_target_mean
        return out


@dataclass
class FittedPipeline:
    column_fits: list[ColumnFit]
    identifier_columns: list[str]
    feature_names: list[str]
    target_name: str | None
    knn_numeric_columns: list[str] = field(default_factory=list)
    knn_scale_params: list[tuple[float, float]] = field(default_factory=list)
    knn_train_scaled: np.ndarray | None = None
    knn_raw: dict[str, tuple[np.ndarray, np.ndarray]] = field(default_factory=dict)
    degenerate_columns: list[str] = field(default_factory=list)

    def fitted_json(self) -> dict:
        return {fit.name: fit.fitted_json() for fit in self.column_fits}


def _numeric_cells(cells, rows):
    values = []
    mask = np.zeros(len(rows), dtype=bool)
    for k, i in enumerate(rows):
        cell = cells[i]
        if isinstance(cell, float):
            values.append(cell)
            mask[k] = True
    return np.asarray(values, dtype=float), mask


def fit_pipeline(
    frame: DatasetFrame,
    plan: PreprocessPlan,
    schema: SchemaMap,
    train_row_indices,
) -> FittedPipeline:
    train = sorted(train_row_indices)
    if not train:
        raise EmptyTrainSetError("cannot fit a pipeline on zero training rows")
    if max(train) >= frame.n_rows or min(train) < 0:
        raise EmptyTrainSetError("train indices outside the frame")

    target = schema.chosen_target
    target_codes = _target_codes(frame, target, train) if target else None

    fits: list[ColumnFit] = []
    feature_names: list[str] = []
    degenerate: list[str] = []
    knn_needed = False

    for name in frame.column_names:
        directive = plan.directives.get(name)
        if directive is None or directive.encoding in (ENCODE_DROP,):
            continue
        if directive.encoding == ENCODE_PASSTHROUGH and schema.roles.get(name) not in (
            FEATURE_NUMERIC,
        ):
            continue        # identifiers travel on their own channel
        cells = frame.column(name)
        numeric = schema.roles.get(name) == FEATURE_NUMERIC
        fit = ColumnFit(
            name=name,
            numeric=numeric,
            imputation=directive.imputation,
            scaling=directive.scaling,
            encoding=directive.encoding,
            knn_neighbors=directive.knn_neighbors,
        )
        if directive.imputation == IMPUTE_KNN:
            knn_needed = True
        if numeric:
            values, _ = _numeric_cells(cells, train)
            if values.size:
                fit.impute_value = float(np.median(values))
            else:
                fit.impute_value = 0.0
                fit.degenerate = True
            if directive.scaling == SCALE_STANDARD:
                fit.center = float(values.mean()) if values.size else 0.0
                fit.spread = float(values.std()) if values.size else 0.0
            elif directive.scaling == SCALE_ROBUST:
                if values.size:
                    q1, q3 = np.quantile(values, [0.25, 0.75])
                    fit.center = float(np.median(values))
                    fit.spread = float(q3 - q1)
                else:
                    fit.center, fit.spread = 0.0, 0.0
            if fit.center is not None and fit.spread == 0.0:
                fit.spread = 1.0
                fit.degenerate = True
            if fit.degenerate:
                degenerate.append(name)
            feature_names.append(name)
        else:
            keys = [
                _category_key(cells[i]) for i in train if cells[i] is not None
            ]
            fit.impute_value = _mode(keys)
            if directive.encoding == ENCODE_ONE_HOT:
                fit.vocabulary = sorted(set(keys))
                feature_names.extend(f"{name}={cat}" for cat in fit.vocabulary)
            elif directive.encoding == ENCODE_TARGET:
                means: dict[str, list[float]] = {}
                total: list[float] = []
                for i in train:
                    if cells[i] is None or target_codes is None:
                        continue
                    code = target_codes.get(i)
                    if code is None:
                        continue
                    means.setdefault(_category_key(cells[i]), []).append(code)
                    total.append(code)
                fit.target_means = {
                    k: float(np.mean(v)) for k, v in sorted(means.items())
                }
                fit.global_target_mean = float(np.mean(total)) if total else 0.0
                feature_names.append(name)
        fits.append(fit)

    pipeline = FittedPipeline(
        column_fits=fits,
        identifier_columns=list(schema.identifier_columns()),
        feature_names=feature_names,
        target_name=target,
        degenerate_columns=degenerate,
    )

    if knn_needed:
        _fit_knn_store(pipeline, frame, schema, plan, train)
    return pipeline


def _target_codes(frame, target, train) -> dict[int, float]:
    """Per-row numeric target values; categorical classes become their
    sorted-order integer codes."""
    cells = frame.column(target)
    numeric = all(isinstance(c, float) for c in cells if c is not None)
    if numeric:
        return {
            i: float(cells[i]) for i in train if isinstance(cells[i], float)
        }
    classes = sorted({
        _category_key(cells[i]) for i in train if cells[i] is not None
    })
    code = {c: float(k) for k, c in enumerate(classes)}
    return {
        i: code[_category_key(cells[i])] for i in train if cells[i] is not None
    }


def _fit_knn_store(pipeline, frame, schema, plan, train):
    numeric_cols = [
        name for name in frame.column_names
        if schema.roles.get(name) == FEATURE_NUMERIC
        and plan.directives.get(name) is not None
        and plan.directives[name].encoding != ENCODE_DROP
    ]
    params = []
    scaled = np.full((len(train), len(numeric_cols)), np.nan)
    for j, name in enumerate(numeric_cols):
        values, mask = _numeric_cells(frame.column(name), train)
        mean = float(values.mean()) if values.size else 0.0
        std = float(values.std()) if values.size else 0.0
        if std == 0.0:
            std = 1.0
        params.append((mean, std))
        scaled[mask, j] = (values - mean) / std
    pipeline.knn_numeric_columns = numeric_cols
    pipeline.knn_scale_params = params
    pipeline.knn_train_scaled = scaled

    for fit in pipeline.column_fits:
        if fit.imputation != IMPUTE_KNN:
            continue
        cells = frame.column(fit.name)
        if fit.numeric:
            raw = np.array([
                cells[i] if isinstance(cells[i], float) else np.nan for i in train
            ])
            mask = ~np.isnan(raw)
        else:
            raw = np.array([
                _category_key(cells[i]) if cells[i] is not None else ""
                for i in train
            ], dtype=object)
            mask = np.array([cells[i] is not None for i in train])
        pipeline.knn_raw[fit.name] = (raw, mask)


def _scaled_query_coords(pipeline, frame, rows):
    coords = np.full((len(rows), len(pipeline.knn_numeric_columns)), np.nan)
    for j, name in enumerate(pipeline.knn_numeric_columns):
        mean, std = pipeline.knn_scale_params[j]
        cells = frame.column(name)
        for k, i in enumerate(rows):
            cell = cells[i]
            if isinstance(cell, float):
                coords[k, j] = (cell - mean) / std
    return coords


def _knn_lookup(pipeline, fit, query_coords):
    """Impute one value from the nearest training rows with it present."""
    raw, mask = pipeline.knn_raw[fit.name]
    candidates = np.nonzero(mask)[0]
    if candidates.size == 0:
        return fit.impute_value
    store = pipeline.knn_train_scaled[candidates]
    shared = ~np.isnan(query_coords)[None, :] & ~np.isnan(store)
    diff = np.where(shared, store - query_coords[None, :], 0.0)
    d2 = (diff * diff).sum(axis=1)
    usable = shared.any(axis=1)
    if not usable.any():
        return fit.impute_value
    d2 = np.where(usable, d2, np.inf)
    order = np.lexsort((candidates, d2))
    k = min(fit.knn_neighbors or 3, int(usable.sum()))
    chosen = candidates[order[:k]]
    if fit.numeric:
        return float(np.mean(raw[chosen].astype(float)))
    return _mode([str(v) for v in raw[chosen]])


def apply_pipeline(pipeline: FittedPipeline, frame: DatasetFrame, row_indices):
    """Transform rows with the frozen statistics.

    Returns (feature_matrix, identifiers, target_values) where identifiers
    maps each identifier column to its per-row verbatim values and
    target_values is None when the pipeline has no target.
    """
    rows = list(row_indices)
    missing_cols = [
        fit.name for fit in pipeline.column_fits
        if fit.name not in frame.column_names
    ]
    if missing_cols:
        raise MissingColumnError(
            "frame lacks fitted columns: " + ", ".join(missing_cols)
        )

    need_knn = any(fit.imputation == IMPUTE_KNN for fit in pipeline.column_fits)
    query_coords = (
        _scaled_query_coords(pipeline, frame, rows) if need_knn else None
    )

    blocks: list[np.ndarray] = []
    for fit in pipeline.column_fits:
        cells = frame.column(fit.name)
        if fit.numeric:
            column = np.empty(len(rows))
            for k, i in enumerate(rows):
                cell = cells[i]
                if isinstance(cell, float):
                    value = cell
                elif fit.imputation == IMPUTE_KNN:
                    value = _knn_lookup(pipeline, fit, query_coords[k])
                else:
                    value = fit.impute_value
                column[k] = value
            if fit.center is not None:
                column = (column - fit.center) / fit.spread
            blocks.append(column[:, None])
        elif fit.encoding == ENCODE_ONE_HOT:
            block = np.zeros((len(rows), len(fit.vocabulary)))
            index = {cat: j for j, cat in enumerate(fit.vocabulary)}
            for k, i in enumerate(rows):
                key = _imputed_key(pipeline, fit, cells[i], query_coords, k)
                j = index.get(key)
                if j is not None:
                    block[k, j] = 1.0
            blocks.append(block)
        elif fit.encoding == ENCODE_TARGET:
            column = np.empty(len(rows))
            for k, i in enumerate(rows):
                key = _imputed_key(pipeline, fit, cells[i], query_coords, k)
                if key is None:
                    column[k] = fit.global_target_mean
                else:
                    column[k] = fit.target_means.get(key, fit.global_target_mean)
            blocks.append(column[:, None])

    if blocks:
        matrix = np.hstack(blocks)
    else:
        matrix = np.zeros((len(rows), 0))

    identifiers = {
        name: [_category_key(frame.column(name)[i]) if frame.column(name)[i] is not None else ""
               for i in rows]
        for name in pipeline.identifier_columns
        if name in frame.column_names
    }

    target_values = None
    if pipeline.target_name and pipeline.target_name in frame.column_names:
        cells = frame.column(pipeline.target_name)
        target_values = [cells[i] for i in rows]

    return matrix, identifiers, target_values


def _imputed_key(pipeline, fit, cell, query_coords, k):
    if cell is not None:
        return _category_key(cell)
    if fit.imputation == IMPUTE_KNN:
        return _knn_lookup(pipeline, fit, query_coords[k])
    if fit.imputation in (IMPUTE_MOST_FREQUENT, IMPUTE_MEDIAN):
        return fit.impute_value
    if fit.imputation == IMPUTE_NONE and fit.encoding == ENCODE_TARGET:
        return None          # falls back to the global training mean
    if fit.imputation == IMPUTE_NONE and fit.encoding == ENCODE_ONE_HOT:
        return "\x00unseen"  # all-zero block
    return fit.impute_value
