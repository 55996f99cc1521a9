"""Model selection, training, evaluation, and the adaptive retry loop.

Candidate families and hyperparameters:

  classification: random_forest_clf (n_estimators = min(100, max(10,
                  n_samples // 10))), logistic_regression (max_iter = 1000),
                  svm_rbf_clf (rbf kernel, C = 1.0)
  regression:     linear_regression, ridge (alpha = 1.0), lasso (alpha =
                  1.0), random_forest_reg (n_estimators = 100), svr_rbf
                  (rbf kernel, C = 1.0)
  anomaly:        isolation_forest (n_estimators = 200, contamination
                  "auto" or an explicit fraction)

SVM and SVR are desk-scale models (full kernel matrix) and are skipped
above 2000 samples; the skip is logged. Training failures become a status
on the result rather than an exception so the caller can move on to the
next candidate. The adaptive loop triggers only when the first result is
strictly below threshold (accuracy < 0.6 or R^2 < 0.1).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import AllModelsFailedError, ClassTooSmallError, TooFewSamplesError
from .models import (
    SVC, SVR, IsolationForest, Lasso, LinearRegression, LogisticRegression,
    RandomForestClassifier, RandomForestRegressor, Ridge,
)
from .models.metrics import (
    accuracy_score, classification_report, macro_averages,
    mean_squared_error, r2_score,
)
from .optimize import TargetStats
from .perception import CATEGORICAL, CONSTANT, DatasetMetadata
from .preprocess.schema import SchemaMap

logger = logging.getLogger(__name__)

CLASSIFICATION = "classification"
REGRESSION = "regression"
ANOMALY = "anomaly_detection"

STATUS_OK = "ok"
STATUS_FAILED = "training_failed"

SVM_MAX_SAMPLES = 2000

FAMILY_DISPLAY = {
    "random_forest_clf": "RandomForestClassifier",
    "logistic_regression": "LogisticRegression",
    "svm_rbf_clf": "SVC",
    "random_forest_reg": "RandomForestRegressor",
    "linear_regression": "LinearRegression",
    "ridge": "Ridge",
    "lasso": "Lasso",
    "svr_rbf": "SVR",
    "isolation_forest": "IsolationForest",
}


@dataclass(frozen=True)
class ModelSpec:
    family: str
    hyperparameters: dict = field(default_factory=dict)
    seed: int = 0

    @property
    def display_name(self) -> str:
        return FAMILY_DISPLAY.get(self.family, self.family)


@dataclass
class Metrics:
    accuracy: float | None = None
    macro_precision: float | None = None
    macro_recall: float | None = None
    macro_f1: float | None = None
    per_class: dict | None = None
    r2: float | None = None
    mse: float | None = None
    anomaly_count: int | None = None
    anomaly_scores: np.ndarray | None = None

    def primary(self, task: str) -> float | None:
        if task == CLASSIFICATION:
            return self.accuracy
        if task == REGRESSION:
            return self.r2
        return None

    def primary_name(self, task: str) -> str:
        return {CLASSIFICATION: "accuracy", REGRESSION: "r2"}.get(task, "anomaly_count")


@dataclass
class ModelResult:
    spec: ModelSpec
    status: str
    metrics: Metrics | None = None
    feature_importances: dict[str, float] | None = None
    test_predictions: list | None = None
    prediction_confidence: list[float] | None = None
    anomaly_flags: np.ndarray | None = None
    train_target_stats: TargetStats | None = None
    error: str | None = None


@dataclass
class AdaptiveSearchLog:
    trigger_reason: str
    attempts: list[ModelResult]
    best_index: int
    primary_metric_name: str


def infer_task(schema: SchemaMap, metadata: DatasetMetadata, override: str | None = None) -> str:
    """Override wins; else a categorical or low-cardinality target means
    classification, a numeric target regression, no target anomaly detection."""
    if override:
        return override
    target = schema.chosen_target
    if target is None:
        return ANOMALY
    profile = metadata.profile(target)
    if profile.inferred_dtype in (CATEGORICAL, CONSTANT):
        return CLASSIFICATION
    if profile.unique_count <= 20:
        return CLASSIFICATION
    return REGRESSION


def select_candidates(task: str, n_samples: int, seed: int = 0,
                      contamination="auto") -> list[ModelSpec]:
    if n_samples < 10:
        raise TooFewSamplesError(f"{n_samples} samples; need at least 10")
    if task == CLASSIFICATION:
        specs = [
            ModelSpec("random_forest_clf",
                      {"n_estimators": min(100, max(10, n_samples // 10))}, seed),
            ModelSpec("logistic_regression", {"max_iter": 1000}, seed),
            ModelSpec("svm_rbf_clf", {"kernel": "rbf", "C": 1.0}, seed),
        ]
    elif task == REGRESSION:
        specs = [
            ModelSpec("linear_regression", {}, seed),
            ModelSpec("ridge", {"alpha": 1.0}, seed),
            ModelSpec("lasso", {"alpha": 1.0}, seed),
            ModelSpec("random_forest_reg", {"n_estimators": 100}, seed),
            ModelSpec("svr_rbf", {"kernel": "rbf", "C": 1.0}, seed),
        ]
    else:
        specs = [
            ModelSpec("isolation_forest",
                      {"n_estimators": 200, "contamination": contamination}, seed),
        ]
    if n_samples > SVM_MAX_SAMPLES:
        kept = [s for s in specs if s.family not in ("svm_rbf_clf", "svr_rbf")]
        if len(kept) != len(specs):
            logger.info(
                "skipping SVM/SVR candidates at n=%d (desk-scale limit %d)",
                n_samples, SVM_MAX_SAMPLES,
            )
        specs = kept
    return specs


def split_train_test(n_rows: int, task: str, target_values=None,
                     ratio: float = 0.8, seed: int = 0):
    """Deterministic 80/20-style split; stratified for classification."""
    if not 0.0 < ratio < 1.0:
        raise ValueError("ratio must be in (0, 1)")
    rng = np.random.default_rng(seed)
    if task != CLASSIFICATION or target_values is None:
        order = rng.permutation(n_rows)
        n_test = int(round(n_rows * (1.0 - ratio)))
        test = np.sort(order[:n_test])
        train = np.sort(order[n_test:])
        return train, test

    labels = [str(v) for v in target_values]
    classes = sorted(set(labels))
    by_class = {c: [i for i, v in enumerate(labels) if v == c] for c in classes}
    for c, members in by_class.items():
        if len(members) < 2:
            raise ClassTooSmallError(
                f"class {c!r} has {len(members)} member(s); need at least 2"
            )
    train_idx: list[int] = []
    test_idx: list[int] = []
    for c in classes:
        members = np.array(by_class[c])
        rng.shuffle(members)
        n_test = int(round(len(members) * (1.0 - ratio)))
        n_test = min(n_test, len(members) - 1)   # at least one train member
        test_idx.extend(members[:n_test].tolist())
        train_idx.extend(members[n_test:].tolist())
    return np.array(sorted(train_idx)), np.array(sorted(test_idx))


def _build_model(spec: ModelSpec):
    hp = spec.hyperparameters
    family = spec.family
    if family == "random_forest_clf":
        return RandomForestClassifier(
            n_estimators=hp.get("n_estimators", 100), seed=spec.seed
        )
    if family == "logistic_regression":
        return LogisticRegression(max_iter=hp.get("max_iter", 1000))
    if family == "svm_rbf_clf":
        return SVC(C=hp.get("C", 1.0), seed=spec.seed)
    if family == "random_forest_reg":
        return RandomForestRegressor(
            n_estimators=hp.get("n_estimators", 100), seed=spec.seed
        )
    if family == "linear_regression":
        return LinearRegression()
    if family == "ridge":
        return Ridge(alpha=hp.get("alpha", 1.0))
    if family == "lasso":
        return Lasso(alpha=hp.get("alpha", 1.0))
    if family == "svr_rbf":
        return SVR(C=hp.get("C", 1.0), seed=spec.seed)
    if family == "isolation_forest":
        return IsolationForest(
            n_estimators=hp.get("n_estimators", 200),
            contamination=hp.get("contamination", "auto"),
            seed=spec.seed,
        )
    raise ValueError(f"unknown model family {family!r}")


def _importances(model, feature_names, X_train) -> dict[str, float] | None:
    if hasattr(model, "feature_importances_"):
        return dict(zip(feature_names, model.feature_importances_.tolist()))
    if hasattr(model, "coef_"):
        coef = np.atleast_2d(np.asarray(model.coef_, dtype=float))
        weights = np.abs(coef).mean(axis=0) * X_train.std(axis=0)
        total = weights.sum()
        if total > 0:
            weights = weights / total
        else:
            weights = np.full(len(feature_names), 1.0 / len(feature_names))
        return dict(zip(feature_names, weights.tolist()))
    return None


def fit_predict_evaluate(
    X_train, y_train, X_test, y_test,
    spec: ModelSpec, task: str,
    feature_names: list[str] | None = None,
) -> ModelResult:
    """Train one candidate and score it on the test rows.

    Never raises on a training problem; the failure is captured on the
    result so the caller can trigger the next candidate. For anomaly
    detection pass the full matrix as both train and test: the forest fits
    on it and scores every row.
    """
    feature_names = feature_names or [
        f"f{i}" for i in range(np.asarray(X_train).shape[1])
    ]
    try:
        if np.asarray(X_train).shape[0] == 0 or np.asarray(X_test).shape[0] == 0:
            raise ValueError("empty train or test matrix")
        model = _build_model(spec)
        if task == CLASSIFICATION:
            labels = np.array([str(v) for v in y_train])
            model.fit(X_train, labels)
            predictions = model.predict(X_test)
            truth = [str(v) for v in y_test]
            report = classification_report(truth, predictions.tolist())
            precision, recall, f1 = macro_averages(report)
            metrics = Metrics(
                accuracy=accuracy_score(truth, predictions.tolist()),
                macro_precision=precision,
                macro_recall=recall,
                macro_f1=f1,
                per_class=report,
            )
            confidence = None
            if hasattr(model, "predict_proba"):
                proba = model.predict_proba(X_test)
                confidence = proba.max(axis=1).tolist()
            return ModelResult(
                spec=spec,
                status=STATUS_OK,
                metrics=metrics,
                feature_importances=_importances(model, feature_names, np.asarray(X_train, dtype=float)),
                test_predictions=predictions.tolist(),
                prediction_confidence=confidence,
            )
        if task == REGRESSION:
            y_tr = np.asarray(y_train, dtype=float)
            model.fit(X_train, y_tr)
            predictions = np.asarray(model.predict(X_test), dtype=float)
            y_te = np.asarray(y_test, dtype=float)
            metrics = Metrics(
                r2=r2_score(y_te, predictions),
                mse=mean_squared_error(y_te, predictions),
            )
            return ModelResult(
                spec=spec,
                status=STATUS_OK,
                metrics=metrics,
                feature_importances=_importances(model, feature_names, np.asarray(X_train, dtype=float)),
                test_predictions=predictions.tolist(),
                train_target_stats=TargetStats(
                    mean=float(y_tr.mean()), std=float(y_tr.std()), n=len(y_tr),
                ),
            )
        # anomaly detection: score all rows, flag by the contamination rule
        model.fit(X_train)
        scores = model.score_samples(X_test)
        flags = model.flag(scores)
        metrics = Metrics(anomaly_count=int(flags.sum()), anomaly_scores=scores)
        return ModelResult(
            spec=spec,
            status=STATUS_OK,
            metrics=metrics,
            test_predictions=scores.tolist(),
            anomaly_flags=flags,
        )
    except Exception as exc:      # captured, never propagated
        logger.warning("training failed for %s: %s", spec.family, exc)
        return ModelResult(spec=spec, status=STATUS_FAILED, error=str(exc))


def adaptive_search(
    X_train, y_train, X_test, y_test,
    task: str,
    first_result: ModelResult,
    candidates: list[ModelSpec],
    min_accuracy: float = 0.6,
    min_r2: float = 0.1,
    feature_names: list[str] | None = None,
    trainer=None,
) -> AdaptiveSearchLog:
    """Explore the remaining candidates when the first misses the trigger.

    Boundaries are strict: accuracy exactly 0.6 or R^2 exactly 0.1 do not
    trigger exploration. `trainer` exists so tests can script metric
    sequences; it defaults to fit_predict_evaluate.
    """
    trainer = trainer or (
        lambda spec: fit_predict_evaluate(
            X_train, y_train, X_test, y_test, spec, task,
            feature_names=feature_names,
        )
    )
    primary_name = (first_result.metrics or Metrics()).primary_name(task)
    if task not in (CLASSIFICATION, REGRESSION):
        return AdaptiveSearchLog(
            trigger_reason="single-family task; no exploration",
            attempts=[first_result],
            best_index=0,
            primary_metric_name=primary_name,
        )

    def primary(result: ModelResult) -> float | None:
        if result.status != STATUS_OK or result.metrics is None:
            return None
        return result.metrics.primary(task)

    first_metric = primary(first_result)
    triggered = first_result.status != STATUS_OK or first_metric is None or (
        task == CLASSIFICATION and first_metric < min_accuracy
    ) or (
        task == REGRESSION and first_metric < min_r2
    )

    if not triggered:
        return AdaptiveSearchLog(
            trigger_reason="first model met the performance threshold",
            attempts=[first_result],
            best_index=0,
            primary_metric_name=primary_name,
        )

    threshold = min_accuracy if task == CLASSIFICATION else min_r2
    reason = (
        f"{primary_name}={first_metric:.4f} below {threshold}"
        if first_metric is not None
        else "first model failed to train"
    )
    attempts = [first_result]
    for spec in candidates:
        attempts.append(trainer(spec))

    scored = [
        (i, primary(result)) for i, result in enumerate(attempts)
        if primary(result) is not None
    ]
    if not scored:
        raise AllModelsFailedError("every candidate failed to train")
    best_index = max(scored, key=lambda pair: (pair[1], -pair[0]))[0]
    return AdaptiveSearchLog(
        trigger_reason=reason,
        attempts=attempts,
        best_index=best_index,
        primary_metric_name=primary_name,
    )
