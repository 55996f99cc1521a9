"""Column-role discovery from name patterns, uniqueness, and date parsing.

Role precedence per column: identifier, then timestamp, then target
candidate, then feature by dtype. Non-chosen target candidates stay out of
the feature set on purpose: a sibling label column (say a failure
probability next to a priority label) would leak the outcome into the
model.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..config import PatternConfig
from ..errors import AmbiguousTargetError
from ..perception import (
    CATEGORICAL, CONSTANT, DATETIME, NUMERIC,
    DatasetFrame, DatasetMetadata, _parse_datetime,
)

IDENTIFIER = "identifier"
TIMESTAMP = "timestamp"
TARGET_CANDIDATE = "target_candidate"
FEATURE_NUMERIC = "feature_numeric"
FEATURE_CATEGORICAL = "feature_categorical"


@dataclass
class SchemaMap:
    roles: dict[str, str]
    chosen_target: str | None = None
    evidence: dict[str, str] = field(default_factory=dict)

    def feature_columns(self) -> list[str]:
        return [
            c for c, r in self.roles.items()
            if r in (FEATURE_NUMERIC, FEATURE_CATEGORICAL)
        ]

    def identifier_columns(self) -> list[str]:
        return [c for c, r in self.roles.items() if r == IDENTIFIER]


def _normalize(name: str) -> str:
    return name.strip().lower().replace(" ", "_")


def _tokens(name: str) -> list[str]:
    return [t for t in re.split(r"[_\W]+", _normalize(name)) if t]


def _matches_identifier(name: str, cfg: PatternConfig) -> str | None:
    normalized = _normalize(name)
    for pattern in cfg.identifier_patterns:
        if re.search(pattern, normalized):
            return pattern
    return None


def _matches_timestamp(name: str, cfg: PatternConfig) -> str | None:
    for token in _tokens(name):
        for prefix in cfg.timestamp_tokens:
            if token.startswith(prefix):
                return prefix
    return None


def _matches_target(name: str, cfg: PatternConfig) -> str | None:
    normalized = _normalize(name)
    for token in cfg.target_tokens:
        if token in normalized:
            return token
    return None


def discover_schema(
    frame: DatasetFrame,
    metadata: DatasetMetadata,
    target_hint: str | None = None,
    cfg: PatternConfig | None = None,
) -> SchemaMap:
    """Assign a role to every column and resolve the prediction target.

    Raises AmbiguousTargetError when several target candidates exist and no
    hint disambiguates; the exception carries the candidates in column order
    so callers can fall back to the last one or ask a human.
    """
    cfg = cfg or PatternConfig()
    if target_hint is not None and target_hint not in frame.column_names:
        raise KeyError(f"target hint {target_hint!r} is not a column")

    roles: dict[str, str] = {}
    evidence: dict[str, str] = {}
    candidates: list[str] = []

    for name in frame.column_names:
        profile = metadata.profile(name)
        id_pattern = _matches_identifier(name, cfg)
        unique_id = (
            profile.uniqueness_ratio >= cfg.identifier_uniqueness_cutoff
            and (
                profile.inferred_dtype == CATEGORICAL
                or (profile.inferred_dtype == NUMERIC and profile.integer_valued)
            )
        )
        ts_pattern = _matches_timestamp(name, cfg)
        target_pattern = _matches_target(name, cfg)

        if id_pattern:
            roles[name] = IDENTIFIER
            evidence[name] = f"name matches identifier pattern {id_pattern!r}"
        elif unique_id:
            roles[name] = IDENTIFIER
            evidence[name] = (
                f"uniqueness ratio {profile.uniqueness_ratio:.2f} with "
                f"{'integer' if profile.inferred_dtype == NUMERIC else 'categorical'} values"
            )
        elif ts_pattern:
            roles[name] = TIMESTAMP
            evidence[name] = f"name token starts with {ts_pattern!r}"
        elif _mostly_dates(frame.column(name), cfg):
            roles[name] = TIMESTAMP
            evidence[name] = "most non-missing cells parse as dates"
        elif target_pattern:
            roles[name] = TARGET_CANDIDATE
            evidence[name] = f"name contains target token {target_pattern!r}"
            candidates.append(name)
        elif profile.inferred_dtype in (NUMERIC,):
            roles[name] = FEATURE_NUMERIC
            evidence[name] = "numeric values"
        elif profile.inferred_dtype == CONSTANT:
            if profile.mean is not None:
                roles[name] = FEATURE_NUMERIC
            else:
                roles[name] = FEATURE_CATEGORICAL
            evidence[name] = "constant column, kept for the analysis stage to remove"
        elif profile.inferred_dtype == DATETIME:
            roles[name] = TIMESTAMP
            evidence[name] = "cells parse as dates"
        else:
            roles[name] = FEATURE_CATEGORICAL
            evidence[name] = "categorical values"

    chosen: str | None = None
    if target_hint is not None:
        chosen = target_hint
        roles[chosen] = TARGET_CANDIDATE
        evidence[chosen] = "selected by explicit target hint"
    elif len(candidates) == 1:
        chosen = candidates[0]
    elif len(candidates) > 1:
        raise AmbiguousTargetError(candidates)

    return SchemaMap(roles=roles, chosen_target=chosen, evidence=evidence)


def resolve_ambiguous_target(
    frame: DatasetFrame,
    metadata: DatasetMetadata,
    candidates: list[str],
    cfg: PatternConfig | None = None,
) -> SchemaMap:
    """Rule-based fallback: pick the last matching column as the target."""
    return discover_schema(frame, metadata, target_hint=candidates[-1], cfg=cfg)


def _mostly_dates(cells: list, cfg: PatternConfig) -> bool:
    non_missing = [c for c in cells if c is not None]
    if not non_missing:
        return False
    parsed = sum(1 for c in non_missing if isinstance(c, str) and _parse_datetime(c))
    return parsed / len(non_missing) >= cfg.datetime_parse_cutoff
