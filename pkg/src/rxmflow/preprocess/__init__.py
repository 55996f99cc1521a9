from .features import FeatureReport, analyze_features
from .plan import ColumnDirective, PreprocessPlan, decide_tools, simplified_backup_plan
from .pipeline import FittedPipeline, apply_pipeline, fit_pipeline
from .schema import SchemaMap, discover_schema

__all__ = [
    "SchemaMap",
    "discover_schema",
    "FeatureReport",
    "analyze_features",
    "PreprocessPlan",
    "ColumnDirective",
    "decide_tools",
    "simplified_backup_plan",
    "FittedPipeline",
    "fit_pipeline",
    "apply_pipeline",
]
