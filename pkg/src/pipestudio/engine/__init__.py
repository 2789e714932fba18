from .tables import (
    CATEGORICAL,
    Column,
    Dataset,
    NUMERIC,
    Table,
    TableError,
    list_datasets,
    load_csv,
    load_dataset,
    preview,
    table_to_json,
    with_features,
)
from .transforms import EngineError
from .predictors import fit_predictor, score
from .run import (
    PREVIEW_ROWS,
    RunResult,
    apply_transform_step,
    fit_transform_step,
    run_pipeline,
)

__all__ = [
    "CATEGORICAL",
    "Column",
    "Dataset",
    "EngineError",
    "NUMERIC",
    "PREVIEW_ROWS",
    "RunResult",
    "Table",
    "TableError",
    "apply_transform_step",
    "fit_predictor",
    "fit_transform_step",
    "list_datasets",
    "load_csv",
    "load_dataset",
    "preview",
    "run_pipeline",
    "score",
    "table_to_json",
    "with_features",
]
