"""Pipeline execution: fit transformers on train, preview, fit/score predictor.

run_pipeline never raises for operator-level failures; everything surfaces as
diagnostics inside the RunResult so the caller can keep the liveness loop
going.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..dsl import Diagnostic, ERROR, Invocation, PipelineAst, validate_pipeline
from ..registry import Registry
from .tables import Dataset, Table, preview, table_to_json, with_features
from .predictors import PREDICTORS, fit_predictor, score
from .transforms import (
    EngineError,
    Imputer,
    MinMaxScalerOp,
    NormalizerOp,
    OneHotEncoderOp,
    OrdinalEncoderOp,
    PcaOp,
    StandardScalerOp,
)

PREVIEW_ROWS = 50

TRANSFORMERS = {
    "SimpleImputer": Imputer,
    "StandardScaler": StandardScalerOp,
    "MinMaxScaler": MinMaxScalerOp,
    "Normalizer": NormalizerOp,
    "OneHotEncoder": OneHotEncoderOp,
    "OrdinalEncoder": OrdinalEncoderOp,
    "PCA": PcaOp,
}


@dataclass
class RunResult:
    before: Table
    after: Table
    score: float | None = None
    diagnostics: list[Diagnostic] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "before": table_to_json(self.before),
            "after": table_to_json(self.after),
            "score": self.score,
            "diagnostics": [d.to_json() for d in self.diagnostics],
        }


def concrete_params(invocation: Invocation, registry: Registry) -> dict:
    """Schema defaults overlaid with the invocation's literal arguments.

    The caller must have validated the invocation: MASK or non-literal values
    here are a programming error, not a diagnostic.
    """
    spec = registry.lookup(invocation.operator)
    if spec is None:
        raise EngineError("unknown-operator", f"unknown operator {invocation.operator!r}")
    params = {p.name: p.default for p in spec.hyperparams}
    for arg in invocation.args:
        params[arg.name] = arg.value.literal()
    return params


def fit_transform_step(invocation: Invocation, table: Table, registry: Registry):
    """Fit one transformer on a table and return (fitted step, transformed).

    The table's target column (when designated) passes through untouched.
    """
    spec = registry.lookup(invocation.operator)
    if spec is None:
        raise EngineError("unknown-operator", f"unknown operator {invocation.operator!r}")
    if not spec.executable or invocation.operator not in TRANSFORMERS:
        raise EngineError("not-executable", f"{invocation.operator} is not an executable transformer")
    step = TRANSFORMERS[invocation.operator](**concrete_params(invocation, registry))
    features = table.features_only() if table.target else table
    transformed = step.fit(features)
    return step, with_features(table, transformed)


def apply_transform_step(step, table: Table) -> Table:
    """Apply an already-fitted transformer without refitting."""
    features = table.features_only() if table.target else table
    return with_features(table, step.transform(features))


def run_pipeline(dataset: Dataset, ast: PipelineAst, registry: Registry,
                 seed: int = 0, preview_rows: int = PREVIEW_ROWS) -> RunResult:
    """Execute a pipeline on a dataset, deterministically for a fixed seed.

    Fits transformers in order on the train table, previews the transformed
    train data, then fits and scores the trailing predictor (if any) against
    the test table. Operator failures become diagnostics, never exceptions.
    """
    before = preview(dataset.train, preview_rows)
    diagnostics = validate_pipeline(ast, registry)
    if any(d.severity == ERROR for d in diagnostics):
        return RunResult(before, before, None, diagnostics)

    steps = list(ast.steps)
    predictor_inv = None
    if steps and registry.lookup(steps[-1].operator).kind == "predictor":
        predictor_inv = steps.pop()

    train = dataset.train
    fitted = []
    for i, invocation in enumerate(steps):
        try:
            step, train = fit_transform_step(invocation, train, registry)
        except EngineError as exc:
            diagnostics.append(Diagnostic(ERROR, exc.code, str(exc), step=i))
            return RunResult(before, preview(train, preview_rows), None, diagnostics)
        fitted.append(step)

    after = preview(train, preview_rows)
    result_score = None
    if predictor_inv is not None:
        step_index = len(steps)
        try:
            params = concrete_params(predictor_inv, registry)
            if predictor_inv.operator not in PREDICTORS:
                raise EngineError("not-executable", f"{predictor_inv.operator} is not an executable predictor")
            model = fit_predictor(
                predictor_inv.operator, params,
                train.features_only(), train.column_values(train.target), seed=seed,
            )
            test = dataset.test
            for step in fitted:
                test = apply_transform_step(step, test)
            result_score = score(model, test.features_only(), test.column_values(test.target))
        except EngineError as exc:
            diagnostics.append(Diagnostic(ERROR, exc.code, str(exc), step=step_index))
            return RunResult(before, after, None, diagnostics)
    return RunResult(before, after, result_score, diagnostics)
