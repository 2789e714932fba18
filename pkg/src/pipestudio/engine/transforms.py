"""Fitted data transformers: imputation, scaling, encoding, projection.

Each transformer fits on a feature table (no target column) and can then be
applied to schema-compatible tables without refitting. Failures raise
EngineError with a stable code so the runner can surface them as diagnostics.
"""

from __future__ import annotations

import numpy as np

from .tables import CATEGORICAL, NUMERIC, Column, Table


class EngineError(Exception):
    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(message)


def require_no_missing(table: Table, operator: str) -> None:
    if table.has_missing():
        raise EngineError("missing-values", f"missing values reach {operator}")


def require_all_numeric(table: Table, operator: str) -> None:
    for c in table.columns:
        if c.kind != NUMERIC:
            raise EngineError(
                "categorical-input",
                f"{operator} takes numeric columns only; column {c.name!r} is categorical",
            )


def numeric_matrix(table: Table, operator: str) -> np.ndarray:
    require_all_numeric(table, operator)
    require_no_missing(table, operator)
    return np.array([[float(cell) for cell in row] for row in table.rows], dtype=float)


def matrix_table(names: list[str], matrix: np.ndarray) -> Table:
    cols = [Column(n, NUMERIC) for n in names]
    return Table(cols, [list(map(float, row)) for row in matrix])


def check_schema(fitted: list[tuple[str, str]], table: Table, operator: str) -> None:
    if table.schema() != fitted:
        raise EngineError(
            "schema-mismatch",
            f"{operator} was fitted on a different column schema",
        )


class Imputer:
    """SimpleImputer: fill missing cells from a training statistic."""

    def __init__(self, strategy: str = "mean", fill_value: float | None = None):
        self.strategy = strategy
        self.fill_value = fill_value
        self.fills: list[object] = []
        self.schema: list[tuple[str, str]] = []

    def fit(self, table: Table) -> Table:
        if self.strategy in ("mean", "median"):
            require_all_numeric(table, f"SimpleImputer(strategy='{self.strategy}')")
        self.schema = table.schema()
        self.fills = []
        for col in table.columns:
            values = [v for v in table.column_values(col.name) if v is not None]
            self.fills.append(self._fill_for(col, values))
        return self.transform(table)

    def _fill_for(self, col: Column, values: list[object]) -> object:
        if self.strategy == "constant":
            if col.kind == NUMERIC:
                return float(self.fill_value) if self.fill_value is not None else 0.0
            return "missing_value"
        if not values:
            raise EngineError("empty-column", f"column {col.name!r} has no observed values to impute from")
        if self.strategy == "mean":
            return float(np.mean([float(v) for v in values]))
        if self.strategy == "median":
            return float(np.median([float(v) for v in values]))
        if self.strategy == "most_frequent":
            counts: dict[object, int] = {}
            for v in values:  # first-appearance order breaks ties
                counts[v] = counts.get(v, 0) + 1
            return max(counts, key=counts.get)
        raise EngineError("bad-arguments", f"unknown imputation strategy {self.strategy!r}")

    def transform(self, table: Table) -> Table:
        check_schema(self.schema, table, "SimpleImputer")
        rows = [
            [self.fills[j] if cell is None else cell for j, cell in enumerate(row)]
            for row in table.rows
        ]
        return Table(list(table.columns), rows)


class StandardScalerOp:
    """Center to zero mean, scale to unit population standard deviation."""

    def __init__(self, with_mean: bool = True, with_std: bool = True):
        self.with_mean = with_mean
        self.with_std = with_std
        self.means: np.ndarray | None = None
        self.stds: np.ndarray | None = None
        self.names: list[str] = []
        self.schema: list[tuple[str, str]] = []

    def fit(self, table: Table) -> Table:
        X = numeric_matrix(table, "StandardScaler")
        self.schema = table.schema()
        self.names = [c.name for c in table.columns]
        self.means = X.mean(axis=0) if len(X) else np.zeros(len(self.names))
        self.stds = X.std(axis=0) if len(X) else np.ones(len(self.names))  # population std
        return self.transform(table)

    def transform(self, table: Table) -> Table:
        check_schema(self.schema, table, "StandardScaler")
        X = numeric_matrix(table, "StandardScaler")
        out = X.copy()
        if self.with_mean:
            out = out - self.means
        if self.with_std:
            safe = np.where(self.stds == 0.0, 1.0, self.stds)
            out = out / safe
            out[:, self.stds == 0.0] = 0.0  # constant columns map to 0
        return matrix_table(self.names, out)


class MinMaxScalerOp:
    """Rescale each column to the [0, 1] range observed in training."""

    def __init__(self):
        self.mins: np.ndarray | None = None
        self.maxs: np.ndarray | None = None
        self.names: list[str] = []
        self.schema: list[tuple[str, str]] = []

    def fit(self, table: Table) -> Table:
        X = numeric_matrix(table, "MinMaxScaler")
        self.schema = table.schema()
        self.names = [c.name for c in table.columns]
        self.mins = X.min(axis=0) if len(X) else np.zeros(len(self.names))
        self.maxs = X.max(axis=0) if len(X) else np.ones(len(self.names))
        return self.transform(table)

    def transform(self, table: Table) -> Table:
        check_schema(self.schema, table, "MinMaxScaler")
        X = numeric_matrix(table, "MinMaxScaler")
        span = self.maxs - self.mins
        safe = np.where(span == 0.0, 1.0, span)
        out = (X - self.mins) / safe
        out[:, span == 0.0] = 0.0  # constant columns map to 0
        return matrix_table(self.names, out)


class NormalizerOp:
    """Scale each row to unit norm; zero rows stay zero."""

    def __init__(self, norm: str = "l2"):
        self.norm = norm
        self.names: list[str] = []
        self.schema: list[tuple[str, str]] = []

    def fit(self, table: Table) -> Table:
        self.schema = table.schema()
        self.names = [c.name for c in table.columns]
        return self.transform(table)

    def transform(self, table: Table) -> Table:
        check_schema(self.schema, table, "Normalizer")
        X = numeric_matrix(table, "Normalizer")
        if self.norm == "l1":
            norms = np.abs(X).sum(axis=1)
        elif self.norm == "max":
            norms = np.abs(X).max(axis=1) if X.shape[1] else np.zeros(len(X))
        else:
            norms = np.sqrt((X ** 2).sum(axis=1))
        norms = np.where(norms == 0.0, 1.0, norms)
        return matrix_table(self.names, X / norms[:, None])


class OneHotEncoderOp:
    """Expand each categorical column to one 0/1 column per training category.

    Category order is first appearance in the training data; categories unseen
    in training produce an all-zero group at apply time.
    """

    def __init__(self):
        self.vocab: dict[str, list[str]] = {}
        self.schema: list[tuple[str, str]] = []

    def fit(self, table: Table) -> Table:
        require_no_missing(table, "OneHotEncoder")
        self.schema = table.schema()
        self.vocab = {}
        for col in table.columns:
            if col.kind == CATEGORICAL:
                seen: list[str] = []
                for v in table.column_values(col.name):
                    if v not in seen:
                        seen.append(v)
                self.vocab[col.name] = seen
        return self.transform(table)

    def transform(self, table: Table) -> Table:
        check_schema(self.schema, table, "OneHotEncoder")
        require_no_missing(table, "OneHotEncoder")
        out_cols: list[Column] = []
        for col in table.columns:
            if col.kind == CATEGORICAL:
                out_cols.extend(Column(f"{col.name}_{cat}", NUMERIC) for cat in self.vocab[col.name])
            else:
                out_cols.append(col)
        rows = []
        for row in table.rows:
            out_row: list[object] = []
            for j, col in enumerate(table.columns):
                if col.kind == CATEGORICAL:
                    out_row.extend(1.0 if row[j] == cat else 0.0 for cat in self.vocab[col.name])
                else:
                    out_row.append(row[j])
            rows.append(out_row)
        return Table(out_cols, rows)


class OrdinalEncoderOp:
    """Replace categories with 0..|V|-1 codes in first-appearance order."""

    def __init__(self):
        self.codes: dict[str, dict[str, int]] = {}
        self.schema: list[tuple[str, str]] = []

    def fit(self, table: Table) -> Table:
        require_no_missing(table, "OrdinalEncoder")
        self.schema = table.schema()
        self.codes = {}
        for col in table.columns:
            if col.kind == CATEGORICAL:
                mapping: dict[str, int] = {}
                for v in table.column_values(col.name):
                    if v not in mapping:
                        mapping[v] = len(mapping)
                self.codes[col.name] = mapping
        return self.transform(table)

    def transform(self, table: Table) -> Table:
        check_schema(self.schema, table, "OrdinalEncoder")
        require_no_missing(table, "OrdinalEncoder")
        out_cols = [Column(c.name, NUMERIC) for c in table.columns]
        rows = []
        for row in table.rows:
            out_row: list[object] = []
            for j, col in enumerate(table.columns):
                if col.kind == CATEGORICAL:
                    mapping = self.codes[col.name]
                    if row[j] not in mapping:
                        raise EngineError(
                            "unseen-category",
                            f"OrdinalEncoder met unseen category {row[j]!r} in column {col.name!r}",
                        )
                    out_row.append(float(mapping[row[j]]))
                else:
                    out_row.append(row[j])
            rows.append(out_row)
        return Table(out_cols, rows)


class PcaOp:
    """Project centered features onto the top eigenvectors of the covariance.

    Eigenvalues come out sorted non-increasing; component signs carry no
    convention. random_state is accepted for manifest compatibility and
    ignored (the solver is deterministic).
    """

    def __init__(self, n_components: int | None = None, random_state: int | None = None):
        self.n_components = n_components
        self.means: np.ndarray | None = None
        self.components: np.ndarray | None = None  # shape (d, k)
        self.explained_variance: np.ndarray | None = None
        self.schema: list[tuple[str, str]] = []

    def fit(self, table: Table) -> Table:
        X = numeric_matrix(table, "PCA")
        n, d = X.shape
        if n < 2:
            raise EngineError("bad-arguments", "PCA needs at least 2 rows")
        k = d if self.n_components is None else int(self.n_components)
        if not 1 <= k <= d:
            raise EngineError(
                "bad-arguments",
                f"PCA n_components={k} must be between 1 and the {d} available feature columns",
            )
        self.schema = table.schema()
        self.means = X.mean(axis=0)
        cov = np.cov(X - self.means, rowvar=False, ddof=1).reshape(d, d)
        eigvals, eigvecs = np.linalg.eigh(cov)  # ascending symmetric eigendecomposition
        order = np.argsort(eigvals)[::-1]
        self.explained_variance = eigvals[order][:k]
        self.components = eigvecs[:, order][:, :k]
        return self.transform(table)

    def transform(self, table: Table) -> Table:
        check_schema(self.schema, table, "PCA")
        X = numeric_matrix(table, "PCA")
        projected = (X - self.means) @ self.components
        names = [f"pc{i + 1}" for i in range(self.components.shape[1])]
        return matrix_table(names, projected)
