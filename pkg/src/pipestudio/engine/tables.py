"""Tabular data model and CSV loading for the execution engine.

Cells are floats (numeric columns), strings (categorical columns), or None
for the missing marker. Tables carry a designated target column; feature-only
intermediate tables use an empty target name.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

NUMERIC, CATEGORICAL = "numeric", "categorical"

MISSING_TOKENS = {"", "NaN"}


class TableError(ValueError):
    pass


@dataclass(frozen=True)
class Column:
    name: str
    kind: str  # NUMERIC or CATEGORICAL


@dataclass
class Table:
    columns: list[Column]
    rows: list[list[object]]
    target: str = ""

    def __post_init__(self):
        names = [c.name for c in self.columns]
        if len(names) != len(set(names)):
            raise TableError("duplicate column names")
        if self.target and self.target not in names:
            raise TableError(f"target column {self.target!r} not present")
        width = len(self.columns)
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise TableError(f"row {i} has {len(row)} cells, expected {width}")

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def column_index(self, name: str) -> int:
        for i, c in enumerate(self.columns):
            if c.name == name:
                return i
        raise TableError(f"no column {name!r}")

    def column_values(self, name: str) -> list[object]:
        i = self.column_index(name)
        return [row[i] for row in self.rows]

    def feature_columns(self) -> list[Column]:
        return [c for c in self.columns if c.name != self.target]

    def features_only(self) -> "Table":
        keep = [i for i, c in enumerate(self.columns) if c.name != self.target]
        return Table(
            [self.columns[i] for i in keep],
            [[row[i] for i in keep] for row in self.rows],
        )

    def has_missing(self) -> bool:
        return any(cell is None for row in self.rows for cell in row)

    def schema(self) -> list[tuple[str, str]]:
        return [(c.name, c.kind) for c in self.columns]


@dataclass(frozen=True)
class Dataset:
    name: str
    train: Table
    test: Table

    def __post_init__(self):
        if self.train.schema() != self.test.schema():
            raise TableError("train and test schemas differ")
        if self.train.target != self.test.target:
            raise TableError("train and test target columns differ")

    @property
    def target(self) -> str:
        return self.train.target


def _parse_cell(text: str) -> tuple[object, bool]:
    """Return (value, parsed_as_numeric); missing markers are (None, True)."""
    if text in MISSING_TOKENS:
        return None, True
    try:
        return float(text), True
    except ValueError:
        return text, False


def load_csv(path: str | Path, target: str) -> Table:
    """Load an RFC-4180-style CSV with a header row.

    A column is numeric when every cell parses as a number or is missing
    (empty or the token "NaN"); otherwise it is categorical and missing
    markers stay None either way.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise TableError(f"{path}: empty file") from None
        raw_rows = list(reader)
    if target not in header:
        raise TableError(f"{path}: target column {target!r} not in header {header}")
    width = len(header)
    for i, row in enumerate(raw_rows):
        if len(row) != width:
            raise TableError(f"{path}: row {i + 2} has {len(row)} cells, expected {width}")

    numeric = [True] * width
    for row in raw_rows:
        for j, text in enumerate(row):
            _, ok = _parse_cell(text)
            if not ok:
                numeric[j] = False

    columns = [Column(name, NUMERIC if numeric[j] else CATEGORICAL) for j, name in enumerate(header)]
    rows: list[list[object]] = []
    for raw in raw_rows:
        row: list[object] = []
        for j, text in enumerate(raw):
            if text in MISSING_TOKENS:
                row.append(None)
            elif numeric[j]:
                row.append(float(text))
            else:
                row.append(text)
        rows.append(row)
    return Table(columns, rows, target)


def load_dataset(data_dir: str | Path, name: str) -> Dataset:
    """Load `<name>.train.csv` + `<name>.test.csv` with a `<name>.meta.json` sidecar."""
    data_dir = Path(data_dir)
    meta_path = data_dir / f"{name}.meta.json"
    if not meta_path.exists():
        raise TableError(f"unknown dataset {name!r} (no {meta_path.name})")
    meta = json.loads(meta_path.read_text(encoding="utf-8"))
    target = meta["target"]
    train = load_csv(data_dir / f"{name}.train.csv", target)
    test = load_csv(data_dir / f"{name}.test.csv", target)
    return Dataset(name, train, test)


def list_datasets(data_dir: str | Path) -> list[str]:
    return sorted(p.name[: -len(".meta.json")] for p in Path(data_dir).glob("*.meta.json"))


def preview(table: Table, limit: int) -> Table:
    """First rows with the target column (when present) moved to the front."""
    if table.target:
        order = [table.column_index(table.target)]
        order += [i for i, c in enumerate(table.columns) if c.name != table.target]
    else:
        order = list(range(len(table.columns)))
    cols = [table.columns[i] for i in order]
    rows = [[row[i] for i in order] for row in table.rows[:limit]]
    return Table(cols, rows, table.target)


def with_features(base: Table, features: Table) -> Table:
    """Reattach the target column of `base` to transformed feature columns."""
    if not base.target:
        return features
    ti = base.column_index(base.target)
    cols = [base.columns[ti]] + list(features.columns)
    rows = [[base.rows[i][ti]] + list(features.rows[i]) for i in range(len(features.rows))]
    return Table(cols, rows, base.target)


def table_to_json(table: Table) -> dict:
    return {
        "columns": [{"name": c.name, "kind": c.kind} for c in table.columns],
        "rows": table.rows,
        "target": table.target,
    }
