"""Top-k accuracy harness for operator-name and operator-invocation prediction.

Name matching only compares the operator identifier; invocation matching
compares the sets of (parameter, value) pairs where MASK matches only MASK,
numbers compare numerically, and text compares exactly after quote
normalization. Multi-invocation gold counts as a hit if any gold invocation
matches.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

from .corpus.formulate import FormulatedSample
from .dsl import ArgValue, Invocation, parse_invocation_lines

NAME_MODE, INVOCATION_MODE = "name", "invocation"

_MASK_KEY = ("mask",)


@dataclass(frozen=True)
class EvalConfig:
    k: int = 5
    mode: str = INVOCATION_MODE

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.mode not in (NAME_MODE, INVOCATION_MODE):
            raise ValueError(f"mode must be name or invocation, got {self.mode!r}")


def _value_key(value: ArgValue) -> tuple:
    if value.kind == "mask":
        return _MASK_KEY
    if value.kind in ("int", "real"):
        return ("number", float(value.value))
    if value.kind in ("str", "expr"):  # quote normalization: compare content
        return ("text", str(value.value))
    if value.kind == "bool":
        return ("bool", bool(value.value))
    return ("none",)


def match_name(candidate: Invocation, gold: Invocation) -> bool:
    """Operator identifiers equal, hyper-parameter string ignored."""
    return candidate.operator == gold.operator


def match_invocation(candidate: Invocation, gold: Invocation) -> bool:
    """Same operator and the same set of (parameter, value) pairs.

    Argument order is ignored; MASK only matches MASK; an extra or missing
    parameter on either side fails the match.
    """
    if candidate.operator != gold.operator:
        return False
    cand = {(a.name, _value_key(a.value)) for a in candidate.args}
    return cand == {(a.name, _value_key(a.value)) for a in gold.args}


def topk_hit(candidates: list[Invocation], gold: list[Invocation] | Invocation,
             config: EvalConfig) -> int | None:
    """1-based rank of the first candidate within k matching any gold, or None."""
    golds = gold if isinstance(gold, list) else [gold]
    matcher = match_invocation if config.mode == INVOCATION_MODE else match_name
    for rank, candidate in enumerate(candidates[: config.k], start=1):
        if any(matcher(candidate, g) for g in golds):
            return rank
    return None


@dataclass
class SampleRecord:
    query: str
    gold: str
    candidates: list[str]
    hit_rank: int | None
    error: str = ""

    def to_json(self) -> dict:
        return {
            "query": self.query,
            "gold": self.gold,
            "candidates": list(self.candidates),
            "hit_rank": self.hit_rank,
            "error": self.error,
        }


@dataclass
class EvalReport:
    config: EvalConfig
    total: int = 0
    hits: int = 0
    records: list[SampleRecord] = field(default_factory=list)

    @property
    def accuracy(self) -> float:
        return self.hits / self.total if self.total else 0.0

    def to_json(self) -> dict:
        return {
            "mode": self.config.mode,
            "k": self.config.k,
            "total": self.total,
            "hits": self.hits,
            "accuracy": self.accuracy,
            "records": [r.to_json() for r in self.records],
        }


Predictor = Callable[[str], list[Invocation]]


def _parse_gold(sample: FormulatedSample) -> list[Invocation]:
    if sample.task == "name":  # bare operator names, no argument lists
        return [Invocation(name.strip()) for name in sample.target.split(";") if name.strip()]
    return parse_invocation_lines(sample.target)


def evaluate(predictor: Predictor, samples: list[FormulatedSample], config: EvalConfig) -> EvalReport:
    """Run the predictor over every sample and tally top-k hits.

    Predictor failures are recorded as misses with the error message; the
    run never aborts. Records keep the input sample order.
    """
    if not samples:
        raise ValueError("empty evaluation set")
    report = EvalReport(config=config)
    for sample in samples:
        gold = _parse_gold(sample)
        try:
            candidates = predictor(sample.nl)
            error = ""
        except Exception as exc:  # predictor errors are data, not crashes
            candidates = []
            error = str(exc)
        rank = topk_hit(candidates, gold, config) if not error else None
        report.total += 1
        if rank is not None:
            report.hits += 1
        report.records.append(SampleRecord(
            query=sample.nl,
            gold=sample.target,
            candidates=[c.render() for c in candidates[: config.k]],
            hit_rank=rank,
            error=error,
        ))
    return report


def render_report_table(reports: dict[str, dict[str, EvalReport]]) -> str:
    """Aligned-column table: one row per run label, name/invocation columns."""
    modes = [NAME_MODE, INVOCATION_MODE]
    header = ["Run"] + [f"{m} acc (%)" for m in modes]
    rows = []
    for label, by_mode in reports.items():
        row = [label]
        for mode in modes:
            rep = by_mode.get(mode)
            row.append(f"{100.0 * rep.accuracy:.2f}" if rep else "-")
        rows.append(row)
    widths = [max(len(r[i]) for r in [header] + rows) for i in range(len(header))]
    lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(header))]
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)))
    return "\n".join(lines)


def write_report(report: EvalReport, path) -> None:
    from pathlib import Path

    Path(path).write_text(json.dumps(report.to_json(), indent=2) + "\n", encoding="utf-8")
