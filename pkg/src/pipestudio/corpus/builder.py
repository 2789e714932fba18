"""End-to-end corpus building: mine a notebook directory into task-formulated
JSONL files plus a counts summary for auditing."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..registry import Registry
from .extract import NlCodePair, dedupe_pairs, mine_cells
from .formulate import FormulatedSample, TASKS, formulate_corpus
from .notebooks import has_sklearn, is_english, parse_notebook
from .splits import DEFAULT_RATIOS, CorpusSplits, split_corpus


@dataclass
class MiningCounts:
    notebooks: int = 0
    with_sklearn: int = 0
    english: int = 0
    paired: int = 0
    discarded: int = 0
    pairs: int = 0
    deduped: int = 0
    splits: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "notebooks": self.notebooks,
            "with_sklearn": self.with_sklearn,
            "english": self.english,
            "paired": self.paired,
            "discarded": self.discarded,
            "pairs": self.pairs,
            "deduped": self.deduped,
            "splits": self.splits,
        }


def mine_directory(notebook_dir: str | Path, registry: Registry) -> tuple[list[NlCodePair], MiningCounts]:
    """Mine every .ipynb file (sorted by name) into deduplicated NL-code pairs."""
    counts = MiningCounts()
    pairs: list[NlCodePair] = []
    for path in sorted(Path(notebook_dir).glob("*.ipynb")):
        counts.notebooks += 1
        cells = parse_notebook(path.read_text(encoding="utf-8"))
        if not has_sklearn(cells, registry):
            continue
        counts.with_sklearn += 1
        if not is_english(cells):
            continue
        counts.english += 1
        mined, discarded = mine_cells(cells, registry, path.stem)
        counts.paired += len(mined) + discarded
        counts.discarded += discarded
        pairs.extend(mined)
    counts.pairs = len(pairs)
    deduped = dedupe_pairs(pairs)
    counts.deduped = len(deduped)
    return deduped, counts


def write_jsonl(samples: list[FormulatedSample], path: Path) -> None:
    with path.open("w", encoding="utf-8") as f:
        for sample in samples:
            f.write(json.dumps(sample.to_json(), ensure_ascii=False) + "\n")


def read_jsonl(path: str | Path) -> list[FormulatedSample]:
    samples = []
    with Path(path).open(encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line:
                samples.append(FormulatedSample.from_json(json.loads(line)))
    return samples


def build_corpus(notebook_dir: str | Path, out_dir: str | Path, registry: Registry,
                 task: str = "hybrid", ratios: tuple[float, float, float] = DEFAULT_RATIOS,
                 seed: int = 0) -> tuple[CorpusSplits, MiningCounts]:
    """Mine, formulate, split, and write corpus.jsonl / train / valid / test
    plus counts.json under out_dir."""
    if task not in TASKS:
        raise ValueError(f"task must be one of {TASKS}, got {task!r}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    pairs, counts = mine_directory(notebook_dir, registry)
    samples = formulate_corpus(pairs, task)
    splits = split_corpus(samples, ratios, seed)
    counts.splits = {
        "train": len(splits.train),
        "valid": len(splits.valid),
        "test": len(splits.test),
        "seed": seed,
        "ratios": list(ratios),
    }
    write_jsonl(samples, out_dir / "corpus.jsonl")
    write_jsonl(splits.train, out_dir / "train.jsonl")
    write_jsonl(splits.valid, out_dir / "valid.jsonl")
    write_jsonl(splits.test, out_dir / "test.jsonl")
    (out_dir / "counts.json").write_text(
        json.dumps(counts.to_json(), indent=2) + "\n", encoding="utf-8"
    )
    return splits, counts
