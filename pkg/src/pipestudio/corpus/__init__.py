from .notebooks import (
    NotebookCell,
    has_sklearn,
    is_english,
    pair_cells,
    parse_notebook,
    strip_heading_markers,
)
from .extract import NlCodePair, dedupe_pairs, extract_invocations, serialize_invocations
from .formulate import (
    COMPLETE,
    FormulatedSample,
    HYBRID,
    MASKED,
    NAME,
    TASKS,
    formulate_corpus,
    formulate_pair,
    formulate_sample,
    ground_explicit_values,
    mask_all_values,
    param_stats,
    render_param_stats,
    value_stated_in,
)
from .splits import DEFAULT_RATIOS, CorpusSplits, split_corpus
from .builder import MiningCounts, build_corpus, mine_directory, read_jsonl, write_jsonl

__all__ = [
    "COMPLETE",
    "CorpusSplits",
    "DEFAULT_RATIOS",
    "FormulatedSample",
    "HYBRID",
    "MASKED",
    "MiningCounts",
    "NAME",
    "NlCodePair",
    "NotebookCell",
    "TASKS",
    "build_corpus",
    "dedupe_pairs",
    "extract_invocations",
    "formulate_corpus",
    "formulate_pair",
    "formulate_sample",
    "ground_explicit_values",
    "has_sklearn",
    "is_english",
    "mask_all_values",
    "mine_directory",
    "pair_cells",
    "param_stats",
    "parse_notebook",
    "read_jsonl",
    "render_param_stats",
    "serialize_invocations",
    "split_corpus",
    "strip_heading_markers",
    "value_stated_in",
    "write_jsonl",
]
