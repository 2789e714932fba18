"""Notebook-document parsing and the mining filters.

Notebooks arrive as notebook-format JSON ("cells" array). The filters mirror
the corpus pipeline: keep notebooks that contain sklearn-style code and at
least one mostly-ASCII, stopword-bearing markdown cell, then pair each
qualifying code cell with its nearest preceding markdown cell.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass

from ..registry import Registry

log = logging.getLogger(__name__)

MARKDOWN, CODE = "markdown", "code"

# Fixed 50-word English stopword list for the language heuristic.
STOPWORDS = frozenset((
    "the a an and or but if then else for "
    "to of in on at by with from as is "
    "are was were be been this that these those it "
    "we you they he she i my your our not "
    "no do does did have has had will can should"
).split())
assert len(STOPWORDS) == 50

ASCII_ALPHA_RATIO = 0.70

_IMPORT_RE = re.compile(r"^\s*(?:import\s+sklearn\b|from\s+sklearn\b)", re.MULTILINE)
_CALL_RE = re.compile(r"(?<![\w.])([A-Za-z_][A-Za-z0-9_]*)\s*\(")


@dataclass(frozen=True)
class NotebookCell:
    kind: str  # MARKDOWN or CODE
    source: str
    index: int


def parse_notebook(document: str | dict) -> list[NotebookCell]:
    """Extract ordered cells from a notebook-JSON document.

    Multi-line source arrays are joined; cells of unknown kinds (e.g. "raw")
    are skipped with a warning. Raises ValueError for malformed JSON.
    """
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ValueError(f"not a valid notebook JSON document: {exc}") from exc
    if not isinstance(document, dict) or not isinstance(document.get("cells"), list):
        raise ValueError('notebook document must contain a "cells" array')
    cells: list[NotebookCell] = []
    for index, raw in enumerate(document["cells"]):
        kind = raw.get("cell_type") if isinstance(raw, dict) else None
        if kind not in (MARKDOWN, CODE):
            log.warning("skipping cell %d of unknown kind %r", index, kind)
            continue
        source = raw.get("source", "")
        if isinstance(source, list):
            source = "".join(source)
        cells.append(NotebookCell(kind, source, index))
    return cells


def code_has_sklearn(source: str, registry: Registry) -> bool:
    """True when the code imports sklearn or calls a registry operator name."""
    if _IMPORT_RE.search(source):
        return True
    return any(m.group(1) in registry for m in _CALL_RE.finditer(source))


def has_sklearn(cells: list[NotebookCell], registry: Registry) -> bool:
    return any(c.kind == CODE and code_has_sklearn(c.source, registry) for c in cells)


def _looks_english(text: str) -> bool:
    alpha = [ch for ch in text if ch.isalpha()]
    if not alpha:
        return False
    ascii_alpha = sum(1 for ch in alpha if ch.isascii())
    if ascii_alpha / len(alpha) < ASCII_ALPHA_RATIO:
        return False
    tokens = re.findall(r"[a-z]+", text.lower())
    return any(t in STOPWORDS for t in tokens)


def is_english(cells: list[NotebookCell]) -> bool:
    """True when at least one markdown cell passes the English heuristic."""
    return any(c.kind == MARKDOWN and _looks_english(c.source) for c in cells)


def strip_heading_markers(markdown: str) -> str:
    """Plain-text cleanup: drop leading heading hashes, keep everything else."""
    lines = [re.sub(r"^\s*#+\s*", "", line) for line in markdown.splitlines()]
    return "\n".join(lines).strip()


def pair_cells(cells: list[NotebookCell], registry: Registry) -> list[tuple[NotebookCell, NotebookCell]]:
    """Pair each sklearn code cell with the nearest preceding markdown cell.

    Code cells with no preceding markdown are dropped. One markdown cell may
    serve several following code cells.
    """
    pairs: list[tuple[NotebookCell, NotebookCell]] = []
    last_markdown: NotebookCell | None = None
    for cell in cells:
        if cell.kind == MARKDOWN:
            last_markdown = cell
        elif cell.kind == CODE and code_has_sklearn(cell.source, registry):
            if last_markdown is not None:
                pairs.append((last_markdown, cell))
    return pairs
