"""Natural-language operator resolution.

Ranked candidates come from Okapi BM25 retrieval over a corpus of hybrid
samples; the best document per operator is instantiated and its values are
re-grounded against the live query, so only values the query actually states
stay concrete. A pluggable HTTP generator endpoint can replace retrieval.
"""

from __future__ import annotations

import json
import logging
import math
import re
from collections import Counter
from dataclasses import dataclass, field

import requests

from .corpus.formulate import FormulatedSample, ground_explicit_values
from .dsl import Invocation, PipelineSyntaxError, parse_invocation_lines
from .registry import Registry, keyword_filter

log = logging.getLogger(__name__)

K1_DEFAULT = 1.2
B_DEFAULT = 0.75


def tokenize(text: str) -> list[str]:
    """Lowercase, split on non-alphanumeric runs, keep numbers, drop empties."""
    return re.findall(r"[a-z0-9]+", text.lower())


@dataclass(frozen=True)
class IndexedDocument:
    tokens: tuple[str, ...]
    counts: Counter
    invocations: tuple[Invocation, ...]
    nl: str


@dataclass
class ResolverIndex:
    """Immutable-after-build BM25 index over hybrid samples."""

    documents: list[IndexedDocument] = field(default_factory=list)
    doc_freq: Counter = field(default_factory=Counter)
    avg_len: float = 0.0
    k1: float = K1_DEFAULT
    b: float = B_DEFAULT

    def __len__(self) -> int:
        return len(self.documents)

    def idf(self, term: str) -> float:
        n = len(self.documents)
        df = self.doc_freq.get(term, 0)
        return math.log(1.0 + (n - df + 0.5) / (df + 0.5))

    def score(self, query_tokens: list[str], doc: IndexedDocument) -> float:
        if not self.documents:
            return 0.0
        norm = self.k1 * (1.0 - self.b + self.b * len(doc.tokens) / self.avg_len) if self.avg_len else self.k1
        total = 0.0
        for term in query_tokens:
            tf = doc.counts.get(term, 0)
            if tf == 0:
                continue
            total += self.idf(term) * tf * (self.k1 + 1.0) / (tf + norm)
        return total


class UnparseableTargetError(ValueError):
    """An index input sample whose target does not parse."""


def build_index(samples: list[FormulatedSample], k1: float = K1_DEFAULT, b: float = B_DEFAULT) -> ResolverIndex:
    """Index hybrid samples; unparseable targets are reported with their origin."""
    index = ResolverIndex(k1=k1, b=b)
    for sample in samples:
        try:
            invocations = tuple(parse_invocation_lines(sample.target))
        except PipelineSyntaxError as exc:
            raise UnparseableTargetError(
                f"sample from {sample.notebook or '<unknown>'}:{sample.cell} has an unparseable target: {exc}"
            ) from exc
        tokens = tuple(tokenize(sample.nl))
        index.documents.append(IndexedDocument(tokens, Counter(tokens), invocations, sample.nl))
    for doc in index.documents:
        for term in doc.counts:
            index.doc_freq[term] += 1
    if index.documents:
        index.avg_len = sum(len(d.tokens) for d in index.documents) / len(index.documents)
    return index


@dataclass
class Prediction:
    candidates: list[tuple[Invocation, float]] = field(default_factory=list)
    relevant_operators: list[str] = field(default_factory=list)

    @property
    def auto_append(self) -> Invocation | None:
        return self.candidates[0][0] if self.candidates else None

    @property
    def highlighted_params(self) -> list[str]:
        top = self.auto_append
        if top is None:
            return []
        return [a.name for a in top.args if a.value.is_mask]

    def to_json(self) -> dict:
        return {
            "candidates": [
                {"invocation": inv.render(), "operator": inv.operator, "score": score}
                for inv, score in self.candidates
            ],
            "relevant_operators": list(self.relevant_operators),
            "auto_append": self.auto_append.render() if self.auto_append else None,
            "highlighted_params": self.highlighted_params,
        }


def _rank_candidates(scored: list[tuple[Invocation, float]], query: str, n: int) -> Prediction:
    """Shared post-processing: per-operator max, top-n, query re-grounding."""
    best: dict[str, tuple[Invocation, float]] = {}
    for invocation, score in scored:
        name = invocation.operator
        if name not in best or score > best[name][1]:
            best[name] = (invocation, score)
    ranked = sorted(best.values(), key=lambda item: (-item[1], item[0].operator))[:n]
    candidates = [(ground_explicit_values(query, inv), score) for inv, score in ranked]
    return Prediction(
        candidates=candidates,
        relevant_operators=[inv.operator for inv, _ in candidates],
    )


def predict(index: ResolverIndex, query: str, n: int = 5) -> Prediction:
    """Top-n distinct operators for a query, best-document invocation each.

    Deterministic: scores tie-break lexicographically by operator name, and
    the earliest document wins within an operator.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    query_tokens = tokenize(query)
    if not query_tokens:
        return Prediction()
    scored: list[tuple[Invocation, float]] = []
    for doc in index.documents:
        score = index.score(query_tokens, doc)
        if score <= 0.0:
            continue
        for invocation in doc.invocations:
            scored.append((invocation, score))
    return _rank_candidates(scored, query, n)


def keyword_mode(registry: Registry, query: str) -> list[str]:
    """The keyword study condition: substring filter over operator names."""
    return [spec.name for spec in keyword_filter(registry, query)]


# ---------------------------------------------------------------------------
# External generator contract

GREEDY, TOP_K, NUCLEUS = "greedy", "top_k", "nucleus"


class ConfigError(ValueError):
    pass


class GeneratorError(RuntimeError):
    pass


@dataclass(frozen=True)
class DecodeConfig:
    """Decoding request forwarded verbatim to an external generator."""

    strategy: str = GREEDY
    n: int = 1
    k: int | None = None
    p: float | None = None
    temperature: float = 1.0

    def validate(self) -> None:
        if self.strategy not in (GREEDY, TOP_K, NUCLEUS):
            raise ConfigError(f"unknown strategy {self.strategy!r}")
        if self.n < 1:
            raise ConfigError("n must be at least 1")
        if self.temperature <= 0:
            raise ConfigError("temperature must be positive")
        if self.strategy == GREEDY and self.n != 1:
            raise ConfigError("greedy decoding yields a single sequence; n must be 1")
        if self.strategy == TOP_K and (self.k is None or self.k < 1):
            raise ConfigError("top_k decoding requires k >= 1")
        if self.strategy == NUCLEUS and (self.p is None or not 0 < self.p <= 1):
            raise ConfigError("nucleus decoding requires p in (0, 1]")

    def to_json(self) -> dict:
        doc: dict = {"strategy": self.strategy, "n": self.n, "temperature": self.temperature}
        if self.k is not None:
            doc["k"] = self.k
        if self.p is not None:
            doc["p"] = self.p
        return doc


def external_generate(endpoint: str, query: str, config: DecodeConfig,
                      timeout: float = 10.0) -> Prediction:
    """POST {query, config} to a generator endpoint and rank its candidates.

    Candidate strings that fail the invocation grammar are dropped with a
    warning; the rest go through the same per-operator ranking and query
    re-grounding as retrieval results.
    """
    config.validate()
    payload = {"query": query, "config": config.to_json()}
    try:
        response = requests.post(f"{endpoint.rstrip('/')}/generate", json=payload, timeout=timeout)
        response.raise_for_status()
        doc = response.json()
    except requests.RequestException as exc:
        raise GeneratorError(f"generator endpoint unreachable: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise GeneratorError(f"generator returned malformed JSON: {exc}") from exc
    raw = doc.get("candidates")
    if not isinstance(raw, list):
        raise GeneratorError('generator response must contain a "candidates" array')
    scored: list[tuple[Invocation, float]] = []
    for item in raw:
        text = item.get("text", "") if isinstance(item, dict) else ""
        score = float(item.get("score", 0.0)) if isinstance(item, dict) else 0.0
        try:
            for invocation in parse_invocation_lines(text):
                scored.append((invocation, score))
        except PipelineSyntaxError as exc:
            log.warning("dropping unparseable candidate %r: %s", text, exc)
    return _rank_candidates(scored, query, config.n)
