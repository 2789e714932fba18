"""Task formulation: name / complete / masked / hybrid targets plus the
hybrid parameter-distribution statistics.

The hybrid form keeps an argument value only when the NL text explicitly
states it: numeric values must appear as a standalone token in canonical
decimal form, string (and bare-identifier) values must appear as a
case-insensitive word sequence. Booleans and None never count as stated.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace

from ..dsl import ArgValue, Invocation, MASK, parse_invocation_lines
from .extract import NlCodePair, serialize_invocations

NAME, COMPLETE, MASKED, HYBRID = "name", "complete", "masked", "hybrid"
TASKS = (NAME, COMPLETE, MASKED, HYBRID)


@dataclass(frozen=True)
class FormulatedSample:
    nl: str
    task: str
    target: str
    notebook: str = ""
    cell: int = 0

    def to_json(self) -> dict:
        return {
            "nl": self.nl,
            "task": self.task,
            "target": self.target,
            "origin": {"nb": self.notebook, "cell": self.cell},
        }

    @staticmethod
    def from_json(obj: dict) -> "FormulatedSample":
        origin = obj.get("origin", {})
        return FormulatedSample(
            nl=obj["nl"],
            task=obj.get("task", HYBRID),
            target=obj["target"],
            notebook=origin.get("nb", ""),
            cell=int(origin.get("cell", 0)),
        )


def _number_tokens(text: str) -> set[str]:
    """Tokens with interior dots preserved so decimals survive splitting."""
    return {t.strip(".") for t in re.findall(r"[\w.]+", text.lower())}


def _word_tokens(text: str) -> list[str]:
    return re.findall(r"[a-z0-9]+", text.lower())


def _contains_sequence(haystack: list[str], needle: list[str]) -> bool:
    if not needle:
        return False
    for i in range(len(haystack) - len(needle) + 1):
        if haystack[i: i + len(needle)] == needle:
            return True
    return False


def value_stated_in(nl: str, value: ArgValue) -> bool:
    """Does the NL text explicitly state this argument value?"""
    if value.kind in ("int", "real"):
        return value.render() in _number_tokens(nl)
    if value.kind in ("str", "expr"):
        return _contains_sequence(_word_tokens(nl), _word_tokens(str(value.value)))
    return False  # bool / none / mask


def ground_explicit_values(nl: str, invocation: Invocation) -> Invocation:
    """Hybrid form: keep values stated in the NL text, MASK the rest."""
    args = tuple(
        arg if arg.value.is_mask or value_stated_in(nl, arg.value)
        else replace(arg, value=ArgValue(MASK))
        for arg in invocation.args
    )
    return replace(invocation, args=args)


def mask_all_values(invocation: Invocation) -> Invocation:
    args = tuple(
        arg if arg.value.is_mask else replace(arg, value=ArgValue(MASK))
        for arg in invocation.args
    )
    return replace(invocation, args=args)


def formulate_pair(pair: NlCodePair, task: str) -> FormulatedSample:
    if task == NAME:
        target = " ; ".join(inv.operator for inv in pair.invocations)
    elif task == COMPLETE:
        target = serialize_invocations(pair.invocations)
    elif task == MASKED:
        target = serialize_invocations(tuple(mask_all_values(i) for i in pair.invocations))
    elif task == HYBRID:
        target = serialize_invocations(tuple(ground_explicit_values(pair.nl, i) for i in pair.invocations))
    else:
        raise ValueError(f"unknown task {task!r}")
    return FormulatedSample(pair.nl, task, target, pair.notebook, pair.cell)


def formulate_sample(pair: NlCodePair, task: str) -> list[FormulatedSample]:
    return [formulate_pair(pair, task)]


def formulate_corpus(pairs: list[NlCodePair], task: str) -> list[FormulatedSample]:
    return [formulate_pair(pair, task) for pair in pairs]


# ---------------------------------------------------------------------------
# Hybrid parameter statistics

BUCKETS = ("0", "1-3", "4+")
CATEGORIES = ("total", "named", "masked", "valued")


def _bucket(count: int) -> str:
    if count == 0:
        return "0"
    if count <= 3:
        return "1-3"
    return "4+"


def param_stats(samples: list[FormulatedSample]) -> dict:
    """Percentage of hybrid samples with 0 / 1-3 / 4+ parameters per category.

    Categories: total arguments, named (keyword) arguments, masked values,
    and concrete (valued) arguments. Positional arguments count as unnamed.
    """
    tallies = {cat: {b: 0 for b in BUCKETS} for cat in CATEGORIES}
    total = 0
    for sample in samples:
        if sample.task != HYBRID:
            raise ValueError(f"param_stats expects hybrid samples, got task {sample.task!r}")
        invocations = parse_invocation_lines(sample.target)
        args = [a for inv in invocations for a in inv.args]
        counts = {
            "total": len(args),
            "named": sum(1 for a in args if not a.positional),
            "masked": sum(1 for a in args if a.value.is_mask),
            "valued": sum(1 for a in args if not a.value.is_mask),
        }
        for cat, n in counts.items():
            tallies[cat][_bucket(n)] += 1
        total += 1
    if total == 0:
        raise ValueError("no samples")
    return {
        "samples": total,
        "distribution": {
            cat: {b: 100.0 * tallies[cat][b] / total for b in BUCKETS}
            for cat in CATEGORIES
        },
    }


def render_param_stats(stats: dict) -> str:
    """Aligned-column text table with the 0 / 1-3 / 4+ bucket columns."""
    header = ["Parameter Type"] + list(BUCKETS)
    rows = [
        [cat.capitalize()] + [f"{stats['distribution'][cat][b]:.2f}" for b in BUCKETS]
        for cat in CATEGORIES
    ]
    widths = [max(len(r[i]) for r in [header] + rows) for i in range(len(header))]
    lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(header))]
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)))
    return "\n".join(lines)
