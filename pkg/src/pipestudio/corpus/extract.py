"""Invocation-statement extraction from raw code cell text.

A lightweight call-expression scanner, not a full language parser: it finds
`Name(...)` calls whose callee is a registry operator (attribute calls like
`clf.fit(...)` are excluded), balances the parentheses, and captures the
argument list. Keyword arguments keep literal values and become MASK
otherwise; positional arguments live under synthetic pos0.. names and keep
bare identifiers as expression text. Unbalanced or unparseable call sites
are skipped with a warning.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass

from ..dsl import Arg, ArgValue, EXPR, Invocation, MASK, _tokenize_source
from ..registry import Registry
from .notebooks import NotebookCell, strip_heading_markers

log = logging.getLogger(__name__)

_CALLEE_RE = re.compile(r"(?<![\w.])([A-Za-z_][A-Za-z0-9_]*)\s*\(")
_KEYWORD_RE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*=(?![=])\s*(.*)$", re.DOTALL)

OPEN, CLOSE = "([{", ")]}"


@dataclass(frozen=True)
class NlCodePair:
    nl: str
    invocations: tuple[Invocation, ...]
    notebook: str
    cell: int


def _strip_comments(code: str) -> str:
    """Remove #-comments and notebook magics, leaving strings intact."""
    out_lines = []
    for line in code.splitlines():
        if re.match(r"\s*[%!]", line):
            out_lines.append("")
            continue
        out, quote = [], None
        i = 0
        while i < len(line):
            ch = line[i]
            if quote:
                out.append(ch)
                if ch == "\\" and i + 1 < len(line):
                    out.append(line[i + 1])
                    i += 1
                elif ch == quote:
                    quote = None
            elif ch in "'\"":
                quote = ch
                out.append(ch)
            elif ch == "#":
                break
            else:
                out.append(ch)
            i += 1
        out_lines.append("".join(out))
    return "\n".join(out_lines)


def _balanced_span(code: str, start: int) -> int | None:
    """Index just past the paren closing the one at `start`, or None."""
    depth, quote = 0, None
    i = start
    while i < len(code):
        ch = code[i]
        if quote:
            if ch == "\\":
                i += 1
            elif ch == quote:
                quote = None
        elif ch in "'\"":
            quote = ch
        elif ch in OPEN:
            depth += 1
        elif ch in CLOSE:
            depth -= 1
            if depth == 0:
                return i + 1
        i += 1
    return None


def _split_top_level(argtext: str) -> list[str]:
    parts, buf = [], []
    depth, quote = 0, None
    for i, ch in enumerate(argtext):
        if quote:
            buf.append(ch)
            if ch == "\\" and i + 1 < len(argtext):
                pass
            elif ch == quote:
                quote = None
            continue
        if ch in "'\"":
            quote = ch
            buf.append(ch)
        elif ch in OPEN:
            depth += 1
            buf.append(ch)
        elif ch in CLOSE:
            depth -= 1
            buf.append(ch)
        elif ch == "," and depth == 0:
            parts.append("".join(buf))
            buf = []
        else:
            buf.append(ch)
    if buf or parts:
        parts.append("".join(buf))
    return [p.strip() for p in parts]


def _try_literal(text: str, allow_identifier: bool) -> ArgValue | None:
    """Parse a lone literal (or bare identifier) value; None when it is not one."""
    try:
        tokens = _tokenize_source(text)
    except ValueError:
        return None
    if len(tokens) != 2:  # value + eof
        return None
    tok = tokens[0]
    if tok.kind == "int":
        return ArgValue("int", int(tok.text))
    if tok.kind == "real":
        return ArgValue("real", float(tok.text))
    if tok.kind == "str":
        return ArgValue("str", tok.text[1:-1], tok.text[0])
    if tok.kind == "name":
        if tok.text == "True":
            return ArgValue("bool", True)
        if tok.text == "False":
            return ArgValue("bool", False)
        if tok.text == "None":
            return ArgValue("none")
        if tok.text == "MASK":
            return ArgValue(MASK)
        if allow_identifier:
            return ArgValue(EXPR, tok.text)
    return None


def extract_invocations(code: str, registry: Registry) -> list[Invocation]:
    """All operator invocation statements in a code cell, in source order."""
    cleaned = _strip_comments(code)
    invocations: list[Invocation] = []
    for match in _CALLEE_RE.finditer(cleaned):
        name = match.group(1)
        if name not in registry:
            continue
        open_paren = match.end() - 1
        end = _balanced_span(cleaned, open_paren)
        if end is None:
            log.warning("skipping unbalanced call of %s", name)
            continue
        argtext = cleaned[open_paren + 1: end - 1]
        args: list[Arg] = []
        seen: set[str] = set()
        n_positional = 0
        ok = True
        for part in _split_top_level(argtext):
            if not part:
                ok = False
                break
            kw = _KEYWORD_RE.match(part)
            if kw:
                pname, vtext = kw.group(1), kw.group(2).strip()
                value = _try_literal(vtext, allow_identifier=False) or ArgValue(MASK)
            else:
                pname = f"pos{n_positional}"
                n_positional += 1
                value = _try_literal(part, allow_identifier=True) or ArgValue(MASK)
                args.append(Arg(pname, value, positional=True))
                seen.add(pname)
                continue
            if pname in seen:
                ok = False
                break
            seen.add(pname)
            args.append(Arg(pname, value))
        if not ok:
            log.warning("skipping unparseable call of %s", name)
            continue
        invocations.append(Invocation(name, tuple(args)))
    return invocations


def mine_cells(cells: list[NotebookCell], registry: Registry, notebook_id: str) -> tuple[list[NlCodePair], int]:
    """Turn paired cells into NL-code pairs; returns (pairs, discarded count).

    A pair is discarded when its code cell yields no invocation statements or
    its markdown collapses to nothing after heading cleanup.
    """
    from .notebooks import pair_cells

    pairs: list[NlCodePair] = []
    discarded = 0
    for md, code in pair_cells(cells, registry):
        nl = strip_heading_markers(md.source)
        invocations = extract_invocations(code.source, registry)
        if not invocations or not nl:
            discarded += 1
            continue
        pairs.append(NlCodePair(nl, tuple(invocations), notebook_id, code.index))
    return pairs, discarded


def serialize_invocations(invocations: tuple[Invocation, ...]) -> str:
    return "\n".join(inv.render() for inv in invocations)


def dedupe_pairs(pairs: list[NlCodePair]) -> list[NlCodePair]:
    """Keep the first occurrence of each (trimmed nl, serialized code) key."""
    seen: set[tuple[str, str]] = set()
    out: list[NlCodePair] = []
    for pair in pairs:
        key = (pair.nl.strip(), serialize_invocations(pair.invocations))
        if key in seen:
            continue
        seen.add(key)
        out.append(pair)
    return out
