"""Independent brute-force recount of evaluation accuracy.

Takes the per-sample records of a harness report (query, gold text,
candidate texts) and recounts top-k hits with its own string-level parsing
and matching, without importing the package under test.
"""

from __future__ import annotations

import re


def split_call(text: str) -> tuple[str, list[str]]:
    m = re.match(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*\((.*)\)\s*$", text, re.DOTALL)
    if not m:
        return text.strip(), []
    name, argtext = m.group(1), m.group(2)
    parts, buf, depth, quote = [], [], 0, None
    for ch in argtext:
        if quote:
            buf.append(ch)
            if ch == quote:
                quote = None
        elif ch in "'\"":
            quote = ch
            buf.append(ch)
        elif ch in "([{":
            depth += 1
            buf.append(ch)
        elif ch in ")]}":
            depth -= 1
            buf.append(ch)
        elif ch == "," and depth == 0:
            parts.append("".join(buf).strip())
            buf = []
        else:
            buf.append(ch)
    if buf:
        parts.append("".join(buf).strip())
    return name, [p for p in parts if p]


def normalize_value(text: str) -> tuple:
    text = text.strip()
    if text == "MASK":
        return ("mask",)
    if text and text[0] in "'\"":
        return ("text", text[1:-1])
    try:
        return ("number", float(text))
    except ValueError:
        pass
    if text == "True":
        return ("bool", True)
    if text == "False":
        return ("bool", False)
    if text == "None":
        return ("none",)
    return ("text", text)  # bare identifier


def arg_pairs(parts: list[str]) -> frozenset:
    pairs = []
    pos = 0
    for part in parts:
        m = re.match(r"^([A-Za-z_]\w*)\s*=(?!=)\s*(.*)$", part, re.DOTALL)
        if m:
            pairs.append((m.group(1), normalize_value(m.group(2))))
        else:
            pairs.append((f"pos{pos}", normalize_value(part)))
            pos += 1
    return frozenset(pairs)


def matches(candidate: str, gold: str, mode: str) -> bool:
    cname, cparts = split_call(candidate)
    gname, gparts = split_call(gold)
    if cname != gname:
        return False
    if mode == "name":
        return True
    return arg_pairs(cparts) == arg_pairs(gparts)


def recount(records: list[dict], k: int, mode: str) -> tuple[int, int]:
    """(hits, total) over harness per-sample records."""
    hits = 0
    for record in records:
        golds = [line for line in record["gold"].splitlines() if line.strip()]
        hit = False
        for candidate in record["candidates"][:k]:
            for cand_line in candidate.splitlines():
                if any(matches(cand_line, g, mode) for g in golds):
                    hit = True
                    break
            if hit:
                break
        hits += hit
    return hits, len(records)
