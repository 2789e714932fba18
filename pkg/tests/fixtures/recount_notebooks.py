"""Independent brute-force recount of the notebook-mining fixture.

Deliberately does NOT import the package under test: it re-implements the
counting rules (sklearn filter, English heuristic, nearest-preceding-markdown
pairing, invocation detection, dedupe, cumulative-floor split sizes) from
first principles with plain string scanning, so the two paths can disagree.

Run directly to print the counts as JSON.
"""

from __future__ import annotations

import json
import math
import re
import sys
from pathlib import Path

STOPWORDS = set(
    "the a an and or but if then else for "
    "to of in on at by with from as is "
    "are was were be been this that these those it "
    "we you they he she i my your our not "
    "no do does did have has had will can should".split()
)


def load_operator_names(manifest_path: Path) -> set[str]:
    doc = json.loads(manifest_path.read_text(encoding="utf-8"))
    return {op["name"] for op in doc["operators"]}


def cell_source(cell: dict) -> str:
    src = cell.get("source", "")
    return "".join(src) if isinstance(src, list) else src


def has_sklearn_code(source: str, names: set[str]) -> bool:
    if re.search(r"^\s*(?:import\s+sklearn\b|from\s+sklearn\b)", source, re.MULTILINE):
        return True
    for m in re.finditer(r"(?<![\w.])([A-Za-z_][A-Za-z0-9_]*)\s*\(", source):
        if m.group(1) in names:
            return True
    return False


def looks_english(text: str) -> bool:
    alpha = [c for c in text if c.isalpha()]
    if not alpha:
        return False
    if sum(1 for c in alpha if c.isascii()) / len(alpha) < 0.70:
        return False
    return any(t in STOPWORDS for t in re.findall(r"[a-z]+", text.lower()))


def strip_comments(code: str) -> str:
    out = []
    for line in code.splitlines():
        if re.match(r"\s*[%!]", line):
            out.append("")
            continue
        buf, quote, i = [], None, 0
        while i < len(line):
            ch = line[i]
            if quote:
                buf.append(ch)
                if ch == "\\" and i + 1 < len(line):
                    buf.append(line[i + 1])
                    i += 1
                elif ch == quote:
                    quote = None
            elif ch in "'\"":
                quote = ch
                buf.append(ch)
            elif ch == "#":
                break
            else:
                buf.append(ch)
            i += 1
        out.append("".join(buf))
    return "\n".join(out)


def find_invocations(code: str, names: set[str]) -> list[str]:
    """Operator call sites rendered in a normalized keyword/positional form."""
    code = strip_comments(code)
    found = []
    for m in re.finditer(r"(?<![\w.])([A-Za-z_][A-Za-z0-9_]*)\s*\(", code):
        if m.group(1) not in names:
            continue
        start = m.end() - 1
        depth, quote, i = 0, None, start
        end = None
        while i < len(code):
            ch = code[i]
            if quote:
                if ch == "\\":
                    i += 1
                elif ch == quote:
                    quote = None
            elif ch in "'\"":
                quote = ch
            elif ch in "([{":
                depth += 1
            elif ch in ")]}":
                depth -= 1
                if depth == 0:
                    end = i + 1
                    break
            i += 1
        if end is None:
            continue  # unbalanced: skipped
        rendered = render_call(m.group(1), code[start + 1:end - 1])
        if rendered is not None:
            found.append(rendered)
    return found


def split_args(argtext: str) -> list[str]:
    parts, buf, depth, quote = [], [], 0, None
    for ch in argtext:
        if quote:
            buf.append(ch)
            if ch == quote:
                quote = None
            continue
        if ch in "'\"":
            quote = ch
            buf.append(ch)
        elif ch in "([{":
            depth += 1
            buf.append(ch)
        elif ch in ")]}":
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


LITERAL = re.compile(r"^(?:-?\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+|'[^']*'|\"[^\"]*\"|True|False|None)$")
IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def render_value(text: str) -> str:
    text = text.strip()
    if LITERAL.match(text):
        if text and text[0] in "'\"":
            return "'" + text[1:-1] + "'"
        if re.match(r"^-?\d+$", text):
            return text
        if text in ("True", "False", "None"):
            return text
        return repr(float(text))
    return "MASK"


def render_call(name: str, argtext: str) -> str | None:
    parts = split_args(argtext)
    rendered = []
    for part in parts:
        if not part:
            return None
        kw = re.match(r"^\s*([A-Za-z_]\w*)\s*=(?!=)\s*(.*)$", part, re.DOTALL)
        if kw:
            rendered.append(f"{kw.group(1)}={render_value(kw.group(2))}")
        elif IDENT.match(part) and part not in ("True", "False", "None"):
            rendered.append(part)
        else:
            rendered.append(render_value(part))
    return f"{name}({', '.join(rendered)})"


def recount(notebook_dir: Path, manifest_path: Path, ratios=(0.88, 0.06, 0.06)) -> dict:
    names = load_operator_names(manifest_path)
    counts = {"notebooks": 0, "with_sklearn": 0, "english": 0,
              "paired": 0, "discarded": 0, "pairs": 0, "deduped": 0}
    kept: list[tuple[str, int, str]] = []
    for path in sorted(notebook_dir.glob("*.ipynb")):
        counts["notebooks"] += 1
        doc = json.loads(path.read_text(encoding="utf-8"))
        cells = [c for c in doc.get("cells", []) if c.get("cell_type") in ("markdown", "code")]
        indexed = [(i, c) for i, c in enumerate(doc.get("cells", []))
                   if c.get("cell_type") in ("markdown", "code")]
        if not any(c.get("cell_type") == "code" and has_sklearn_code(cell_source(c), names) for c in cells):
            continue
        counts["with_sklearn"] += 1
        if not any(c.get("cell_type") == "markdown" and looks_english(cell_source(c)) for c in cells):
            continue
        counts["english"] += 1
        last_md = None
        for idx, cell in indexed:
            if cell.get("cell_type") == "markdown":
                last_md = cell
            elif has_sklearn_code(cell_source(cell), names):
                if last_md is None:
                    continue
                counts["paired"] += 1
                nl = "\n".join(re.sub(r"^\s*#+\s*", "", ln) for ln in cell_source(last_md).splitlines()).strip()
                invocations = find_invocations(cell_source(cell), names)
                if not invocations or not nl:
                    counts["discarded"] += 1
                    continue
                kept.append((path.stem, idx, nl, "\n".join(invocations)))
    counts["pairs"] = len(kept)
    seen, deduped = set(), []
    for nb, idx, nl, code in kept:
        key = (nl.strip(), code)
        if key in seen:
            continue
        seen.add(key)
        deduped.append((nb, idx, code))
    counts["deduped"] = len(deduped)
    n = len(deduped)
    cut1 = math.floor(n * ratios[0] + 1e-9)
    cut2 = math.floor(n * (ratios[0] + ratios[1]) + 1e-9)
    counts["splits"] = {"train": cut1, "valid": cut2 - cut1, "test": n - cut2}
    counts["kept_pairs"] = [[nb, idx, code] for nb, idx, code in deduped]
    return counts


if __name__ == "__main__":
    here = Path(__file__).parent
    manifest = here.parent.parent / "src" / "pipestudio" / "data" / "manifest.json"
    print(json.dumps(recount(here / "notebooks", manifest, ), indent=2))
