"""Pipeline DSL: AST types, text parser/serializer, block-graph projection.

The textual surface form is a linear chain of operator invocations joined by
">>", with keyword-only arguments whose values are literals or the reserved
MASK placeholder:

    SimpleImputer(strategy='mean') >> StandardScaler() >> DecisionTreeClassifier()

Corpus targets share the same grammar but additionally allow positional
arguments (bare literals, MASK, or plain identifiers), which round-trip
through synthetic pos0.. parameter names.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace

from .registry import Registry

MASK_TOKEN = "MASK"
RESERVED = {"MASK", "True", "False", "None"}

# ArgValue kinds
INT, REAL, STR, BOOL, NONE, MASK, EXPR = "int", "real", "str", "bool", "none", "mask", "expr"


class PipelineSyntaxError(ValueError):
    """Parse failure with 1-based position and an expected-token hint."""

    def __init__(self, message: str, line: int, col: int, expected: str = ""):
        self.line, self.col, self.expected = line, col, expected
        hint = f" (expected {expected})" if expected else ""
        super().__init__(f"{line}:{col}: {message}{hint}")


@dataclass(frozen=True)
class ArgValue:
    """One argument value: a literal, a bare identifier, or the MASK placeholder.

    String literals keep their unquoted content plus the quote character that
    delimited them so serialization can reproduce the source form.
    """

    kind: str
    value: object = None
    quote: str = "'"

    @property
    def is_mask(self) -> bool:
        return self.kind == MASK

    def literal(self) -> object:
        """Plain Python value for schema validation; MASK/expr have none."""
        if self.kind in (MASK, EXPR):
            raise ValueError(f"{self.kind} has no literal value")
        return self.value

    def render(self) -> str:
        if self.kind == MASK:
            return MASK_TOKEN
        if self.kind == NONE:
            return "None"
        if self.kind == BOOL:
            return "True" if self.value else "False"
        if self.kind == STR:
            q = self.quote or "'"
            body = str(self.value).replace("\\", "\\\\").replace(q, "\\" + q)
            return f"{q}{body}{q}"
        if self.kind == EXPR:
            return str(self.value)
        if self.kind == REAL:
            return repr(float(self.value))
        return repr(int(self.value))


def mask() -> ArgValue:
    return ArgValue(MASK)


def value_of(obj: object, quote: str = "'") -> ArgValue:
    """Wrap a plain Python literal in an ArgValue."""
    if obj is None:
        return ArgValue(NONE)
    if isinstance(obj, bool):
        return ArgValue(BOOL, obj)
    if isinstance(obj, int):
        return ArgValue(INT, obj)
    if isinstance(obj, float):
        return ArgValue(REAL, obj)
    if isinstance(obj, str):
        return ArgValue(STR, obj, quote)
    raise TypeError(f"unsupported literal {obj!r}")


@dataclass(frozen=True)
class Arg:
    name: str
    value: ArgValue
    positional: bool = False


@dataclass(frozen=True)
class Invocation:
    operator: str
    args: tuple[Arg, ...] = ()

    def arg(self, name: str) -> Arg | None:
        for a in self.args:
            if a.name == name:
                return a
        return None

    def render(self) -> str:
        parts = [a.value.render() if a.positional else f"{a.name}={a.value.render()}" for a in self.args]
        return f"{self.operator}({', '.join(parts)})"


@dataclass(frozen=True)
class PipelineAst:
    steps: tuple[Invocation, ...] = ()


@dataclass(frozen=True)
class Block:
    id: str
    invocation: Invocation
    x: float = 0.0
    y: float = 0.0


@dataclass
class BlockGraph:
    """Canvas contents: all blocks plus the chain attached below Start.

    Blocks not listed in the chain are detached: they stay on the canvas but
    contribute nothing to the active pipeline.
    """

    blocks: list[Block] = field(default_factory=list)
    chain: list[str] = field(default_factory=list)

    def block(self, block_id: str) -> Block | None:
        for b in self.blocks:
            if b.id == block_id:
                return b
        return None


class DanglingBlockError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Tokenizer

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<chain>>>)
  | (?P<real>-?(?:\d+\.\d*|\.\d+|\d+(?:\.\d*)?[eE][+-]?\d+))
  | (?P<int>-?\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<str>'(?:\\.|[^'\\])*'|"(?:\\.|[^"\\])*")
  | (?P<sym>[(),=])
    """,
    re.VERBOSE,
)

_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", "\\": "\\", "'": "'", '"': '"'}


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    col: int


def _tokenize_source(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise PipelineSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup or ""
        raw = m.group()
        if kind != "ws":
            tokens.append(_Token(kind, raw, line, col))
        newlines = raw.count("\n")
        if newlines:
            line += newlines
            col = len(raw) - raw.rfind("\n")
        else:
            col += len(raw)
        pos = m.end()
    tokens.append(_Token("eof", "", line, col))
    return tokens


def _unescape(body: str) -> str:
    out, i = [], 0
    while i < len(body):
        ch = body[i]
        if ch == "\\" and i + 1 < len(body):
            out.append(_ESCAPES.get(body[i + 1], body[i + 1]))
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


class _Parser:
    def __init__(self, text: str, allow_positional: bool):
        self.tokens = _tokenize_source(text)
        self.pos = 0
        self.allow_positional = allow_positional

    @property
    def cur(self) -> _Token:
        return self.tokens[self.pos]

    def _advance(self) -> _Token:
        tok = self.cur
        self.pos += 1
        return tok

    def _fail(self, message: str, expected: str = "") -> PipelineSyntaxError:
        raise PipelineSyntaxError(message, self.cur.line, self.cur.col, expected)

    def _expect(self, kind: str, text: str | None = None, expected: str = "") -> _Token:
        tok = self.cur
        if tok.kind != kind or (text is not None and tok.text != text):
            got = repr(tok.text) if tok.kind != "eof" else "end of input"
            self._fail(f"unexpected {got}", expected or (text or kind))
        return self._advance()

    def parse_pipeline(self) -> PipelineAst:
        if self.cur.kind == "eof":
            return PipelineAst()
        steps = [self.parse_invocation()]
        while self.cur.kind == "chain":
            self._advance()
            steps.append(self.parse_invocation())
        self._expect("eof", expected='">>" or end of input')
        return PipelineAst(tuple(steps))

    def parse_invocation_list(self) -> list[Invocation]:
        """Newline-agnostic sequence of invocations (corpus targets)."""
        invocations = []
        while self.cur.kind != "eof":
            invocations.append(self.parse_invocation())
        return invocations

    def parse_invocation(self) -> Invocation:
        name_tok = self._expect("name", expected="an operator name")
        if name_tok.text in RESERVED:
            raise PipelineSyntaxError(
                f"{name_tok.text!r} is reserved", name_tok.line, name_tok.col, "an operator name"
            )
        self._expect("sym", "(", expected='"("')
        args: list[Arg] = []
        seen: set[str] = set()
        n_positional = 0
        if not (self.cur.kind == "sym" and self.cur.text == ")"):
            while True:
                arg = self._parse_arg(n_positional)
                if arg.positional:
                    n_positional += 1
                if arg.name in seen:
                    self._fail(f"duplicate parameter {arg.name!r}")
                seen.add(arg.name)
                args.append(arg)
                if self.cur.kind == "sym" and self.cur.text == ",":
                    self._advance()
                    continue
                break
        self._expect("sym", ")", expected='")" or ","')
        return Invocation(name_tok.text, tuple(args))

    def _parse_arg(self, n_positional: int) -> Arg:
        tok = self.cur
        if tok.kind == "name" and tok.text not in RESERVED:
            nxt = self.tokens[self.pos + 1]
            if nxt.kind == "sym" and nxt.text == "=":
                self._advance()
                self._advance()
                return Arg(tok.text, self._parse_value(keyword=True))
            # bare identifier in value position: a positional expression
            if not self.allow_positional:
                self._fail("positional arguments are not allowed in pipelines", "a keyword argument")
            self._advance()
            return Arg(f"pos{n_positional}", ArgValue(EXPR, tok.text), positional=True)
        if not self.allow_positional:
            self._fail("positional arguments are not allowed in pipelines", "a keyword argument")
        return Arg(f"pos{n_positional}", self._parse_value(keyword=False), positional=True)

    def _parse_value(self, keyword: bool) -> ArgValue:
        tok = self.cur
        if tok.kind == "int":
            self._advance()
            return ArgValue(INT, int(tok.text))
        if tok.kind == "real":
            self._advance()
            return ArgValue(REAL, float(tok.text))
        if tok.kind == "str":
            self._advance()
            return ArgValue(STR, _unescape(tok.text[1:-1]), tok.text[0])
        if tok.kind == "name":
            if tok.text == MASK_TOKEN:
                self._advance()
                return ArgValue(MASK)
            if tok.text == "True":
                self._advance()
                return ArgValue(BOOL, True)
            if tok.text == "False":
                self._advance()
                return ArgValue(BOOL, False)
            if tok.text == "None":
                self._advance()
                return ArgValue(NONE)
            if not keyword:
                self._advance()
                return ArgValue(EXPR, tok.text)
        self._fail("missing or invalid value", "a literal or MASK")
        raise AssertionError("unreachable")


def parse_pipeline(text: str) -> PipelineAst:
    """Parse the keyword-only pipeline surface form; empty text is valid."""
    return _Parser(text, allow_positional=False).parse_pipeline()


def parse_invocation(text: str) -> Invocation:
    """Parse a single invocation in the corpus grammar (positional allowed)."""
    parser = _Parser(text, allow_positional=True)
    inv = parser.parse_invocation()
    parser._expect("eof", expected="end of input")
    return inv


def parse_invocation_lines(text: str) -> list[Invocation]:
    """Parse one or more invocations (corpus target form, one per line)."""
    return _Parser(text, allow_positional=True).parse_invocation_list()


def serialize_invocation(inv: Invocation) -> str:
    return inv.render()


def serialize_pipeline(ast: PipelineAst) -> str:
    """Canonical text: steps joined by " >> ", single space after commas."""
    return " >> ".join(step.render() for step in ast.steps)


# ---------------------------------------------------------------------------
# Validation

ERROR, WARNING = "error", "warning"


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    code: str
    message: str
    step: int | None = None
    param: str | None = None

    def to_json(self) -> dict:
        d = {"severity": self.severity, "code": self.code, "message": self.message}
        if self.step is not None:
            d["step"] = self.step
        if self.param is not None:
            d["param"] = self.param
        return d


def validate_pipeline(ast: PipelineAst, registry: Registry) -> list[Diagnostic]:
    """Schema-check a pipeline; an empty result means valid.

    Diagnostics come out in deterministic order: step order, then argument
    order within a step.
    """
    out: list[Diagnostic] = []
    last = len(ast.steps) - 1
    for i, step in enumerate(ast.steps):
        spec = registry.lookup(step.operator)
        if spec is None:
            out.append(Diagnostic(ERROR, "unknown-operator", f"unknown operator {step.operator!r}", i))
            continue
        if spec.kind == "predictor" and i != last:
            out.append(Diagnostic(
                ERROR, "predictor-position",
                f"predictor {step.operator} must be the final step", i,
            ))
        if not spec.executable:
            out.append(Diagnostic(
                WARNING, "not-executable",
                f"{step.operator} has no execution support; the pipeline cannot run", i,
            ))
        for arg in step.args:
            if arg.positional:
                out.append(Diagnostic(
                    ERROR, "positional-argument",
                    f"{step.operator} has a positional argument; pipelines take keyword arguments only",
                    i, arg.name,
                ))
                continue
            pspec = spec.param(arg.name)
            if pspec is None:
                out.append(Diagnostic(
                    ERROR, "unknown-parameter",
                    f"{step.operator} has no parameter {arg.name!r}", i, arg.name,
                ))
                continue
            if arg.value.is_mask:
                out.append(Diagnostic(
                    ERROR, "unresolved-placeholder",
                    f"{step.operator}.{arg.name} is an unresolved placeholder", i, arg.name,
                ))
                continue
            if arg.value.kind == EXPR:
                out.append(Diagnostic(
                    ERROR, "non-literal-value",
                    f"{step.operator}.{arg.name} is not a literal value", i, arg.name,
                ))
                continue
            violation = pspec.validate(arg.value.literal())
            if violation is not None:
                out.append(Diagnostic(
                    ERROR, "schema-violation",
                    f"{step.operator}.{violation}", i, arg.name,
                ))
    return out


def has_errors(diagnostics: list[Diagnostic]) -> bool:
    return any(d.severity == ERROR for d in diagnostics)


# ---------------------------------------------------------------------------
# Block graph projection

NEW_BLOCK_DX = 180.0


def blocks_to_pipeline(graph: BlockGraph) -> PipelineAst:
    """Project the chained blocks to an AST; detached blocks are ignored."""
    steps = []
    for block_id in graph.chain:
        block = graph.block(block_id)
        if block is None:
            raise DanglingBlockError(f"chain references missing block {block_id!r}")
        steps.append(block.invocation)
    return PipelineAst(tuple(steps))


def pipeline_to_blocks(ast: PipelineAst, existing: BlockGraph | None = None) -> BlockGraph:
    """Project an AST back onto a canvas.

    Chained blocks whose invocation is unchanged (same position in the chain)
    keep their id and coordinates; new steps get fresh ids placed after the
    chain tail. Detached blocks survive untouched.
    """
    existing = existing or BlockGraph()
    old_chain = [existing.block(bid) for bid in existing.chain]
    detached = [b for b in existing.blocks if b.id not in set(existing.chain)]

    used = {b.id for b in existing.blocks}
    counter = 0

    def fresh_id() -> str:
        nonlocal counter
        while True:
            counter += 1
            cand = f"b{counter}"
            if cand not in used:
                used.add(cand)
                return cand

    new_blocks: list[Block] = []
    tail_x, tail_y = 40.0, 40.0
    for i, step in enumerate(ast.steps):
        old = old_chain[i] if i < len(old_chain) else None
        if old is not None and old.invocation == step:
            new_blocks.append(old)
            tail_x, tail_y = old.x, old.y
        else:
            tail_x += NEW_BLOCK_DX
            new_blocks.append(Block(fresh_id(), step, tail_x, tail_y))
    chain = [b.id for b in new_blocks]
    return BlockGraph(blocks=new_blocks + detached, chain=chain)


# ---------------------------------------------------------------------------
# Wire form

def arg_value_to_json(v: ArgValue) -> object:
    if v.kind == MASK:
        return {"mask": True}
    if v.kind == EXPR:
        return {"expr": str(v.value)}
    return v.value


def arg_value_from_json(obj: object) -> ArgValue:
    if isinstance(obj, dict):
        if obj.get("mask") is True:
            return ArgValue(MASK)
        if "expr" in obj:
            return ArgValue(EXPR, str(obj["expr"]))
        raise ValueError(f"unrecognized value object {obj!r}")
    return value_of(obj)


def graph_to_json(graph: BlockGraph) -> dict:
    return {
        "blocks": [
            {
                "id": b.id,
                "operator": b.invocation.operator,
                "args": [{"name": a.name, "value": arg_value_to_json(a.value)} for a in b.invocation.args],
                "x": b.x,
                "y": b.y,
            }
            for b in graph.blocks
        ],
        "chain": list(graph.chain),
    }


def graph_from_json(doc: object) -> BlockGraph:
    if not isinstance(doc, dict) or not isinstance(doc.get("blocks"), list) or not isinstance(doc.get("chain"), list):
        raise ValueError('block graph must be an object with "blocks" and "chain" arrays')
    blocks: list[Block] = []
    ids: set[str] = set()
    for raw in doc["blocks"]:
        if not isinstance(raw, dict) or "id" not in raw or "operator" not in raw:
            raise ValueError(f"malformed block entry {raw!r}")
        block_id = str(raw["id"])
        if block_id in ids:
            raise ValueError(f"duplicate block id {block_id!r}")
        ids.add(block_id)
        args = tuple(
            Arg(str(a["name"]), arg_value_from_json(a["value"]))
            for a in raw.get("args", [])
        )
        blocks.append(Block(block_id, Invocation(str(raw["operator"]), args),
                            float(raw.get("x", 0.0)), float(raw.get("y", 0.0))))
    chain = [str(c) for c in doc["chain"]]
    if len(chain) != len(set(chain)):
        raise ValueError("chain ids must be distinct")
    graph = BlockGraph(blocks, chain)
    for cid in chain:
        if graph.block(cid) is None:
            raise ValueError(f"chain references missing block {cid!r}")
    return graph


def strip_masks(inv: Invocation) -> Invocation:
    """Drop every MASK argument (used when a mask has no fillable default)."""
    return replace(inv, args=tuple(a for a in inv.args if not a.value.is_mask))
