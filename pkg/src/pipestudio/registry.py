"""Operator registry: manifest loading, schema validation, keyword search.

Every operator the workbench knows about comes from a JSON manifest with a
core tier (executable by the tabular engine) and an extended, metadata-only
tier used for palette and search realism.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

VALUE_KINDS = ("integer", "real", "boolean", "enum")
OPERATOR_KINDS = ("transformer", "predictor", "utility")


class ManifestError(ValueError):
    """Malformed manifest document; carries the offending entry location."""

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


@dataclass(frozen=True)
class Violation:
    """A concrete value failing a hyper-parameter schema."""

    param: str
    reason: str

    def __str__(self) -> str:
        return f"{self.param}: {self.reason}"


@dataclass(frozen=True)
class HyperparamSpec:
    name: str
    description: str
    value_kind: str  # one of VALUE_KINDS
    default: object
    min: float | None = None
    max: float | None = None
    choices: tuple[str, ...] = ()
    nullable: bool = False

    def validate(self, value: object) -> Violation | None:
        """Return None when value satisfies kind/range/choices, else a Violation.

        Only concrete literals validate; MASK-like placeholders must be
        rejected by the caller before reaching here (None is a literal and is
        accepted only when the spec is nullable).
        """
        if value is None:
            if self.nullable:
                return None
            return Violation(self.name, "value must not be null")
        if self.value_kind == "integer":
            if isinstance(value, bool) or not isinstance(value, int):
                return Violation(self.name, f"expected an integer, got {value!r}")
            return self._check_range(value)
        if self.value_kind == "real":
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                return Violation(self.name, f"expected a number, got {value!r}")
            return self._check_range(float(value))
        if self.value_kind == "boolean":
            if not isinstance(value, bool):
                return Violation(self.name, f"expected true or false, got {value!r}")
            return None
        if self.value_kind == "enum":
            if not isinstance(value, str):
                return Violation(self.name, f"expected one of {list(self.choices)}, got {value!r}")
            if value not in self.choices:
                return Violation(self.name, f"{value!r} is not one of {list(self.choices)}")
            return None
        return Violation(self.name, f"unknown value kind {self.value_kind!r}")

    def _check_range(self, value: float) -> Violation | None:
        if self.min is not None and value < self.min:
            return Violation(self.name, f"{value} is below the minimum {self.min}")
        if self.max is not None and value > self.max:
            return Violation(self.name, f"{value} is above the maximum {self.max}")
        return None


@dataclass(frozen=True)
class OperatorSpec:
    name: str
    kind: str  # one of OPERATOR_KINDS
    summary: str
    executable: bool
    hyperparams: tuple[HyperparamSpec, ...] = ()

    def param(self, name: str) -> HyperparamSpec | None:
        for p in self.hyperparams:
            if p.name == name:
                return p
        return None


@dataclass
class Registry:
    """Immutable-after-load map of operator name to spec.

    Iteration order is deterministic (sorted by name); lookup is exact and
    case-sensitive because operator names are code identifiers.
    """

    operators: dict[str, OperatorSpec] = field(default_factory=dict)
    manifest_version: str = "0"

    def __iter__(self):
        return iter(sorted(self.operators))

    def __len__(self) -> int:
        return len(self.operators)

    def __contains__(self, name: str) -> bool:
        return name in self.operators

    def lookup(self, name: str) -> OperatorSpec | None:
        return self.operators.get(name)

    def specs(self) -> list[OperatorSpec]:
        return [self.operators[name] for name in sorted(self.operators)]


def default_manifest_path() -> Path:
    return Path(__file__).parent / "data" / "manifest.json"


def load_manifest(path: str | Path | None = None) -> Registry:
    """Load a manifest document into a Registry, checking every invariant.

    Raises ManifestError with the entry location for malformed documents,
    duplicate operator names, or defaults violating their own schema.
    """
    path = Path(path) if path is not None else default_manifest_path()
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ManifestError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("operators"), list):
        raise ManifestError('manifest must be an object with an "operators" array')

    registry = Registry(manifest_version=str(doc.get("version", "0")))
    for i, entry in enumerate(doc["operators"]):
        loc = f"operators[{i}]"
        spec = _parse_operator(entry, loc)
        if spec.name in registry.operators:
            raise ManifestError(f"duplicate operator name {spec.name!r}", loc)
        registry.operators[spec.name] = spec
    return registry


def _parse_operator(entry: object, loc: str) -> OperatorSpec:
    if not isinstance(entry, dict):
        raise ManifestError("operator entry must be an object", loc)
    for key in ("name", "kind", "summary", "executable"):
        if key not in entry:
            raise ManifestError(f"missing field {key!r}", loc)
    if entry["kind"] not in OPERATOR_KINDS:
        raise ManifestError(f"kind must be one of {OPERATOR_KINDS}, got {entry['kind']!r}", loc)

    params: list[HyperparamSpec] = []
    seen: set[str] = set()
    for j, praw in enumerate(entry.get("hyperparams", [])):
        ploc = f"{loc}.hyperparams[{j}]"
        spec = _parse_hyperparam(praw, ploc)
        if spec.name in seen:
            raise ManifestError(f"duplicate hyper-parameter name {spec.name!r}", ploc)
        seen.add(spec.name)
        violation = spec.validate(spec.default)
        if violation is not None:
            raise ManifestError(f"default violates its own schema ({violation})", ploc)
        params.append(spec)

    return OperatorSpec(
        name=str(entry["name"]),
        kind=entry["kind"],
        summary=str(entry["summary"]),
        executable=bool(entry["executable"]),
        hyperparams=tuple(params),
    )


def _parse_hyperparam(raw: object, loc: str) -> HyperparamSpec:
    if not isinstance(raw, dict):
        raise ManifestError("hyperparam entry must be an object", loc)
    for key in ("name", "description", "type"):
        if key not in raw:
            raise ManifestError(f"missing field {key!r}", loc)
    if "default" not in raw:
        raise ManifestError("missing field 'default'", loc)
    kind = raw["type"]
    if kind not in VALUE_KINDS:
        raise ManifestError(f"type must be one of {VALUE_KINDS}, got {kind!r}", loc)
    choices = tuple(raw.get("choices", ()))
    if kind == "enum" and not choices:
        raise ManifestError("enum type requires at least one choice", loc)
    mn, mx = raw.get("min"), raw.get("max")
    if mn is not None and mx is not None and mn > mx:
        raise ManifestError(f"min {mn} exceeds max {mx}", loc)
    return HyperparamSpec(
        name=str(raw["name"]),
        description=str(raw["description"]),
        value_kind=kind,
        default=raw["default"],
        min=mn,
        max=mx,
        choices=choices,
        nullable=bool(raw.get("nullable", False)),
    )


def lookup(registry: Registry, name: str) -> OperatorSpec | None:
    """Exact, case-sensitive lookup; None when absent."""
    return registry.lookup(name)


def keyword_filter(registry: Registry, query: str) -> list[OperatorSpec]:
    """Case-insensitive substring search over operator names.

    The empty query matches everything; results follow registry iteration
    order (sorted by name).
    """
    needle = query.lower()
    return [spec for spec in registry.specs() if needle in spec.name.lower()]


def validate_value(spec: HyperparamSpec, value: object) -> Violation | None:
    return spec.validate(value)
