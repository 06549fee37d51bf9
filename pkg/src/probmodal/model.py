"""Finite possible-world models with two probability distributions per world.

A model bundles a world list, a constant individual domain, one first-order
and one second-order distribution per world, and a per-world interpretation
of predicates.  All weights are exact rationals; distributions must sum to
exactly 1.  Models are treated as immutable after loading.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Optional, Union

from .errors import ModelError

__all__ = [
    "WorldId",
    "Assignment",
    "Distribution",
    "Interpretation",
    "Model",
    "Violation",
    "load_model",
    "model_from_doc",
    "model_to_doc",
    "save_model",
    "validate_model",
    "pr1_classes",
    "check_equivalence_class_constraint",
    "to_fraction",
]

WorldId = str
Assignment = Mapping[str, str]


def to_fraction(value) -> Fraction:
    """Coerce a JSON-ish numeric value to an exact rational.

    Strings accept `p/q` and decimal forms.  Floats are read through their
    shortest decimal representation, so 0.2 from a JSON parse means 1/5;
    clients that need full exactness should send strings.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ModelError(f"expected a number, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(str(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ModelError(f"bad rational literal {value!r}") from exc
    raise ModelError(f"expected a number, got {value!r}")


@dataclass
class Distribution:
    """Probability weights over the worlds of one model."""

    weights: dict[WorldId, Fraction]

    def __getitem__(self, world: WorldId) -> Fraction:
        return self.weights.get(world, Fraction(0))

    def mass(self, worlds: Iterable[WorldId]) -> Fraction:
        return sum((self[w] for w in worlds), Fraction(0))

    def total(self) -> Fraction:
        return sum(self.weights.values(), Fraction(0))

    def support(self) -> list[WorldId]:
        return [w for w, p in self.weights.items() if p > 0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Distribution):
            return NotImplemented
        keys = set(self.weights) | set(other.weights)
        return all(self[w] == other[w] for w in keys)


@dataclass
class Interpretation:
    """Predicate arities and per-world extensions, plus rigid constants."""

    arities: dict[str, int] = field(default_factory=dict)
    extensions: dict[str, dict[WorldId, set[tuple[str, ...]]]] = field(default_factory=dict)
    constants: dict[str, str] = field(default_factory=dict)

    def extension(self, predicate: str, world: WorldId) -> set[tuple[str, ...]]:
        return self.extensions.get(predicate, {}).get(world, set())


@dataclass
class Model:
    worlds: list[WorldId]
    domain: list[str]
    pr1: dict[WorldId, Distribution]
    pr2: dict[WorldId, Distribution]
    interpretation: Interpretation

    @property
    def signature(self) -> dict[str, int]:
        return dict(self.interpretation.arities)


@dataclass
class Violation:
    """One failed model invariant; data, not an exception."""

    kind: str
    subject: str
    message: str

    def __str__(self) -> str:
        return self.message


# ---------------------------------------------------------------------------
# Loading and serialization
# ---------------------------------------------------------------------------

_TOP_KEYS = {"worlds", "domain", "pr1", "pr2", "predicates", "constants"}


def load_model(source: Union[str, Path, dict]) -> Model:
    """Load and validate a model from a JSON file path or a parsed document.

    File contents are parsed with exact numerics (JSON 0.2 becomes 1/5).
    Raises ModelError on schema problems or any invariant violation.
    """
    if isinstance(source, (str, Path)):
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise ModelError(f"cannot read model file {source}: {exc}") from exc
        try:
            doc = json.loads(text, parse_float=Fraction, parse_int=Fraction)
        except json.JSONDecodeError as exc:
            raise ModelError(f"model file {source} is not valid JSON: {exc}") from exc
    elif isinstance(source, dict):
        doc = source
    else:
        raise ModelError(f"cannot load a model from {type(source).__name__}")
    return model_from_doc(doc)


def model_from_doc(doc: dict) -> Model:
    """Build a validated Model from a JSON-shaped document."""
    if not isinstance(doc, dict):
        raise ModelError("model document must be a JSON object")
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise ModelError(f"unknown model keys: {sorted(unknown)}")
    for key in ("worlds", "pr1", "pr2"):
        if key not in doc:
            raise ModelError(f"model document is missing {key!r}")

    worlds = [str(w) for w in doc["worlds"]]
    if len(set(worlds)) != len(worlds):
        raise ModelError("world names must be unique")
    if not worlds:
        raise ModelError("a model needs at least one world")
    world_set = set(worlds)

    domain = [str(d) for d in doc.get("domain", [])]
    if len(set(domain)) != len(domain):
        raise ModelError("domain individuals must be unique")

    def read_family(name: str) -> dict[WorldId, Distribution]:
        raw = doc[name]
        if not isinstance(raw, dict):
            raise ModelError(f"{name} must map worlds to weight objects")
        for w in raw:
            if w not in world_set:
                raise ModelError(f"{name} mentions unknown world {w!r}")
        family = {}
        for w in worlds:
            entries = raw.get(w, {})
            weights = {v: Fraction(0) for v in worlds}
            for target, value in entries.items():
                if target not in world_set:
                    raise ModelError(
                        f"{name}[{w}] assigns weight to unknown world {target!r}")
                weights[target] = to_fraction(value)
            family[w] = Distribution(weights)
        return family

    pr1 = read_family("pr1")
    pr2 = read_family("pr2")

    arities: dict[str, int] = {}
    extensions: dict[str, dict[WorldId, set[tuple[str, ...]]]] = {}
    for pred, spec in doc.get("predicates", {}).items():
        if not isinstance(spec, dict) or "arity" not in spec:
            raise ModelError(f"predicate {pred!r} needs an object with an arity")
        arity = spec["arity"]
        if isinstance(arity, Fraction):
            if arity.denominator != 1:
                raise ModelError(f"predicate {pred!r} arity must be an integer")
            arity = int(arity)
        if not isinstance(arity, int) or arity < 0:
            raise ModelError(f"predicate {pred!r} arity must be a non-negative integer")
        arities[pred] = arity
        per_world = {w: set() for w in worlds}
        for w, tuples in spec.get("extension", {}).items():
            if w not in world_set:
                raise ModelError(f"predicate {pred!r} has an extension at unknown world {w!r}")
            for tup in tuples:
                if not isinstance(tup, (list, tuple)):
                    raise ModelError(
                        f"extension entries for {pred!r} must be arrays of individuals")
                per_world[w].add(tuple(str(x) for x in tup))
        extensions[pred] = per_world

    constants = {str(k): str(v) for k, v in doc.get("constants", {}).items()}

    model = Model(worlds, domain, pr1, pr2,
                  Interpretation(arities, extensions, constants))
    problems = validate_model(model)
    if problems:
        raise ModelError("; ".join(str(p) for p in problems))
    return model


def model_to_doc(m: Model) -> dict:
    """Serialize a model to its JSON document form (weights as `p/q` strings)."""
    def family(dists: dict[WorldId, Distribution]) -> dict:
        return {w: {v: str(dists[w][v]) for v in m.worlds} for w in m.worlds}

    predicates = {}
    for pred, arity in m.interpretation.arities.items():
        predicates[pred] = {
            "arity": arity,
            "extension": {
                w: sorted(list(t) for t in m.interpretation.extension(pred, w))
                for w in m.worlds
                if m.interpretation.extension(pred, w)
            },
        }
    return {
        "worlds": list(m.worlds),
        "domain": list(m.domain),
        "pr1": family(m.pr1),
        "pr2": family(m.pr2),
        "predicates": predicates,
        "constants": dict(m.interpretation.constants),
    }


def save_model(m: Model, path: Union[str, Path]):
    Path(path).write_text(json.dumps(model_to_doc(m), indent=2) + "\n")


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def validate_model(m: Model) -> list[Violation]:
    """Check distribution and interpretation invariants; empty list means valid."""
    out: list[Violation] = []
    world_set = set(m.worlds)
    domain_set = set(m.domain)

    for name, family in (("pr1", m.pr1), ("pr2", m.pr2)):
        for w in m.worlds:
            if w not in family:
                out.append(Violation("missing-distribution", w,
                                     f"{name} has no distribution for world {w}"))
                continue
            dist = family[w]
            extra = set(dist.weights) - world_set
            if extra:
                out.append(Violation("unknown-world", w,
                                     f"{name}[{w}] weights unknown worlds {sorted(extra)}"))
            for target, p in dist.weights.items():
                if p < 0 or p > 1:
                    out.append(Violation(
                        "weight-range", w,
                        f"{name}[{w}] weight for {target} is {p}, outside [0, 1]"))
            total = dist.total()
            if total != 1:
                out.append(Violation(
                    "sum", w, f"{name}[{w}] weights sum to {total}, expected 1"))

    interp = m.interpretation
    for pred, arity in interp.arities.items():
        for w, tuples in interp.extensions.get(pred, {}).items():
            for tup in tuples:
                if len(tup) != arity:
                    out.append(Violation(
                        "arity", pred,
                        f"extension of {pred} at {w} contains {tup}, arity is {arity}"))
                bad = [x for x in tup if x not in domain_set]
                if bad:
                    out.append(Violation(
                        "individual", pred,
                        f"extension of {pred} at {w} uses individuals {bad} outside the domain"))
    for name, individual in interp.constants.items():
        if individual not in domain_set:
            out.append(Violation(
                "constant", name,
                f"constant {name} denotes {individual!r}, which is not in the domain"))
    return out


# ---------------------------------------------------------------------------
# First-order distribution classes
# ---------------------------------------------------------------------------

def pr1_classes(m: Model) -> list[list[WorldId]]:
    """Group worlds by exact equality of their first-order distributions.

    Blocks are ordered by first occurrence in the model's world order and
    are disjoint and exhaustive.
    """
    classes: list[list[WorldId]] = []
    keys: list[tuple] = []
    for w in m.worlds:
        key = tuple(m.pr1[w][v] for v in m.worlds)
        for i, existing in enumerate(keys):
            if existing == key:
                classes[i].append(w)
                break
        else:
            keys.append(key)
            classes.append([w])
    return classes


def check_equivalence_class_constraint(m: Model) -> list[Violation]:
    """Every world's first-order distribution must put mass 1 on its own class."""
    out: list[Violation] = []
    for block in pr1_classes(m):
        for w in block:
            mass = m.pr1[w].mass(block)
            if mass != 1:
                out.append(Violation(
                    "equivalence-class", w,
                    f"pr1[{w}] puts mass {mass} on its class {{{', '.join(block)}}}, expected 1"))
    return out
