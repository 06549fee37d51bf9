"""Translation between probability models and two-level Kripke structures.

Each model world w yields two structure worlds, (w, 1) and (w, 2).  Edges
record positive probability: (x, 2) reaches (y, 1) when the second-order
probability of the singleton {y} at x is positive, and (x, 1) reaches
(y, 1) when pr1[x] gives y positive weight.  The domain and interpretation
carry over unchanged, read through the underlying world.

Necessity corresponds to probability one on finite models, so an alethic
sentence can be rewritten into the probability language: possibility is
eliminated through negation first, then each box becomes a probability-one
operator at the level its nesting position dictates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import DepthError, EvaluationError, MixedModalityError
from .model import Assignment, Interpretation, Model, WorldId
from .syntax import (
    And, Atom, Box, Dia, Exists, Forall, Formula, Implies, Interval, Not, Or,
    Prob, Var, contains_prob, modal_depth, render,
)

__all__ = [
    "LeveledWorld",
    "KripkeStructure",
    "to_kripke",
    "is_transitive",
    "is_serial",
    "eval_alethic",
    "probabilistic_translation",
    "kripke_to_doc",
]


@dataclass(frozen=True)
class LeveledWorld:
    base: WorldId
    level: int

    def __str__(self) -> str:
        return f"{self.base}@{self.level}"


@dataclass
class KripkeStructure:
    """Worlds, an accessibility relation, and the carried-over interpretation.

    The world list fixes the deterministic order used for counterexamples.
    """

    worlds: list[LeveledWorld]
    edges: set[tuple[LeveledWorld, LeveledWorld]]
    domain: list[str] = field(default_factory=list)
    interpretation: Interpretation = field(default_factory=Interpretation)

    def successors(self, w: LeveledWorld) -> list[LeveledWorld]:
        return [v for v in self.worlds if (w, v) in self.edges]


def to_kripke(m: Model) -> KripkeStructure:
    """Build the two-level structure whose edges mark positive probability."""
    level1 = {w: LeveledWorld(w, 1) for w in m.worlds}
    level2 = {w: LeveledWorld(w, 2) for w in m.worlds}
    worlds = [level1[w] for w in m.worlds] + [level2[w] for w in m.worlds]

    edges: set[tuple[LeveledWorld, LeveledWorld]] = set()
    for x in m.worlds:
        for y in m.worlds:
            if m.pr1[x][y] > 0:
                edges.add((level1[x], level1[y]))
            # second-order mass of the singleton {y}, by expectation
            singleton = sum((m.pr2[x][wp] * m.pr1[wp][y] for wp in m.worlds),
                            Fraction(0))
            if singleton > 0:
                edges.add((level2[x], level1[y]))
    return KripkeStructure(worlds, edges, list(m.domain), m.interpretation)


def is_transitive(k: KripkeStructure):
    """(holds, counterexample): the first triple (a, b, c) in world order
    with a->b and b->c but not a->c, or None."""
    for a in k.worlds:
        for b in k.worlds:
            if (a, b) not in k.edges:
                continue
            for c in k.worlds:
                if (b, c) in k.edges and (a, c) not in k.edges:
                    return False, (a, b, c)
    return True, None


def is_serial(k: KripkeStructure):
    """(holds, counterexample): the first world with no outgoing edge, or None."""
    for w in k.worlds:
        if not any((w, v) in k.edges for v in k.worlds):
            return False, w
    return True, None


def eval_alethic(k: KripkeStructure, w: LeveledWorld, g: Assignment,
                 f: Formula) -> bool:
    """Standard modal evaluation: box is universal and dia existential over
    accessibility successors.  Probability operators are rejected."""
    if isinstance(f, Atom):
        values = tuple(_denote(k, g, t) for t in f.args)
        if f.name not in k.interpretation.arities:
            raise EvaluationError(f"unknown predicate {f.name!r}")
        return values in k.interpretation.extension(f.name, w.base)
    if isinstance(f, Not):
        return not eval_alethic(k, w, g, f.body)
    if isinstance(f, And):
        return eval_alethic(k, w, g, f.left) and eval_alethic(k, w, g, f.right)
    if isinstance(f, Or):
        return eval_alethic(k, w, g, f.left) or eval_alethic(k, w, g, f.right)
    if isinstance(f, Implies):
        return (not eval_alethic(k, w, g, f.left)) or eval_alethic(k, w, g, f.right)
    if isinstance(f, Forall):
        return all(eval_alethic(k, w, {**g, f.var: d}, f.body) for d in k.domain)
    if isinstance(f, Exists):
        return any(eval_alethic(k, w, {**g, f.var: d}, f.body) for d in k.domain)
    if isinstance(f, Box):
        return all(eval_alethic(k, v, g, f.body) for v in k.successors(w))
    if isinstance(f, Dia):
        return any(eval_alethic(k, v, g, f.body) for v in k.successors(w))
    if isinstance(f, Prob):
        raise EvaluationError(
            "probability operators cannot be evaluated on a Kripke structure")
    raise TypeError(f"not a formula node: {f!r}")


def _denote(k: KripkeStructure, g: Assignment, term) -> str:
    if isinstance(term, Var):
        try:
            return g[term.name]
        except KeyError:
            raise EvaluationError(f"unbound variable {term.name!r}") from None
    try:
        return k.interpretation.constants[term.name]
    except KeyError:
        raise EvaluationError(f"unknown constant {term.name!r}") from None


# ---------------------------------------------------------------------------
# Alethic-to-probabilistic rewriting
# ---------------------------------------------------------------------------

_ONE = Interval(Fraction(1), Fraction(1))


def probabilistic_translation(f: Formula) -> Formula:
    """Rewrite an alethic sentence into the probability language.

    Dia becomes ~box~ first; every box then becomes a probability-one
    operator, level 2 when outermost and level 1 under one enclosing box.
    Non-modal formulas come back unchanged.  Modal depth above two is
    rejected, matching the depth-two probability discipline.
    """
    if contains_prob(f):
        raise MixedModalityError(
            "expected an alethic sentence without probability operators")
    if modal_depth(f) > 2:
        raise DepthError("modal nesting deeper than two levels cannot be translated")
    return _translate(_eliminate_dia(f), 0)


def _eliminate_dia(f: Formula) -> Formula:
    if isinstance(f, Dia):
        return Not(Box(Not(_eliminate_dia(f.body))))
    if isinstance(f, Atom):
        return f
    if isinstance(f, Not):
        return Not(_eliminate_dia(f.body))
    if isinstance(f, And):
        return And(_eliminate_dia(f.left), _eliminate_dia(f.right))
    if isinstance(f, Or):
        return Or(_eliminate_dia(f.left), _eliminate_dia(f.right))
    if isinstance(f, Implies):
        return Implies(_eliminate_dia(f.left), _eliminate_dia(f.right))
    if isinstance(f, Forall):
        return Forall(f.var, _eliminate_dia(f.body))
    if isinstance(f, Exists):
        return Exists(f.var, _eliminate_dia(f.body))
    if isinstance(f, Box):
        return Box(_eliminate_dia(f.body))
    raise TypeError(f"not a formula node: {f!r}")


def _translate(f: Formula, enclosing_boxes: int) -> Formula:
    if isinstance(f, Box):
        level = 2 if enclosing_boxes == 0 else 1
        return Prob(level, _ONE, _translate(f.body, enclosing_boxes + 1))
    if isinstance(f, Atom):
        return f
    if isinstance(f, Not):
        return Not(_translate(f.body, enclosing_boxes))
    if isinstance(f, And):
        return And(_translate(f.left, enclosing_boxes),
                   _translate(f.right, enclosing_boxes))
    if isinstance(f, Or):
        return Or(_translate(f.left, enclosing_boxes),
                  _translate(f.right, enclosing_boxes))
    if isinstance(f, Implies):
        return Implies(_translate(f.left, enclosing_boxes),
                       _translate(f.right, enclosing_boxes))
    if isinstance(f, Forall):
        return Forall(f.var, _translate(f.body, enclosing_boxes))
    if isinstance(f, Exists):
        return Exists(f.var, _translate(f.body, enclosing_boxes))
    raise TypeError(f"unexpected node after dia elimination: {f!r}")


def kripke_to_doc(k: KripkeStructure) -> dict:
    """Adjacency JSON: worlds as `base@level`, edges as ordered pairs,
    plus the carried domain and interpretation."""
    predicates = {}
    bases = list(dict.fromkeys(w.base for w in k.worlds))
    for pred, arity in k.interpretation.arities.items():
        predicates[pred] = {
            "arity": arity,
            "extension": {
                b: sorted(list(t) for t in k.interpretation.extension(pred, b))
                for b in bases
                if k.interpretation.extension(pred, b)
            },
        }
    return {
        "worlds": [str(w) for w in k.worlds],
        "edges": sorted([str(a), str(b)] for a, b in k.edges),
        "domain": list(k.domain),
        "predicates": predicates,
        "constants": dict(k.interpretation.constants),
    }
