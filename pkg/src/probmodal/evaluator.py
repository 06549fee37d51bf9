"""Semantic evaluation: truth values, probability values, satisfaction.

Atoms are looked up in the world's extension, connectives and quantifiers
behave classically (quantifiers range over the whole domain), and the two
probability operators are evaluated by interval membership:

    P2_I(f) is true at w  iff  prob2(f) at w lies in I
    P1_I(f) is true at w  iff  prob1(f) at w lies in I

prob1 is the first-order measure of the truth set of f; prob2 is the
expectation, under the world's second-order distribution, of the
first-order mass of that truth set.  All arithmetic is exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .errors import EvaluationError, OpenFormulaError
from .model import Assignment, Model, WorldId
from .syntax import (
    And, Atom, Box, Dia, Exists, Forall, Formula, Implies, Not, Or, Prob,
    Var, free_variables, render, subformulas,
)

__all__ = [
    "truth_value",
    "truth_set",
    "prob1",
    "prob2",
    "cond_prob1",
    "cond_prob2",
    "satisfies",
    "valid_in_model",
]

EMPTY: Assignment = {}


def _denote(m: Model, g: Assignment, term) -> str:
    if isinstance(term, Var):
        try:
            return g[term.name]
        except KeyError:
            raise EvaluationError(f"unbound variable {term.name!r}") from None
    try:
        return m.interpretation.constants[term.name]
    except KeyError:
        raise EvaluationError(f"unknown constant {term.name!r}") from None


def truth_value(m: Model, w: WorldId, g: Assignment, f: Formula) -> bool:
    """Semantic value of f at world w under assignment g."""
    if isinstance(f, Atom):
        values = tuple(_denote(m, g, t) for t in f.args)
        if f.name not in m.interpretation.arities:
            raise EvaluationError(f"unknown predicate {f.name!r}")
        return values in m.interpretation.extension(f.name, w)
    if isinstance(f, Not):
        return not truth_value(m, w, g, f.body)
    if isinstance(f, And):
        return truth_value(m, w, g, f.left) and truth_value(m, w, g, f.right)
    if isinstance(f, Or):
        return truth_value(m, w, g, f.left) or truth_value(m, w, g, f.right)
    if isinstance(f, Implies):
        return (not truth_value(m, w, g, f.left)) or truth_value(m, w, g, f.right)
    if isinstance(f, Forall):
        return all(truth_value(m, w, {**g, f.var: d}, f.body) for d in m.domain)
    if isinstance(f, Exists):
        return any(truth_value(m, w, {**g, f.var: d}, f.body) for d in m.domain)
    if isinstance(f, Prob):
        if f.level == 2:
            return prob2(m, w, g, f.body) in f.interval
        if f.level == 1:
            return prob1(m, w, g, f.body) in f.interval
        raise EvaluationError(
            f"unresolved probability level in {render(f)}; run resolve_levels first")
    if isinstance(f, (Box, Dia)):
        raise EvaluationError(
            "box/dia cannot be evaluated against a probability model")
    raise TypeError(f"not a formula node: {f!r}")


def truth_set(m: Model, g: Assignment, f: Formula) -> set[WorldId]:
    """Worlds at which f is true under g."""
    return {w for w in m.worlds if truth_value(m, w, g, f)}


def _reject_alethic(f: Formula):
    if any(isinstance(sub, (Box, Dia)) for sub in subformulas(f)):
        raise EvaluationError("box/dia cannot appear inside a probability argument")


def prob1(m: Model, w: WorldId, g: Assignment, f: Formula) -> Fraction:
    """First-order probability value: pr1-mass of the truth set of f.

    The argument must be free of probability operators (a level-1 argument
    is purely first-order under the depth-two discipline).
    """
    _reject_alethic(f)
    if any(isinstance(sub, Prob) for sub in subformulas(f)):
        raise EvaluationError(
            "a first-order probability argument cannot contain probability operators")
    return m.pr1[w].mass(truth_set(m, g, f))


def prob2(m: Model, w: WorldId, g: Assignment, f: Formula) -> Fraction:
    """Second-order probability value: the expected first-order mass of f.

    Computed as sum over w' of pr2[w](w') times pr1[w'](truth set of f).
    The argument may contain level-1 probability operators only.
    """
    _reject_alethic(f)
    for sub in subformulas(f):
        if isinstance(sub, Prob) and sub.level != 1:
            raise EvaluationError(
                "a second-order probability argument may only nest level-1 operators")
    s = truth_set(m, g, f)
    total = Fraction(0)
    for w_prime in m.worlds:
        weight = m.pr2[w][w_prime]
        if weight:
            total += weight * m.pr1[w_prime].mass(s)
    return total


def cond_prob2(m: Model, w: WorldId, g: Assignment,
               a: Formula, b: Formula) -> Optional[Fraction]:
    """Conditional second-order probability of a given b; None when
    the conditioning mass is zero (the value is undefined, not an error)."""
    denom = prob2(m, w, g, b)
    if denom == 0:
        return None
    return prob2(m, w, g, And(a, b)) / denom


def cond_prob1(m: Model, w: WorldId, g: Assignment,
               a: Formula, b: Formula) -> Optional[Fraction]:
    """Conditional first-order probability of a given b; None when undefined."""
    denom = prob1(m, w, g, b)
    if denom == 0:
        return None
    return prob1(m, w, g, And(a, b)) / denom


def satisfies(m: Model, w: WorldId, s: Formula) -> bool:
    """Truth of a closed sentence at a world."""
    fv = free_variables(s)
    if fv:
        raise OpenFormulaError(
            f"sentence has free variables {sorted(fv)}: {render(s)}")
    return truth_value(m, w, EMPTY, s)


def valid_in_model(m: Model, s: Formula) -> bool:
    """True when the closed sentence holds at every world of the model."""
    return all(satisfies(m, w, s) for w in m.worlds)
