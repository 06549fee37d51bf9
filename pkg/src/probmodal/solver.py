"""Flat probabilistic entailment and bounded model search.

Flat entailment treats each propositional sentence as a constraint on one
shared distribution over the 2^n truth assignments to the atoms, indexed
by bitmask in atom declaration order.  Consistency and tightest probability
bounds for a query reduce to exact linear programs over those assignment
weights.

The model searcher enumerates small two-level models (bounded world count,
weights on a fixed denominator grid, first-order distributions built per
equivalence class so the class constraint holds by construction) and
returns the first model and world that the evaluator certifies as
satisfying the sentence.  Exhausting the space proves nothing beyond the
bounds searched.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Optional, Sequence

from . import lp
from .errors import InconsistentPremisesError, ParseError, SolverError
from .evaluator import satisfies
from .model import Distribution, Interpretation, Model
from .syntax import (
    And, Atom, Formula, Implies, Interval, Not, Or, Prob,
    atoms as formula_atoms, free_variables, is_propositional, parse,
    parse_number, render, resolve_levels, subformulas,
)

__all__ = [
    "FlatConstraint",
    "ConsistencyResult",
    "EntailmentBounds",
    "SearchHit",
    "parse_constraints",
    "flat_consistent",
    "flat_entail_bounds",
    "search_model",
    "DEFAULT_ATOM_CAP",
]

DEFAULT_ATOM_CAP = 15
MAX_SEARCH_WORLDS = 5
MAX_SEARCH_DENOMINATOR = 8


@dataclass(frozen=True)
class FlatConstraint:
    """A propositional sentence whose probability must lie in an interval."""

    sentence: Formula
    interval: Interval

    def __post_init__(self):
        if not is_propositional(self.sentence):
            raise SolverError(
                f"flat constraints must be propositional: {render(self.sentence)}")

    def __str__(self) -> str:
        return f"P{self.interval}: {render(self.sentence)}"


@dataclass
class ConsistencyResult:
    consistent: bool
    atoms: list[Atom]
    # assignment bitmask -> weight; bit i set means atom i is true
    witness: Optional[dict[int, Fraction]] = None


@dataclass
class EntailmentBounds:
    interval: Interval
    atoms: list[Atom]
    lo_witness: dict[int, Fraction]
    hi_witness: dict[int, Fraction]


_CONSTRAINT_LINE = re.compile(r"^\s*P\s*\[([^\]]*)\]\s*:\s*(.+)$")


def parse_constraints(text: str) -> list[FlatConstraint]:
    """Parse constraint lines of the form `P[lo,hi]: <formula>`.

    One constraint per line; blank lines and `#` comments are skipped.
    A single number is a point constraint.
    """
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        match = _CONSTRAINT_LINE.match(line)
        if not match:
            raise ParseError(f"expected `P[lo,hi]: formula`, got {line!r}", lineno, 1)
        bounds = [parse_number(part) for part in match.group(1).split(",")]
        if len(bounds) == 1:
            bounds = bounds * 2
        if len(bounds) != 2:
            raise ParseError("an interval takes one or two numbers", lineno, 1)
        try:
            interval = Interval(bounds[0], bounds[1])
        except ValueError as exc:
            raise ParseError(str(exc), lineno, 1) from None
        sentence = parse(match.group(2))
        try:
            constraint = FlatConstraint(sentence, interval)
        except SolverError as exc:
            raise ParseError(str(exc), lineno, 1) from None
        out.append(constraint)
    return out


# ---------------------------------------------------------------------------
# Truth-assignment machinery
# ---------------------------------------------------------------------------

def _collect_atoms(sentences: Sequence[Formula], cap: int) -> list[Atom]:
    ordered: list[Atom] = []
    for s in sentences:
        for a in formula_atoms(s):
            if a not in ordered:
                ordered.append(a)
    if len(ordered) > cap:
        raise SolverError(
            f"{len(ordered)} distinct atoms exceed the configured cap of {cap}")
    return ordered


def _eval_mask(f: Formula, index: dict[Atom, int], mask: int) -> bool:
    if isinstance(f, Atom):
        return bool(mask >> index[f] & 1)
    if isinstance(f, Not):
        return not _eval_mask(f.body, index, mask)
    if isinstance(f, And):
        return _eval_mask(f.left, index, mask) and _eval_mask(f.right, index, mask)
    if isinstance(f, Or):
        return _eval_mask(f.left, index, mask) or _eval_mask(f.right, index, mask)
    if isinstance(f, Implies):
        return (not _eval_mask(f.left, index, mask)) or _eval_mask(f.right, index, mask)
    raise SolverError(f"not a propositional formula: {render(f)}")


def _satisfying_masks(f: Formula, atom_list: list[Atom]) -> list[int]:
    index = {a: i for i, a in enumerate(atom_list)}
    return [mask for mask in range(1 << len(atom_list))
            if _eval_mask(f, index, mask)]


def _constraint_rows(cs: Sequence[FlatConstraint], atom_list: list[Atom]):
    """Equality and inequality rows over the assignment weights."""
    n_vars = 1 << len(atom_list)
    rows: list[lp.Constraint] = [([Fraction(1)] * n_vars, lp.EQ, Fraction(1))]
    for c in cs:
        coeffs = [Fraction(0)] * n_vars
        for mask in _satisfying_masks(c.sentence, atom_list):
            coeffs[mask] = Fraction(1)
        if c.interval.is_point:
            rows.append((coeffs, lp.EQ, c.interval.lo))
        else:
            if c.interval.lo > 0:
                rows.append((coeffs, lp.GE, c.interval.lo))
            if c.interval.hi < 1:
                rows.append((coeffs, lp.LE, c.interval.hi))
    return n_vars, rows


def flat_consistent(cs: Sequence[FlatConstraint],
                    atom_cap: int = DEFAULT_ATOM_CAP) -> ConsistencyResult:
    """Decide whether some distribution over truth assignments meets every
    constraint; on success the witness maps assignment bitmasks to weights."""
    atom_list = _collect_atoms([c.sentence for c in cs], atom_cap)
    n_vars, rows = _constraint_rows(cs, atom_list)
    status, _, x = lp.solve_lp([Fraction(0)] * n_vars, rows, maximize=True)
    if status != lp.OPTIMAL:
        return ConsistencyResult(False, atom_list)
    witness = {mask: x[mask] for mask in range(n_vars) if x[mask] != 0}
    return ConsistencyResult(True, atom_list, witness)


def flat_entail_bounds(premises: Sequence[FlatConstraint], query: Formula,
                       atom_cap: int = DEFAULT_ATOM_CAP) -> EntailmentBounds:
    """Tightest interval for the query's probability over all distributions
    satisfying the premises, with a witness distribution at each endpoint."""
    if not is_propositional(query):
        raise SolverError(f"query must be propositional: {render(query)}")
    atom_list = _collect_atoms([c.sentence for c in premises] + [query], atom_cap)
    n_vars, rows = _constraint_rows(premises, atom_list)
    objective = [Fraction(0)] * n_vars
    for mask in _satisfying_masks(query, atom_list):
        objective[mask] = Fraction(1)

    status_lo, lo, x_lo = lp.solve_lp(objective, rows, maximize=False)
    if status_lo != lp.OPTIMAL:
        raise InconsistentPremisesError("premise constraints are unsatisfiable")
    status_hi, hi, x_hi = lp.solve_lp(objective, rows, maximize=True)
    if status_hi != lp.OPTIMAL:
        raise InconsistentPremisesError("premise constraints are unsatisfiable")

    def as_witness(x):
        return {mask: x[mask] for mask in range(n_vars) if x[mask] != 0}

    return EntailmentBounds(Interval(lo, hi), atom_list,
                            as_witness(x_lo), as_witness(x_hi))


# ---------------------------------------------------------------------------
# Bounded model search
# ---------------------------------------------------------------------------

@dataclass
class SearchHit:
    model: Model
    world: str


@lru_cache(maxsize=None)
def _compositions(total: int, parts: int) -> tuple[tuple[int, ...], ...]:
    """All tuples of `parts` nonnegative integers summing to `total`,
    in lexicographic order."""
    if parts == 1:
        return ((total,),)
    out = []
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            out.append((first,) + rest)
    return tuple(out)


def _partitions(items: list[str]) -> Iterator[list[list[str]]]:
    """Set partitions via restricted-growth strings, lexicographically."""
    n = len(items)

    def grow(prefix: list[int], used: int) -> Iterator[list[int]]:
        if len(prefix) == n:
            yield prefix
            return
        for label in range(used + 1):
            yield from grow(prefix + [label], max(used, label + 1))

    for labels in grow([0], 1) if n else iter(()):
        blocks: list[list[str]] = [[] for _ in range(max(labels) + 1)]
        for item, label in zip(items, labels):
            blocks[label].append(item)
        yield blocks


def search_model(s: Formula, max_worlds: int = 3,
                 denominator: int = 2) -> Optional[SearchHit]:
    """Look for a small model and world satisfying a closed, quantifier-free
    sentence over nullary atoms, with probability nesting at most two.

    Models with fewer worlds are tried first; within a world count the
    search runs through atom valuations, then first-order class structures,
    then second-order weights, all in a fixed lexicographic order, so the
    returned hit is deterministic.  None means the bounded space is
    exhausted, not that the sentence is unsatisfiable.
    """
    if not 1 <= max_worlds <= MAX_SEARCH_WORLDS:
        raise SolverError(f"max_worlds must be between 1 and {MAX_SEARCH_WORLDS}")
    if not 1 <= denominator <= MAX_SEARCH_DENOMINATOR:
        raise SolverError(f"denominator must be between 1 and {MAX_SEARCH_DENOMINATOR}")
    if free_variables(s):
        raise SolverError("the sentence must be closed")
    s = resolve_levels(s)
    for sub in subformulas(s):
        if isinstance(sub, Atom) and sub.args:
            raise SolverError("search is limited to nullary atoms")
        if not isinstance(sub, (Atom, Not, And, Or, Implies, Prob)):
            raise SolverError(
                f"search is limited to propositional sentences with probability "
                f"operators; found {render(sub)}")

    atom_names = [a.name for a in formula_atoms(s)]
    q = denominator

    for k in range(1, max_worlds + 1):
        worlds = [f"w{i + 1}" for i in range(k)]
        for hit in _search_fixed_size(s, atom_names, worlds, q):
            return hit
    return None


def _search_fixed_size(s: Formula, atom_names: list[str], worlds: list[str],
                       q: int) -> Iterator[SearchHit]:
    k = len(worlds)
    n_atoms = len(atom_names)
    valuations = itertools.product(range(1 << n_atoms), repeat=k)
    for valuation in valuations:
        extensions = {
            name: {w: ({()} if valuation[i] >> bit & 1 else set())
                   for i, w in enumerate(worlds)}
            for bit, name in enumerate(atom_names)
        }
        interp = Interpretation(
            arities={name: 0 for name in atom_names},
            extensions=extensions,
            constants={},
        )
        for blocks in _partitions(worlds):
            for pr1 in _class_distributions(blocks, worlds, q):
                for pr2 in _free_distributions(worlds, q):
                    m = Model(list(worlds), [], pr1, pr2, interp)
                    for w in worlds:
                        if satisfies(m, w, s):
                            yield SearchHit(m, w)


def _class_distributions(blocks: list[list[str]], worlds: list[str],
                         q: int) -> Iterator[dict[str, Distribution]]:
    """First-order families where each block shares one distribution
    supported inside the block, so the class constraint holds by design."""
    per_block = []
    for block in blocks:
        dists = []
        for parts in _compositions(q, len(block)):
            weights = {w: Fraction(0) for w in worlds}
            for w, units in zip(block, parts):
                weights[w] = Fraction(units, q)
            dists.append(Distribution(weights))
        per_block.append(dists)
    for choice in itertools.product(*per_block):
        family = {}
        for block, dist in zip(blocks, choice):
            for w in block:
                family[w] = dist
        yield family


def _free_distributions(worlds: list[str], q: int) -> Iterator[dict[str, Distribution]]:
    """All per-world second-order families on the 1/q grid."""
    options = []
    for parts in _compositions(q, len(worlds)):
        options.append(Distribution({w: Fraction(units, q)
                                     for w, units in zip(worlds, parts)}))
    for choice in itertools.product(options, repeat=len(worlds)):
        yield {w: dist for w, dist in zip(worlds, choice)}
