"""Higher-order coherence checks against a concrete model.

Three checks are provided, from weakest to strongest obligation:

  * check_c1: certainty that the first-order probability of f lies in I
    forces the second-order probability of f into I.
  * check_miller (Miller's principle): conditioning the second-order
    probability of f on "the first-order probability of f lies in I"
    yields a value inside I.  Zero conditioning mass makes an instance
    vacuous, never violated.
  * check_gaifman_direct: the raw second-order measure of the truth set
    equals the expected first-order mass.  The semantics deliberately does
    not impose this, so a failing report is informative, not an error.

The expected-value identity itself is built into the evaluation rule for
second-order probabilities and is exercised by the evaluator's tests
rather than rechecked here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .evaluator import EMPTY, cond_prob2, prob1, prob2, truth_set
from .model import Model, WorldId
from .syntax import And, Formula, Interval, Prob, render

__all__ = [
    "Witness",
    "ConstraintReport",
    "check_miller",
    "check_miller_model",
    "check_c1",
    "check_gaifman_direct",
    "realized_intervals",
]


@dataclass
class Witness:
    """One failing instance: where, what, and the numbers that failed."""

    world: WorldId
    formula: Formula
    interval: Optional[Interval]
    values: dict[str, Optional[Fraction]]

    def __str__(self) -> str:
        parts = ", ".join(f"{k} = {v if v is not None else 'undefined'}"
                          for k, v in self.values.items())
        where = f"world {self.world}, formula {render(self.formula)}"
        if self.interval is not None:
            where += f", interval {self.interval}"
        return f"{where}: {parts}"


@dataclass
class ConstraintReport:
    name: str
    holds: bool
    witnesses: list[Witness] = field(default_factory=list)
    vacuous: bool = False
    values: dict[str, Optional[Fraction]] = field(default_factory=dict)

    def __str__(self) -> str:
        if self.vacuous:
            return f"{self.name}: vacuous"
        if self.holds:
            return f"{self.name}: holds"
        lines = [f"{self.name}: FAILS ({len(self.witnesses)} witness(es))"]
        lines += [f"  {w}" for w in self.witnesses]
        return "\n".join(lines)


def check_miller(m: Model, w: WorldId, f: Formula, i: Interval) -> ConstraintReport:
    """Miller's principle at one world for one formula and interval."""
    hypothesis = Prob(1, i, f)
    mass = prob2(m, w, EMPTY, hypothesis)
    if mass == 0:
        return ConstraintReport("miller", holds=True, vacuous=True,
                                values={"conditioning_mass": mass})
    conditional = cond_prob2(m, w, EMPTY, f, hypothesis)
    values = {
        "conditioning_mass": mass,
        "joint_mass": prob2(m, w, EMPTY, And(f, hypothesis)),
        "conditional": conditional,
    }
    if conditional in i:
        return ConstraintReport("miller", holds=True, values=values)
    return ConstraintReport("miller", holds=False, values=values,
                            witnesses=[Witness(w, f, i, values)])


def realized_intervals(m: Model, f: Formula) -> list[Interval]:
    """Point intervals at each first-order probability value f takes in m.

    Only these produce non-vacuous instances of Miller's principle on a
    finite model, so they are the default interval set for exhaustive checks.
    """
    values = sorted({prob1(m, w, EMPTY, f) for w in m.worlds})
    return [Interval(v, v) for v in values]


def check_miller_model(m: Model, fs: Sequence[Formula],
                       intervals: Optional[Sequence[Interval]] = None) -> ConstraintReport:
    """Aggregate Miller's principle over all worlds, formulas, and intervals.

    With intervals omitted, each formula is checked against its realized
    first-order values.  Holds iff there is no non-vacuous failure;
    witnesses are ordered by world, then formula.
    """
    witnesses: list[Witness] = []
    for w in m.worlds:
        for f in fs:
            per_f = intervals if intervals is not None else realized_intervals(m, f)
            for i in per_f:
                report = check_miller(m, w, f, i)
                if not report.holds:
                    witnesses.extend(report.witnesses)
    return ConstraintReport("miller", holds=not witnesses, witnesses=witnesses)


def check_c1(m: Model, w: WorldId, f: Formula, i: Interval) -> ConstraintReport:
    """Minimal self-knowledge at one world: if the second-order probability
    of "first-order probability of f lies in I" is 1, the second-order
    probability of f must lie in I."""
    antecedent = prob2(m, w, EMPTY, Prob(1, i, f))
    if antecedent != 1:
        return ConstraintReport("c1", holds=True, vacuous=True,
                                values={"antecedent_mass": antecedent})
    value = prob2(m, w, EMPTY, f)
    values = {"antecedent_mass": antecedent, "value": value}
    if value in i:
        return ConstraintReport("c1", holds=True, values=values)
    return ConstraintReport("c1", holds=False, values=values,
                            witnesses=[Witness(w, f, i, values)])


def check_gaifman_direct(m: Model, w: WorldId, f: Formula) -> ConstraintReport:
    """Compare the raw second-order measure of f's truth set with the
    expected first-order mass.  Equality is not required of valid models;
    the report only records whether this particular model has it."""
    direct = m.pr2[w].mass(truth_set(m, EMPTY, f))
    expected = prob2(m, w, EMPTY, f)
    values = {"direct_measure": direct, "expected_value": expected}
    if direct == expected:
        return ConstraintReport("gaifman-direct", holds=True, values=values)
    return ConstraintReport("gaifman-direct", holds=False, values=values,
                            witnesses=[Witness(w, f, None, values)])
