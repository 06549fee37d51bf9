"""Exception types shared across the package."""


class ProbmodalError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(ProbmodalError):
    """Malformed formula text. Carries 1-based line and column."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class ArityError(ParseError):
    """A predicate was applied to the wrong number of terms."""


class DepthError(ProbmodalError):
    """Probability or modal nesting exceeds the supported depth of two,
    or a written level contradicts its nesting position."""


class MixedModalityError(ProbmodalError):
    """Probability operators and box/dia occur in the same formula."""


class ModelError(ProbmodalError):
    """A model document is malformed or violates a model invariant."""


class EvaluationError(ProbmodalError):
    """A formula cannot be evaluated: unbound variable, unresolved level,
    unknown symbol, or an operator the evaluator does not accept."""


class OpenFormulaError(EvaluationError):
    """A closed sentence was required but the formula has free variables."""


class SolverError(ProbmodalError):
    """Bad input to the entailment solver or model searcher."""


class InconsistentPremisesError(SolverError):
    """The premise constraints admit no probability distribution."""
