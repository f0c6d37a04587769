"""Exception hierarchy.

Every error carries a module-qualified ``code`` so the CLI can render it
without inspecting the class.
"""

from __future__ import annotations


class PosconError(Exception):
    code = "poscon.Error"


class NegativeEntry(PosconError, ValueError):
    code = "posmat.NegativeEntry"

    def __init__(self, row: int, col: int, value: float, where: str = "A"):
        self.row, self.col, self.value, self.where = row, col, value, where
        super().__init__(f"negative entry {value!r} in {where} at ({row}, {col})")


class Reducible(PosconError):
    code = "posmat.Reducible"

    def __init__(self, components: list[list[int]]):
        self.components = components
        super().__init__(
            f"matrix is reducible; strongly connected components: {components}"
        )


class CyclicityMismatch(PosconError):
    code = "posmat.CyclicityMismatch"


class EigenFailure(PosconError):
    code = "spectral.EigenFailure"


class IrrationalAngle(PosconError):
    code = "spectral.IrrationalAngle"


class BudgetExceeded(PosconError):
    code = "spectral.BudgetExceeded"

    def __init__(self, searched: tuple[int, int], message: str = ""):
        self.searched = searched
        super().__init__(message or f"recursion search exhausted degrees {searched}")


class IterationLimit(PosconError):
    code = "linprog.IterationLimit"


class RankDeficient(PosconError):
    code = "cones.RankDeficient"


class CombinatorialBudget(PosconError):
    code = "cones.CombinatorialBudget"


class ConvergenceFailure(PosconError):
    code = "controllability.ConvergenceFailure"


class Disagreement(PosconError):
    """Spectral and direct-iteration verdicts disagree.

    ``verdict`` holds the partially assembled result so callers can still
    report it.
    """

    code = "controllability.Disagreement"

    def __init__(self, message: str, verdict=None):
        self.verdict = verdict
        super().__init__(message)


class LimitGeneratorUsed(PosconError):
    code = "controllability.LimitGeneratorUsed"


class SpecFileError(PosconError, ValueError):
    code = "cli.SpecFileError"


class SvgUnsupportedDim(PosconError):
    code = "cli.SvgUnsupportedDim"
