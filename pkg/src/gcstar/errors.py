"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed input data or a violated operation precondition."""


class CoverPreconditionError(InputError):
    """A family of unit subsets whose saturations do not cover the unit space."""

    def __init__(self, missing_units):
        self.missing_units = tuple(missing_units)
        super().__init__(
            "saturations of the cover miss units: %s" % (sorted(map(str, self.missing_units)),)
        )


class AmbiguityError(RuntimeError):
    """A numerically ambiguous situation that a theorem rules out.

    Raised instead of guessing: eigenvalue clusters too close to separate,
    several candidate blocks where a unique one is guaranteed, or inconsistent
    composition lifts while gluing.  Re-running with a different seed is the
    usual remedy for the eigenvalue case.
    """


class GridRefinementNeeded(RuntimeError):
    """Symbol positivity could not be certified at the current grid size."""

    def __init__(self, min_modulus, margin, grid):
        self.min_modulus = float(min_modulus)
        self.margin = float(margin)
        self.grid = int(grid)
        super().__init__(
            "inconclusive symbol check (grid min %.6g, certified margin %.6g, "
            "grid %d): refine grid" % (self.min_modulus, self.margin, self.grid)
        )


class GluingConditionError(RuntimeError):
    """glue() was called on a family that fails the weak gluing condition."""

    def __init__(self, report):
        self.report = report
        super().__init__(
            "family fails the weak gluing condition: %s" % report.summary()
        )
