"""Exception hierarchy shared by every module.

Each error carries a short machine-readable ``code`` that the command line
front end copies into its error JSON.
"""

from __future__ import annotations


class HecurveError(Exception):
    code = "error"

    def __init__(self, message: str = "", **details):
        super().__init__(message)
        self.details = details

    def to_json(self) -> dict:
        out = {"error": self.code, "message": str(self)}
        if self.details:
            out["details"] = {k: str(v) for k, v in sorted(self.details.items())}
        return out


class CheckFailed(HecurveError):
    """A verification clause did not hold."""

    code = "check_failed"


class MalformedInput(HecurveError):
    code = "malformed_input"


# exact_linear
class DivisionByZero(HecurveError, ZeroDivisionError):
    code = "division_by_zero"


class ConductorMismatch(HecurveError, ValueError):
    code = "conductor_mismatch"


class NotSquare(HecurveError, ValueError):
    code = "not_square"


# findim_algebra
class InvalidAlgebra(HecurveError):
    code = "invalid_algebra"


class IndexOutOfRange(HecurveError, IndexError):
    code = "index_out_of_range"


class ResolutionTooLong(HecurveError):
    code = "resolution_too_long"


class NonIntegralMultiplicity(HecurveError):
    code = "non_integral_multiplicity"


class SingularEulerMatrix(HecurveError):
    code = "singular_euler_matrix"


class InvalidModule(HecurveError):
    code = "invalid_module"


# quiver_relations
class NotFiniteDimensional(HecurveError):
    code = "not_finite_dimensional"


class DuplicatePoints(HecurveError, ValueError):
    code = "duplicate_points"


class UnknownType(HecurveError, ValueError):
    code = "unknown_type"


# hereditary_orders
class PatternMismatch(CheckFailed):
    code = "pattern_mismatch"


# skew_group
class ActionRelationViolation(CheckFailed):
    code = "action_relation_violation"


class ConductorTooSmall(HecurveError, ValueError):
    code = "conductor_too_small"


class NotIso(CheckFailed):
    code = "not_iso"


class NotTransitive(HecurveError, ValueError):
    code = "not_transitive"


# curve_actions
class RelationFails(CheckFailed):
    code = "relation_fails"


class CurveNotPreserved(CheckFailed):
    code = "curve_not_preserved"


class PointNotOnCurve(HecurveError, ValueError):
    code = "point_not_on_curve"


class Inconsistent(CheckFailed):
    code = "inconsistent"


class UnknownKind(HecurveError, ValueError):
    code = "unknown_kind"


# squid_builder
class NotDivision(HecurveError, ValueError):
    code = "not_division"


class EndNotDivision(CheckFailed):
    code = "end_not_division"


class WrongEndDimension(CheckFailed):
    code = "wrong_end_dimension"


class UnsupportedResidue(HecurveError, ValueError):
    code = "unsupported_residue"


# wallpaper
class UnknownGroup(HecurveError, KeyError):
    code = "unknown_group"

    def __str__(self) -> str:  # KeyError would add quotes
        return Exception.__str__(self)
