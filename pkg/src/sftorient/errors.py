"""Exception hierarchy.

Every error carries a short machine-readable ``code`` that the CLI prints on
its diagnostic line.
"""


class SFTError(Exception):
    """Base class for domain errors."""

    code = "E_DOMAIN"


class PathError(SFTError, ValueError):
    """A path or matrix violates its construction invariants."""

    code = "E_PATH"


class MaslovError(SFTError):
    code = "E_MASLOV"


class DegenerateEndpoint(MaslovError):
    """The endpoint of the path has 1 as an eigenvalue."""

    code = "E_DEGENERATE_ENDPOINT"


class IrregularCrossing(MaslovError):
    """The crossing form is singular on the kernel; perturb the path."""

    code = "E_IRREGULAR_CROSSING"


class UnresolvedCrossing(MaslovError):
    """Crossing detection could not isolate the zeros of det(A(t) - Id)."""

    code = "E_UNRESOLVED_CROSSING"


class InternalInconsistency(SFTError):
    code = "E_INTERNAL"


class FamilyError(SFTError):
    """Orbit family data is inconsistent."""

    code = "E_FAMILY"


class SurfaceError(SFTError, ValueError):
    code = "E_SURFACE"


class MismatchedOrbits(SurfaceError):
    code = "E_MISMATCHED_ORBITS"


class MismatchedAmbient(SurfaceError):
    code = "E_MISMATCHED_AMBIENT"


class BadArity(SurfaceError):
    code = "E_BAD_ARITY"


class BadOrbitGenerator(SFTError):
    """A bad orbit was used as an algebra generator."""

    code = "E_BAD_GENERATOR"


class GradingViolation(SFTError):
    code = "E_GRADING"


class SchemaError(SFTError):
    """Malformed input document."""

    code = "E_SCHEMA"
