"""Exception hierarchy.

``ValidationError`` subclasses mean the input violates a stated invariant;
``ComputationError`` subclasses mean valid input on which a computation
could not complete. The CLI maps them to exit codes 1 and 2.
"""

from __future__ import annotations


class WorkbenchError(Exception):
    pass


class ValidationError(WorkbenchError, ValueError):
    pass


class ComputationError(WorkbenchError, ArithmeticError):
    pass


class NotSquare(ValidationError):
    pass


class NotFinite(ValidationError):
    pass


class NotHermitian(ValidationError):
    pass


class NotPositive(ValidationError):
    pass


class TraceNotOne(ValidationError):
    pass


class NotNormalized(ValidationError):
    pass


class NotOrthonormal(ValidationError):
    pass


class TooManyVectors(ValidationError):
    pass


class InvalidProjector(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class DuplicateId(ValidationError):
    pass


class UnknownId(ValidationError, KeyError):
    pass


class MissingNode(ValidationError, KeyError):
    pass


class NotAResolution(ValidationError):
    pass


class NotRankOneContext(ValidationError):
    pass


class InvalidContext(ValidationError):
    pass


class BadWeights(ValidationError):
    pass


class NotCommuting(ValidationError):
    pass


class InvalidSubobject(ValidationError):
    pass


class NotAntitone(ValidationError):
    pass


class InvalidPoset(ValidationError):
    pass


class DocumentError(ValidationError):
    pass


class NoConvergence(ComputationError):
    pass


class ImaginaryTrace(ComputationError):
    pass


class NotInformationallyComplete(ComputationError):
    pass


class Inconsistent(ComputationError):
    pass


class InconsistentPurityTests(ComputationError):
    pass


class NoCoefficients(ComputationError):
    pass


class PNotInPoset(ComputationError):
    pass


class PotentiaOutOfRange(ValidationError):
    pass
