"""Exception hierarchy shared by the pipeline stages.

Each error carries the pipeline stage it was raised from so the CLI can map
failures to stable exit codes.
"""

from __future__ import annotations


class ReparcurveError(Exception):
    """Base class; ``stage`` names the pipeline step that failed."""

    stage = "unknown"

    def __init__(self, message, **data):
        super().__init__(message)
        self.data = data


class InputContractError(ReparcurveError):
    """Malformed input or a component that is not reduced at the tolerance."""

    stage = "parse"


class UnstableIndexError(ReparcurveError):
    """Specialized gcd degrees disagree too often to trust a majority vote.

    ``data['profile']`` maps candidate degree -> vote count.
    """

    stage = "index"


class NoAdmissiblePairError(ReparcurveError):
    """No coefficient pair of S passes the nonconstant/coprime screen."""

    stage = "build-r"


class NotMoebiusLikeError(ReparcurveError):
    """Best candidate R leaves a cross-difference residual above tolerance.

    ``data['residual']`` holds the smallest residual seen.
    """

    stage = "build-r"


class InterpolationDegreeError(ReparcurveError):
    """Evaluation-interpolation could not fit the stated degree bounds."""

    stage = "resultant"


class PoleInIntervalError(ReparcurveError):
    """A requested interval passes too close to a denominator root."""

    stage = "errorbound"
