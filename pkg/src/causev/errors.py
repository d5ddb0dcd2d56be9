"""Exception hierarchy shared by all causev modules."""


class CausevError(Exception):
    """Base class for all errors raised by this package."""


# --- marginal fitting -------------------------------------------------------

class TooFewExceedances(CausevError):
    pass


class OptimizerDiverged(CausevError):
    pass


class InvalidProbability(CausevError):
    pass


class BelowThreshold(CausevError):
    pass


class OutOfRange(CausevError):
    pass


class EmptyInput(CausevError):
    pass


# --- dependence estimation --------------------------------------------------

class NonPositiveInput(CausevError):
    pass


class TooFewPoints(CausevError):
    pass


class TooFewDirections(CausevError):
    pass


class InfeasibleFit(CausevError):
    pass


class NoRoot(CausevError):
    pass


class NoExceedances(CausevError):
    pass


# --- scoring ----------------------------------------------------------------

class UnsupportedOrder(CausevError):
    pass


class DegenerateScores(CausevError):
    pass


# --- resampling -------------------------------------------------------------

class SingleBlock(CausevError):
    pass


class TooManyFailedReplicates(CausevError):
    pass


# --- data handling ----------------------------------------------------------

class EmptyPanel(CausevError):
    pass


class ParseError(CausevError):
    pass


class SchemaError(CausevError):
    pass


class DuplicatePair(CausevError):
    pass


class RefusedSelfPair(CausevError):
    pass


# --- simulation -------------------------------------------------------------

class InvalidScenario(CausevError):
    pass


class InvalidAlpha(CausevError):
    pass


class TargetUnreachable(CausevError):
    pass
