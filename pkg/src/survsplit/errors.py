"""Exception types shared across the split engine."""


class SplitEngineError(Exception):
    """Base class for all survsplit errors."""


class NoEvents(SplitEngineError):
    """Every subject in the dataset is censored."""


class NonFinite(SplitEngineError):
    """A follow-up time is NaN or infinite."""


class DegenerateCovariate(SplitEngineError):
    """The covariate takes a single distinct value; no cutpoints exist."""


class ZeroScale(SplitEngineError):
    """The variance scale of the statistic is zero; the cutpoint is inadmissible."""


class NoAdmissibleCut(SplitEngineError):
    """No candidate cutpoint is admissible for the greedy search."""


class InvalidN(SplitEngineError):
    """Requested sample size is too small."""


class EmptyGroup(SplitEngineError):
    """A summary was requested for a group with no usable records."""
