"""Exception hierarchy shared across the toolchain."""


class TechlevError(Exception):
    """Base class for all errors raised by techlev."""


class ParseError(TechlevError, ValueError):
    """Malformed coordinate, version, or range text."""


class CorpusError(TechlevError):
    """Problem with a corpus manifest, vulnerability DB, or resolved corpus."""


class UnresolvedDependencyError(CorpusError):
    def __init__(self, missing):
        self.missing = sorted(missing)
        super().__init__("unresolved dependencies: " + ", ".join(self.missing))


class ChainOrderError(TechlevError, ValueError):
    """Release list handed to the chain splitter is not date-ordered."""


class LeverageUndefinedError(TechlevError, ZeroDivisionError):
    """Leverage requested for a library without own code."""


class StatisticsError(TechlevError, ValueError):
    """A statistical precondition does not hold (rank, zero cell, variance)."""


class OddsRatioUndefinedError(StatisticsError):
    def __init__(self, message, fisher_p):
        super().__init__(message)
        self.fisher_p = fisher_p


class FetchError(TechlevError):
    pass


class MissingArtifactError(FetchError):
    """The remote repository answered 404 for a requested file."""


class RetryableFetchError(FetchError):
    """Network-level failure; the same request may succeed later."""


class ConfigError(TechlevError):
    pass
