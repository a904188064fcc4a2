"""
Errors
Every failure raised by the zipflaws modules carries the stage that produced it,
so the command line can report where an analysis stopped.
"""

from typing import List, Optional, Sequence, Tuple


class ZipfLawsError(ValueError):
    """Base error for the analysis pipeline"""

    stage = "analysis"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class LexiconParseError(ZipfLawsError):
    """A line of a TSV input could not be parsed"""

    stage = "lexicon"

    def __init__(self, line_number: int, reason: str, source: Optional[str] = None):
        where = f"{source}, line {line_number}" if source else f"line {line_number}"
        super().__init__(f"{where}: {reason}")
        self.line_number = line_number
        self.reason = reason


class EmptyLexiconError(ZipfLawsError):
    stage = "lexicon"


class BinningError(ZipfLawsError):
    stage = "binning"


class BinningDivisibilityError(BinningError):
    """Strict binning was asked for a bin size that does not divide n"""

    def __init__(self, n: int, bin_size: int, divisors: Sequence[int]):
        self.n = n
        self.bin_size = bin_size
        self.divisors: List[int] = list(divisors)
        self.nearest = _nearest_divisors(self.divisors, bin_size)
        super().__init__(
            f"bin size {bin_size} does not divide n={n}; "
            f"nearest valid bin sizes: {list(self.nearest)}"
        )


class FitDomainError(ZipfLawsError):
    stage = "powerlaw"


class DegenerateFitError(ZipfLawsError):
    """Least squares has no unique line (fewer than 2 distinct x values)"""

    stage = "powerlaw"

    def __init__(self, message: str, segment: Optional[str] = None):
        if segment:
            message = f"{segment}: {message}"
        super().__init__(message)
        self.segment = segment


class InsufficientDataError(ZipfLawsError):
    stage = "regimes"


class BreakpointRangeError(ZipfLawsError):
    stage = "regimes"


class SynthSpecError(ZipfLawsError):
    stage = "synth"


class IntegerizeError(ZipfLawsError):
    stage = "synth"


class PlotInputError(ZipfLawsError):
    """Analysis outputs needed for a figure are missing or inconsistent"""

    stage = "plot"


class ConfigError(ZipfLawsError):
    stage = "config"


def _nearest_divisors(divisors: Sequence[int], bin_size: int) -> Tuple[int, ...]:
    below = [d for d in divisors if d < bin_size]
    above = [d for d in divisors if d > bin_size]
    nearest = []
    if below:
        nearest.append(below[-1])
    if above:
        nearest.append(above[0])
    return tuple(nearest)
