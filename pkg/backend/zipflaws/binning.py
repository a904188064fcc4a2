"""
Binning
Equal-size binning of a ranked lexicon: consecutive blocks of bin_size ranks
are replaced by the arithmetic means of their rank, frequency and sense count.
"""

import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, List, NamedTuple, TextIO, Tuple

import numpy as np

from zipflaws.errors import BinningDivisibilityError, BinningError
from zipflaws.lexicon import RankedLexicon

SERIES_HEADER = ("bin_index", "mean_rank", "mean_frequency", "mean_senses", "member_count")


class RemainderPolicy(str, Enum):
    STRICT = "strict"
    DROP_TAIL = "drop_tail"


class Bin(NamedTuple):
    mean_rank: float
    mean_frequency: float
    mean_senses: float
    member_count: int


@dataclass(frozen=True)
class BinnedSeries:
    """Per-bin means of a ranked lexicon; bin k covers ranks k*bin_size+1 .. (k+1)*bin_size"""

    bin_size: int
    bins: Tuple[Bin, ...]
    dropped: int = 0

    def __post_init__(self):
        bins = tuple(Bin(*b) for b in self.bins)
        if self.bin_size < 1:
            raise BinningError(f"bin size must be at least 1, got {self.bin_size}")
        if not bins:
            raise BinningError("binned series must contain at least one bin")
        for b in bins:
            if b.member_count != self.bin_size:
                raise BinningError(f"every bin must hold {self.bin_size} records, found {b.member_count}")
        for left, right in zip(bins, bins[1:]):
            if not right.mean_rank > left.mean_rank:
                raise BinningError("mean rank must be strictly increasing across bins")
            if right.mean_frequency > left.mean_frequency:
                raise BinningError("mean frequency must be non-increasing across bins")
        object.__setattr__(self, "bins", bins)

    def __len__(self) -> int:
        return len(self.bins)

    @property
    def n_binned(self) -> int:
        return len(self.bins) * self.bin_size

    @cached_property
    def rank_values(self) -> np.ndarray:
        return _column(self.bins, 0)

    @cached_property
    def frequency_values(self) -> np.ndarray:
        return _column(self.bins, 1)

    @cached_property
    def sense_values(self) -> np.ndarray:
        return _column(self.bins, 2)

    def rank_interval(self, index: int) -> Tuple[int, int]:
        """First and last raw rank of a bin"""
        first = index * self.bin_size + 1
        return first, first + self.bin_size - 1


def valid_bin_sizes(n: int) -> List[int]:
    """All positive divisors of n, ascending"""
    if n < 1:
        raise BinningError(f"lexicon size must be at least 1, got {n}")
    small, large = [], []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def equal_size_bin(
    lex: RankedLexicon,
    bin_size: int,
    remainder_policy: RemainderPolicy = RemainderPolicy.STRICT,
) -> BinnedSeries:
    """
    Average consecutive rank blocks of bin_size records.

    In strict mode bin_size must divide n. In drop_tail mode the final
    partial block is discarded and its size is kept in ``dropped``.
    """
    policy = RemainderPolicy(remainder_policy)
    if bin_size < 1:
        raise BinningError(f"bin size must be at least 1, got {bin_size}")
    n = lex.n
    remainder = n % bin_size
    if remainder and policy is RemainderPolicy.STRICT:
        raise BinningDivisibilityError(n, bin_size, valid_bin_sizes(n))
    count = n // bin_size
    if count == 0:
        raise BinningError(f"bin size {bin_size} exceeds the lexicon size {n}")

    kept = count * bin_size
    ranks = lex.ranks[:kept].astype(float).reshape(count, bin_size).mean(axis=1)
    frequencies = lex.frequencies[:kept].reshape(count, bin_size).mean(axis=1)
    senses = lex.senses[:kept].reshape(count, bin_size).mean(axis=1)
    bins = tuple(
        Bin(float(r), float(f), float(s), bin_size)
        for r, f, s in zip(ranks, frequencies, senses)
    )
    return BinnedSeries(bin_size, bins, dropped=remainder)


def write_binned_series(series: BinnedSeries, stream: TextIO) -> None:
    stream.write("\t".join(SERIES_HEADER) + "\n")
    for index, b in enumerate(series.bins):
        stream.write(f"{index}\t{b.mean_rank!r}\t{b.mean_frequency!r}\t{b.mean_senses!r}\t{b.member_count}\n")


def read_binned_series(stream: Iterable[str]) -> BinnedSeries:
    lines = [line.rstrip("\r\n") for line in stream if line.strip()]
    if not lines or tuple(lines[0].split("\t")) != SERIES_HEADER:
        raise BinningError(f"binned series file must start with the header {' '.join(SERIES_HEADER)}")
    bins = []
    for line_number, line in enumerate(lines[1:], start=2):
        fields = line.split("\t")
        if len(fields) != len(SERIES_HEADER):
            raise BinningError(f"line {line_number}: expected {len(SERIES_HEADER)} fields, found {len(fields)}")
        try:
            bins.append(Bin(float(fields[1]), float(fields[2]), float(fields[3]), int(fields[4])))
        except ValueError:
            raise BinningError(f"line {line_number}: malformed numeric field") from None
    if not bins:
        raise BinningError("binned series file has no bins")
    return BinnedSeries(bins[0].member_count, tuple(bins))


def _column(bins: Tuple[Bin, ...], index: int) -> np.ndarray:
    values = np.array([b[index] for b in bins], dtype=float)
    values.flags.writeable = False
    return values
