"""
Lexicon
Ingests corpus frequencies and dictionary sense counts, intersects them and
produces the ranked lexicon every law is fitted on.

Input formats are UTF-8, tab separated by default, one record per line;
blank lines and lines starting with '#' are ignored.

    frequencies:  lemma <TAB> count
    meanings:     lemma <TAB> senses
    tokens:       surface <TAB> lemma <TAB> tag
"""

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from types import MappingProxyType
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, NamedTuple, Optional, TextIO, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from zipflaws.errors import EmptyLexiconError, LexiconParseError, ZipfLawsError

DEFAULT_DELIMITER = "\t"
DEFAULT_EXCLUDED_TAGS = frozenset({"punctuation", "number", "proper noun"})

PathLike = Union[str, Path]


class TokenFilterConfig(BaseModel):
    """Annotation classes dropped from a token stream before counting"""

    model_config = ConfigDict(frozen=True)

    excluded_tags: FrozenSet[str] = Field(default=DEFAULT_EXCLUDED_TAGS)


@dataclass(frozen=True)
class FrequencyTable:
    """Token count per lemma"""

    entries: Mapping[str, int]
    filtered_tokens: int = 0

    def __post_init__(self):
        entries = dict(self.entries)
        for lemma, count in entries.items():
            _check_lemma(lemma)
            if isinstance(count, bool) or not isinstance(count, (int, np.integer)) or count < 1:
                raise ZipfLawsError(f"frequency of {lemma!r} must be a positive integer, got {count!r}")
        object.__setattr__(self, "entries", MappingProxyType(entries))

    @property
    def tokens(self) -> int:
        return int(sum(self.entries.values()))

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class MeaningTable:
    """Dictionary sense count per lemma"""

    entries: Mapping[str, int]

    def __post_init__(self):
        entries = dict(self.entries)
        for lemma, senses in entries.items():
            _check_lemma(lemma)
            if isinstance(senses, bool) or not isinstance(senses, (int, np.integer)) or senses < 1:
                raise ZipfLawsError(f"sense count of {lemma!r} must be a positive integer, got {senses!r}")
        object.__setattr__(self, "entries", MappingProxyType(entries))

    def __len__(self) -> int:
        return len(self.entries)


class DropSummary(NamedTuple):
    corpus_only: int
    dictionary_only: int


@dataclass(frozen=True)
class JoinedTable:
    """Lemmas present in both the corpus and the dictionary, unranked"""

    entries: Mapping[str, Tuple[float, float]]
    drops: DropSummary = DropSummary(0, 0)

    def __post_init__(self):
        object.__setattr__(self, "entries", MappingProxyType(dict(self.entries)))

    def __len__(self) -> int:
        return len(self.entries)


class LexiconRecord(NamedTuple):
    rank: int
    lemma: str
    frequency: float
    senses: float


@dataclass(frozen=True)
class RankedLexicon:
    """
    Lemmas sorted by descending frequency with ranks 1..n.

    Frequencies are integer counts for real corpora and may be real-valued
    for synthetic lexicons.
    """

    records: Tuple[LexiconRecord, ...]
    bin_size = None

    def __post_init__(self):
        records = tuple(LexiconRecord(*r) for r in self.records)
        if not records:
            raise EmptyLexiconError("ranked lexicon must contain at least one record")
        previous = None
        for position, record in enumerate(records, start=1):
            if record.rank != position:
                raise ZipfLawsError(f"ranks must be 1..n without gaps; found rank {record.rank} at position {position}")
            if not record.frequency > 0:
                raise ZipfLawsError(f"frequency of {record.lemma!r} must be positive")
            if not record.senses > 0:
                raise ZipfLawsError(f"sense count of {record.lemma!r} must be positive")
            if previous is not None and record.frequency > previous:
                raise ZipfLawsError(f"frequency must be non-increasing in rank (rank {record.rank})")
            previous = record.frequency
        object.__setattr__(self, "records", records)

    @property
    def n(self) -> int:
        return len(self.records)

    def __len__(self) -> int:
        return len(self.records)

    @cached_property
    def ranks(self) -> np.ndarray:
        return _frozen(np.arange(1, self.n + 1, dtype=np.int64))

    @cached_property
    def frequencies(self) -> np.ndarray:
        return _frozen(np.array([r.frequency for r in self.records], dtype=float))

    @cached_property
    def senses(self) -> np.ndarray:
        return _frozen(np.array([r.senses for r in self.records], dtype=float))

    @cached_property
    def lemmas(self) -> Tuple[str, ...]:
        return tuple(r.lemma for r in self.records)

    # Same accessors as BinnedSeries, so fitting code takes either.
    @property
    def rank_values(self) -> np.ndarray:
        return _frozen(self.ranks.astype(float))

    @property
    def frequency_values(self) -> np.ndarray:
        return self.frequencies

    @property
    def sense_values(self) -> np.ndarray:
        return self.senses

    def is_integral(self) -> bool:
        return bool(np.all(self.frequencies == np.floor(self.frequencies)))


class DataSummary(NamedTuple):
    """Sizes of every source and of their intersection"""

    tokens: int
    filtered_tokens: int
    corpus_lemmas: int
    dictionary_lemmas: int
    intersection_lemmas: int
    corpus_only: int
    dictionary_only: int

    def to_dict(self) -> Dict[str, int]:
        return dict(self._asdict())


def ingest_frequency_table(
    source: Iterable[str],
    delimiter: str = DEFAULT_DELIMITER,
    source_name: Optional[str] = None,
) -> FrequencyTable:
    """Parse lemma/count lines; repeated lemmas have their counts summed"""
    counts: Counter = Counter()
    for line_number, (lemma, count_text) in _iter_records(source, 2, delimiter, source_name):
        counts[lemma] += _parse_positive_int(count_text, "count", line_number, source_name)
    return FrequencyTable(dict(counts))


def ingest_token_stream(
    source: Iterable[str],
    config: Optional[TokenFilterConfig] = None,
    delimiter: str = DEFAULT_DELIMITER,
    source_name: Optional[str] = None,
) -> FrequencyTable:
    """Count lemmas of annotated tokens, skipping excluded tag classes"""
    config = config or TokenFilterConfig()
    counts: Counter = Counter()
    filtered = 0
    for _, (_surface, lemma, tag) in _iter_records(source, 3, delimiter, source_name):
        if tag in config.excluded_tags:
            filtered += 1
            continue
        counts[lemma] += 1
    return FrequencyTable(dict(counts), filtered_tokens=filtered)


def ingest_meaning_table(
    source: Iterable[str],
    delimiter: str = DEFAULT_DELIMITER,
    source_name: Optional[str] = None,
) -> MeaningTable:
    """Parse lemma/senses lines; homograph entries of one lemma are summed"""
    senses: Counter = Counter()
    for line_number, (lemma, senses_text) in _iter_records(source, 2, delimiter, source_name):
        senses[lemma] += _parse_positive_int(senses_text, "sense count", line_number, source_name)
    return MeaningTable(dict(senses))


def intersect(freq: FrequencyTable, meanings: MeaningTable) -> JoinedTable:
    """Keep the lemmas found on both sides, counting what each side loses"""
    shared = [lemma for lemma in freq.entries if lemma in meanings.entries]
    entries = {lemma: (freq.entries[lemma], meanings.entries[lemma]) for lemma in shared}
    drops = DropSummary(
        corpus_only=len(freq) - len(shared),
        dictionary_only=len(meanings) - len(shared),
    )
    return JoinedTable(entries, drops)


def rank(joined: Union[JoinedTable, Mapping[str, Tuple[float, float]]]) -> RankedLexicon:
    """
    Sort by frequency descending, ties by lemma in codepoint order, and
    assign ranks 1..n.
    """
    entries = joined.entries if isinstance(joined, JoinedTable) else joined
    if not entries:
        raise EmptyLexiconError("cannot rank an empty table: corpus and dictionary share no lemma")
    ordered = sorted(entries.items(), key=lambda item: (-item[1][0], item[0]))
    return RankedLexicon(tuple(
        LexiconRecord(position, lemma, frequency, senses)
        for position, (lemma, (frequency, senses)) in enumerate(ordered, start=1)
    ))


def summarize(freq: FrequencyTable, meanings: MeaningTable, joined: JoinedTable) -> DataSummary:
    return DataSummary(
        tokens=freq.tokens,
        filtered_tokens=freq.filtered_tokens,
        corpus_lemmas=len(freq),
        dictionary_lemmas=len(meanings),
        intersection_lemmas=len(joined),
        corpus_only=joined.drops.corpus_only,
        dictionary_only=joined.drops.dictionary_only,
    )


def lexicon_tables(lexicon: RankedLexicon) -> Tuple[FrequencyTable, MeaningTable]:
    """Split a ranked lexicon back into its two source tables"""
    if not lexicon.is_integral():
        raise ZipfLawsError("frequencies must be integer counts to be written as a table; integerize the lexicon first")
    frequencies = {r.lemma: int(r.frequency) for r in lexicon.records}
    # Real-valued sense counts round half up, never below one meaning.
    senses = {r.lemma: max(1, int(np.floor(r.senses + 0.5))) for r in lexicon.records}
    return FrequencyTable(frequencies), MeaningTable(senses)


def write_frequency_table(table: FrequencyTable, stream: TextIO, delimiter: str = DEFAULT_DELIMITER) -> None:
    stream.write(f"# lemma{delimiter}count\n")
    for lemma, count in sorted(table.entries.items(), key=lambda item: (-item[1], item[0])):
        stream.write(f"{lemma}{delimiter}{count}\n")


def write_meaning_table(table: MeaningTable, stream: TextIO, delimiter: str = DEFAULT_DELIMITER) -> None:
    stream.write(f"# lemma{delimiter}senses\n")
    for lemma in sorted(table.entries):
        stream.write(f"{lemma}{delimiter}{table.entries[lemma]}\n")


def load_frequency_table(path: PathLike, delimiter: str = DEFAULT_DELIMITER) -> FrequencyTable:
    with open(path, "r", encoding="utf-8") as f:
        return ingest_frequency_table(f, delimiter, source_name=str(path))


def load_token_stream(
    path: PathLike,
    config: Optional[TokenFilterConfig] = None,
    delimiter: str = DEFAULT_DELIMITER,
) -> FrequencyTable:
    with open(path, "r", encoding="utf-8") as f:
        return ingest_token_stream(f, config, delimiter, source_name=str(path))


def load_meaning_table(path: PathLike, delimiter: str = DEFAULT_DELIMITER) -> MeaningTable:
    with open(path, "r", encoding="utf-8") as f:
        return ingest_meaning_table(f, delimiter, source_name=str(path))


def _iter_records(
    source: Iterable[str],
    width: int,
    delimiter: str,
    source_name: Optional[str],
) -> Iterator[Tuple[int, List[str]]]:
    for line_number, raw in enumerate(source, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.startswith("#"):
            continue
        fields = [part.strip() for part in line.split(delimiter)]
        if len(fields) != width:
            raise LexiconParseError(line_number, f"expected {width} fields, found {len(fields)}", source_name)
        if any(not part for part in fields):
            raise LexiconParseError(line_number, "empty field", source_name)
        yield line_number, fields


def _parse_positive_int(text: str, what: str, line_number: int, source_name: Optional[str]) -> int:
    try:
        value = int(text)
    except ValueError:
        raise LexiconParseError(line_number, f"{what} {text!r} is not an integer", source_name) from None
    if value < 1:
        raise LexiconParseError(line_number, f"{what} must be at least 1, got {value}", source_name)
    return value


def _check_lemma(lemma: str) -> None:
    if not isinstance(lemma, str) or not lemma or lemma != lemma.strip():
        raise ZipfLawsError(f"lemma {lemma!r} must be a non-empty string without surrounding whitespace")


def _frozen(values: np.ndarray) -> np.ndarray:
    values.flags.writeable = False
    return values
