"""
Tests for corpus and dictionary ingestion, intersection and ranking
"""

import io
import string

import pytest
from hypothesis import given, strategies as st

from zipflaws.errors import EmptyLexiconError, LexiconParseError, ZipfLawsError
from zipflaws.lexicon import (
    FrequencyTable,
    MeaningTable,
    RankedLexicon,
    TokenFilterConfig,
    ingest_frequency_table,
    ingest_meaning_table,
    ingest_token_stream,
    intersect,
    lexicon_tables,
    load_frequency_table,
    load_meaning_table,
    load_token_stream,
    rank,
    summarize,
    write_frequency_table,
    write_meaning_table,
)

from conftest import make_lexicon


def lines(text):
    return io.StringIO(text)


class TestFrequencyTable:
    def test_parses_lemma_counts(self):
        table = ingest_frequency_table(lines("a\t5\nb\t3"))
        assert dict(table.entries) == {"a": 5, "b": 3}

    def test_duplicate_lemmas_are_summed(self):
        table = ingest_frequency_table(lines("a\t5\na\t2"))
        assert dict(table.entries) == {"a": 7}
        assert table.tokens == 7

    def test_non_integer_count_names_line(self):
        with pytest.raises(LexiconParseError) as excinfo:
            ingest_frequency_table(lines("a\tx"))
        assert excinfo.value.line_number == 1
        assert excinfo.value.stage == "lexicon"

    def test_zero_count_rejected(self):
        with pytest.raises(LexiconParseError) as excinfo:
            ingest_frequency_table(lines("a\t1\nb\t0\n"))
        assert excinfo.value.line_number == 2

    def test_wrong_field_count(self):
        with pytest.raises(LexiconParseError, match="expected 2 fields"):
            ingest_frequency_table(lines("a\t1\t2\n"))

    def test_blank_and_comment_lines_skipped(self):
        table = ingest_frequency_table(lines("# lemma\tcount\n\na\t1\n\n"))
        assert dict(table.entries) == {"a": 1}

    def test_custom_delimiter(self):
        table = ingest_frequency_table(lines("a,4\nb,2\n"), delimiter=",")
        assert dict(table.entries) == {"a": 4, "b": 2}

    def test_table_rejects_non_positive_entries(self):
        with pytest.raises(ZipfLawsError):
            FrequencyTable({"a": 0})
        with pytest.raises(ZipfLawsError):
            FrequencyTable({" a": 1})

    @given(st.dictionaries(
        st.text(alphabet=string.ascii_letters, min_size=1, max_size=12),
        st.integers(min_value=1, max_value=10**9),
        min_size=1,
        max_size=50,
    ))
    def test_written_table_reads_back(self, entries):
        out = io.StringIO()
        write_frequency_table(FrequencyTable(entries), out)
        assert dict(ingest_frequency_table(io.StringIO(out.getvalue())).entries) == entries


class TestTokenStream:
    TOKENS = "el\tel\tdet\n,\t,\tpunctuation\ngats\tgat\tnoun\n"

    def test_default_filter_drops_punctuation(self):
        table = ingest_token_stream(lines(self.TOKENS))
        assert dict(table.entries) == {"el": 1, "gat": 1}
        assert table.filtered_tokens == 1

    def test_empty_filter_keeps_everything(self):
        table = ingest_token_stream(lines(self.TOKENS), TokenFilterConfig(excluded_tags=frozenset()))
        assert dict(table.entries) == {"el": 1, ",": 1, "gat": 1}

    def test_counts_by_lemma_not_surface(self):
        table = ingest_token_stream(lines("Gat\tgat\tnoun\ngat\tgat\tnoun\n"))
        assert dict(table.entries) == {"gat": 2}

    def test_malformed_token_line(self):
        with pytest.raises(LexiconParseError) as excinfo:
            ingest_token_stream(lines("el\tel\tdet\ngats\tgat\n"))
        assert excinfo.value.line_number == 2

    def test_fixture_file(self, fixtures_dir):
        table = load_token_stream(fixtures_dir / "tokens.tsv")
        assert dict(table.entries) == {"el": 2, "gat": 2, "mirar": 1, "mar": 1}
        assert table.filtered_tokens == 4


class TestMeaningTable:
    def test_parses_senses(self):
        assert dict(ingest_meaning_table(lines("gat\t4")).entries) == {"gat": 4}

    def test_homographs_are_summed(self):
        assert dict(ingest_meaning_table(lines("set\t2\nset\t3")).entries) == {"set": 5}

    def test_zero_senses_rejected(self):
        with pytest.raises(LexiconParseError):
            ingest_meaning_table(lines("gat\t0"))

    def test_non_integer_senses_rejected(self):
        with pytest.raises(LexiconParseError):
            ingest_meaning_table(lines("gat\t1.5"))


class TestIntersect:
    def test_partial_overlap(self):
        joined = intersect(FrequencyTable({"a": 5, "b": 3}), MeaningTable({"a": 2, "c": 7}))
        assert dict(joined.entries) == {"a": (5, 2)}
        assert joined.drops.corpus_only == 1
        assert joined.drops.dictionary_only == 1

    def test_disjoint_is_empty(self):
        joined = intersect(FrequencyTable({"a": 5}), MeaningTable({"b": 1}))
        assert len(joined) == 0
        assert tuple(joined.drops) == (1, 1)

    def test_full_overlap(self):
        joined = intersect(FrequencyTable({"a": 5, "b": 4, "c": 1}), MeaningTable({"a": 1, "b": 2, "c": 3}))
        assert len(joined) == 3
        assert tuple(joined.drops) == (0, 0)


class TestRank:
    def test_ranks_by_descending_frequency(self):
        lex = rank({"a": (3, 1), "b": (9, 2), "c": (5, 1)})
        assert lex.lemmas == ("b", "c", "a")
        assert list(lex.ranks) == [1, 2, 3]

    def test_ties_broken_by_lemma(self):
        lex = rank({"z": (4, 1), "b": (4, 1), "m": (9, 1)})
        assert lex.lemmas == ("m", "b", "z")

    def test_empty_table_rejected(self):
        with pytest.raises(EmptyLexiconError):
            rank({})

    def test_single_record(self):
        lex = rank({"a": (1, 1)})
        assert lex.n == 1

    def test_invariants_enforced(self):
        with pytest.raises(ZipfLawsError):
            make_lexicon([1, 5])
        with pytest.raises(ZipfLawsError):
            RankedLexicon(((2, "a", 1, 1),))

    def test_value_arrays_are_read_only(self):
        lex = make_lexicon([5, 3, 1], [2, 2, 1])
        with pytest.raises(ValueError):
            lex.frequencies[0] = 1.0


class TestFixtureFiles:
    def test_summary_of_fixture_sources(self, fixtures_dir):
        freq = load_frequency_table(fixtures_dir / "frequencies.tsv")
        meanings = load_meaning_table(fixtures_dir / "meanings.tsv")
        joined = intersect(freq, meanings)
        summary = summarize(freq, meanings, joined)
        assert summary.corpus_lemmas == 26
        assert summary.dictionary_lemmas == 25
        assert summary.intersection_lemmas == 24
        assert summary.corpus_only == 2
        assert summary.dictionary_only == 1
        # fer is listed twice in the dictionary
        assert meanings.entries["fer"] == 30

    def test_lexicon_tables_write_and_reload(self):
        lex = make_lexicon([9, 4, 4, 1], [3, 1, 2, 1])
        freq, meanings = lexicon_tables(lex)
        freq_out, meanings_out = io.StringIO(), io.StringIO()
        write_frequency_table(freq, freq_out)
        write_meaning_table(meanings, meanings_out)
        reloaded = rank(intersect(
            ingest_frequency_table(io.StringIO(freq_out.getvalue())),
            ingest_meaning_table(io.StringIO(meanings_out.getvalue())),
        ))
        assert list(reloaded.frequencies) == [9, 4, 4, 1]
        assert list(reloaded.senses) == [3, 1, 2, 1]

    def test_lexicon_tables_need_integer_frequencies(self):
        with pytest.raises(ZipfLawsError, match="integer"):
            lexicon_tables(make_lexicon([2.5, 1.0]))
