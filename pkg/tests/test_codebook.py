from fractions import Fraction

import pytest

from codebook import (TABLE1, TABLE1_PATH, Codebook, CodeStats, code_stats, crossover_ratio, expected_cost,
                      load_codebook, read_codebook, require_valid, table1_codebook, validate, write_codebook)
from corpus import zero_heavy_table
from genericclasses import BitString, CodebookError, CostModel, FormatError, FrequencyTable, NoCrossoverError


def two_bit_book(words):
    return Codebook(2, {s: BitString(w) for s, w in enumerate(words)})


class TestTable1:
    def test_is_a_complete_prefix_code(self):
        book = table1_codebook()
        assert validate(book) == []
        assert book.kraft_sum() == 1
        assert len(book) == 16
        assert sorted(book.lengths()) == [3] + [4] * 13 + [5] * 2

    def test_entries(self):
        book = table1_codebook()
        assert str(book[0b0000]) == "111"
        assert str(book[0b0110]) == "00001"
        assert str(book[0b1101]) == "00000"
        assert {f"{s:04b}": str(w) for s, w in book.items()} == TABLE1

    def test_shipped_file_matches(self):
        assert read_codebook(TABLE1_PATH) == table1_codebook()
        assert load_codebook("table1") == table1_codebook()

    def test_cost_under_zero_heavy_frequencies(self, asym):
        stats = code_stats(table1_codebook(), zero_heavy_table("0.55"), asym)
        assert stats.expected_cost == Fraction(459, 100)
        assert stats.expected_length == Fraction(351, 100)
        assert expected_cost(table1_codebook(), zero_heavy_table("0.55"), asym) == stats.expected_cost


    def test_short_when_zero_words_dominate(self, sym, rng):
        book = table1_codebook()
        worst = FrequencyTable(4, (Fraction(51, 100),) + (0,) * 5 + (Fraction(49, 200),) + (0,) * 6
                               + (Fraction(49, 200),) + (0, 0))
        assert code_stats(book, worst, sym).expected_length < 4
        for _ in range(20):
            rest = [Fraction(int(w)) for w in rng.randint(0, 100, size=15)]
            head = sum(rest) + 1
            table = FrequencyTable(4, (head,) + tuple(rest))
            assert code_stats(book, table, sym).expected_length < 4


class TestCodeStats:
    def test_reported_averages(self, asym):
        unbalanced = CodeStats.from_averages(Fraction(9, 10), Fraction(1), asym)
        balanced = CodeStats.from_averages(Fraction(7, 10), Fraction(13, 10), asym)
        assert unbalanced.expected_cost == Fraction(28, 10)
        assert balanced.expected_cost == Fraction(27, 10)
        assert crossover_ratio(unbalanced, balanced) == Fraction(3, 2)
        assert crossover_ratio(balanced, unbalanced) == Fraction(3, 2)

    def test_unbalanced_code(self, two_bit_freqs, asym):
        # 11 -> 0, 10 -> 11, 01 -> 100, 00 -> 101
        book = two_bit_book(["101", "100", "11", "0"])
        stats = code_stats(book, two_bit_freqs, asym)
        assert (stats.expected_zeros, stats.expected_ones) == (Fraction(9, 10), Fraction(1))
        assert stats.expected_cost == Fraction(28, 10)

    def test_balanced_identity_code(self, two_bit_freqs, asym):
        stats = code_stats(two_bit_book(["00", "01", "10", "11"]), two_bit_freqs, asym)
        assert (stats.expected_zeros, stats.expected_ones) == (Fraction(7, 10), Fraction(13, 10))
        assert stats.expected_cost == Fraction(27, 10)

    def test_crossover_agrees_with_costs(self, two_bit_freqs):
        unbalanced = two_bit_book(["101", "100", "11", "0"])
        balanced = two_bit_book(["00", "01", "10", "11"])
        below = CostModel(Fraction(14, 10), Fraction(1))
        above = CostModel(Fraction(16, 10), Fraction(1))
        assert expected_cost(unbalanced, two_bit_freqs, below) < expected_cost(balanced, two_bit_freqs, below)
        assert expected_cost(unbalanced, two_bit_freqs, above) > expected_cost(balanced, two_bit_freqs, above)

    def test_parallel_costs_never_cross(self, asym):
        a = CodeStats.from_averages(1, 2, asym)
        with pytest.raises(NoCrossoverError):
            crossover_ratio(a, CodeStats.from_averages(1, 3, asym))

    def test_width_mismatch(self, asym):
        with pytest.raises(CodebookError):
            code_stats(table1_codebook(), zero_heavy_table("0.5", symbol_bits=2), asym)

    def test_frequencies_are_normalized(self, asym):
        book = two_bit_book(["00", "01", "10", "11"])
        assert code_stats(book, FrequencyTable(2, (1, 2, 3, 4)), asym).expected_cost == Fraction(27, 10)


class TestValidate:
    def kinds(self, book):
        return sorted({v.kind for v in validate(book)})

    def test_missing(self):
        assert self.kinds(Codebook(2, {0: BitString("0"), 1: BitString("10"), 2: BitString("11")})) == ["missing"]

    def test_prefix(self):
        assert "prefix" in self.kinds(two_bit_book(["0", "01", "10", "11"]))

    def test_duplicate(self):
        assert "duplicate" in self.kinds(two_bit_book(["00", "00", "10", "11"]))

    def test_kraft(self):
        assert "kraft" in self.kinds(two_bit_book(["0", "1", "10", "11"]))

    def test_empty_codeword(self):
        assert "empty" in self.kinds(two_bit_book(["", "01", "10", "11"]))

    def test_incomplete_but_prefix_free_is_valid(self):
        assert validate(two_bit_book(["000", "01", "10", "11"])) == []

    def test_require_valid(self):
        with pytest.raises(CodebookError):
            require_valid(two_bit_book(["0", "01", "10", "11"]))

    def test_missing_codeword_lookup(self):
        with pytest.raises(CodebookError):
            Codebook(2, {0: BitString("0")}).codeword(3)


class TestFiles:
    def test_round_trip(self, tmp_path):
        path = str(tmp_path / "code.txt")
        write_codebook(path, table1_codebook(), header="reference code\nsecond line")
        assert read_codebook(path) == table1_codebook()

    @pytest.mark.parametrize("content", ["00 1\n00 01\n", "00 1 1\n", "0a 1\n", "00 1\n111 01\n", "\n"])
    def test_malformed(self, tmp_path, content):
        path = tmp_path / "code.txt"
        path.write_text(content)
        with pytest.raises(FormatError):
            read_codebook(str(path))

    def test_invalid_code_is_read_but_reported(self, tmp_path):
        path = tmp_path / "code.txt"
        path.write_text("00 0\n01 011\n10 10\n11 110\n")
        book = read_codebook(str(path))
        assert [v.kind for v in validate(book)] == ["prefix"]

    def test_undecodable_file(self, tmp_path):
        path = tmp_path / "code.txt"
        path.write_bytes(b"\xff\xfe\x80\x00")
        with pytest.raises(FormatError):
            read_codebook(str(path))
