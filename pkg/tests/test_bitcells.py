import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pimarray.bitcells import (
    ArrayGeometry,
    BitCellArray,
    ColumnOp,
    ColumnOpSelect,
)
from pimarray.errors import GeometryError, StateError


def bits(*values):
    return np.array(values, dtype=bool)


class TestGeometry:
    def test_derived_quantities(self):
        geo = ArrayGeometry(words=256, word_bits=256, banks=16, subrows=16)
        assert geo.rows_per_bank == 16
        assert geo.subrow_bits == 16

    def test_bank_divisibility(self):
        with pytest.raises(GeometryError):
            ArrayGeometry(words=10, word_bits=8, banks=3)

    def test_subrow_divisibility(self):
        with pytest.raises(GeometryError):
            ArrayGeometry(words=4, word_bits=10, subrows=4)

    def test_positive_fields(self):
        with pytest.raises(GeometryError):
            ArrayGeometry(words=0, word_bits=4)


class TestWriteRead:
    def test_write_then_read_back(self):
        arr = BitCellArray(ArrayGeometry(2, 4))
        word = bits(1, 0, 1, 1)
        arr.write_word(0, word)
        assert (arr.read_word(0) == word).all()

    def test_other_rows_unchanged(self):
        arr = BitCellArray(ArrayGeometry(2, 4))
        arr.write_word(0, bits(1, 1, 1, 1))
        assert not arr.read_word(1).any()

    def test_last_write_wins(self):
        arr = BitCellArray(ArrayGeometry(1, 4))
        arr.write_word(0, bits(1, 1, 1, 1))
        arr.write_word(0, bits(0, 1, 0, 0))
        assert arr.read_word(0).tolist() == [False, True, False, False]

    def test_row_index_checked(self):
        arr = BitCellArray(ArrayGeometry(2, 4))
        with pytest.raises(GeometryError):
            arr.write_word(2, bits(0, 0, 0, 0))

    def test_word_length_checked(self):
        arr = BitCellArray(ArrayGeometry(2, 4))
        with pytest.raises(GeometryError):
            arr.write_word(0, bits(0, 0))

    def test_strict_mode_rejects_unwritten_reads(self):
        arr = BitCellArray(ArrayGeometry(2, 4), strict=True)
        arr.write_word(0, bits(1, 0, 0, 0))
        arr.read_word(0)
        with pytest.raises(StateError):
            arr.read_word(1)
        with pytest.raises(StateError):
            arr.cycle_popcounts(bits(0, 0, 0, 0), ColumnOpSelect.all_xnor(4))

    def test_snapshot_is_a_copy(self):
        arr = BitCellArray(ArrayGeometry(1, 4))
        snap = arr.snapshot()
        snap[0, 0] = True
        assert not arr.read_word(0)[0]


class TestPopcounts:
    def test_self_match_gives_full_count(self):
        arr = BitCellArray(ArrayGeometry(1, 8))
        word = bits(1, 0, 1, 1, 0, 0, 1, 0)
        arr.write_word(0, word)
        r = arr.cycle_popcounts(word, ColumnOpSelect.all_xnor(8))
        assert r.tolist() == [8]

    def test_complement_gives_zero(self):
        arr = BitCellArray(ArrayGeometry(1, 8))
        word = bits(1, 0, 1, 1, 0, 0, 1, 0)
        arr.write_word(0, word)
        r = arr.cycle_popcounts(~word, ColumnOpSelect.all_xnor(8))
        assert r.tolist() == [0]

    def test_xnor_example(self):
        arr = BitCellArray(ArrayGeometry(1, 4))
        arr.write_word(0, bits(1, 1, 0, 0))
        r = arr.cycle_popcounts(bits(1, 0, 1, 0), ColumnOpSelect.all_xnor(4))
        assert r.tolist() == [2]

    def test_and_nulling(self):
        # AND against the all-LO word clears every row's count.
        rng = np.random.default_rng(5)
        arr = BitCellArray(ArrayGeometry(6, 16))
        arr.load_cells(rng.integers(0, 2, size=(6, 16)).astype(bool))
        r = arr.cycle_popcounts(np.zeros(16, bool), ColumnOpSelect.all_and(16))
        assert not r.any()

    def test_mixed_selects_per_column(self):
        arr = BitCellArray(ArrayGeometry(1, 4))
        arr.write_word(0, bits(1, 1, 0, 0))
        select = ColumnOpSelect.from_ops(
            [ColumnOp.XNOR, ColumnOp.AND, ColumnOp.XNOR, ColumnOp.AND]
        )
        # col0 xnor(1,1)=1, col1 and(1,0)=0, col2 xnor(0,1)=0, col3 and(0,0)=0
        r = arr.cycle_popcounts(bits(1, 0, 1, 0), select)
        assert r.tolist() == [1]

    def test_select_length_checked(self):
        arr = BitCellArray(ArrayGeometry(1, 4))
        with pytest.raises(GeometryError):
            arr.cycle_popcounts(bits(0, 0, 0, 0), ColumnOpSelect.all_and(8))

    def test_subrow_partials_sum_to_row_count(self):
        rng = np.random.default_rng(9)
        geo = ArrayGeometry(8, 24, subrows=4)
        arr = BitCellArray(geo)
        arr.load_cells(rng.integers(0, 2, size=(8, 24)).astype(bool))
        x = rng.integers(0, 2, size=24).astype(bool)
        parts = arr.subrow_counts(x, ColumnOpSelect.all_xnor(24))
        assert parts.shape == (8, 4)
        assert (parts >= 0).all() and (parts <= geo.subrow_bits).all()
        assert (
            parts.sum(axis=1)
            == arr.cycle_popcounts(x, ColumnOpSelect.all_xnor(24))
        ).all()

    def test_ops_property_round_trip(self):
        select = ColumnOpSelect.from_ops([ColumnOp.AND, ColumnOp.XNOR])
        assert select.ops == (ColumnOp.AND, ColumnOp.XNOR)


@given(n=st.integers(1, 256), data=st.data())
@settings(max_examples=80, deadline=None)
def test_xnor_counts_equal_hamming_similarity(n, data):
    stored = np.array(
        data.draw(st.lists(st.booleans(), min_size=n, max_size=n)), dtype=bool
    )
    query = np.array(
        data.draw(st.lists(st.booleans(), min_size=n, max_size=n)), dtype=bool
    )
    arr = BitCellArray(ArrayGeometry(1, n))
    arr.write_word(0, stored)
    r = int(arr.cycle_popcounts(query, ColumnOpSelect.all_xnor(n))[0])
    assert r == n - int((stored ^ query).sum())
    # Complement symmetry.
    r_not = int(arr.cycle_popcounts(~query, ColumnOpSelect.all_xnor(n))[0])
    assert r_not == n - r


@given(n=st.integers(1, 128), data=st.data())
@settings(max_examples=60, deadline=None)
def test_and_counts_bounded_by_operand_weights(n, data):
    stored = np.array(
        data.draw(st.lists(st.booleans(), min_size=n, max_size=n)), dtype=bool
    )
    query = np.array(
        data.draw(st.lists(st.booleans(), min_size=n, max_size=n)), dtype=bool
    )
    arr = BitCellArray(ArrayGeometry(1, n))
    arr.write_word(0, stored)
    r = int(arr.cycle_popcounts(query, ColumnOpSelect.all_and(n))[0])
    assert r == int((stored & query).sum())
    assert r <= min(int(stored.sum()), int(query.sum()))
