import ast
import pathlib

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pimarray import oracle
from pimarray.errors import GeometryError
from pimarray.formats import NumberFormat
from pimarray.modes import BankProgram, Gate, Literal, PlaProgram, Term


class TestHammingSimilarity:
    def test_identical_words(self):
        a = [1, 0, 1, 1, 0]
        assert oracle.hamming_similarity(a, a) == 5

    def test_complement(self):
        a = [True, False, True]
        assert oracle.hamming_similarity(a, [not v for v in a]) == 0

    def test_example(self):
        assert oracle.hamming_similarity([1, 1, 0, 0], [1, 0, 1, 0]) == 2

    def test_length_mismatch(self):
        with pytest.raises(GeometryError):
            oracle.hamming_similarity([1, 0], [1])


class TestMvp:
    def test_identity(self):
        eye = np.eye(4, dtype=int)
        assert oracle.mvp(eye, [3, -1, 0, 7]) == [3, -1, 0, 7]

    def test_zero_matrix(self):
        assert oracle.mvp(np.zeros((3, 2), int), [5, 6]) == [0, 0, 0]

    def test_hand_example(self):
        assert oracle.mvp([[1, 0, 1]], [3, 1, 2]) == [5]

    def test_dimension_mismatch(self):
        with pytest.raises(GeometryError):
            oracle.mvp([[1, 0]], [1])

    def test_format_validation(self):
        with pytest.raises(GeometryError):
            oracle.mvp([[9]], [1], matrix_format=NumberFormat.uint(2))
        with pytest.raises(GeometryError):
            oracle.mvp([[1]], [2], vector_format=NumberFormat.oddint(2))

    def test_unbounded_arithmetic(self):
        # Results wider than any machine register stay exact.
        big = 1 << 70
        assert oracle.mvp([[big]], [big]) == [big * big]


class TestGf2:
    def test_identity(self):
        eye = np.eye(4, dtype=int)
        assert oracle.gf2_mvp(eye, [1, 0, 1, 1]) == [1, 0, 1, 1]

    def test_small_example(self):
        assert oracle.gf2_mvp([[1, 1], [1, 0]], [1, 1]) == [0, 1]

    def test_even_parity_row(self):
        assert oracle.gf2_mvp([[1, 1, 1, 1]], [1, 1, 0, 0]) == [0]

    def test_dimension_mismatch(self):
        with pytest.raises(GeometryError):
            oracle.gf2_mvp([[1, 0]], [1])


class TestPla:
    def test_empty_or_bank_is_false(self):
        prog = PlaProgram(1, (BankProgram((), Gate.OR),))
        assert oracle.pla(prog, [True]) == [False]

    def test_empty_and_bank_is_vacuously_true(self):
        prog = PlaProgram(1, (BankProgram((), Gate.AND),))
        assert oracle.pla(prog, [False]) == [True]

    def test_single_matching_and_term(self):
        prog = PlaProgram(2, (BankProgram(
            (Term(Gate.AND, (Literal(0), Literal(1, True))),), Gate.OR
        ),))
        assert oracle.pla(prog, [True, False]) == [True]
        assert oracle.pla(prog, [True, True]) == [False]

    def test_truth_table_against_direct_formula(self):
        # f = (x0 and x1) or x2, checked over all eight assignments.
        prog = PlaProgram(3, (BankProgram(
            (
                Term(Gate.AND, (Literal(0), Literal(1))),
                Term(Gate.AND, (Literal(2),)),
            ),
            Gate.OR,
        ),))
        for code in range(8):
            a = [bool((code >> i) & 1) for i in range(3)]
            assert oracle.pla(prog, a) == [(a[0] and a[1]) or a[2]]

    def test_majority_tie_passes(self):
        prog = PlaProgram(2, (BankProgram(
            (Term(Gate.MAJ, (Literal(0), Literal(1))),), Gate.OR
        ),))
        assert oracle.pla(prog, [True, False]) == [True]
        assert oracle.pla(prog, [False, False]) == [False]

    def test_assignment_length_checked(self):
        prog = PlaProgram(2, (BankProgram((), Gate.OR),))
        with pytest.raises(GeometryError):
            oracle.pla(prog, [True])


@given(
    bits=st.lists(
        st.tuples(st.booleans(), st.booleans()), min_size=1, max_size=64
    )
)
@settings(max_examples=200, deadline=None)
def test_signed_level_product_equals_similarity_identity(bits):
    # Cross-check between the two references: with -1/+1 levels the dot
    # product is twice the similarity minus the dimension.
    a_levels = [u for u, _ in bits]
    x_levels = [v for _, v in bits]
    a = [1 if u else -1 for u in a_levels]
    x = [1 if v else -1 for v in x_levels]
    n = len(bits)
    dot = oracle.mvp([a], x)[0]
    assert dot == 2 * oracle.hamming_similarity(a_levels, x_levels) - n


@given(
    bits=st.lists(
        st.tuples(st.booleans(), st.booleans()), min_size=1, max_size=64
    )
)
@settings(max_examples=200, deadline=None)
def test_mixed_level_similarity_identities(bits):
    # The two rewriting identities behind mixed-level products, checked
    # as pure arithmetic on both references.
    a_levels = [u for u, _ in bits]
    x_levels = [v for _, v in bits]
    n = len(bits)
    ones = [True] * n
    zeros = [False] * n
    # Signed-level word against a 0/1 word.
    a_pm = [1 if u else -1 for u in a_levels]
    x_01 = [1 if v else 0 for v in x_levels]
    assert oracle.mvp([a_pm], x_01)[0] == (
        oracle.hamming_similarity(a_levels, x_levels)
        + oracle.hamming_similarity(a_levels, ones)
        - n
    )
    # 0/1 word against a signed-level word.
    a_01 = [1 if u else 0 for u in a_levels]
    x_pm = [1 if v else -1 for v in x_levels]
    assert oracle.mvp([a_01], x_pm)[0] == (
        2 * oracle.mvp([a_01], x_01)[0]
        + oracle.hamming_similarity(a_levels, zeros)
        - n
    )


def test_oracle_module_shares_no_machinery():
    # The reference implementations must stay structurally independent
    # of the simulated datapaths for their agreement to mean anything.
    source = (
        pathlib.Path(oracle.__file__).read_text(encoding="utf-8")
    )
    tree = ast.parse(source)
    banned = {"bitcells", "alu", "controller", "harness", "cli", "perf"}
    for node in ast.walk(tree):
        if isinstance(node, ast.ImportFrom):
            module = (node.module or "").split(".")[-1]
            assert module not in banned, f"oracle imports {module}"
        if isinstance(node, ast.Import):
            for alias in node.names:
                assert alias.name.split(".")[-1] not in banned
