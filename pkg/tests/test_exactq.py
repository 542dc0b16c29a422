"""Exact linear algebra: frozen oracles and seeded property checks."""

from fractions import Fraction

import pytest

from bicat_euler.exactq import (
    IndexMismatch,
    QMatrix,
    QVector,
    entry_sum,
    format_rational,
    invert,
    matrix_euler,
    rational,
    solve_coweighting,
    solve_weighting,
)
from bicat_euler.generators import random_rational_matrix


def mat(rows):
    labels = tuple(str(i) for i in range(len(rows)))
    return QMatrix(labels, labels, tuple(tuple(Fraction(v) for v in row) for row in rows))


ARROW_ZETA = mat([[1, 1], [0, 1]])
EZ2_ZETA = mat([[1, 1], [1, 1]])


def test_weighting_arrow():
    # back-substitution by hand: row 1 forces k1 = 1, row 0 forces k0 = 0
    assert solve_weighting(ARROW_ZETA).entries == (Fraction(0), Fraction(1))


def test_weighting_identity_1x1():
    assert solve_weighting(mat([[1]])).entries == (Fraction(1),)


def test_weighting_singular_free_variable_zero():
    # k0 + k1 = 1 with the free variable pinned to 0
    assert solve_weighting(EZ2_ZETA).entries == (Fraction(1), Fraction(0))


def test_coweighting_arrow():
    assert solve_coweighting(ARROW_ZETA).entries == (Fraction(1), Fraction(0))


def test_coweighting_singular():
    assert solve_coweighting(EZ2_ZETA).entries == (Fraction(1), Fraction(0))


def test_matrix_euler_pair():
    # inverse [[1,-2],[0,1]] has entry sum 0
    assert matrix_euler(mat([[1, 2], [0, 1]])).chi == 0


def test_matrix_euler_singular_but_defined():
    assert matrix_euler(EZ2_ZETA).chi == 1


def test_matrix_euler_groupoid_cardinality():
    assert matrix_euler(mat([[5]])).chi == Fraction(1, 5)


def test_matrix_euler_no_solution():
    e = matrix_euler(mat([[0]]))
    assert e.chi is None and e.missing() == ("weighting", "coweighting")


def test_matrix_euler_index_mismatch():
    bad = QMatrix(("a",), ("b",), ((Fraction(1),),))
    with pytest.raises(IndexMismatch):
        matrix_euler(bad)


def test_invert_unitriangular():
    inv = invert(ARROW_ZETA)
    assert inv.entries == ((Fraction(1), Fraction(-1)), (Fraction(0), Fraction(1)))


def test_invert_singular_is_none():
    assert invert(EZ2_ZETA) is None


def test_invert_span_entry_sum():
    span = mat([[1, 1, 1], [0, 1, 0], [0, 0, 1]])
    assert entry_sum(invert(span)) == 1


def test_format_and_parse_rational():
    assert format_rational(Fraction(-3, 7)) == "-3/7"
    assert format_rational(Fraction(4, 2)) == "2"
    assert rational("-3/7") == Fraction(-3, 7)


def test_rectangular_systems_are_supported():
    m = QMatrix(("r",), ("a", "b"), ((Fraction(1), Fraction(1)),))
    k = solve_weighting(m)
    assert k.index == ("a", "b") and k.entries == (Fraction(1), Fraction(0))
    tall = QMatrix(("r", "s"), ("a",), ((Fraction(1),), (Fraction(2),)))
    assert solve_weighting(tall) is None  # k=1 and 2k=1 cannot both hold


def test_vector_total_and_json():
    v = QVector(("a", "b"), (Fraction(1, 2), Fraction(1, 2)))
    assert v.total() == 1
    assert v.to_json() == {"a": "1/2", "b": "1/2"}


def _mul(m: QMatrix, v: QVector):
    return [
        sum((m.entries[i][j] * v.entries[j] for j in range(len(m.cols))), Fraction(0))
        for i in range(len(m.rows))
    ]


def test_weighting_identity_on_seeded_matrices():
    solved = 0
    both = 0
    for seed in range(200):
        m = random_rational_matrix(seed)
        k = solve_weighting(m)
        if k is not None:
            solved += 1
            assert all(x == 1 for x in _mul(m, k))
        kc = solve_coweighting(m)
        if kc is not None:
            assert all(x == 1 for x in _mul(m.transpose(), kc))
        if k is not None and kc is not None:
            both += 1
            assert k.total() == kc.total()
    assert solved > 100 and both > 100  # the generator must exercise the property


def test_transpose_duality():
    for seed in range(60):
        m = random_rational_matrix(seed)
        a = solve_coweighting(m)
        b = solve_weighting(m.transpose())
        assert (a is None) == (b is None)
        if a is not None:
            assert a.entries == b.entries


def test_invertible_chi_equals_inverse_entry_sum():
    for seed in range(120):
        m = random_rational_matrix(seed)
        inv = invert(m)
        if inv is None:
            continue
        e = matrix_euler(m)
        assert e.chi is not None
        assert e.chi == entry_sum(inv)


def test_choice_independence_of_chi():
    # perturbing free variables changes k but not its sum, when a coweighting exists
    hits = 0
    for seed in range(200):
        m = random_rational_matrix(seed)
        k0 = solve_weighting(m)
        k1 = solve_weighting(m, free_value=Fraction(1))
        kc = solve_coweighting(m)
        if k0 is None or kc is None:
            continue
        assert k1 is not None
        if k0.entries != k1.entries:
            hits += 1
            assert all(x == 1 for x in _mul(m, k1))
        assert k0.total() == k1.total()
    assert hits > 0  # at least some underdetermined consistent systems appeared
