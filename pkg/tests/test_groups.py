import pytest

from core.groups import (
    InvalidGroupTableError,
    cyclic_group,
    group_from_table,
    permutation_sign,
    symmetric_group_s3,
)


def test_cyclic_group_arithmetic():
    z3 = cyclic_group(3)
    assert z3.order == 3
    assert z3.identity == 0
    assert z3.mult(2, 2) == 1
    assert z3.inverse(1) == 2


def test_s3_is_nonabelian_composition():
    s3 = symmetric_group_s3()
    assert s3.order == 6
    assert s3.labels[s3.identity] == "012"
    swap01, swap12 = s3.index("102"), s3.index("021")
    assert s3.mult(swap01, swap12) != s3.mult(swap12, swap01)
    for g in range(6):
        assert s3.mult(g, s3.inverse(g)) == s3.identity


def test_permutation_signs():
    assert permutation_sign("012") == 1
    assert permutation_sign("102") == -1
    assert permutation_sign("120") == 1
    assert permutation_sign("210") == -1


def test_non_associative_table_rejected():
    table = [[0, 1, 2], [1, 0, 0], [2, 0, 1]]
    with pytest.raises(InvalidGroupTableError):
        group_from_table(table)


def test_table_without_inverses_rejected():
    with pytest.raises(InvalidGroupTableError):
        group_from_table([[0, 1], [1, 1]])


def test_unknown_label():
    with pytest.raises(KeyError):
        cyclic_group(2).index("7")
