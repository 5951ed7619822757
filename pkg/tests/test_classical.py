import numpy as np
import pytest

from core.builders import resolve_fixture
from core.classical import compound_poisson_law, evaluation_triple, jump_measure_of
from core.groups import cyclic_group, symmetric_group_s3
from core.schurmann import markov_semigroup


def test_two_state_chain_law():
    law = compound_poisson_law(cyclic_group(2), 1.0, np.array([0.0, 1.0]), 1.0)
    np.testing.assert_allclose(law, [(1 + np.exp(-2)) / 2, (1 - np.exp(-2)) / 2], atol=1e-14)


def test_law_is_a_probability_vector():
    group = symmetric_group_s3()
    law = compound_poisson_law(group, 2.5, np.full(6, 1 / 6), 0.8)
    assert law.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.all(law >= -1e-15)


@pytest.mark.parametrize("t", [0.25, 1.0, 3.0])
def test_evaluation_triple_semigroup_is_compound_poisson(t):
    group = symmetric_group_s3()
    algebra = resolve_fixture("function:S3")
    points = [group.index("102"), group.index("120"), group.index("021")]
    weights = [0.2, 0.7, 0.4]
    triple = evaluation_triple(algebra, group, points, weights)
    rate, measure = jump_measure_of(group, points, weights)
    assert rate == pytest.approx(triple.lam)
    expected = compound_poisson_law(group, rate, measure, t)
    np.testing.assert_allclose(markov_semigroup(algebra, triple, t).coeffs, expected, atol=1e-12)


def test_invalid_jump_measure():
    with pytest.raises(ValueError):
        compound_poisson_law(cyclic_group(3), 1.0, np.array([0.5, 0.2, 0.2]), 1.0)
