import time

import numpy as np
import pytest

from core.algebra import convolve
from core.fock import (
    FockError,
    StepFunction,
    discretize_exponential,
    inner_integral,
    levy_interval_functional,
    levy_matrix_element,
    slot_count,
    walk_matrix_element,
    walk_matrix_element_dense,
)
from core.presets import build_preset
from core.schurmann import markov_semigroup
from core.walk import beta_direct


def _pair(k_dim: int, seed: int = 0) -> tuple[StepFunction, StepFunction]:
    rng = np.random.default_rng(seed)

    def values(n):
        return 0.4 * (rng.standard_normal((n, k_dim)) + 1j * rng.standard_normal((n, k_dim)))

    f = StepFunction(durations=[0.25, 0.5, 0.25], values=values(3))
    g = StepFunction(durations=[0.5, 0.5], values=values(2))
    return f, g


def test_step_function_evaluation_and_integral():
    f = StepFunction(durations=[0.5, 1.0], values=[[1.0], [2.0j]])
    np.testing.assert_array_equal(f(0.0), [1.0])
    np.testing.assert_array_equal(f(0.5), [2.0j])
    np.testing.assert_array_equal(f(1.5), [0.0])
    assert f.total == 1.5
    np.testing.assert_allclose(f.integral(0.25, 1.0), [0.25 + 1.0j])
    np.testing.assert_allclose(f.antiderivative([0.0, 0.5, 2.0]), [[0.0], [0.5], [0.5 + 2.0j]])


def test_step_function_rejects_bad_pieces():
    with pytest.raises(FockError):
        StepFunction(durations=[0.5, -1.0], values=[[1.0], [1.0]])
    with pytest.raises(FockError):
        StepFunction(durations=[0.5], values=[[1.0], [1.0]])


def test_inner_integral():
    f = StepFunction(durations=[1.0], values=[[1.0j, 1.0]])
    g = StepFunction(durations=[0.5, 0.5], values=[[1.0, 0.0], [0.0, 2.0]])
    assert inner_integral(f, g, 1.0) == pytest.approx(-0.5j + 1.0)
    assert inner_integral(f, g, 0.25) == pytest.approx(-0.25j)


def test_slot_count_tolerates_rounding():
    assert slot_count(1.0, 0.1) == 10
    assert slot_count(1.0, 0.1 * 2.0 ** -7) == 1280
    assert slot_count(0.99, 0.1) == 9


def test_discretized_slots_are_averages():
    f = StepFunction(durations=[0.3, 0.7], values=[[1.0], [3.0]])
    slots = discretize_exponential(f, 0.5, 2).slots
    np.testing.assert_allclose(slots[:, 0], 1.0)
    np.testing.assert_allclose(slots[:, 1], np.sqrt(0.5) * np.array([1.8, 3.0]))


def test_zero_function_gives_vacuum():
    slots = discretize_exponential(StepFunction.zero(2), 0.1, 4).slots
    np.testing.assert_array_equal(slots, [[1, 0, 0]] * 4)


def test_oracle_at_unit_is_exponential_of_inner_product(model):
    algebra, triple = model
    f, g = _pair(triple.k_dim, seed=1)
    value = levy_matrix_element(algebra, triple, f, g, 1.0, algebra.unit)
    assert value == pytest.approx(np.exp(inner_integral(f, g, 1.0)), abs=1e-10)


def test_oracle_with_zero_functions_is_markov_semigroup(model):
    algebra, triple = model
    zero = StepFunction.zero(triple.k_dim)
    functional = levy_interval_functional(algebra, triple, zero, zero, 0.0, 0.8)
    assert functional.max_deviation(markov_semigroup(algebra, triple, 0.8)) <= 1e-12


def test_oracle_refinement_invariance(model):
    algebra, triple = model
    f, g = _pair(triple.k_dim, seed=2)
    for label in algebra.labels:
        a = algebra.basis_vector(algebra.index(label))
        coarse = levy_matrix_element(algebra, triple, f, g, 1.0, a)
        fine = levy_matrix_element(algebra, triple, f, g, 1.0, a, extra_breakpoints=[0.1, 0.6])
        assert abs(coarse - fine) <= 1e-11


def test_oracle_factorizes_over_increments(model):
    algebra, triple = model
    f, g = _pair(triple.k_dim, seed=3)
    first = levy_interval_functional(algebra, triple, f, g, 0.0, 0.4)
    second = levy_interval_functional(algebra, triple, f, g, 0.4, 1.0)
    whole = levy_interval_functional(algebra, triple, f, g, 0.0, 1.0)
    assert convolve(algebra, first, second).max_deviation(whole) <= 1e-10


def test_oracle_rejects_reversed_interval(poisson):
    algebra, triple = poisson
    zero = StepFunction.zero(1)
    with pytest.raises(FockError):
        levy_interval_functional(algebra, triple, zero, zero, 0.5, 0.2)


def test_fast_path_matches_dense(model):
    algebra, triple = model
    f, g = _pair(triple.k_dim, seed=4)
    size = triple.k_dim + 1
    max_n = int(np.floor(np.log(256) / np.log(size) + 1e-9))
    rng = np.random.default_rng(7)
    a = rng.standard_normal(algebra.dim) + 1j * rng.standard_normal(algebra.dim)
    for n in range(0, max_n + 1):
        h = 1.0 / max(n, 1) / triple.lam
        beta = beta_direct(algebra, triple, h)
        t = n * h
        fast = walk_matrix_element(algebra, beta, f, g, t, a)
        dense = walk_matrix_element_dense(algebra, beta, f, g, t, a)
        assert abs(fast - dense) <= 1e-10, n


@pytest.mark.parametrize("n", [8, 9, 10])
def test_fast_path_matches_dense_on_long_poisson_walks(poisson, n):
    algebra, triple = poisson
    f = StepFunction(durations=[0.3, 0.7], values=[[0.5 + 0.2j], [-0.4j]])
    g = StepFunction(durations=[0.6, 0.4], values=[[0.3], [0.1 - 0.6j]])
    h = 1.0 / n
    beta = beta_direct(algebra, triple, h)
    a = np.array([0.7 - 0.1j, -0.2 + 0.9j])
    fast = walk_matrix_element(algebra, beta, f, g, 1.0, a)
    dense = walk_matrix_element_dense(algebra, beta, f, g, 1.0, a, cap=4096)
    assert abs(fast - dense) <= 1e-10


def test_swapping_arguments_conjugates_matrix_elements(model):
    algebra, triple = model
    f, g = _pair(triple.k_dim, seed=8)
    beta = beta_direct(algebra, triple, 0.125 / triple.lam)
    rng = np.random.default_rng(9)
    a = rng.standard_normal(algebra.dim) + 1j * rng.standard_normal(algebra.dim)
    a_star = algebra.adjoint(a)
    walk = walk_matrix_element(algebra, beta, f, g, 1.0, a)
    walk_swapped = walk_matrix_element(algebra, beta, g, f, 1.0, a_star)
    assert abs(walk_swapped - np.conj(walk)) <= 1e-12
    oracle = levy_matrix_element(algebra, triple, f, g, 1.0, a)
    oracle_swapped = levy_matrix_element(algebra, triple, g, f, 1.0, a_star)
    assert abs(oracle_swapped - np.conj(oracle)) <= 1e-12


def test_walk_at_unit_is_product_of_slot_overlaps(model):
    algebra, triple = model
    f, g = _pair(triple.k_dim, seed=5)
    h = 0.125 / triple.lam
    beta = beta_direct(algebra, triple, h)
    n = slot_count(1.0, h)
    u = discretize_exponential(f, h, n).slots
    v = discretize_exponential(g, h, n).slots
    expected = np.prod(np.einsum("na,na->n", np.conj(u), v))
    assert walk_matrix_element(algebra, beta, f, g, 1.0, algebra.unit) == pytest.approx(expected, abs=1e-12)


def test_dimension_mismatch(poisson):
    algebra, triple = poisson
    beta = beta_direct(algebra, triple, 0.1)
    f = StepFunction.constant([1.0, 0.0], 1.0)
    with pytest.raises(FockError):
        walk_matrix_element(algebra, beta, f, f, 1.0, algebra.unit)


def test_fast_path_handles_ten_thousand_steps(kac_paljutkin):
    triple = build_preset("kac_paljutkin_block", kac_paljutkin)
    f, g = _pair(triple.k_dim, seed=6)
    beta = beta_direct(kac_paljutkin, triple, 1e-4)
    start = time.perf_counter()
    value = walk_matrix_element(kac_paljutkin, beta, f, g, 1.0, kac_paljutkin.basis_vector(5))
    elapsed = time.perf_counter() - start
    assert np.isfinite(value)
    assert elapsed < 1.0


def test_constant_function_slots():
    c = np.array([0.5, -1.0j])
    slots = discretize_exponential(StepFunction.constant(c, 1.0), 0.25, 4).slots
    np.testing.assert_allclose(slots[:, 1:], np.tile(0.5 * c, (4, 1)))


def test_discrete_exponential_overlap_tends_to_e():
    one = StepFunction.constant([1.0], 1.0)
    h = 2.0 ** -10
    slots = discretize_exponential(one, h, slot_count(1.0, h)).slots
    overlap = np.prod(np.einsum("na,na->n", np.conj(slots), slots)).real
    assert overlap == pytest.approx((1 + h) ** 1024, rel=1e-12)
    assert abs(overlap - np.e) <= 1.5e-3


def test_poisson_vacuum_matrix_elements(poisson):
    algebra, triple = poisson
    zero = StepFunction.zero(1)
    e1 = algebra.basis_vector(1)
    walk = walk_matrix_element(algebra, beta_direct(algebra, triple, 0.1), zero, zero, 1.0, e1)
    assert walk == pytest.approx(0.4463129088, abs=1e-10)
    assert levy_matrix_element(algebra, triple, zero, zero, 1.0, e1) == pytest.approx(0.4323323584, abs=1e-10)
