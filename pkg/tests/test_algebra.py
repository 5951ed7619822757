import numpy as np
import pytest

from core.algebra import (
    BialgebraStructureError,
    FiniteBialgebra,
    StateCertificationError,
    convolution_exponential,
    convolution_power,
    convolution_series,
    convolve,
    homomorphism_residuals,
    iterated_coproduct,
    map_norm_estimate,
    ordered_convolution,
    validate_bialgebra,
)
from core.builders import SHIPPED_FIXTURES, build_group_algebra, resolve_fixture
from core.groups import cyclic_group
from data.models import Axiom
from tests.conftest import load_shipped


@pytest.mark.parametrize("ref", SHIPPED_FIXTURES)
def test_shipped_fixtures_pass_every_axiom(ref):
    report = validate_bialgebra(load_shipped(ref))
    assert report.passed
    assert {r.axiom for r in report.residuals} == set(Axiom)
    assert all(r.residual <= 1e-9 for r in report.residuals)


def _corrupt(algebra: FiniteBialgebra, **changes) -> FiniteBialgebra:
    fields = dict(
        labels=algebra.labels,
        mult=np.array(algebra.mult),
        unit=np.array(algebra.unit),
        star=np.array(algebra.star),
        counit=np.array(algebra.counit),
        coproduct=np.array(algebra.coproduct),
        faithful_rep=np.array(algebra.faithful_rep),
        name="corrupted",
    )
    fields.update(changes)
    return FiniteBialgebra(**fields)


def test_perturbed_coproduct_breaks_coassociativity():
    algebra = resolve_fixture("group:Z2")
    coproduct = np.array(algebra.coproduct)
    coproduct[0 * 2 + 1, 0] += 0.1
    report = validate_bialgebra(_corrupt(algebra, coproduct=coproduct))
    assert not report.passed
    assert Axiom.COASSOCIATIVITY in report.failing()
    assert report.residual(Axiom.COASSOCIATIVITY) == pytest.approx(0.1, abs=1e-12)


def test_perturbed_star_breaks_involution():
    algebra = resolve_fixture("function:Z3")
    star = np.array(algebra.star)
    star[0, 0] = 1j
    report = validate_bialgebra(_corrupt(algebra, star=star))
    assert Axiom.INVOLUTION in report.failing()


def test_shape_mismatch_raises():
    algebra = resolve_fixture("group:Z2")
    with pytest.raises(BialgebraStructureError):
        _corrupt(algebra, counit=np.ones(3, dtype=complex))


def test_counit_is_a_state(kac_paljutkin):
    eps = kac_paljutkin.counit_functional
    assert eps.is_state()
    assert eps.unit_value == pytest.approx(1.0)


def test_non_positive_functional_rejected():
    algebra = resolve_fixture("function:Z2")
    with pytest.raises(StateCertificationError):
        algebra.functional([1.5, -0.5]).certify_state()


def test_convolution_of_counit_is_identity(kac_paljutkin):
    rng = np.random.default_rng(3)
    mu = rng.standard_normal(kac_paljutkin.dim) + 1j * rng.standard_normal(kac_paljutkin.dim)
    eps = kac_paljutkin.counit
    np.testing.assert_allclose(convolve(kac_paljutkin, eps, mu).coeffs, mu, atol=1e-12)
    np.testing.assert_allclose(convolve(kac_paljutkin, mu, eps).coeffs, mu, atol=1e-12)


def test_convolution_is_associative(kac_paljutkin):
    rng = np.random.default_rng(5)
    a, b, c = (rng.standard_normal(kac_paljutkin.dim) for _ in range(3))
    left = convolve(kac_paljutkin, convolve(kac_paljutkin, a, b), c)
    right = convolve(kac_paljutkin, a, convolve(kac_paljutkin, b, c))
    np.testing.assert_allclose(left.coeffs, right.coeffs, atol=1e-12)
    np.testing.assert_allclose(
        ordered_convolution(kac_paljutkin, np.stack([a, b, c])), left.coeffs, atol=1e-12
    )


def test_ordered_convolution_of_nothing_is_counit(kac_paljutkin):
    np.testing.assert_array_equal(
        ordered_convolution(kac_paljutkin, np.zeros((0, kac_paljutkin.dim))), kac_paljutkin.counit
    )


def test_convolution_power_matches_repeated_convolution():
    algebra = resolve_fixture("function:S3")
    mu = np.full(6, 1 / 6)
    expected = algebra.counit.astype(complex)
    for _ in range(4):
        expected = convolve(algebra, expected, mu).coeffs
    np.testing.assert_allclose(convolution_power(algebra, mu, 4).coeffs, expected, atol=1e-14)


def test_exponential_semigroup_law(kac_paljutkin):
    rng = np.random.default_rng(11)
    gamma = rng.standard_normal(kac_paljutkin.dim)
    gamma = gamma - (gamma @ kac_paljutkin.unit) * kac_paljutkin.counit
    p_s = convolution_exponential(kac_paljutkin, gamma, 0.3)
    p_t = convolution_exponential(kac_paljutkin, gamma, 0.4)
    p_st = convolution_exponential(kac_paljutkin, gamma, 0.7)
    assert convolve(kac_paljutkin, p_s, p_t).max_deviation(p_st) <= 1e-10


def test_exponential_agrees_with_series():
    algebra = resolve_fixture("group:S3")
    gamma = np.linspace(-1, 1, 6)
    exact = convolution_exponential(algebra, gamma, 0.5)
    series = convolution_series(algebra, gamma, 0.5, order=30)
    assert exact.max_deviation(series) <= 1e-12


def test_iterated_coproduct_shapes_and_counit(kac_paljutkin):
    d = kac_paljutkin.dim
    np.testing.assert_array_equal(iterated_coproduct(kac_paljutkin, 1), np.eye(d))
    delta3 = iterated_coproduct(kac_paljutkin, 3)
    assert delta3.shape == (d ** 3, d)
    eps3 = np.kron(np.kron(kac_paljutkin.counit, kac_paljutkin.counit), kac_paljutkin.counit)
    np.testing.assert_allclose(eps3 @ delta3, kac_paljutkin.counit, atol=1e-12)


def test_faithful_representation_is_homomorphism(kac_paljutkin):
    residuals = homomorphism_residuals(kac_paljutkin, kac_paljutkin.faithful_rep)
    assert set(residuals) == {"unital", "multiplicative", "star"}
    assert max(residuals.values()) <= 1e-12


def test_map_norm_estimate_of_counit_is_one():
    algebra = build_group_algebra(cyclic_group(3))
    assert map_norm_estimate(algebra, algebra.counit, samples=50, seed=1) == pytest.approx(1.0, abs=1e-12)


def test_map_norm_estimate_is_seed_deterministic(kac_paljutkin):
    psi = kac_paljutkin.faithful_rep * 0.5
    first = map_norm_estimate(kac_paljutkin, psi, samples=20, seed=7)
    second = map_norm_estimate(kac_paljutkin, psi, samples=20, seed=7)
    assert first == second


def test_function_algebra_residuals_are_exactly_zero():
    report = validate_bialgebra(resolve_fixture("function:Z2"))
    assert all(r.residual == 0.0 for r in report.residuals)


def test_group_algebra_passes_tight_tolerance():
    assert validate_bialgebra(resolve_fixture("group:S3"), tol=1e-12).passed


def test_function_algebra_coproduct_and_group_counit():
    z2 = resolve_fixture("function:Z2")
    np.testing.assert_array_equal(z2.coproduct3[:, :, 1], [[0, 1], [1, 0]])
    np.testing.assert_array_equal(resolve_fixture("group:Z3").counit, [1, 1, 1])


def test_two_state_convolutions():
    z2 = resolve_fixture("function:Z2")
    eps = z2.counit
    np.testing.assert_array_equal(convolve(z2, eps, eps).coeffs, eps)
    delta_one = np.array([0.0, 1.0])
    np.testing.assert_allclose(convolve(z2, delta_one, delta_one).coeffs, [1.0, 0.0])
    p = 0.3
    mu = np.array([1 - p, p])
    assert convolution_power(z2, mu, 2).at("e1").real == pytest.approx(2 * p * (1 - p), abs=1e-15)


def test_exponential_at_zero_is_counit(kac_paljutkin):
    gamma = np.arange(kac_paljutkin.dim, dtype=float)
    np.testing.assert_allclose(convolution_exponential(kac_paljutkin, gamma, 0.0).coeffs, kac_paljutkin.counit)


def test_map_norm_estimate_examples(kac_paljutkin):
    z2 = resolve_fixture("function:Z2")
    assert map_norm_estimate(z2, np.zeros(2), samples=10) == 0.0
    assert map_norm_estimate(z2, z2.counit, samples=0) == pytest.approx(1.0)
    assert map_norm_estimate(kac_paljutkin, kac_paljutkin.faithful_rep) == pytest.approx(1.0, abs=1e-12)


def test_convolution_rejects_functional_of_another_algebra():
    z3_functions = resolve_fixture("function:Z3")
    z3_group = resolve_fixture("group:Z3")
    foreign = z3_group.counit_functional
    with pytest.raises(BialgebraStructureError):
        convolve(z3_functions, z3_functions.counit_functional, foreign)


def test_convolution_accepts_equal_rebuilt_algebra():
    first = resolve_fixture("function:S3")
    second = resolve_fixture("function:S3")
    mu = second.functional(np.full(6, 1 / 6))
    result = convolve(first, first.counit_functional, mu)
    np.testing.assert_allclose(result.coeffs, mu.coeffs, atol=1e-15)
