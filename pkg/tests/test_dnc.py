"""
法锥形变坐标卡与函子性的数值检查
"""
import numpy as np
import pytest

from core.dnc import (
    DncCheck,
    DncPoint,
    SmoothPairMap,
    check_dnc_continuity,
    check_dnc_functoriality,
    check_psi_roundtrip,
    compose,
    cubic_fiber_map,
    dnc_map,
    finite_difference_jacobian,
    identity_pair_map,
    linear_pair_map,
    polynomial_pair_map,
    psi,
    psi_inv,
    run_dnc_suite,
)
from core.exceptions import PairNotPreserved

A = [[2.0, 1.0, 0.5], [0.0, 3.0, -1.0], [0.0, 0.5, 1.5]]


def test_psi_example():
    point = DncPoint.of([1.0, 2.0], [3.0, 4.0], 0.5)
    ambient = psi(point)
    np.testing.assert_allclose(ambient.vector(), [1.0, 2.0, 1.5, 2.0, 0.5])
    assert psi_inv(ambient).distance(point) == 0.0
    fiber = DncPoint.of([1.0], [3.0], 0.0)
    assert psi(fiber) is fiber
    assert psi_inv(fiber) is fiber


def test_psi_roundtrip():
    assert check_psi_roundtrip(2, 2, samples=2000, seed=1) <= 1e-12


def test_cubic_map_values():
    F = cubic_fiber_map()
    image = dnc_map(F, DncPoint.of([0.3], [2.0], 0.5))
    np.testing.assert_allclose(image.vector(), [0.3, 2.0 + 0.25 * 8.0, 0.5], atol=1e-12)
    limit = dnc_map(F, DncPoint.of([0.3], [2.0], 0.0))
    np.testing.assert_allclose(limit.vector(), [0.3, 2.0, 0.0], atol=1e-8)


def test_linear_map_at_zero_uses_normal_block():
    F = linear_pair_map(A, p=1, p_out=1)
    xi = np.array([0.2, -0.7])
    image = dnc_map(F, DncPoint.of([0.4], xi, 0.0))
    np.testing.assert_allclose(image.xi, np.asarray(A)[1:, 1:] @ xi, atol=1e-15)
    np.testing.assert_allclose(image.x, [0.8], atol=1e-15)


def test_dimension_checks():
    F = cubic_fiber_map()
    with pytest.raises(ValueError):
        dnc_map(F, DncPoint.of([0.0, 1.0], [1.0], 0.5))
    with pytest.raises(ValueError):
        compose(F, identity_pair_map(2, 1))
    bad_shape = SmoothPairMap(lambda m: m, p=1, q=1, p_out=1, q_out=1, check_samples=0)
    bad_shape.f = lambda m: np.zeros(3)
    with pytest.raises(ValueError):
        bad_shape(np.zeros(2))


def test_pair_preservation_is_enforced():
    with pytest.raises(PairNotPreserved):
        linear_pair_map([[1.0, 0.0], [1.0, 1.0]], p=1, p_out=1)
    with pytest.raises(PairNotPreserved):
        SmoothPairMap(lambda m: np.array([m[0], m[1] + 1.0]), p=1, q=1, p_out=1, q_out=1)


def test_compose_keeps_analytic_jacobian():
    F = linear_pair_map(A, p=1, p_out=1, name="A")
    assert compose(F, identity_pair_map(1, 2)).analytic
    assert not compose(cubic_fiber_map(), polynomial_pair_map()).analytic


def test_finite_difference_matches_analytic():
    G = polynomial_pair_map()
    m = np.array([0.5, -0.25])
    expected = np.array([[3 * 0.25 + 1, 2 * -0.25], [-0.25, 1.5]])
    np.testing.assert_allclose(finite_difference_jacobian(G, m), expected, atol=1e-8)


def test_functoriality_linear():
    F = linear_pair_map(A, p=1, p_out=1, name="A")
    G = identity_pair_map(1, 2)
    check = check_dnc_functoriality(F, G, samples=300, seed=2)
    assert check.tolerance == 1e-12
    assert check.passed


def test_functoriality_polynomial():
    check = check_dnc_functoriality(cubic_fiber_map(), polynomial_pair_map(), samples=300, seed=2)
    assert check.tolerance == 1e-8
    assert check.passed, check.residual


def test_continuity():
    assert check_dnc_continuity(cubic_fiber_map(), samples=50).passed
    assert check_dnc_continuity(polynomial_pair_map(), samples=50).passed
    with pytest.raises(ValueError):
        check_dnc_continuity(cubic_fiber_map(), ts=[1e-3])


def test_check_threshold():
    assert DncCheck("x", 1e-9, 1e-8).passed
    assert not DncCheck("x", 1e-7, 1e-8).passed


def test_suite_report():
    report = run_dnc_suite(samples=200, seed=3)
    assert report.passed
    assert set(report.residuals) == {
        "roundtrip",
        "functoriality[B∘A]",
        "functoriality[G∘F]",
        "continuity[F]",
        "continuity[G]",
    }
    assert report.seed == 3 and report.samples == 200
