import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from jetmech.errors import DomainError, NonRegularInChart, SingularTransition
from jetmech.jets import (ChartPartition, SectionJet, SubmanifoldJet, affine_transition,
                          identity_transition, is_regular, lorentz_boost,
                          polynomial_transition, section_to_submanifold, shear_transition,
                          submanifold_to_sections, swap_transition, three_velocity,
                          transform_jet, transform_section_jet)
from jetmech.polynomial import PolynomialScalarField


def curve_jet(slopes, m=None, point=None):
    slopes = np.atleast_1d(np.asarray(slopes, dtype=float))
    m = m or slopes.size + 1
    point = np.zeros(m) if point is None else point
    return SubmanifoldJet(ChartPartition(m, (0,)), point, slopes)


def random_transition(rng, m):
    """Well-conditioned transitions: near-identity affine maps, boosts and shears."""
    kind = rng.integers(0, 3)
    if kind == 0:
        M = np.eye(m) + 0.2 * rng.standard_normal((m, m))
        return affine_transition(M, rng.standard_normal(m))
    if kind == 1:
        return lorentz_boost(m, rapidity=rng.uniform(-1, 1), axis=int(rng.integers(1, m)))
    a, b = rng.choice(m, 2, replace=False)
    return shear_transition(m, int(a), int(b), rng.uniform(-0.3, 0.3))


def test_partition_validation():
    with pytest.raises(ValueError):
        ChartPartition(3, (0, 1, 2))
    with pytest.raises(ValueError):
        ChartPartition(3, (0,), (0, 1))
    p = ChartPartition(4, (2,))
    assert p.fiber_indices == (0, 1, 3)


def test_jet_shape_validation():
    with pytest.raises(ValueError):
        SubmanifoldJet(ChartPartition(3, (0,)), np.zeros(3), np.zeros((1, 1)))


def test_identity_transition_keeps_jet():
    jet = SubmanifoldJet(ChartPartition(5, (0, 3)), np.arange(5.0), np.arange(6.0).reshape(3, 2))
    out = transform_jet(jet, identity_transition(5))
    np.testing.assert_array_equal(out.slopes, jet.slopes)
    np.testing.assert_array_equal(out.point, jet.point)


def test_swap_inverts_slope():
    out = transform_jet(curve_jet([2.0]), swap_transition(2, 0, 1))
    assert out.slopes[0, 0] == 0.5


def test_swap_of_flat_slope_is_singular():
    with pytest.raises(SingularTransition):
        transform_jet(curve_jet([0.0]), swap_transition(2, 0, 1))


def test_boost_reproduces_velocity_subtraction():
    out = transform_jet(curve_jet([0.5, 0.0, 0.0]), lorentz_boost(4, ch=1.25, sh=0.75))
    assert abs(out.slopes[0, 0] - (0.5 - 0.6) / (1 - 0.3)) <= 1e-12
    assert abs(out.slopes[0, 0] + 1 / 7) <= 1e-12
    np.testing.assert_array_equal(out.slopes[1:, 0], 0.0)


@settings(max_examples=100, deadline=None)
@given(st.floats(-0.95, 0.95), st.floats(-0.3, 0.3), st.floats(-0.3, 0.3), st.floats(-2, 2))
def test_boost_matches_closed_form_three_velocity_law(u1, u2, u3, alpha):
    ch, sh = np.cosh(alpha), np.sinh(alpha)
    out = transform_jet(curve_jet([u1, u2, u3]), lorentz_boost(4, ch=ch, sh=sh))
    denom = -u1 * sh + ch
    expected = [(u1 * ch - sh) / denom, u2 / denom, u3 / denom]
    np.testing.assert_allclose(out.slopes[:, 0], expected, rtol=0, atol=1e-12)


def test_round_trip_and_cocycle(rng):
    for _ in range(200):
        m = int(rng.integers(2, 6))
        n = int(rng.integers(1, m))
        part = ChartPartition(m, tuple(sorted(rng.choice(m, n, replace=False))))
        jet = SubmanifoldJet(part, rng.standard_normal(m),
                             0.3 * rng.standard_normal((m - n, n)))
        t1, t2 = random_transition(rng, m), random_transition(rng, m)
        back = transform_jet(transform_jet(jet, t1), t1.inverse())
        np.testing.assert_allclose(back.slopes, jet.slopes, atol=1e-12)
        np.testing.assert_allclose(back.point, jet.point, atol=1e-12)
        two_step = transform_jet(transform_jet(jet, t1), t2)
        direct = transform_jet(jet, t1.then(t2))
        np.testing.assert_allclose(two_step.slopes, direct.slopes, atol=1e-10)


def test_polynomial_transition_domain_error():
    comps = [PolynomialScalarField.coordinate(2, 0), PolynomialScalarField.coordinate(2, 1)]
    t = polynomial_transition(comps, domain=([-1, -1], [1, 1]))
    with pytest.raises(DomainError):
        transform_jet(curve_jet([1.0], point=np.array([2.0, 0.0])), t)


def test_polynomial_transition_jacobian_is_exact():
    x = PolynomialScalarField.coordinate(2, 0)
    y = PolynomialScalarField.coordinate(2, 1)
    t = polynomial_transition([x, y + x * x])    # y' = y + x^2
    out = transform_jet(curve_jet([1.0], point=np.array([3.0, 0.0])), t)
    # along y = x - 3 near x = 3, y' = x - 3 + x^2 has slope 1 + 2x = 7
    assert out.slopes[0, 0] == 7.0


def test_is_regular_cases():
    e = np.eye(4)
    assert is_regular(SectionJet([0, 0], np.zeros(4), e[:, :2]))
    assert not is_regular(SectionJet([0, 0], np.zeros(4), np.zeros((4, 2))))
    nearly = np.column_stack([e[:, 0], e[:, 0] + 1e-14 * e[:, 1]])
    # Gram-matrix oracle: the smaller eigenvalue is lost entirely in rounding
    gram = nearly.T @ nearly
    small = 0.5 * (np.trace(gram) - np.sqrt(np.trace(gram) ** 2 - 4 * np.linalg.det(gram)))
    assert np.sqrt(max(small, 0.0)) <= 1e-9 * np.sqrt(np.trace(gram))
    assert not is_regular(SectionJet([0, 0], np.zeros(4), nearly), tol=1e-9)


def test_is_regular_rejects_bad_tol():
    with pytest.raises(ValueError):
        is_regular(SectionJet([0], np.zeros(2), [1.0, 0.0]), tol=0)


def test_section_to_submanifold_cases():
    p = ChartPartition(2, (0,))
    out = section_to_submanifold(SectionJet(0.0, np.zeros(2), [3.0, 6.0]), p)
    assert out.slopes[0, 0] == 2.0
    with pytest.raises(NonRegularInChart):
        section_to_submanifold(SectionJet(0.0, np.zeros(2), [0.0, 1.0]), p)
    np.testing.assert_allclose(three_velocity([1.25, 0.75, 0, 0]), [0.6, 0, 0], atol=1e-15)


def test_submanifold_to_sections_cases():
    jet = curve_jet([2.0])
    np.testing.assert_array_equal(submanifold_to_sections(jet, [[3.0]]).velocity[:, 0], [3, 6])
    zero = submanifold_to_sections(jet, [[0.0]])
    assert not is_regular(zero)
    rep = submanifold_to_sections(jet, [[5.0]])
    assert section_to_submanifold(rep, jet.partition).slopes[0, 0] == 2.0


def test_representatives_related_by_invertible_matrix_give_same_jet(rng):
    for _ in range(50):
        part = ChartPartition(5, (1, 3))
        jet = SubmanifoldJet(part, rng.standard_normal(5), rng.standard_normal((3, 2)))
        X = rng.standard_normal((2, 2)) + 2 * np.eye(2)
        M = rng.standard_normal((2, 2)) + 2 * np.eye(2)
        a = section_to_submanifold(submanifold_to_sections(jet, X), part)
        b = section_to_submanifold(submanifold_to_sections(jet, X @ M), part)
        np.testing.assert_allclose(a.slopes, jet.slopes, atol=1e-10)
        np.testing.assert_allclose(b.slopes, jet.slopes, atol=1e-10)


def test_slope_relation_survives_chart_change(rng):
    for _ in range(100):
        m, n = 4, 2
        part = ChartPartition(m, (0, 1))
        jet = SubmanifoldJet(part, rng.standard_normal(m), 0.3 * rng.standard_normal((2, 2)))
        X = np.eye(2) + 0.2 * rng.standard_normal((2, 2))
        sec = submanifold_to_sections(jet, X)
        t = random_transition(rng, m)
        new_sec = transform_section_jet(sec, t)
        new_jet = transform_jet(jet, t)
        Xp = new_sec.velocity[list(part.base_indices)]
        Yp = new_sec.velocity[list(part.fiber_indices)]
        np.testing.assert_allclose(new_jet.slopes @ Xp, Yp, atol=1e-12)
