import numpy as np
import pytest
from hypothesis import given, strategies as st

from hbubble.bubbles import BubbleParams, RotationSO3
from hbubble.errors import NearBoundary, NotInTable
from hbubble.harmonic import (BoundaryDatum, DatumField, ProjectedBubble, RotatedDatum,
                              closed_extension_g_rho, closed_extension_h, family_field,
                              g_datum, g_rho_boundary, poisson_extend, project_bubble,
                              robin_closed, robin_entries, robin_numeric)


def disk_points(rng, n=100, radius=0.9):
    r = radius * np.sqrt(rng.uniform(0, 1, n))
    t = rng.uniform(0, 2 * np.pi, n)
    return r * np.cos(t), r * np.sin(t)


def random_xi(rng, radius=0.8):
    r = radius * np.sqrt(rng.uniform())
    t = rng.uniform(0, 2 * np.pi)
    return (r * np.cos(t), r * np.sin(t))


class TestExtension:
    def test_constant_datum(self, rng):
        f = poisson_extend(lambda t: np.tile([1.0, 2.0, 3.0], (t.size, 1)), 64)
        x, y = disk_points(rng)
        np.testing.assert_allclose(f(x, y), np.tile([1, 2, 3], (x.size, 1)), atol=1e-14)

    def test_single_mode(self, rng):
        f = poisson_extend(lambda t: np.stack([np.cos(2 * t), np.sin(2 * t), 0 * t], -1), 64)
        x, y = disk_points(rng)
        z2 = (x + 1j * y) ** 2
        np.testing.assert_allclose(f(x, y), np.stack([z2.real, z2.imag, 0 * x], -1), atol=1e-14)

    def test_from_samples(self):
        n = 32
        t = 2 * np.pi * np.arange(n) / n
        f = poisson_extend(BoundaryDatum(samples=np.cos(3 * t)), n)
        assert f(0.5, 0.0)[0] == pytest.approx(0.125, abs=1e-14)

    def test_boundary_trace(self, rng):
        xi = (0.4, -0.3)
        f = family_field("h1", xi)
        t = rng.uniform(0, 2 * np.pi, 50)
        datum = g_datum(xi, 0.0).fn(t) / 2
        np.testing.assert_allclose(f(np.cos(t), np.sin(t))[:, :2], datum[:, :2], atol=1e-10)

    def test_derivatives_match_differences(self, rng):
        f = family_field("h2_1", (0.2, 0.5))
        x, y, h = 0.1, -0.3, 1e-5
        fd = (f(x + h, y) - f(x - h, y)) / (2 * h)
        np.testing.assert_allclose(f(x, y, dx=1), fd, atol=1e-7)

    def test_maximum_principle(self, rng):
        t = np.linspace(0, 2 * np.pi, 2000, endpoint=False)
        x, y = disk_points(rng, 2000, 0.999)
        for tag in ("h1", "hm1_1", "h2_2"):
            f = family_field(tag, random_xi(rng))
            edge, inner = f(np.cos(t), np.sin(t)), f(x, y)
            for c in range(edge.shape[-1]):
                assert inner[:, c].max() <= edge[:, c].max() + 1e-10
                assert inner[:, c].min() >= edge[:, c].min() - 1e-10


class TestClosedExtensions:
    def test_h_vanishes_at_origin(self):
        np.testing.assert_allclose(closed_extension_h(0.0, 0.0, (0.3, 0.6)), [0, 0, 0], atol=1e-15)

    def test_h_centered_value(self):
        np.testing.assert_allclose(closed_extension_h(0.3, 0.4, (0.0, 0.0)), [-0.07, 0.24, 0],
                                   atol=1e-15)

    def test_h_matches_spectral(self, rng):
        x, y = disk_points(rng)
        for _ in range(5):
            xi = random_xi(rng)
            ext = family_field("h1", xi)(x, y)
            np.testing.assert_allclose(closed_extension_h(x, y, xi)[:, :2], ext[:, :2], atol=1e-10)

    def test_g_rho_origin(self):
        np.testing.assert_allclose(closed_extension_g_rho(0.0, 0.0, 0.7), [0, 0, 0], atol=1e-15)

    @pytest.mark.parametrize("rho", [0.5, 0.9, 0.95])
    def test_g_rho_matches_spectral(self, rho, rng):
        x, y = disk_points(rng)
        ext = poisson_extend(g_rho_boundary(rho).fn, 4096)(x, y)
        np.testing.assert_allclose(closed_extension_g_rho(x, y, rho), ext, atol=1e-10)

    def test_g_rho_small_rho_limit(self):
        t = np.linspace(0, 2 * np.pi, 17)
        expected = 2 * np.stack([np.cos(2 * t), np.sin(2 * t), 0 * t], -1)
        np.testing.assert_allclose(g_rho_boundary(0.0).fn(t), expected, atol=1e-15)


class TestRobin:
    def test_tabulated_examples(self):
        assert robin_closed("hm1_1", 1, (0, 0), (0.5, 0)) == pytest.approx(-4 / 3, rel=1e-15)
        assert robin_closed("h1", 2, (1, 1), (0, 0)) == pytest.approx(2.0, rel=1e-15)
        assert robin_closed("h2_1", 1, (4, 0), (0, 0)) == pytest.approx(-24.0, rel=1e-15)

    def test_numeric_examples(self):
        assert robin_numeric("hm1_1", 1, (1, 0), (0.5, 0)) == pytest.approx(-2 / 0.75**2, rel=1e-10)
        assert robin_numeric("h1", 1, (0, 0), (0.4, 0.3)) == pytest.approx(0.07 / 0.75**2, rel=1e-10)

    def test_odd_entries_vanish_at_origin(self):
        for tag, comp, beta in robin_entries():
            if sum(beta) % 2 == 1 and tag == "h1":
                assert abs(robin_numeric(tag, comp, beta, (0.0, 0.0))) <= 1e-12

    def test_laplacian_trace(self, rng):
        for _ in range(10):
            xi = random_xi(rng)
            lap = robin_closed("h1", 1, (2, 0), xi) + robin_closed("h1", 1, (0, 2), xi)
            assert abs(lap) <= 1e-6

    def test_table_against_spectral(self, rng):
        for _ in range(3):
            xi = random_xi(rng)
            for tag, comp, beta in robin_entries():
                closed = robin_closed(tag, comp, beta, xi)
                numeric = robin_numeric(tag, comp, beta, xi)
                tol = 1e-6 if sum(beta) <= 2 else 1e-3
                assert abs(numeric - closed) <= tol * max(abs(closed), 1.0), (tag, comp, beta, xi)

    def test_not_in_table(self):
        with pytest.raises(NotInTable):
            robin_closed("h1", 3, (0, 0), (0.1, 0.1))

    def test_near_boundary_refused(self):
        with pytest.raises(NearBoundary):
            robin_numeric("h1", 1, (0, 0), (0.995, 0.0))


class TestFamilyIdentities:
    @given(st.floats(-0.6, 0.6), st.floats(-0.6, 0.6))
    def test_cross_family(self, a, b):
        x, y = np.array([0.1, -0.5, 0.7]), np.array([0.2, 0.4, -0.1])
        f1 = family_field("hm1_1", (a, b))(x, y)
        f2 = family_field("hm1_2", (a, b))(x, y)
        assert np.abs(f1[:, 0] - f2[:, 1]).max() <= 1e-10
        assert np.abs(f1[:, 1] + f2[:, 0]).max() <= 1e-10

    def test_center_derivative(self, rng):
        x, y = disk_points(rng, 20)
        xi, h = (0.3, -0.2), 1e-4
        up = family_field("hm1_1", (xi[0], xi[1] + h))(x, y)
        down = family_field("hm1_1", (xi[0], xi[1] - h))(x, y)
        d = (up - down) / (2 * h)
        h1 = family_field("h1", xi)(x, y)
        assert np.abs(d[:, 1] - 2 * h1[:, 0]).max() <= 1e-5
        assert np.abs(-d[:, 0] - 2 * h1[:, 1]).max() <= 1e-5


class TestDatum:
    def test_datum_third_component(self):
        t = np.linspace(0, 2 * np.pi, 9)
        full = g_datum((0.3, 0.1), 0.01).fn(t)
        plain = g_datum((0.3, 0.1), 0.0).fn(t)
        np.testing.assert_allclose(full[:, :2], plain[:, :2])
        assert np.all(plain[:, 2] == 0)
        assert np.all(full[:, 2] < 0)

    def test_datum_field_matches_extension(self, rng):
        omega, eps = (0.4, 0.2), 0.01
        x, y = disk_points(rng, 30)
        ref = poisson_extend(g_datum(omega, eps))(x, y)
        np.testing.assert_allclose(DatumField(omega, eps)(x, y), ref, atol=1e-10)

    def test_datum_on_rho_axis_is_g_rho(self):
        t = np.linspace(0, 2 * np.pi, 33)
        f = DatumField((0.8, 0.0), 0.0, third=False)
        np.testing.assert_allclose(f(np.cos(t), np.sin(t)), g_rho_boundary(0.8).fn(t), atol=1e-13)

    def test_rotated_datum(self):
        R = RotationSO3(1.0, 0.3, -0.2).matrix
        f = DatumField((0.2, 0.1), 0.01)
        np.testing.assert_allclose(RotatedDatum(f, R)(0.3, 0.2), R @ f(0.3, 0.2), atol=1e-14)

    def test_derivative_matches_differences(self):
        f, h = DatumField((0.5, -0.2), 0.01), 1e-5
        fd = (f(0.1, 0.3 + h) - f(0.1, 0.3 - h)) / (2 * h)
        np.testing.assert_allclose(f.derivative(0.1, 0.3, 0, 1), fd, atol=1e-7)


class TestProjection:
    def test_vanishes_on_boundary(self):
        pb = ProjectedBubble(BubbleParams(0.05, (0.3, 0.2), rot=RotationSO3(1.0, 0.5, 0.2)))
        t = np.linspace(0, 2 * np.pi, 64)
        assert np.abs(pb(np.cos(t), np.sin(t))).max() <= 1e-12

    def test_leading_value_at_origin_center(self):
        mu = 0.05
        phi, _ = project_bubble(BubbleParams(mu, (0.0, 0.0)))
        assert abs(phi(0.5, 0.2)[2] - 1) <= 3 * mu**4

    def test_third_component_expansion(self):
        # phi_3 = 1 - 2 mu^4 h3 + O(mu^8)
        x, y = np.array([0.1, -0.4]), np.array([0.6, 0.3])
        xi = (0.3, 0.0)
        h3 = family_field("h1", xi)(x, y)[:, 2]
        rem = []
        for mu in (0.05, 0.1):
            phi, _ = project_bubble(BubbleParams(mu, xi))
            rem.append(np.abs(phi(x, y)[:, 2] - (1 - 2 * mu**4 * h3)).max())
        assert 150 < rem[1] / rem[0] < 400

    def test_near_boundary(self):
        with pytest.raises(NearBoundary):
            ProjectedBubble(BubbleParams(0.05, (0.995, 0.0)))
