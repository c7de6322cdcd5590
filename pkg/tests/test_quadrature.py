import numpy as np
import pytest

from hbubble.errors import InvalidAdaptation
from hbubble.quadrature import circle_rule, disk_rule, identity_suite, plane_rule

PI = np.pi

# closed values of the plane integrals, keyed by integrand
EXPECTED = {
    "(x2-y2)(x4-y4)/(1+r4)^4": PI / 24,
    "(x4-y4)/(1+r4)^3": 0.0,
    "x2(x4-y4)/(1+r4)^3": PI / 16,
    "y2(x4-y4)/(1+r4)^3": -PI / 16,
    "x2y2r2/(1+r4)^4": PI / 96,
    "x2y2r2/(1+r4)^3": PI / 32,
    "(1-r4)r2/(1+r4)^4": PI / 12,
    "(1-r4)r2/(1+r4)^3": 0.0,
    "(1-r4)r5/(1+r4)^3": -9 * PI**2 / (16 * np.sqrt(2)),
    "x2(1-r4)r2/(1+r4)^3": -PI**2 / 16,
    "y2(1-r4)r2/(1+r4)^3": -PI**2 / 16,
    "(x4-y4)r3/(1+r4)^3": 0.0,
    "xyr5/(1+r4)^3": 0.0,
}


@pytest.fixture(scope="module")
def suite():
    return identity_suite()


class TestRules:
    def test_circle_weights(self):
        r = circle_rule(64)
        assert r.w.sum() == pytest.approx(2 * PI, rel=1e-14)
        assert np.all(r.w > 0)

    def test_disk_area(self):
        r = disk_rule()
        assert np.all(r.w > 0)
        assert r.integrate(np.ones(r.size)) == pytest.approx(PI, rel=1e-13)

    def test_disk_second_moment(self):
        r = disk_rule()
        assert r.integrate(r.x**2 + r.y**2) == pytest.approx(PI / 2, rel=1e-13)

    def test_adapted_area(self):
        r = disk_rule(adapt=((0.3, 0.1), 0.05))
        assert np.all(r.w > 0)
        assert r.w.sum() == pytest.approx(PI, rel=1e-12)
        assert np.all(r.x**2 + r.y**2 <= 1 + 1e-12)

    @pytest.mark.parametrize("center", [(0.0, 0.0), (0.5, -0.2), (-0.7, 0.6)])
    def test_adapted_agrees_on_smooth(self, center):
        f = lambda x, y: np.exp(x) * np.cos(2 * y) + x**4 * y**2
        plain, adapted = disk_rule(), disk_rule(adapt=(center, 0.02))
        a = plain.integrate(f(plain.x, plain.y))
        b = adapted.integrate(f(adapted.x, adapted.y))
        assert abs(a - b) <= 1e-6

    def test_adapted_resolves_core(self):
        # bump of scale mu at (0.3, 0); its plane integral is pi, the disk misses O(mu^2)
        mu = 1e-2
        r = disk_rule(adapt=((0.3, 0.0), mu))
        v = mu**2 / ((r.x - 0.3) ** 2 + r.y**2 + mu**2) ** 2
        assert r.integrate(v) == pytest.approx(PI, rel=2e-3)

    def test_bad_adaptation(self):
        with pytest.raises(InvalidAdaptation):
            disk_rule(adapt=((1.2, 0.0), 0.01))

    def test_plane_rule_gaussian(self):
        r = plane_rule()
        assert r.integrate(np.exp(-(r.x**2 + r.y**2))) == pytest.approx(PI, rel=1e-12)


class TestIdentities:
    def test_every_integral_present(self, suite):
        assert {r.id for r in suite} == set(EXPECTED)

    def test_exact_values(self, suite):
        for r in suite:
            assert r.exact == pytest.approx(EXPECTED[r.id], rel=1e-15, abs=1e-300)

    def test_accuracy(self, suite):
        for r in suite:
            assert r.ok(1e-7, 1e-10), r

    def test_resolution_doubling(self, suite):
        doubled = {r.id: r.computed for r in identity_suite(400, 512)}
        for r in suite:
            assert abs(doubled[r.id] - r.computed) <= r.err_estimate + 1e-13, r.id
