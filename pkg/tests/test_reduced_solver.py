import warnings

import numpy as np
import pytest

from hbubble.energy import box_widths, chi0, sigma_energy
from hbubble.errors import (DegenerateAxis, InsufficientData, LeftBox, MaxIterations,
                            OutOfRange)
from hbubble.harmonic import RotatedDatum, g_rho_boundary, poisson_extend
from hbubble.reduced_solver import (NegatedObjective, ParamBox, QuadraticObjective,
                                    ReducedObjective, ReducedState, asymptotics_check,
                                    boundary_sign_check, build_configuration, build_datum_G,
                                    hessian_at, init_state, newton_solve, ring_spheres,
                                    solve_single, sphere_data, t_lambda_box)

PI = np.pi
EPS, RHO = 1e-4, 0.95


@pytest.fixture(scope="module")
def single_report():
    return solve_single(EPS, RHO)


def random_unit(rng, n):
    v = rng.normal(size=(n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


class TestInitialState:
    def test_single_bubble_center(self):
        s = init_state(EPS, RHO)
        np.testing.assert_allclose(s.chis[0], [0.01, 0.95, 0, PI / 2, 0, 0, 0, 0, 0, 0])
        np.testing.assert_allclose(s.chis[0], chi0(RHO, EPS))

    def test_ring_copies(self):
        s = init_state(EPS, RHO, k=3)
        assert s.k == 3
        np.testing.assert_allclose(np.hypot(s.chis[:, 1], s.chis[:, 2]), RHO)

    def test_out_of_range(self):
        with pytest.raises(OutOfRange):
            init_state(EPS, 1.2)
        with pytest.raises(OutOfRange):
            init_state(-1.0, RHO)

    def test_coupling_warning(self):
        with pytest.warns(UserWarning):
            init_state(1e-2, 0.99)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            init_state(EPS, RHO)

    def test_state_shape(self):
        with pytest.raises(ValueError):
            ReducedState(np.zeros((1, 9)), EPS, RHO)


class TestBox:
    def test_widths(self):
        s = init_state(EPS, RHO)
        box = t_lambda_box(s, 10.0)
        d = 1 - RHO
        mu0 = np.sqrt(EPS)
        expect = 10 * np.array([d**4 * mu0, d**5, d**5, d**4, d**4, d**4,
                                d**2 * mu0, d**2 * mu0, d**5 / mu0**2, d**5 / mu0**2])
        np.testing.assert_allclose(box.widths, expect, rtol=1e-12)
        np.testing.assert_allclose(box_widths(RHO, EPS, 10.0), expect, rtol=1e-12)

    def test_contains_and_project(self):
        s = init_state(EPS, RHO)
        box = t_lambda_box(s)
        assert box.contains(s.flat)
        far = s.flat.copy()
        far[0] += 10 * box.widths[0]
        assert not box.contains(far)
        proj, hit = box.project(far)
        assert box.contains(proj) and hit[0] and not hit[1:].any()

    def test_round_xi_box(self):
        s = init_state(EPS, RHO, k=3)
        box = t_lambda_box(s)
        assert box.round_xi
        x = s.flat.copy()
        x[1] += 0.8 * box.widths[1]
        x[2] += 0.8 * box.widths[2]
        assert not box.contains(x)


class TestConfiguration:
    def test_south_pole_identity(self):
        c = build_configuration(np.array([[0.0, 0.0, -1.0]]))
        np.testing.assert_allclose(c.rotations[0], np.eye(3), atol=1e-15)

    def test_maps_south_to_target(self, rng):
        v = random_unit(rng, 100)
        c = build_configuration(v)
        south = np.array([0.0, 0.0, -1.0])
        for R, t in zip(c.rotations, v):
            np.testing.assert_allclose(R @ south, t, atol=1e-12)
            np.testing.assert_allclose(R @ R.T, np.eye(3), atol=1e-12)
            assert np.linalg.det(R) == pytest.approx(1.0)

    def test_antipodal_axis(self):
        c = build_configuration(np.array([[0.0, 0.0, 1.0]]))
        np.testing.assert_allclose(c.rotations[0], np.diag([1.0, -1.0, -1.0]), atol=1e-15)
        with pytest.raises(DegenerateAxis):
            build_configuration(np.array([[0.0, 0.0, 1.0]]), strict=True)

    def test_ring(self):
        v = ring_spheres(3)
        np.testing.assert_allclose(np.linalg.norm(v, axis=1), 1.0)
        np.testing.assert_allclose(v[:, 2], -np.cos(PI / 4))
        np.testing.assert_allclose(v.sum(axis=0)[:2], 0.0, atol=1e-15)


class TestDatum:
    def test_single_south_sphere(self):
        c = build_configuration(np.array([[0.0, 0.0, -1.0]]))
        t = np.linspace(0, 2 * PI, 41)
        np.testing.assert_allclose(build_datum_G(c, RHO, EPS).fn(t),
                                   g_rho_boundary(RHO, EPS).fn(t), atol=1e-13)

    def test_small_rho_mean_zero(self):
        c = build_configuration(np.array([[0.0, 0.0, -1.0]]))
        f = poisson_extend(build_datum_G(c, 1e-3, 0.0))
        np.testing.assert_allclose(f(0.0, 0.0)[:2], [0, 0], atol=1e-14)

    def test_extension_reproduces_datum(self, rng):
        c = build_configuration(ring_spheres(3))
        G = build_datum_G(c, RHO, EPS)
        f = poisson_extend(G, 4096)
        t = rng.uniform(0, 2 * PI, 50)
        assert np.abs(f(np.cos(t), np.sin(t)) - G.fn(t)).max() <= 1e-9


class TestSolver:
    def test_quadratic_converges_fast(self, rng):
        s = init_state(EPS, RHO)
        box = t_lambda_box(s)
        M = rng.normal(size=(10, 10))
        A = M @ M.T + 10 * np.eye(10)
        scale = np.diag(1 / box.widths)
        obj = QuadraticObjective(scale @ A @ scale, s.flat)
        start = s.with_flat(s.flat + 0.3 * box.widths * rng.uniform(-1, 1, 10))
        rep = newton_solve(obj, start, box, tol=1e-10)
        assert rep.converged and rep.iterations <= 3
        np.testing.assert_allclose(rep.state.flat, s.flat, atol=1e-12)

    def test_single_bubble(self, single_report):
        rep = single_report
        assert rep.converged and rep.grad_norm <= 1e-10
        box = t_lambda_box(init_state(EPS, RHO))
        assert box.contains(rep.state.flat)

    def test_single_bubble_is_local_minimum(self, single_report):
        obj = ReducedObjective.single(RHO, EPS)
        H = hessian_at(obj, single_report.state)
        assert np.linalg.eigvalsh(0.5 * (H + H.T)).min() >= -1e-8

    def test_far_start_fails_loudly(self):
        s = init_state(EPS, RHO)
        box = t_lambda_box(s)
        obj = ReducedObjective.single(RHO, EPS)
        # shift the target of the objective far outside the box
        shifted = QuadraticObjective(np.eye(10), s.flat + 100 * box.widths)
        with pytest.raises((LeftBox, MaxIterations)):
            newton_solve(shifted, s, box, max_iter=50)
        start = s.flat.copy()
        start[0] = 2 * start[0]
        with pytest.raises(LeftBox):
            newton_solve(obj, s.with_flat(start), box)

    def test_max_iterations(self):
        s = init_state(EPS, RHO)
        obj = ReducedObjective.single(RHO, EPS)
        x = s.flat.copy()
        x[6] += 0.5 * t_lambda_box(s).widths[6]
        with pytest.raises(MaxIterations):
            newton_solve(obj, s.with_flat(x), max_iter=0)

    def test_tolerance_floor(self):
        s = init_state(EPS, RHO)
        with pytest.raises(ValueError):
            newton_solve(ReducedObjective.single(RHO, EPS), s, tol=1e-16)


class TestBoundarySign:
    def test_single_bubble_positive(self):
        s = init_state(EPS, RHO)
        rep = boundary_sign_check(ReducedObjective.single(RHO, EPS), t_lambda_box(s))
        assert rep["boundary_1"]["min"] > 0 and rep["positive"]

    def test_quadratic_positive(self, rng):
        # positive definite with no coupling between the two boundary groups
        s = init_state(EPS, RHO)
        box = t_lambda_box(s)
        B = np.zeros((10, 10))
        for block in (slice(0, 6), slice(6, 10)):
            n = block.stop - block.start
            M = rng.normal(size=(n, n))
            B[block, block] = M @ M.T + np.eye(n)
        S = np.diag(1 / box.widths)
        assert boundary_sign_check(QuadraticObjective(S @ B @ S, s.flat), box)["positive"]

    def test_negation_flips_signs(self, rng):
        s = init_state(EPS, RHO)
        box = t_lambda_box(s)
        obj = QuadraticObjective(np.diag(rng.uniform(1, 2, 10)), s.flat)
        a = boundary_sign_check(obj, box, seed=3)
        b = boundary_sign_check(NegatedObjective(obj), box, seed=3)
        for part in ("boundary_1", "boundary_2"):
            assert b[part]["max"] == pytest.approx(-a[part]["min"])
            assert b[part]["negative"] == b[part]["n"]
        assert not b["positive"]

    def test_sample_floor(self):
        s = init_state(EPS, RHO)
        with pytest.raises(ValueError):
            boundary_sign_check(ReducedObjective.single(RHO, EPS), t_lambda_box(s), n_samples=10)


class TestEquivariance:
    def test_rotating_everything(self, rng):
        config = build_configuration(ring_spheres(3))
        data, frames = sphere_data(config, RHO, EPS)
        states = init_state(EPS, RHO, k=3).bubbles()
        base = sigma_energy(states, data, EPS, frames)
        from hbubble.bubbles import euler_matrix
        Q = euler_matrix(*rng.uniform(-PI, PI, 3))
        moved = sigma_energy(states, [RotatedDatum(d, Q) for d in data], EPS,
                             [Q @ f for f in frames])
        assert moved == pytest.approx(base, rel=1e-10, abs=1e-14)


class TestAsymptotics:
    def test_fabricated_power(self):
        eps = 1e-4
        rhos = [0.8, 0.85, 0.9, 0.95]
        recs = [(eps, r, np.sqrt(eps) * (1 + (1 - r * r) ** 4), (r + (1 - r * r) ** 6, 0.0))
                for r in rhos]
        rep = asymptotics_check(recs)
        assert rep["mu_exponent"] == pytest.approx(4, abs=0.2)
        assert rep["xi_exponent"] == pytest.approx(6, abs=0.2)
        assert rep["mu_dev_decreasing"]

    def test_fabricated_constant(self):
        eps = 1e-4
        recs = [(eps, r, np.sqrt(eps) * 1.01, (r, 0.0)) for r in (0.8, 0.9, 0.95)]
        assert asymptotics_check(recs)["mu_exponent"] == pytest.approx(0, abs=1e-8)

    def test_too_few_rows(self):
        with pytest.raises(InsufficientData):
            asymptotics_check([(1e-4, 0.9, 0.01, (0.9, 0)), (1e-4, 0.95, 0.01, (0.95, 0))])

    def test_solved_rows_monotone(self):
        recs = []
        for r in (0.9, 0.93, 0.95):
            c = solve_single(EPS, r).state.chis[0]
            recs.append((EPS, r, c[0], c[1:3]))
        rep = asymptotics_check(recs)
        assert rep["mu_dev_decreasing"]
        assert max(row["mu_dev"] for row in rep["rows"]) <= 1e-8
