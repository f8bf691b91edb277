import numpy as np
import pytest

from szego import flow, hankel, hardy, rational
from szego.flow import FlowConfig
from szego.hardy import FourierSymbol


def random_symbol(rng, cutoff, scale=1.0):
    c = rng.standard_normal(cutoff) + 1j * rng.standard_normal(cutoff)
    return FourierSymbol(scale * c)


def normalized_symbol(rng, cutoff):
    u = random_symbol(rng, cutoff)
    return FourierSymbol(u.coeffs / np.sqrt(hardy.half_norm_sq(u)))


class TestRhs:
    def test_constant(self):
        out = flow.rhs_szego(FourierSymbol([1.0, 0.0]))
        assert np.allclose(out.coeffs, [-1j, 0])

    def test_general_constant(self):
        c = 0.7 - 0.2j
        out = flow.rhs_szego(FourierSymbol([c]))
        assert np.allclose(out.coeffs, [-1j * abs(c) ** 2 * c])

    def test_one_plus_z(self):
        out = flow.rhs_szego(FourierSymbol([1.0, 1.0, 0.0]))
        assert np.allclose(out.coeffs, [-3j, -3j, -1j])


class TestHierarchyField:
    def test_first_field_is_half_rotation(self):
        rng = np.random.default_rng(0)
        u = random_symbol(rng, 10)
        out = flow.hierarchy_field(u, 1)
        assert np.allclose(out.coeffs, -0.5j * u.coeffs, rtol=0, atol=1e-15)

    def test_second_field_on_constant(self):
        out = flow.hierarchy_field(FourierSymbol([1.0]), 2)
        assert np.allclose(out.coeffs, [-1j])

    def test_zero_symbol(self):
        out = flow.hierarchy_field(FourierSymbol([0.0, 0.0]), 3)
        assert not np.any(out.coeffs)


class TestPoissonBracket:
    def test_hierarchy_brackets_vanish(self):
        rng = np.random.default_rng(1)
        worst = 0.0
        for _ in range(25):
            u = normalized_symbol(rng, int(rng.integers(3, 10)))
            for n in range(1, 4):
                for p in range(n, 4):
                    worst = max(worst, abs(flow.poisson_bracket(u, n, p)))
        assert worst < 1e-11

    def test_mass_momentum_bracket(self):
        rng = np.random.default_rng(2)
        u = random_symbol(rng, 12)
        x_q = FourierSymbol(-0.5j * u.coeffs)
        x_m = FourierSymbol(-0.5j * np.arange(12) * u.coeffs)
        assert abs(flow.field_bracket(x_q, x_m)) < 1e-12

    def test_zero_symbol(self):
        assert flow.poisson_bracket(FourierSymbol([0.0, 0.0]), 1, 2) == 0.0


class TestIntegrate:
    def test_constant_phase_rotation(self):
        c = 0.8 + 0.1j
        cfg = FlowConfig(dt=1e-3, t_end=10.0, K=4, sample_every=1000, spectrum=False)
        series = flow.integrate(FourierSymbol([c]), cfg)
        exact = c * np.exp(-1j * abs(c) ** 2 * series.times[-1])
        assert abs(series.states[-1][0] - exact) < 1e-10

    def test_m1_orbit_vs_closed_form(self):
        a, p, k = 1.0, 0.5, 64
        u0 = rational.rational_to_fourier(rational.RationalState([a], [p]), k)
        cfg = FlowConfig(dt=1e-3, t_end=10.0, sample_every=2000, spectrum=False)
        series = flow.integrate(u0, cfg)
        at, pt, _, _ = rational.rank1_orbit(a, p, series.times[-1])
        exact = rational.rational_to_fourier(
            rational.RationalState([complex(at)], [complex(pt)]), k
        )
        err = np.linalg.norm(series.states[-1] - exact.coeffs)
        assert err < 1e-8

    def test_scaling_symmetry(self):
        rng = np.random.default_rng(3)
        u0 = random_symbol(rng, 12, scale=0.5)
        delta = 0.5
        cfg_fast = FlowConfig(dt=1e-3, t_end=2.0, sample_every=2000, spectrum=False)
        cfg_slow = FlowConfig(
            dt=1e-3 / delta**2, t_end=2.0 / delta**2, sample_every=2000,
            spectrum=False,
        )
        fast = flow.integrate(u0, cfg_fast)
        slow = flow.integrate(FourierSymbol(delta * u0.coeffs), cfg_slow)
        err = np.linalg.norm(delta * fast.states[-1] - slow.states[-1])
        assert err < 1e-9

    def test_gauge_and_rotation_equivariance(self):
        rng = np.random.default_rng(4)
        u0 = random_symbol(rng, 10, scale=0.6)
        cfg = FlowConfig(dt=2e-3, t_end=3.0, sample_every=500, spectrum=False)
        base = flow.integrate(u0, cfg)
        phase = np.exp(0.7j)
        gauged = flow.integrate(FourierSymbol(phase * u0.coeffs), cfg)
        assert np.linalg.norm(gauged.states[-1] - phase * base.states[-1]) < 5e-9
        psi = 0.4
        rotator = np.exp(1j * psi * np.arange(10))
        rotated = flow.integrate(FourierSymbol(rotator * u0.coeffs), cfg)
        assert np.linalg.norm(rotated.states[-1] - rotator * base.states[-1]) < 5e-9

    def test_conservation_and_isospectrality_small(self):
        u0 = FourierSymbol(np.array([0.5, 1.0], complex))
        cfg = FlowConfig(dt=1e-3, t_end=2.0, K=96, sample_every=200)
        series = flow.integrate(u0, cfg)
        report = flow.lax_residual_along(series)
        assert report.conserved_drift["Q"] < 1e-11
        assert report.conserved_drift["M"] < 1e-11
        assert report.conserved_drift["E"] < 1e-11
        # spectrum feels the spatial truncation but stays small early on
        assert report.eigenvalue_drift < 1e-5

    def test_hierarchy_flow_conserves_generating_invariant(self):
        # truncation keeps Q, M and the generator's own invariant exact;
        # other hierarchy members drift at truncation size only
        rng = np.random.default_rng(5)
        u0 = random_symbol(rng, 8, scale=0.4)
        cfg = FlowConfig(dt=1e-3, t_end=1.0, K=16, sample_every=250, spectrum=False)
        series = flow.integrate(u0, cfg, field=("hierarchy", 2))
        j4 = [hankel.hankel_moment(series.state(i), 4).real
              for i in range(series.n_samples)]
        q = [hardy.mass(series.state(i)) for i in range(series.n_samples)]
        m = [hardy.momentum(series.state(i)) for i in range(series.n_samples)]
        assert max(abs(v - j4[0]) for v in j4) < 1e-9 * max(1.0, abs(j4[0]))
        assert max(abs(v - q[0]) for v in q) < 1e-10 * max(1.0, q[0])
        assert max(abs(v - m[0]) for v in m) < 1e-9 * max(1.0, m[0])

    def test_rk45_matches_rk4(self):
        rng = np.random.default_rng(6)
        u0 = random_symbol(rng, 10, scale=0.5)
        fixed = flow.integrate(
            u0, FlowConfig(dt=5e-4, t_end=2.0, sample_every=4000, spectrum=False)
        )
        adaptive = flow.integrate(
            u0,
            FlowConfig(dt=1e-2, t_end=2.0, scheme="rk45", sample_every=10**9,
                       rtol=1e-11, atol=1e-13, spectrum=False),
        )
        assert abs(adaptive.times[-1] - 2.0) < 1e-12
        assert np.linalg.norm(adaptive.states[-1] - fixed.states[-1]) < 1e-7

    def test_rk45_rejects_steps(self):
        rng = np.random.default_rng(7)
        u0 = random_symbol(rng, 8)
        cfg = FlowConfig(dt=1.0, t_end=2.0, scheme="rk45", sample_every=50,
                         rtol=1e-12, atol=1e-12, spectrum=False)
        series = flow.integrate(u0, cfg)
        assert series.steps_rejected > 0

    def test_nonfinite_state_detection(self):
        # cubic growth overflows the raw kernel arithmetic within one chunk
        with pytest.raises(flow.FlowError) as err:
            flow.integrate(
                FourierSymbol([1e80, 1e80]),
                FlowConfig(dt=1.0, t_end=5.0, sample_every=1, spectrum=False),
            )
        assert "t =" in str(err.value)

    def test_invalid_config(self):
        with pytest.raises(ValueError):
            flow.integrate(FourierSymbol([1.0]), FlowConfig(dt=-1.0))


class TestLaxResidual:
    def test_stationary_wave_residual_small(self):
        from szego.waves import stationary_wave

        u0, omega = stationary_wave([0.5], 1.0, cutoff=96)
        cfg = FlowConfig(dt=1e-3, t_end=0.5, K=96, sample_every=50)
        series = flow.integrate(u0, cfg)
        report = flow.lax_residual_along(series)
        # dt_sample = 0.05: the O(dt^2) stencil error dominates
        assert report.lax_residual_max < 5e-3
        assert report.eigenvalue_drift < 1e-9

    def test_needs_three_samples(self):
        u0 = FourierSymbol([1.0, 0.2])
        cfg = FlowConfig(dt=1e-2, t_end=0.01, sample_every=1, spectrum=False)
        series = flow.integrate(u0, cfg)
        with pytest.raises(ValueError):
            flow.lax_residual_along(series)


class TestTorusDistance:
    def test_membership_gives_zero(self):
        a, r = 1.2, 0.45
        state = rational.RationalState([a * np.exp(0.3j)], [r * np.exp(-1.1j)])
        u = rational.rational_to_fourier(state, 200)
        assert flow.torus_distance(u, a, r) < 1e-8

    def test_perturbation_upper_bound(self):
        a, r, delta = 1.0, 0.5, 0.05
        u = rational.rational_to_fourier(rational.RationalState([a], [r]), 200)
        c = u.coeffs.copy()
        c[2] += delta
        dist = flow.torus_distance(FourierSymbol(c), a, r)
        assert dist <= np.sqrt(3.0) * delta + 1e-10

    def test_invalid_parameters(self):
        u = FourierSymbol([1.0])
        with pytest.raises(ValueError):
            flow.torus_distance(u, -1.0, 0.5)
        with pytest.raises(ValueError):
            flow.torus_distance(u, 1.0, 1.5)
