import numpy as np
import pytest

from szego import flow, hankel, hardy, rational
from szego.flow import FlowConfig
from szego.hardy import FourierSymbol
from szego.rational import (
    BlaschkeProduct,
    ChartError,
    RationalState,
    RationalSymbol,
    abp_hs_norm,
    abp_to_fourier,
    blaschke_decompose,
    pole_residue_field,
    evolution_checks,
    hs_growth_series,
    integrate_abp,
    integrate_rational,
    rank1_orbit,
    abp_orbit_data,
    abp_orbit,
    rational_to_fourier,
)


def random_state(rng, n, rmax=0.7, with_const=False):
    while True:
        poles = rng.uniform(0.1, rmax, n) * np.exp(2j * np.pi * rng.uniform(0, 1, n))
        if n == 1 or np.min(np.abs(poles[:, None] - poles[None, :])
                            + np.eye(n)) > 0.05:
            break
    alphas = rng.uniform(0.5, 1.5, n) * np.exp(2j * np.pi * rng.uniform(0, 1, n))
    if with_const:
        const = complex(rng.uniform(0.5, 1.5) * np.exp(2j * np.pi * rng.uniform()))
        return RationalState(alphas, poles, const)
    return RationalState(alphas, poles)


class TestEmbedding:
    def test_constant(self):
        u = rational_to_fourier(RationalState([1.0], [0.0]), 4)
        assert np.allclose(u.coeffs, [1, 0, 0, 0])

    def test_geometric(self):
        u = rational_to_fourier(RationalState([1.0], [0.5]), 3)
        assert np.allclose(u.coeffs, [1, 0.5, 0.25])

    def test_rejects_outside_pole(self):
        with pytest.raises(ChartError):
            RationalState([1.0], [1.2])


class TestCoordinateField:
    def test_rank_one_reduction(self):
        alpha, p = 1.3 * np.exp(0.4j), 0.5 * np.exp(-0.2j)
        state = RationalState([alpha], [p])
        da, dp, _ = pole_residue_field(state)
        r = 1 - abs(p) ** 2
        assert abs(da[0] - (-1j) * abs(alpha) ** 2 * alpha / r**2) < 1e-14
        assert abs(dp[0] - (-1j) * abs(alpha) ** 2 * p / r) < 1e-14

    def test_origin_poles_are_fixed(self):
        state = RationalState([1.0, 0.5], [0.3, -0.4], const=0.8)
        _, _, dconst = pole_residue_field(state)
        # the embedded zero pole stays put; only residues move
        alphas, poles = state.embedded()
        full = RationalState(alphas[:-1], poles[:-1], alphas[-1])
        assert dconst is not None

    def test_collision_raises(self):
        state = RationalState([1.0, 1.0], [0.3, 0.3 + 1e-9])
        with pytest.raises(ChartError):
            pole_residue_field(state)

    def test_chart_consistency_against_spectral_field(self):
        # push the coordinate field through the embedding and compare
        # with -i Pi(|u|^2 u): this pins the printed index convention
        rng = np.random.default_rng(42)
        for _ in range(5):
            state = random_state(rng, 2)
            da, dp, _ = pole_residue_field(state)
            k = np.arange(160)
            alphas, poles = state.embedded()
            dcoeffs = (
                da[None, :] * poles[None, :] ** k[:, None]
                + alphas[None, :]
                * k[:, None]
                * np.where(k[:, None] >= 1, poles[None, :] ** (k[:, None] - 1), 0)
                * dp[None, :]
            ).sum(axis=1)
            u = rational_to_fourier(state, 160)
            spectral = flow.rhs_szego(u)
            assert np.max(np.abs(dcoeffs - spectral.coeffs)) < 1e-6


class TestIntegrateRational:
    def test_pole_product_modulus_conserved(self):
        rng = np.random.default_rng(1)
        state = random_state(rng, 2)
        series = integrate_rational(state, dt=1e-3, t_end=10.0, sample_every=100)
        assert np.max(np.abs(series.pole_prod_sq - series.pole_prod_sq[0])) < 1e-9

    def test_const_chart_invariant_conserved(self):
        rng = np.random.default_rng(2)
        state = random_state(rng, 2, with_const=True)
        series = integrate_rational(state, dt=1e-3, t_end=5.0, sample_every=100)
        assert series.lead_coeff_sq is not None
        assert np.max(np.abs(series.lead_coeff_sq - series.lead_coeff_sq[0])) < 1e-9

    def test_matches_m1_closed_form(self):
        series = integrate_rational(
            RationalState([1.0], [0.5]), dt=1e-3, t_end=10.0, sample_every=1000
        )
        at, pt, _, _ = rank1_orbit(1.0, 0.5, series.times)
        assert np.max(np.abs(series.alphas[:, 0] - at)) < 1e-10
        assert np.max(np.abs(series.poles[:, 0] - pt)) < 1e-10

    def test_cross_check_with_spectral_solver(self):
        rng = np.random.default_rng(3)
        state = random_state(rng, 2, rmax=0.5)
        series = integrate_rational(state, dt=1e-3, t_end=5.0, sample_every=5000)
        k = 128
        u0 = rational_to_fourier(state, k)
        cfg = FlowConfig(dt=1e-3, t_end=5.0, sample_every=5000, spectrum=False)
        spectral = flow.integrate(u0, cfg)
        final = rational_to_fourier(series.state(series.n_samples - 1), k)
        err = np.linalg.norm(final.coeffs - spectral.states[-1])
        assert err < 1e-6


class TestM1:
    def test_frequencies(self):
        _, _, omega, c = rank1_orbit(1.0, 0.5, 0.0)
        assert abs(omega - 16.0 / 9.0) < 1e-14
        assert abs(c - 4.0 / 3.0) < 1e-14

    def test_constant_orbit(self):
        at, pt, omega, _ = rank1_orbit(1.0, 0.0, np.array([2.5]))
        assert abs(at[0] - np.exp(-2.5j)) < 1e-14
        assert pt[0] == 0


class TestAbpChart:
    def test_single_mode_is_stationary(self):
        a, b, p, data = abp_orbit(1.0, 0.0, 0.0, np.array([1.3]))
        assert data.stationary
        assert abs(data.q - 1.0) < 1e-14
        assert abs(a[0] - np.exp(-1.3j)) < 1e-14
        assert abs(b[0]) == 0
        assert abs(p[0]) == 0

    def test_blaschke_initial_data_is_stationary(self):
        p0 = 0.4 * np.exp(0.9j)
        a0 = 1.1
        a, b, p, data = abp_orbit(a0, -a0 * np.conj(p0), p0, np.array([0.7]))
        assert data.stationary
        assert abs(p[0] - p0) < 1e-14
        phase = np.exp(-1j * data.q * 0.7)
        assert abs(a[0] - a0 * phase) < 1e-14

    def test_oscillation_law_for_shifted_mode(self):
        eps = 0.1
        data = abp_orbit_data(1.0, eps, 0.0)
        assert abs(data.omega_gap - eps * np.sqrt(4 + eps**2)) < 1e-13
        t = np.linspace(0.0, 4 * np.pi / data.omega_gap, 400)
        _, _, p, _ = abp_orbit(1.0, eps, 0.0, t)
        expected = (2.0 / (4 + eps**2)) * (1 - np.cos(eps * t * np.sqrt(4 + eps**2)))
        assert np.max(np.abs(np.abs(p) ** 2 - expected)) < 1e-13

    def test_f_moduli_formulas(self):
        rng = np.random.default_rng(4)
        for _ in range(10):
            a0 = complex(rng.uniform(0.5, 1.5) * np.exp(2j * np.pi * rng.uniform()))
            b0 = complex(rng.uniform(0.0, 1.0) * np.exp(2j * np.pi * rng.uniform()))
            p0 = complex(rng.uniform(0.0, 0.8) * np.exp(2j * np.pi * rng.uniform()))
            data = abp_orbit_data(a0, b0, p0)
            if data.stationary:
                continue
            assert abs(
                abs(data.f_plus0) - np.sqrt(data.r_plus) * (data.q - data.r_minus)
            ) < 1e-10
            assert abs(
                abs(data.f_minus0) - np.sqrt(data.r_minus) * (data.r_plus - data.q)
            ) < 1e-10

    def test_energy_identity(self):
        data = abp_orbit_data(1.0, 0.3, 0.2 + 0.1j)
        u = abp_to_fourier(1.0, 0.3, 0.2 + 0.1j, 256)
        assert abs(hardy.energy(u) - data.e) < 1e-11

    def test_integrator_matches_closed_form(self):
        eps = 0.1
        data = abp_orbit_data(1.0, eps, 0.0)
        t_end = 2 * 2 * np.pi / data.omega_gap
        series = integrate_abp(1.0, eps, 0.0, dt=5e-3, t_end=t_end,
                                   sample_every=10)
        a, b, p, _ = abp_orbit(1.0, eps, 0.0, series.times)
        err = max(
            np.max(np.abs(series.a - a)),
            np.max(np.abs(series.b - b)),
            np.max(np.abs(series.p - p)),
        )
        assert err < 1e-8

    def test_envelope_attained(self):
        eps = 0.1
        data = abp_orbit_data(1.0, eps, 0.0)
        t = np.linspace(0.0, 2 * np.pi / data.omega_gap, 20001)
        _, _, p, _ = abp_orbit(1.0, eps, 0.0, t)
        mods = np.abs(p)
        assert abs(np.max(mods) - data.rho_max) < 1e-6
        assert abs(np.min(mods) - data.rho_min) < 1e-6

    def test_cosine_fit_of_pole_modulus(self):
        # |p(t)|^2 fits A + B cos(Omega t + phi) to roundoff
        a0, b0, p0 = 1.0, 0.35 + 0.1j, 0.2 * np.exp(0.3j)
        data = abp_orbit_data(a0, b0, p0)
        t = np.linspace(0.0, 2 * 2 * np.pi / data.omega_gap, 500)
        _, _, p, _ = abp_orbit(a0, b0, p0, t)
        y = np.abs(p) ** 2
        design = np.stack(
            [np.ones_like(t), np.cos(data.omega_gap * t), np.sin(data.omega_gap * t)],
            axis=1,
        )
        coeffs, *_ = np.linalg.lstsq(design, y, rcond=None)
        assert np.max(np.abs(design @ coeffs - y)) < 1e-9

    def test_membership_errors(self):
        with pytest.raises(ChartError):
            abp_orbit(0.0, 1.0, 0.0, 0.0)
        with pytest.raises(ChartError):
            abp_orbit(1.0, -2.0, 0.5, 0.0)  # a + b p = 0


class TestBlaschke:
    def test_unimodular_on_circle(self):
        rng = np.random.default_rng(5)
        poles = 0.8 * (rng.standard_normal(4) + 1j * rng.standard_normal(4)) / 2
        b = BlaschkeProduct(poles)
        assert np.max(np.abs(np.abs(b.on_grid(256)) - 1)) < 1e-12

    def test_rank_one_decomposition(self):
        alpha, p = 1.0, 0.5
        sym = RationalSymbol([alpha], [1.0, -p])
        dec = blaschke_decompose(sym, cutoff=64)
        # v = -p b and |v| = |p| on the circle
        b_coeffs = dec.blaschke.coefficients(64)
        assert np.allclose(dec.v.coeffs, -p * b_coeffs, atol=1e-13)
        vals = np.abs(hardy.evaluate_on_grid(dec.v, 256))
        assert np.max(np.abs(vals - abs(p))) < 1e-12
        assert abs(dec.kernel_dist_sq - p**2) < 1e-14
        assert dec.w is None

    def test_shifted_mode_decomposition(self):
        eps = 0.25
        sym = RationalSymbol([eps, 1.0], [1.0])  # z + eps, rank 2, poles 0, 0
        dec = blaschke_decompose(sym, cutoff=16)
        assert dec.kernel_dist_sq == 0.0
        assert dec.lead_coeff_sq == 1.0
        assert dec.w is not None
        # b = z^2, leading coefficient 1, so the preimage of 1 is z;
        # checked against the defining relation below
        expect = np.zeros(16)
        expect[1] = 1.0
        assert np.allclose(dec.w.coeffs, expect)
        u = sym.to_fourier(8)
        rep = hankel.hankel_matrix(u)
        image = rep.gamma @ np.conj(dec.w.padded(rep.size))
        e0 = np.zeros(rep.size)
        e0[0] = 1.0
        assert np.linalg.norm(image - e0) < 1e-14

    def test_w_is_preimage_of_one(self):
        rng = np.random.default_rng(6)
        state = random_state(rng, 3, with_const=True)
        u = rational_to_fourier(state, 220)
        alphas, poles = state.embedded()
        sym = RationalSymbol.from_poles(
            poles, _numer_from_state(alphas, poles)
        )
        dec = blaschke_decompose(sym, cutoff=220)
        rep = hankel.hankel_matrix(u)
        image = rep.gamma @ np.conj(dec.w.padded(rep.size))
        e0 = np.zeros(rep.size)
        e0[0] = 1.0
        assert np.linalg.norm(image - e0) < 1e-9

    def test_distance_to_kernel_identity(self):
        # squared distance from 1 to the kernel complement equals S
        rng = np.random.default_rng(7)
        for n in range(1, 5):
            state = random_state(rng, n, rmax=0.6)
            u = rational_to_fourier(state, 300)
            data = hankel.hankel_square_spectrum(u)
            vecs = data.eigenvectors[:, : data.rank]
            e0 = np.zeros(300)
            e0[0] = 1.0
            proj = vecs @ (vecs.conj().T @ e0)
            s = float(np.abs(np.prod(state.poles)) ** 2)
            assert abs(np.linalg.norm(e0 - proj) ** 2 - s) < 1e-9


def _numer_from_state(alphas, poles):
    from numpy.polynomial import polynomial as npoly

    numer = np.zeros(1, dtype=complex)
    for j in range(len(alphas)):
        term = np.array([alphas[j]])
        for i in range(len(poles)):
            if i != j:
                term = npoly.polymul(term, np.array([1.0, -poles[i]]))
        numer = npoly.polyadd(numer, term)
    return numer


class TestEvolutionChecks:
    def test_m1_orbit_laws(self):
        series = integrate_rational(
            RationalState([1.0], [0.5]), dt=1e-3, t_end=2.0, sample_every=5
        )
        report = evolution_checks(series, grid=128)
        # O(delta^2) stencil error at delta = 5e-3 sample spacing
        assert report["v_law"] < 1e-3
        assert report["b_law"] < 1e-3
        assert report["pole_product_phase"] < 1e-3

    def test_const_chart_orbit_laws(self):
        rng = np.random.default_rng(8)
        raw = random_state(rng, 2, rmax=0.5, with_const=True)
        scale = 1.0 / np.sqrt(rational.chart_mass(raw))
        state = RationalState(scale * raw.alphas, raw.poles, scale * raw.const)
        series = integrate_rational(state, dt=1e-3, t_end=2.0, sample_every=5)
        report = evolution_checks(series, grid=128)
        assert report["b_law"] < 1e-3
        assert report["lead_coeff_phase"] < 1e-3
        assert report["w_law"] < 1e-3

    def test_laws_scale_quadratically_in_spacing(self):
        coarse = integrate_rational(
            RationalState([1.0], [0.5]), dt=1e-3, t_end=2.0, sample_every=20
        )
        fine = integrate_rational(
            RationalState([1.0], [0.5]), dt=1e-3, t_end=2.0, sample_every=5
        )
        rc = evolution_checks(coarse, grid=64)["v_law"]
        rf = evolution_checks(fine, grid=64)["v_law"]
        assert rf < rc / 8  # fourth of the spacing, expect ~1/16


class TestHsGrowth:
    def test_peak_time_value(self):
        out = hs_growth_series([0.1], 1.0)
        eps, t_peak, _ = out["rows"][0]
        assert abs(t_peak - np.pi / (0.1 * np.sqrt(4.01))) < 1e-12

    def test_slope_matches_exponent(self):
        for s in (1.0, 2.0):
            out = hs_growth_series([0.1, 0.05, 0.025], s)
            expected = 2 * s - 1
            assert abs(out["slope"] - expected) <= 0.1 * expected

    def test_sup_matches_envelope(self):
        out = hs_growth_series([0.1], 1.5, sup_samples=4001)
        assert out["sup_over_period"] <= out["envelope_norm"] * (1 + 1e-6)
        assert out["sup_over_period"] >= out["envelope_norm"] * (1 - 1e-3)

    def test_norm_against_direct_sum(self):
        a, b, p = 1.0, 0.3, 0.6 * np.exp(0.2j)
        u = abp_to_fourier(a, b, p, 4000)
        assert abs(abp_hs_norm(a, b, p, 1.0) - hardy.hs_norm(u, 1.0)) < 1e-10
