"""Finite-dimensional invariant manifolds of rational symbols.

The rank-N manifold carries the flow as a closed ODE system in
pole/residue coordinates.  Its rank-(N-1) boundary stratum with a
constant term uses the same system with one pole pinned at the
origin.  The rank-1 chart and the three-complex-dimensional
(a z + b)/(1 - p z) chart integrate in closed form; the latter
through the linearizing variables f_pm = r_pm b + M a conj(p), which
also yield the oscillation envelope of |p(t)|.

Coordinate charts are generic: the ODE aborts on pole collisions or
poles approaching the unit circle rather than integrating through a
chart singularity.  Note the pole/residue chart degenerates when a
pole sits at the origin with nonzero velocity (polynomial symbols);
the (a, b, p) chart below covers that case for rank two.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from szego import hardy
from szego.hardy import FourierSymbol

POLE_COLLISION_TOL = 1e-8
POLE_CIRCLE_TOL = 1e-8


class ChartError(RuntimeError):
    """Coordinate chart left its domain of validity."""


@dataclass
class RationalState:
    """Generic chart: u = sum_j alpha_j / (1 - p_j z) (+ const)."""

    alphas: np.ndarray
    poles: np.ndarray
    const: complex | None = None

    def __post_init__(self):
        self.alphas = np.atleast_1d(np.asarray(self.alphas, dtype=np.complex128))
        self.poles = np.atleast_1d(np.asarray(self.poles, dtype=np.complex128))
        if self.alphas.shape != self.poles.shape:
            raise ValueError("alphas and poles must have matching length")
        if np.any(np.abs(self.poles) >= 1.0):
            raise ChartError("pole on or outside the unit circle")
        if self.const is not None:
            self.const = complex(self.const)

    @property
    def chart(self) -> str:
        return "plain" if self.const is None else "const"

    def embedded(self):
        """Residues and poles with the constant folded in as a zero pole."""
        if self.const is None:
            return self.alphas.copy(), self.poles.copy()
        return (
            np.concatenate([self.alphas, [self.const]]),
            np.concatenate([self.poles, [0.0 + 0.0j]]),
        )

    @property
    def rank(self) -> int:
        return self.poles.size + (0 if self.const is None else 1)


def rational_to_fourier(state: RationalState, cutoff: int) -> FourierSymbol:
    """Expand the chart into coefficients; tail beyond the cutoff is geometric."""
    alphas, poles = state.embedded()
    k = np.arange(cutoff)
    coeffs = (alphas[None, :] * poles[None, :] ** k[:, None]).sum(axis=1)
    return FourierSymbol(coeffs)


def _guard(alphas, poles):
    n = poles.size
    if np.any(np.abs(poles) > 1.0 - POLE_CIRCLE_TOL):
        raise ChartError("pole within tolerance of the unit circle")
    for i in range(n):
        for j in range(i + 1, n):
            if abs(poles[i] - poles[j]) < POLE_COLLISION_TOL:
                raise ChartError("pole collision")


def pole_residue_field(state: RationalState):
    """Coordinate vector field of the flow in the generic chart.

    Returns (dalphas, dpoles, dconst); dconst is None in the plain
    chart.  The cross sums factor, so the evaluation is O(N^2).
    """
    alphas, poles = state.embedded()
    _guard(alphas, poles)
    d = 1.0 - poles[:, None] * np.conj(poles)[None, :]
    row = (np.conj(alphas)[None, :] / d).sum(axis=1)
    row2 = (np.conj(alphas)[None, :] / d**2).sum(axis=1)
    diff = poles[:, None] - poles[None, :]
    np.fill_diagonal(diff, 1.0)
    inv = 1.0 / diff
    np.fill_diagonal(inv, 0.0)
    cross = (alphas[None, :] * inv).sum(axis=1)
    dalphas = -1j * (alphas**2 * row2 + 2.0 * alphas * poles * row * cross)
    dpoles = -1j * (alphas * row * poles)
    if state.const is None:
        return dalphas, dpoles, None
    return dalphas[:-1], dpoles[:-1], complex(dalphas[-1])


def chart_mass(state: RationalState) -> float:
    """Q in coordinates: sum_{j,k} alpha_j conj(alpha_k) / (1 - p_j conj(p_k))."""
    alphas, poles = state.embedded()
    d = 1.0 - poles[:, None] * np.conj(poles)[None, :]
    return float(((alphas[:, None] * np.conj(alphas)[None, :]) / d).sum().real)


@dataclass
class RationalSeries:
    """Sampled coordinate trajectory with the chart conservation columns."""

    times: np.ndarray
    alphas: np.ndarray  # n x N (embedded: constant occupies the last column)
    poles: np.ndarray  # n x N
    chart: str
    pole_prod_sq: np.ndarray  # |p_1 ... p_N|^2
    lead_coeff_sq: np.ndarray | None  # |const * prod p_j|^2 in the const chart

    @property
    def n_samples(self) -> int:
        return len(self.times)

    def state(self, i: int) -> RationalState:
        if self.chart == "plain":
            return RationalState(self.alphas[i], self.poles[i])
        return RationalState(
            self.alphas[i, :-1], self.poles[i, :-1], self.alphas[i, -1]
        )


def integrate_rational(state0: RationalState, dt: float, t_end: float,
                       sample_every: int = 1) -> RationalSeries:
    """Fixed-step RK4 on the coordinate system, sampling every few steps."""
    if dt <= 0 or t_end < 0:
        raise ValueError("need dt > 0 and t_end >= 0")
    alphas, poles = state0.embedded()
    n = poles.size
    chart = state0.chart

    def rhs(y, t):
        a, p = y[:n], y[n:]
        st = (
            RationalState(a, p)
            if chart == "plain"
            else RationalState(a[:-1], p[:-1], a[-1])
        )
        try:
            da, dp, dc = pole_residue_field(st)
        except ChartError as exc:
            raise ChartError(f"{exc} (t = {t:.6g})") from None
        if dc is not None:
            da = np.concatenate([da, [dc]])
            dp = np.concatenate([dp, [0.0 + 0.0j]])
        return np.concatenate([da, dp])

    y = np.concatenate([alphas, poles])
    n_steps = max(int(round(t_end / dt)), 0)
    times = [0.0]
    samples = [y.copy()]
    for step in range(n_steps):
        t = step * dt
        k1 = rhs(y, t)
        k2 = rhs(y + 0.5 * dt * k1, t + 0.5 * dt)
        k3 = rhs(y + 0.5 * dt * k2, t + 0.5 * dt)
        k4 = rhs(y + dt * k3, t + dt)
        y = y + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if (step + 1) % sample_every == 0 or step + 1 == n_steps:
            times.append((step + 1) * dt)
            samples.append(y.copy())
    samples = np.array(samples)
    alphas_t = samples[:, :n]
    poles_t = samples[:, n:]
    pole_prod_sq = np.abs(np.prod(poles_t, axis=1)) ** 2
    lead_coeff_sq = None
    if chart == "const":
        lead_coeff_sq = (
            np.abs(alphas_t[:, -1] * np.prod(poles_t[:, :-1], axis=1)) ** 2
        )
    return RationalSeries(np.array(times), alphas_t, poles_t, chart,
                          pole_prod_sq, lead_coeff_sq)


def rank1_orbit(alpha0: complex, p0: complex, t):
    """Closed-form rank-1 orbit: phase rotations of residue and pole.

    Returns (alpha(t), p(t), omega, c) with omega = |alpha0|^2/(1-|p0|^2)^2
    and c = |alpha0|^2/(1-|p0|^2).
    """
    if abs(p0) >= 1:
        raise ChartError("pole on or outside the unit circle")
    if alpha0 == 0:
        raise ValueError("residue must be nonzero")
    t = np.asarray(t, dtype=float)
    r2 = 1.0 - abs(p0) ** 2
    omega = abs(alpha0) ** 2 / r2**2
    c = abs(alpha0) ** 2 / r2
    return alpha0 * np.exp(-1j * omega * t), p0 * np.exp(-1j * c * t), omega, c


# ---------------------------------------------------------------------------
# the (a z + b) / (1 - p z) chart
# ---------------------------------------------------------------------------


def _abp_invariants(a, b, p):
    num = abs(a + b * p) ** 2
    r = 1.0 - abs(p) ** 2
    m = num / r**2
    q = num / r + abs(b) ** 2
    return q, m, abs(a) ** 2


def check_abp_membership(a0, b0, p0):
    if a0 == 0:
        raise ChartError("leading coefficient must be nonzero")
    if abs(p0) >= 1:
        raise ChartError("pole on or outside the unit circle")
    if abs(a0 + b0 * p0) == 0:
        raise ChartError("numerator and denominator share a root")


@dataclass
class AbpOrbitData:
    """Invariants and oscillation data of one (a z + b)/(1 - p z) orbit."""

    q: float
    m: float
    lead_coeff_sq: float
    e: float
    sigma1: float
    sigma2: float
    r_plus: float
    r_minus: float
    omega_gap: float
    f_plus0: complex
    f_minus0: complex
    rho_min: float
    rho_max: float
    stationary: bool


def abp_orbit_data(a0: complex, b0: complex, p0: complex) -> AbpOrbitData:
    """Derived constants of the orbit through (a0, b0, p0)."""
    check_abp_membership(a0, b0, p0)
    q, m, lead_sq = _abp_invariants(a0, b0, p0)
    sigma1 = q + m
    sigma2 = m * lead_sq
    disc = max(sigma1**2 - 4.0 * sigma2, 0.0)
    gap = float(np.sqrt(disc))
    r_plus = 0.5 * (sigma1 + gap)
    r_minus = 0.5 * (sigma1 - gap)
    e = q**2 + 2.0 * m * (q - lead_sq)
    stationary = (q - lead_sq) <= 1e-12 * q
    f_plus0 = r_plus * b0 + m * a0 * np.conj(p0)
    f_minus0 = r_minus * b0 + m * a0 * np.conj(p0)
    if stationary:
        rho_min = rho_max = abs(p0)
    else:
        rho_max = (np.sqrt(m) + np.sqrt(lead_sq)) / np.sqrt(
            m + q + 2.0 * np.sqrt(m * lead_sq)
        )
        rho_min = abs(np.sqrt(m) - np.sqrt(lead_sq)) / np.sqrt(
            m + q - 2.0 * np.sqrt(m * lead_sq)
        )
    return AbpOrbitData(
        q=q, m=m, lead_coeff_sq=lead_sq, e=e, sigma1=sigma1, sigma2=sigma2,
        r_plus=r_plus, r_minus=r_minus, omega_gap=gap,
        f_plus0=complex(f_plus0), f_minus0=complex(f_minus0),
        rho_min=float(rho_min), rho_max=float(rho_max), stationary=stationary,
    )


def abp_orbit(a0: complex, b0: complex, p0: complex, t):
    """Exact orbit in the (a, b, p) chart.

    The degenerate branch (mass equal to the leading-coefficient
    invariant) is the stationary orbit, a pure phase rotation at rate
    Q.  Otherwise a rotates at rate Q while the linearizing variables
    f_pm rotate at the two Hankel-square eigenvalues; b and p are
    reconstructed from f_pm, never from eigenvector phases.
    """
    data = abp_orbit_data(a0, b0, p0)
    t = np.asarray(t, dtype=float)
    a = a0 * np.exp(-1j * data.q * t)
    if data.stationary:
        shape = np.broadcast_shapes(t.shape, ())
        b = b0 * np.exp(-1j * data.q * t)
        p = np.broadcast_to(p0, shape).copy()
        return a, b, p, data
    fp = data.f_plus0 * np.exp(-1j * data.r_plus * t)
    fm = data.f_minus0 * np.exp(-1j * data.r_minus * t)
    b = (fp - fm) / data.omega_gap
    p = np.conj((data.r_plus * fm - data.r_minus * fp)
                / (data.omega_gap * data.m * a))
    return a, b, p, data


@dataclass
class AbpSeries:
    times: np.ndarray
    a: np.ndarray
    b: np.ndarray
    p: np.ndarray


def integrate_abp(a0: complex, b0: complex, p0: complex, dt: float,
                      t_end: float, sample_every: int = 1) -> AbpSeries:
    """RK4 on the smooth (a, b, p) chart ODE.

    The system i a' = Q a, i b' = (M + Q) b + M a conj(p),
    i p' = a conj(b) + Q p (with Q, M evaluated from the current
    state) is regular through p = 0, unlike the pole/residue chart.
    """
    check_abp_membership(a0, b0, p0)

    def rhs(y):
        a, b, p = y
        q, m, _ = _abp_invariants(a, b, p)
        return np.array(
            [
                -1j * q * a,
                -1j * ((m + q) * b + m * a * np.conj(p)),
                -1j * (a * np.conj(b) + q * p),
            ]
        )

    y = np.array([a0, b0, p0], dtype=np.complex128)
    n_steps = max(int(round(t_end / dt)), 0)
    times = [0.0]
    samples = [y.copy()]
    for step in range(n_steps):
        k1 = rhs(y)
        k2 = rhs(y + 0.5 * dt * k1)
        k3 = rhs(y + 0.5 * dt * k2)
        k4 = rhs(y + dt * k3)
        y = y + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if abs(y[2]) >= 1.0:
            raise ChartError(f"pole reached the unit circle (t = {(step+1)*dt:.6g})")
        if (step + 1) % sample_every == 0 or step + 1 == n_steps:
            times.append((step + 1) * dt)
            samples.append(y.copy())
    arr = np.array(samples)
    return AbpSeries(np.array(times), arr[:, 0], arr[:, 1], arr[:, 2])


def abp_to_fourier(a, b, p, cutoff: int) -> FourierSymbol:
    """Coefficients of (a z + b)/(1 - p z)."""
    k = np.arange(cutoff)
    coeffs = b * p**k
    coeffs[1:] += a * p ** (k[1:] - 1)
    return FourierSymbol(coeffs)


# ---------------------------------------------------------------------------
# rational symbols in numerator/denominator form and Blaschke data
# ---------------------------------------------------------------------------


def rational_coeffs(numer, denom, cutoff: int) -> np.ndarray:
    """Taylor coefficients of numer(z)/denom(z) with denom(0) = 1."""
    numer = np.asarray(numer, dtype=np.complex128)
    denom = np.asarray(denom, dtype=np.complex128)
    if abs(denom[0] - 1.0) > 1e-12:
        raise ValueError("denominator must be normalized with value 1 at 0")
    out = np.zeros(cutoff, dtype=np.complex128)
    for k in range(cutoff):
        acc = numer[k] if k < numer.size else 0.0
        for m in range(1, min(k, denom.size - 1) + 1):
            acc -= denom[m] * out[k - m]
        out[k] = acc
    return out


def _trim(poly):
    poly = np.asarray(poly, dtype=np.complex128)
    nz = np.nonzero(np.abs(poly) > 0)[0]
    return poly[: nz[-1] + 1] if nz.size else poly[:1]


class RationalSymbol:
    """u = A/B with deg A <= N-1, deg B <= N, B(0) = 1, no poles in the disc."""

    def __init__(self, numer, denom, poles=None):
        self.numer = _trim(numer)
        self.denom = _trim(denom)
        if abs(self.denom[0] - 1.0) > 1e-12:
            raise ValueError("denominator must satisfy B(0) = 1")
        if poles is None:
            roots = np.roots(self.denom[::-1]) if self.denom.size > 1 else np.array([])
            if roots.size and np.any(np.abs(roots) <= 1.0):
                raise ChartError("denominator root inside the closed unit disc")
            nonzero = list(1.0 / roots)
            zeros = [0.0 + 0.0j] * (self.rank - len(nonzero))
            poles = np.array(nonzero + zeros, dtype=np.complex128)
        self.poles = np.asarray(poles, dtype=np.complex128)

    @property
    def rank(self) -> int:
        return max(self.numer.size, self.denom.size - 1)

    @classmethod
    def from_poles(cls, poles, numer) -> "RationalSymbol":
        """Assemble B = prod (1 - p z) over the nonzero poles."""
        poles = np.asarray(poles, dtype=np.complex128)
        denom = np.array([1.0 + 0.0j])
        for p in poles:
            if p != 0:
                denom = npoly.polymul(denom, np.array([1.0, -p]))
        return cls(numer, denom, poles=poles)

    def to_fourier(self, cutoff: int) -> FourierSymbol:
        return FourierSymbol(rational_coeffs(self.numer, self.denom, cutoff))

    def evaluate(self, z):
        z = np.asarray(z, dtype=np.complex128)
        return npoly.polyval(z, self.numer) / npoly.polyval(z, self.denom)


@dataclass
class BlaschkeProduct:
    """Finite product of factors (z - conj(p)) / (1 - p z)."""

    poles: np.ndarray

    def evaluate(self, z):
        z = np.asarray(z, dtype=np.complex128)
        out = np.ones_like(z)
        for p in self.poles:
            out = out * (z - np.conj(p)) / (1.0 - p * z)
        return out

    def on_grid(self, m: int):
        return self.evaluate(np.exp(2j * np.pi * np.arange(m) / m))

    def coefficients(self, cutoff: int) -> np.ndarray:
        numer = np.array([1.0 + 0.0j])
        denom = np.array([1.0 + 0.0j])
        for p in self.poles:
            numer = npoly.polymul(numer, np.array([-np.conj(p), 1.0]))
            denom = npoly.polymul(denom, np.array([1.0, -p]))
        return rational_coeffs(numer, denom, cutoff)


@dataclass
class BlaschkeDecomposition:
    blaschke: BlaschkeProduct
    v: FourierSymbol  # complement of the projection of 1 onto the range
    w: FourierSymbol | None  # preimage of 1, defined when a pole sits at 0
    kernel_dist_sq: float
    lead_coeff_sq: float | None


def blaschke_decompose(sym: RationalSymbol, cutoff: int = 128) -> BlaschkeDecomposition:
    """Blaschke product of the denominator plus the distinguished vectors.

    v = 1 - P(1) has the closed form (-1)^N (prod p_j) b and constant
    modulus sqrt(S) on the circle; the preimage w of 1 exists exactly
    when some pole sits at the origin and is then b / (conj(a) z) with
    a the leading numerator coefficient.
    """
    poles = sym.poles
    n = sym.rank
    b = BlaschkeProduct(poles)
    prod = complex(np.prod(poles)) if poles.size else 1.0 + 0.0j
    scale = (-1.0) ** n * prod
    v = FourierSymbol(scale * b.coefficients(cutoff))
    kernel_dist_sq = abs(prod) ** 2
    w = None
    lead_coeff_sq = None
    if kernel_dist_sq == 0.0:
        if sym.numer.size != n:
            raise ChartError("leading numerator coefficient vanishes")
        a = sym.numer[-1]
        lead_coeff_sq = abs(a) ** 2
        reduced = BlaschkeProduct(np.array([p for p in poles if p != 0]))
        m0 = int(np.sum(poles == 0))
        shifted = np.zeros(cutoff, dtype=np.complex128)
        core = reduced.coefficients(cutoff)
        if m0 - 1 < cutoff:
            shifted[m0 - 1:] = core[: cutoff - (m0 - 1)]
        w = FourierSymbol(shifted / np.conj(a))
    return BlaschkeDecomposition(b, v, w, kernel_dist_sq, lead_coeff_sq)


# ---------------------------------------------------------------------------
# evolution-law residuals along a coordinate trajectory
# ---------------------------------------------------------------------------


def _grid_values(alphas, poles, theta):
    z = np.exp(1j * theta)
    return (alphas[None, :] / (1.0 - poles[None, :] * z[:, None])).sum(axis=1)


def evolution_checks(series: RationalSeries, grid: int = 256) -> dict:
    """Finite-difference residuals of the transport laws along a run.

    Checks i v_t = |u|^2 v and i b_t = (|u|^2 - Q) b pointwise on the
    circle, the phase rotation of the pole product (plain chart) at
    rate -Q, and in the constant-term chart the phase rotation of the
    leading coefficient at rate -Q plus i w_t = |u|^2 w.
    """
    if series.n_samples < 3:
        raise ValueError("need at least three samples")
    theta = 2 * np.pi * np.arange(grid) / grid
    n = series.n_samples
    nn = series.poles.shape[1]

    u_vals = np.empty((n, grid), complex)
    v_vals = np.empty((n, grid), complex)
    b_vals = np.empty((n, grid), complex)
    w_vals = np.empty((n, grid), complex) if series.chart == "const" else None
    prod_p = np.empty(n, complex)
    lead_a = np.empty(n, complex)
    q_vals = np.empty(n)
    z = np.exp(1j * theta)
    for i in range(n):
        alphas = series.alphas[i]
        poles = series.poles[i]
        u_vals[i] = _grid_values(alphas, poles, theta)
        bv = np.ones(grid, complex)
        for p in poles:
            bv *= (z - np.conj(p)) / (1.0 - p * z)
        b_vals[i] = bv
        prod_p[i] = np.prod(poles)
        v_vals[i] = (-1.0) ** nn * prod_p[i] * bv
        st = series.state(i)
        q_vals[i] = chart_mass(st)
        if series.chart == "const":
            lead_a[i] = (-1.0) ** (nn - 1) * np.prod(poles[:-1]) * alphas[-1]
            w_vals[i] = bv / (z * np.conj(lead_a[i]))

    def transport_residual(values, weight):
        worst = 0.0
        for i in range(1, n - 1):
            dt2 = series.times[i + 1] - series.times[i - 1]
            lhs = 1j * (values[i + 1] - values[i - 1]) / dt2
            rhs = weight[i] * values[i]
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
        return worst

    mod2 = np.abs(u_vals) ** 2
    report = {
        "b_law": transport_residual(b_vals, mod2 - q_vals[:, None]),
    }
    if series.chart == "plain":
        report["v_law"] = transport_residual(v_vals, mod2)
        rate = 0.0
        phase = np.unwrap(np.angle(prod_p))
        for i in range(1, n - 1):
            dt2 = series.times[i + 1] - series.times[i - 1]
            rate = max(rate, abs((phase[i + 1] - phase[i - 1]) / dt2 + q_vals[i]))
        report["pole_product_phase"] = rate
    else:
        report["w_law"] = transport_residual(w_vals, mod2)
        rate = 0.0
        phase = np.unwrap(np.angle(lead_a))
        for i in range(1, n - 1):
            dt2 = series.times[i + 1] - series.times[i - 1]
            rate = max(rate, abs((phase[i + 1] - phase[i - 1]) / dt2 + q_vals[i]))
        report["lead_coeff_phase"] = rate
    return report


# ---------------------------------------------------------------------------
# Sobolev growth of the z + eps family
# ---------------------------------------------------------------------------


def _weighted_tail(x: float, s: float) -> float:
    # sum_{k >= 1} (1 + k^2)^s x^(k-1), 0 <= x < 1
    if x >= 1.0:
        raise ValueError("needs x < 1")
    total = 0.0
    k0 = 1
    block = 8192
    while True:
        k = np.arange(k0, k0 + block, dtype=float)
        terms = (1.0 + k * k) ** s * x ** (k - 1.0)
        total += float(terms.sum())
        if terms[-1] <= 1e-18 * max(total, 1e-300):
            return total
        k0 += block


def abp_hs_norm(a, b, p, s: float) -> float:
    """Exact Sobolev norm of (a z + b)/(1 - p z) by geometric summation."""
    x = abs(p) ** 2
    return float(np.sqrt(abs(b) ** 2 + abs(a + b * p) ** 2 * _weighted_tail(x, s)))


def hs_growth_series(eps_values, s: float, sup_samples: int = 0) -> dict:
    """Sobolev norm of the z + eps orbit at the first pole-modulus peak.

    The peak time is pi / (eps sqrt(4 + eps^2)), half the oscillation
    period.  Returns the (t, norm) table, the fitted log-log slope
    across the sweep, and (optionally) the supremum of the norm over
    one full period of the last member.
    """
    eps_values = np.atleast_1d(np.asarray(eps_values, dtype=float))
    if np.any((eps_values <= 0) | (eps_values >= 1)):
        raise ValueError("eps must lie in (0, 1)")
    if s <= 0.5:
        raise ValueError("growth needs s > 1/2")
    rows = []
    for eps in eps_values:
        data = abp_orbit_data(1.0, eps, 0.0)
        t_peak = np.pi / data.omega_gap
        a, b, p, _ = abp_orbit(1.0, eps, 0.0, t_peak)
        rows.append((float(eps), float(t_peak), abp_hs_norm(a, b, p, s)))
    slope = float("nan")
    if len(rows) >= 2:
        logs_t = np.log([r[1] for r in rows])
        logs_n = np.log([r[2] for r in rows])
        slope = float(np.polyfit(logs_t, logs_n, 1)[0])
    out = {"rows": rows, "slope": slope, "expected_slope": 2.0 * s - 1.0}
    if sup_samples:
        eps = float(eps_values[-1])
        data = abp_orbit_data(1.0, eps, 0.0)
        period = 2 * np.pi / data.omega_gap
        ts = np.linspace(0.0, period, sup_samples)
        a, b, p, _ = abp_orbit(1.0, eps, 0.0, ts)
        norms = [abp_hs_norm(a[i], b[i], p[i], s) for i in range(len(ts))]
        out["sup_over_period"] = float(np.max(norms))
        out["envelope_norm"] = float(
            np.sqrt(
                data.q - data.m * (1 - data.rho_max**2)
                + data.m * (1 - data.rho_max**2) ** 2
                * _weighted_tail(data.rho_max**2, s)
            )
        )
    return out
