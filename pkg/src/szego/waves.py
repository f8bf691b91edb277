"""Construction and certification of stationary and traveling waves.

Stationary waves are unimodular multiples of finite Blaschke products;
traveling waves with nonzero velocity are alpha z^l / (1 - p^N z^N).
Constructors derive the velocity and pulsation from the mass relations
(velocity = Q/N, pulsation from the winding relation), so their output
is a certified solution; the residual of c D u + omega u = Pi(|u|^2 u)
and the vanishing commutator [D - T_{|u|^2}/c, H_u^2] double-check the
algebra.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from szego import hankel, hardy
from szego.hardy import FourierSymbol
from szego.rational import BlaschkeProduct

_TAIL = 1e-14


@dataclass
class WaveParams:
    n: int
    ell: int
    p: complex
    alpha: complex
    c: float
    omega: float
    q: float
    s: float


def _auto_cutoff(modulus: float, period: int, minimum: int = 64) -> int:
    # geometric tail |p|^(N k) below _TAIL at the cutoff
    if modulus == 0:
        return minimum
    k = int(np.ceil(np.log(_TAIL) / (period * np.log(modulus)))) * period + period
    return max(minimum, k)


def stationary_wave(poles, alpha: complex, cutoff: int | None = None):
    """Blaschke-product wave alpha prod (z - conj p)/(1 - p z).

    Returns (symbol, omega) with omega = |alpha|^2; the construction is
    checked by requiring |u| to be constant on a 256-point grid.
    """
    poles = np.atleast_1d(np.asarray(poles, dtype=np.complex128))
    if poles.size and np.any(np.abs(poles) >= 1.0):
        raise ValueError("poles must lie inside the open unit disc")
    omega = abs(alpha) ** 2
    if cutoff is None:
        cutoff = _auto_cutoff(float(np.max(np.abs(poles))) if poles.size else 0.0, 1)
    b = BlaschkeProduct(poles)
    u = FourierSymbol(alpha * b.coefficients(cutoff))
    vals = np.abs(hardy.evaluate_on_grid(u, 256)) ** 2
    if np.max(np.abs(vals - omega)) > 1e-11 * max(1.0, omega):
        raise RuntimeError("constructed wave is not unimodular; cutoff too small")
    return u, omega


def traveling_wave(n: int, ell: int, p: complex, alpha: complex,
                   cutoff: int | None = None):
    """Wave alpha z^ell / (1 - p^N z^N) with derived velocity and pulsation.

    The mass determines the velocity through Q = N c and the winding
    number fixes the pulsation: omega = Q/(1 - S) - ell c with
    S = |p|^(2N).
    """
    if n < 1 or not 0 <= ell <= n - 1:
        raise ValueError("need n >= 1 and 0 <= ell < n")
    if not 0 < abs(p) < 1:
        raise ValueError("need 0 < |p| < 1")
    if alpha == 0:
        raise ValueError("amplitude must be nonzero")
    if cutoff is None:
        cutoff = _auto_cutoff(abs(p), n) + ell
    s = abs(p) ** (2 * n)
    q = abs(alpha) ** 2 / (1.0 - s)
    c = q / n
    omega = q / (1.0 - s) - ell * c
    coeffs = np.zeros(cutoff, dtype=np.complex128)
    powers = np.arange(0, cutoff - ell, n)
    coeffs[ell + powers] = alpha * (p**n) ** (powers // n)
    return FourierSymbol(coeffs), c, omega


def wave_params(n: int, ell: int, p: complex, alpha: complex) -> WaveParams:
    u, c, omega = traveling_wave(n, ell, p, alpha)
    s = abs(p) ** (2 * n)
    return WaveParams(n, ell, complex(p), complex(alpha), c, omega,
                      abs(alpha) ** 2 / (1 - s), s)


def wave_residual(u: FourierSymbol, c: float, omega: float) -> float:
    """L^2 defect of c D u + omega u - Pi(|u|^2 u) at the expanded cutoff."""
    wide = 2 * u.cutoff - 1
    cubic = hardy.cubic_nonlinearity(u, wide).coeffs
    k = np.arange(wide)
    lhs = (c * k + omega) * u.padded(wide)
    return float(np.linalg.norm(lhs - cubic))


def commutator_check(u: FourierSymbol, c: float, omega: float | None = None):
    """Operator-norm defects of the wave's commutation identities.

    Returns the norm of [A, H_u^2] with A = D - T_{|u|^2}/c, plus (when
    the pulsation is supplied) the defect of
    A H + H A + (omega/c) H + H^3/c = 0 with antilinear composition.
    """
    if c == 0:
        raise ValueError("velocity must be nonzero")
    size = u.cutoff
    rep = hankel.hankel_matrix(u, size)
    t = hankel.toeplitz_matrix(hardy.modulus_squared(u), size)
    a = np.diag(np.arange(size, dtype=np.complex128)) - t / c
    h2 = rep.square()
    comm = float(np.linalg.norm(a @ h2 - h2 @ a, 2))
    if omega is None:
        return comm
    lin = hankel.AntilinearRep(a, False)
    h = rep.as_antilinear()
    h3 = h.compose(h).compose(h)
    total = lin.compose(h) + h.compose(lin) + h.scale(omega / c) + h3.scale(1.0 / c)
    return comm, total.norm()
