"""Pure-numpy implementations of the hot kernels.

Mirrors the API of the compiled module.  Direct convolution is exact
coefficient arithmetic; for large truncations a zero-padded FFT (3x
padding, so the cubic product is alias-free) evaluates the same thing
up to roundoff.
"""

import numpy as np

# direct convolution up to this truncation, padded FFT beyond
DIRECT_LIMIT = 512


def _cubic_direct(u, out_len):
    full = np.convolve(u, u)
    # analytic part of (u*u) ubar: correlate against conj(u), keep lags >= 0
    proj = np.correlate(full, u, mode="full")[len(u) - 1:]
    out = np.zeros(out_len, dtype=np.complex128)
    n = min(out_len, len(proj))
    out[:n] = proj[:n]
    return out


def _cubic_fft(u, out_len):
    K = len(u)
    width = 3 * K - 2  # frequencies -(K-1) .. 2K-2
    size = 1 << int(width - 1).bit_length()
    c = np.zeros(size, dtype=np.complex128)
    c[:K] = u
    vals = np.fft.ifft(c) * size
    coeffs = np.fft.fft(np.abs(vals) ** 2 * vals) / size
    out = np.zeros(out_len, dtype=np.complex128)
    n = min(out_len, 2 * K - 1)
    out[:n] = coeffs[:n]
    return out


def cubic_projected(u, out_len):
    """Coefficients 0..out_len-1 of the analytic projection of |u|^2 u."""
    u = np.asarray(u, dtype=np.complex128)
    if len(u) <= DIRECT_LIMIT:
        return _cubic_direct(u, out_len)
    return _cubic_fft(u, out_len)


def rk4_evolve(u0, dt, nsteps):
    """Advance the Galerkin-truncated flow by nsteps fixed RK4 steps."""
    u = np.array(u0, dtype=np.complex128, copy=True)
    K = len(u)

    def rhs(v):
        return -1j * cubic_projected(v, K)

    for _ in range(nsteps):
        k1 = rhs(u)
        k2 = rhs(u + 0.5 * dt * k1)
        k3 = rhs(u + 0.5 * dt * k2)
        k4 = rhs(u + dt * k3)
        u += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return u
