"""Truncated Hardy-space symbols and their scalar functionals.

A symbol holds the Fourier coefficients (c_0, ..., c_{K-1}) of a
function u(z) = sum_k c_k z^k on the unit circle with no negative
frequencies; frequencies at and beyond the cutoff K are zero by
convention.  Everything is exact coefficient arithmetic except the
Lebesgue norms, which use trapezoidal quadrature on a uniform circle
grid (spectrally exact for trigonometric polynomials).

Two Sobolev conventions coexist on purpose: ``hs_norm`` weights by
(1 + k^2)^s for arbitrary s, while ``half_norm_sq`` uses the (k + 1)
weight for which mass + momentum = half-norm squared holds exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np


class FourierSymbol:
    """Nonnegative-frequency coefficient vector of a Hardy-space function."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.ascontiguousarray(coeffs, dtype=np.complex128)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coefficients must form a nonempty 1-d sequence")
        if not np.all(np.isfinite(c.view(np.float64))):
            raise ValueError("nonfinite coefficient")
        self.coeffs = c

    @property
    def cutoff(self) -> int:
        return self.coeffs.size

    def padded(self, k: int) -> np.ndarray:
        """Coefficients extended (or cut, discarding zeros only) to length k."""
        if k < 1:
            raise ValueError("cutoff must be positive")
        if k <= self.cutoff:
            return self.coeffs[:k].copy()
        out = np.zeros(k, dtype=np.complex128)
        out[: self.cutoff] = self.coeffs
        return out

    def __eq__(self, other):
        if not isinstance(other, FourierSymbol):
            return NotImplemented
        k = max(self.cutoff, other.cutoff)
        return bool(np.array_equal(self.padded(k), other.padded(k)))

    def __repr__(self):
        return f"FourierSymbol(cutoff={self.cutoff})"

    def to_json(self) -> str:
        return json.dumps(
            {
                "cutoff": self.cutoff,
                "coeffs": [[z.real, z.imag] for z in self.coeffs],
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "FourierSymbol":
        obj = json.loads(text)
        c = np.array([complex(re, im) for re, im in obj["coeffs"]])
        if len(c) != obj["cutoff"]:
            raise ValueError("cutoff disagrees with coefficient count")
        return cls(c)


class TwoSidedSymbol:
    """Coefficients on frequencies kmin..kmin+len-1 (used for |u|^2 etc.)."""

    __slots__ = ("coeffs", "kmin")

    def __init__(self, coeffs, kmin: int):
        c = np.ascontiguousarray(coeffs, dtype=np.complex128)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coefficients must form a nonempty 1-d sequence")
        if not np.all(np.isfinite(c.view(np.float64))):
            raise ValueError("nonfinite coefficient")
        self.coeffs = c
        self.kmin = int(kmin)

    def coefficient(self, k: int) -> complex:
        idx = k - self.kmin
        if idx < 0 or idx >= self.coeffs.size:
            return 0.0 + 0.0j
        return complex(self.coeffs[idx])

    def is_hermitian(self, tol: float = 1e-13) -> bool:
        """Whether the represented function is real on the circle."""
        kmax = self.kmin + self.coeffs.size - 1
        for k in range(self.kmin, kmax + 1):
            if abs(self.coefficient(-k) - np.conj(self.coefficient(k))) > tol:
                return False
        return True


@dataclass
class FunctionalSet:
    """Mass, momentum, energy and requested norms of one symbol."""

    q: float
    m: float
    e: float
    hs_norms: dict = field(default_factory=dict)
    lp_norms: dict = field(default_factory=dict)


def szego_project(f: TwoSidedSymbol) -> FourierSymbol:
    """Drop every negative frequency; copy the rest verbatim."""
    kmax = f.kmin + f.coeffs.size - 1
    if kmax < 0:
        return FourierSymbol([0.0])
    out = np.zeros(kmax + 1, dtype=np.complex128)
    for k in range(0, kmax + 1):
        out[k] = f.coefficient(k)
    return FourierSymbol(out)


def modulus_squared(u: FourierSymbol) -> TwoSidedSymbol:
    """|u|^2 as a two-sided symbol on frequencies -(K-1)..K-1."""
    c = u.coeffs
    corr = np.correlate(c, c, mode="full")  # lag k: sum_j c[j+k] conj(c[j])
    return TwoSidedSymbol(corr, -(u.cutoff - 1))


def product(u: FourierSymbol, v: FourierSymbol) -> FourierSymbol:
    """Pointwise product of two analytic symbols, exact full convolution."""
    return FourierSymbol(np.convolve(u.coeffs, v.coeffs))


def cubic_nonlinearity(u: FourierSymbol, out_cutoff: int | None = None) -> FourierSymbol:
    """Analytic projection of |u|^2 u by exact coefficient convolution.

    The product is computed on all frequencies 0..2(K-1); the default
    output cutoff 2K-1 therefore loses nothing.
    """
    from szego import backend

    if out_cutoff is None:
        out_cutoff = 2 * u.cutoff - 1
    if out_cutoff < 1:
        raise ValueError("output cutoff must be positive")
    return FourierSymbol(backend.cubic_projected(u.coeffs, out_cutoff))


def evaluate_on_grid(u: FourierSymbol, m: int) -> np.ndarray:
    """Values u(e^{i theta_j}) at theta_j = 2 pi j / m.

    Alias-free reconstruction from the values needs m >= 2K-1; smaller
    grids fold the coefficients.
    """
    if m < 1:
        raise ValueError("grid size must be positive")
    folded = np.zeros(m, dtype=np.complex128)
    for k in range(u.cutoff):
        folded[k % m] += u.coeffs[k]
    return np.fft.ifft(folded) * m


def grid_to_coeffs(values: np.ndarray, cutoff: int) -> FourierSymbol:
    """Inverse of evaluate_on_grid for alias-free grids (m >= 2K-1)."""
    values = np.asarray(values, dtype=np.complex128)
    coeffs = np.fft.fft(values) / len(values)
    return FourierSymbol(coeffs[:cutoff])


def mass(u: FourierSymbol) -> float:
    return float(np.sum(np.abs(u.coeffs) ** 2))


def momentum(u: FourierSymbol) -> float:
    k = np.arange(u.cutoff)
    return float(np.sum(k * np.abs(u.coeffs) ** 2))


def half_norm_sq(u: FourierSymbol) -> float:
    """Squared half-order Sobolev norm with the (k+1) weight (= Q + M)."""
    k = np.arange(u.cutoff)
    return float(np.sum((k + 1.0) * np.abs(u.coeffs) ** 2))


def hs_norm(u: FourierSymbol, s: float) -> float:
    """Sobolev norm with the (1 + k^2)^s weight."""
    k = np.arange(u.cutoff)
    return float(np.sqrt(np.sum((1.0 + k**2) ** s * np.abs(u.coeffs) ** 2)))


def lp_norm(u: FourierSymbol, p: float, grid: int | None = None) -> float:
    """L^p norm by trapezoidal quadrature on a uniform circle grid.

    The grid defaults to 4K points, spectrally exact for |u|^p with
    integer p <= 4 when u is a trigonometric polynomial.
    """
    if p < 1:
        raise ValueError("p must be at least 1")
    if grid is None:
        grid = max(4 * u.cutoff, 8)
    vals = np.abs(evaluate_on_grid(u, grid))
    return float(np.mean(vals**p) ** (1.0 / p))


def energy(u: FourierSymbol, grid: int | None = None) -> float:
    """Quadrature of |u|^4 over the circle (normalized measure)."""
    if grid is None:
        grid = max(4 * u.cutoff, 8)
    vals = np.abs(evaluate_on_grid(u, grid))
    return float(np.mean(vals**4))


def functionals(u: FourierSymbol, s_list=(), p_list=()) -> FunctionalSet:
    """Evaluate Q, M, E plus any requested Sobolev and Lebesgue norms."""
    for p in p_list:
        if p < 1:
            raise ValueError("p must be at least 1")
    return FunctionalSet(
        q=mass(u),
        m=momentum(u),
        e=energy(u),
        hs_norms={float(s): hs_norm(u, s) for s in s_list},
        lp_norms={float(p): lp_norm(u, p) for p in p_list},
    )


def inner(u: FourierSymbol, v: FourierSymbol) -> complex:
    """L^2 pairing (u | v) = sum_k u_k conj(v_k)."""
    k = max(u.cutoff, v.cutoff)
    return complex(np.vdot(v.padded(k), u.padded(k)))


def sharp_inequality_gap(u: FourierSymbol) -> float:
    """Defect Q(Q + 2M) - E; nonnegative, zero exactly on rank-one symbols."""
    if not np.any(u.coeffs):
        raise ValueError("gap is defined for nonzero symbols only")
    q = mass(u)
    return q * (q + 2.0 * momentum(u)) - energy(u)
