"""Matrix realizations of the Hankel and Toeplitz operators.

The Hankel operator of a symbol u acts antilinearly, h -> Gamma conj(h)
with Gamma[k, l] = c_{k+l}.  Antilinear maps are carried around as a
(matrix, conjugation-flag) pair; composing toggles the flag and
conjugates matrices as needed, so finite sections of operator
identities can be checked without doubling to real matrices.

The module also evaluates the chain of invariants J_n = (H_u^n(1) | 1),
the skew-adjoint evolution generator (i/2) H_u^2 - i T_{|u|^2}, the
algebraic identity relating the Hankel operator of the cubic
nonlinearity to Toeplitz/Hankel compositions, and the determinant of
the (J_{2(m+n)}) Gram matrix whose vanishing flags degenerate symbols.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from szego import hardy
from szego.hardy import FourierSymbol, TwoSidedSymbol


@dataclass(frozen=True)
class AntilinearRep:
    """Finite section of a C-linear or C-antilinear operator."""

    matrix: np.ndarray
    conjugates: bool

    def apply(self, h: np.ndarray) -> np.ndarray:
        return self.matrix @ (np.conj(h) if self.conjugates else h)

    def compose(self, other: "AntilinearRep") -> "AntilinearRep":
        """self after other; conjugation flags combine by xor."""
        rhs = np.conj(other.matrix) if self.conjugates else other.matrix
        return AntilinearRep(self.matrix @ rhs, self.conjugates ^ other.conjugates)

    def __add__(self, other: "AntilinearRep") -> "AntilinearRep":
        if self.conjugates != other.conjugates:
            raise ValueError("cannot add linear and antilinear parts")
        return AntilinearRep(self.matrix + other.matrix, self.conjugates)

    def __sub__(self, other: "AntilinearRep") -> "AntilinearRep":
        if self.conjugates != other.conjugates:
            raise ValueError("cannot subtract linear and antilinear parts")
        return AntilinearRep(self.matrix - other.matrix, self.conjugates)

    def scale(self, z: complex) -> "AntilinearRep":
        return AntilinearRep(z * self.matrix, self.conjugates)

    def norm(self) -> float:
        # conjugation is isometric, so the operator norm is the matrix norm
        return float(np.linalg.norm(self.matrix, 2))


@dataclass
class HankelRep:
    """Hankel matrix Gamma[k, l] = c_{k+l} of one symbol."""

    gamma: np.ndarray
    source_cutoff: int

    @property
    def size(self) -> int:
        return self.gamma.shape[0]

    def as_antilinear(self) -> AntilinearRep:
        return AntilinearRep(self.gamma, True)

    def square(self) -> np.ndarray:
        """Matrix of the C-linear, Hermitian PSD square H_u^2."""
        return self.gamma @ np.conj(self.gamma)


@dataclass
class SpectralData:
    """Eigendecomposition of the Hankel square."""

    eigenvalues: np.ndarray  # sorted descending
    eigenvectors: np.ndarray  # columns match eigenvalues
    rank: int
    sigmas: np.ndarray  # elementary symmetric functions of retained eigenvalues
    trace_residual: float  # |sum eig - (M + Q)|

    def to_json(self) -> str:
        return json.dumps(
            {
                "eigenvalues": list(map(float, self.eigenvalues)),
                "rank": int(self.rank),
                "sigmas": list(map(float, self.sigmas)),
                "trace_residual": float(self.trace_residual),
            },
            sort_keys=True,
        )


def hankel_matrix(u: FourierSymbol, size: int | None = None) -> HankelRep:
    """Build the size x size section Gamma[k, l] = c_{k+l}.

    The default size equals the cutoff, which captures every nonzero
    entry of the full operator for truncated symbols.
    """
    if size is None:
        size = u.cutoff
    if size < 1:
        raise ValueError("matrix size must be positive")
    pad = np.zeros(2 * size, dtype=np.complex128)
    n = min(u.cutoff, 2 * size - 1)
    pad[:n] = u.coeffs[:n]
    idx = np.arange(size)[:, None] + np.arange(size)[None, :]
    return HankelRep(pad[idx], u.cutoff)


def apply_hankel(rep: HankelRep, h: FourierSymbol) -> FourierSymbol:
    """Antilinear action Gamma conj(h)."""
    if h.cutoff > rep.size:
        raise ValueError("argument cutoff exceeds the matrix section")
    return FourierSymbol(rep.gamma @ np.conj(h.padded(rep.size)))


def toeplitz_matrix(b: TwoSidedSymbol, size: int) -> np.ndarray:
    """Toeplitz section entry[k, j] = b_{k-j}."""
    if size < 1:
        raise ValueError("matrix size must be positive")
    lags = np.arange(size)[:, None] - np.arange(size)[None, :]
    pos = lags - b.kmin
    valid = (pos >= 0) & (pos < b.coeffs.size)
    out = np.zeros((size, size), dtype=np.complex128)
    out[valid] = b.coeffs[pos[valid]]
    return out


def _elementary_symmetric(values: np.ndarray, count: int) -> np.ndarray:
    e = np.zeros(count + 1)
    e[0] = 1.0
    for v in values:
        for j in range(count, 0, -1):
            e[j] += v * e[j - 1]
    return e[1:]


def hankel_square_spectrum(
    u: FourierSymbol,
    size: int | None = None,
    rank_tol: float | None = None,
) -> SpectralData:
    """Hermitian eigendecomposition of Gamma conj(Gamma).

    The numerical rank counts eigenvalues above rank_tol * lambda_max;
    rank_tol defaults to size * machine epsilon.  The elementary
    symmetric functions are accumulated from the retained eigenvalues
    (stable, unlike characteristic-polynomial coefficients).
    """
    rep = hankel_matrix(u, size)
    h2 = rep.square()
    try:
        w, v = np.linalg.eigh(h2)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - diagnostic path
        raise RuntimeError(f"eigensolver failed on the Hankel square: {exc}")
    order = np.argsort(w)[::-1]
    w = w[order]
    v = v[:, order]
    lam_max = float(w[0]) if w.size else 0.0
    if rank_tol is None:
        rank_tol = rep.size * np.finfo(float).eps
    thresh = rank_tol * max(lam_max, 0.0)
    rank = int(np.sum(w > thresh))
    retained = w[:rank]
    sigmas = _elementary_symmetric(retained, min(rank, 8))
    trace_residual = abs(float(np.sum(w)) - (hardy.mass(u) + hardy.momentum(u)))
    return SpectralData(w, v, rank, sigmas, trace_residual)


def hankel_moment(u: FourierSymbol, n: int) -> complex:
    """Invariant J_n = (H_u^n(1) | 1) by iterated antilinear application."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rep = hankel_matrix(u)
    h = np.zeros(rep.size, dtype=np.complex128)
    h[0] = 1.0
    for _ in range(n):
        h = rep.gamma @ np.conj(h)
    return complex(h[0])


def moment_matrix(u: FourierSymbol, n: int) -> np.ndarray:
    """Gram matrix (J_{2(m+n)})_{1<=m,n<=N} of even invariants."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rep = hankel_matrix(u)
    h = np.zeros(rep.size, dtype=np.complex128)
    h[0] = 1.0
    js = {}
    for step in range(1, 4 * n + 1):
        h = rep.gamma @ np.conj(h)
        js[step] = complex(h[0])
    out = np.empty((n, n))
    for m in range(1, n + 1):
        for p in range(1, n + 1):
            out[m - 1, p - 1] = js[2 * (m + p)].real
    return out


def genericity_det(u: FourierSymbol, n: int) -> float:
    """Determinant of the even-invariant Gram matrix; zero on low-rank symbols."""
    return float(np.linalg.det(moment_matrix(u, n)))


def lax_b_operator(u: FourierSymbol, size: int | None = None) -> np.ndarray:
    """Skew-adjoint generator (i/2) H_u^2 - i T_{|u|^2} as a linear matrix."""
    rep = hankel_matrix(u, size)
    t = toeplitz_matrix(hardy.modulus_squared(u), rep.size)
    return 0.5j * rep.square() - 1j * t


def commutator_with_hankel(b: np.ndarray, rep: HankelRep) -> AntilinearRep:
    """[B, H] for linear B and antilinear H: matrix B Gamma - Gamma conj(B)."""
    return AntilinearRep(b @ rep.gamma - rep.gamma @ np.conj(b), True)


def cubic_hankel_residual(u: FourierSymbol, size: int | None = None) -> float:
    """Defect of the cubic-symbol Hankel identity.

    The Hankel operator of the projected cubic product must equal
    T_{|u|^2} H_u + H_u T_{|u|^2} - H_u^3.  For a truncated symbol of
    degree d the identity is exact on a section of size >= 4d + 1,
    which is the default.
    """
    d = u.cutoff - 1
    if size is None:
        size = 4 * d + 1
    cubic = hardy.cubic_nonlinearity(u, 2 * u.cutoff - 1)
    h_cubic = hankel_matrix(cubic, size).as_antilinear()
    rep = hankel_matrix(u, size)
    h = rep.as_antilinear()
    t = AntilinearRep(toeplitz_matrix(hardy.modulus_squared(u), size), False)
    h3 = h.compose(h).compose(h)
    residual = h_cubic - (t.compose(h) + h.compose(t) - h3)
    return residual.norm()
