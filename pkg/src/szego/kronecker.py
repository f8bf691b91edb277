"""Rank detection and rational recovery from Fourier coefficients.

A symbol has Hankel rank N exactly when its coefficients satisfy an
order-N linear recurrence whose characteristic roots lie in the open
unit disc (roots at the origin encode a polynomial part).  Recovery
proceeds in three steps: the recurrence vector is the least-squares
nullspace of the shifted-coefficient matrix, its roots are clustered
into poles with multiplicities, and a confluent partial-fraction fit
returns the numerator.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import comb

import numpy as np
from numpy.polynomial import polynomial as npoly

from szego import hankel
from szego.hardy import FourierSymbol
from szego.rational import RationalSymbol

CLUSTER_TOL = 1e-6
DISC_MARGIN = 1e-10


class RankMismatchError(RuntimeError):
    """The shifted-coefficient matrix has no one-dimensional nullspace."""


class NotHardyError(RuntimeError):
    """A recovered recurrence root lies on or outside the unit circle."""


@dataclass
class RecurrenceModel:
    """Order-N recurrence sum_l c_l u(k+l) = 0 and its clustered roots."""

    order: int
    coefficients: np.ndarray  # normalized, ||c|| = 1
    roots: np.ndarray  # distinct clustered roots
    multiplicities: np.ndarray

    def to_json(self) -> str:
        return json.dumps(
            {
                "order": int(self.order),
                "coefficients": [[z.real, z.imag] for z in self.coefficients],
                "roots": [[z.real, z.imag] for z in self.roots],
                "multiplicities": [int(m) for m in self.multiplicities],
            },
            sort_keys=True,
        )


@dataclass
class RecoveryResult:
    symbol: RationalSymbol
    model: RecurrenceModel
    residual: float  # coefficient-reproduction error of the fitted symbol

    def report_json(self) -> str:
        obj = json.loads(self.model.to_json())
        obj["residual"] = float(self.residual)
        return json.dumps(obj, sort_keys=True)


def numerical_rank(u: FourierSymbol, size: int | None = None,
                   tol: float | None = None) -> int:
    """Rank of the Hankel section by singular values above tol * sigma_max."""
    rep = hankel.hankel_matrix(u, size)
    sv = np.linalg.svd(rep.gamma, compute_uv=False)
    if tol is None:
        tol = rep.size * np.finfo(float).eps
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.sum(sv > tol * sv[0]))


def _cluster_roots(roots: np.ndarray):
    """Greedy clustering of near-coincident roots into confluent groups."""
    remaining = list(roots)
    groups = []
    while remaining:
        seed = remaining.pop(0)
        members = [seed]
        scale = max(1.0, abs(seed))
        keep = []
        for r in remaining:
            if abs(r - seed) <= CLUSTER_TOL * scale:
                members.append(r)
            else:
                keep.append(r)
        remaining = keep
        groups.append((np.mean(members), len(members)))
    centers = np.array([g[0] for g in groups])
    mults = np.array([g[1] for g in groups], dtype=int)
    order = np.argsort(-np.abs(centers))
    return centers[order], mults[order]


def _confluent_basis(roots, mults, count: int) -> np.ndarray:
    """Columns binom(k+m-1, m-1) p^k for p != 0; delta columns for p = 0."""
    k = np.arange(count)
    cols = []
    for p, mult in zip(roots, mults):
        if p == 0:
            for m in range(mult):
                col = np.zeros(count, dtype=np.complex128)
                if m < count:
                    col[m] = 1.0
                cols.append(col)
        else:
            for m in range(1, mult + 1):
                weights = np.array([comb(kk + m - 1, m - 1) for kk in k], dtype=float)
                cols.append(weights * p**k)
    return np.stack(cols, axis=1)


def _assemble_symbol(roots, mults, amplitudes) -> RationalSymbol:
    denom = np.array([1.0 + 0.0j])
    for p, mult in zip(roots, mults):
        if p == 0:
            continue
        factor = np.array([1.0, -p])
        for _ in range(mult):
            denom = npoly.polymul(denom, factor)
    numer = np.zeros(1, dtype=np.complex128)
    idx = 0
    for p, mult in zip(roots, mults):
        if p == 0:
            # polynomial part: amplitudes multiply z^m, times the full denominator
            for m in range(mult):
                term = np.zeros(m + 1, dtype=np.complex128)
                term[m] = amplitudes[idx]
                numer = npoly.polyadd(numer, npoly.polymul(term, denom))
                idx += 1
        else:
            for m in range(1, mult + 1):
                # amplitude / (1 - p z)^m times the remaining factors
                rest = np.array([1.0 + 0.0j])
                for pp, mm in zip(roots, mults):
                    if pp == 0:
                        continue
                    power = mm - m if pp == p else mm
                    for _ in range(power):
                        rest = npoly.polymul(rest, np.array([1.0, -pp]))
                numer = npoly.polyadd(numer, amplitudes[idx] * rest)
                idx += 1
    poles = np.concatenate(
        [np.repeat(p, mult) for p, mult in zip(roots, mults)]
    ) if len(roots) else np.array([], dtype=np.complex128)
    return RationalSymbol(numer, denom, poles=poles)


def recover_full(coeffs, order: int, rcond: float = 1e-4) -> RecoveryResult:
    """Full recovery pipeline returning the symbol, model and residual.

    The recurrence vector is the singular vector of the smallest
    singular value of the (K - N) x (N + 1) shifted-coefficient
    matrix; a one-dimensional nullspace is required, with rcond
    controlling the separation test between the two smallest singular
    values.
    """
    c = np.asarray(coeffs, dtype=np.complex128)
    k = c.size
    n = int(order)
    if n < 1:
        raise ValueError("order must be at least 1")
    if k < 2 * n + 2:
        raise ValueError("need at least 2N + 2 coefficients")
    shifted = np.empty((k - n, n + 1), dtype=np.complex128)
    for r in range(k - n):
        shifted[r] = c[r : r + n + 1]
    _, sv, vh = np.linalg.svd(shifted)
    if sv[0] == 0.0:
        raise RankMismatchError("zero coefficient data")
    if n + 1 <= sv.size and sv[-2] <= max(1e-13 * sv[0], 10 * np.finfo(float).eps):
        raise RankMismatchError("nullspace dimension exceeds one; rank below N")
    if sv[-1] > rcond * sv[-2]:
        raise RankMismatchError("no one-dimensional nullspace; rank above N")
    cvec = np.conj(vh[-1])
    cvec = cvec / np.linalg.norm(cvec)

    # leading coefficients may vanish when roots at infinity would appear;
    # that again signals rank mismatch
    lead = np.max(np.abs(cvec))
    degree = n
    while degree > 0 and abs(cvec[degree]) < 1e-10 * lead:
        degree -= 1
    if degree < n:
        raise RankMismatchError("recurrence order dropped below N")
    raw_roots = np.roots(cvec[degree::-1])
    if np.any(np.abs(raw_roots) >= 1.0 - DISC_MARGIN):
        raise NotHardyError("recurrence root on or outside the unit circle")
    roots, mults = _cluster_roots(raw_roots)

    basis = _confluent_basis(roots, mults, k)
    amplitudes, *_ = np.linalg.lstsq(basis, c, rcond=None)
    residual = float(np.linalg.norm(basis @ amplitudes - c))
    model = RecurrenceModel(n, cvec, roots, mults)
    return RecoveryResult(_assemble_symbol(roots, mults, amplitudes), model, residual)


def recover_rational(coeffs, order: int) -> RationalSymbol:
    """Recover A/B from coefficients generated by a rank-N symbol."""
    return recover_full(coeffs, order).symbol


def _match_pole_sets(truth: np.ndarray, found: np.ndarray) -> float:
    """Max pairing error over the best assignment of two pole multisets."""
    from itertools import permutations

    if truth.size != found.size:
        return float("inf")
    best = float("inf")
    for perm in permutations(range(truth.size)):
        err = float(np.max(np.abs(truth - found[list(perm)])))
        best = min(best, err)
    return best


def roundtrip_check(state, cutoff: int, noise: float = 0.0, seed: int = 0,
                    rank_cutoff: int = 256, rank_tol: float = 1e-8) -> dict:
    """Forward-generate coefficients, recover, and tabulate pole errors.

    With coefficient noise the pole error is reported, not asserted;
    the recovery is the least-squares reading of the recurrence.  The
    rank of the recovered symbol is measured on a long expansion so
    the geometric tail sits far below rank_tol.
    """
    from szego.rational import RationalState, rational_to_fourier

    if not isinstance(state, RationalState):
        raise TypeError("expected a RationalState")
    u = rational_to_fourier(state, cutoff)
    coeffs = u.coeffs.copy()
    if noise:
        rng = np.random.default_rng(seed)
        coeffs = coeffs + noise * (
            rng.standard_normal(cutoff) + 1j * rng.standard_normal(cutoff)
        )
    _, truth = state.embedded()
    result = recover_full(coeffs, state.rank)
    recovered = result.symbol.poles
    return {
        "pole_error": _match_pole_sets(np.sort_complex(truth),
                                       np.sort_complex(recovered)),
        "residual": result.residual,
        "multiplicities": result.model.multiplicities.tolist(),
        "recovered_rank": numerical_rank(
            result.symbol.to_fourier(rank_cutoff), tol=rank_tol
        ),
    }
