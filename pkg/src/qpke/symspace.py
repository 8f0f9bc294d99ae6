"""Density operators of repeated public-key copies in the symmetric Hamming-weight basis.

tau identically prepared copies of a public-key qubit never leave the
(tau+1)-dimensional permutation-symmetric subspace, so the mixture over all
key values is a small real symmetric matrix indexed by Hamming weight.  This
module builds those operators, diagonalizes them, and evaluates the entropy
bounds that cap an eavesdropper's information gain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .protocol import elementary_angle

MAX_TAU = 64
MAX_N = 20

#: numerical-rank threshold, relative to the largest eigenvalue
RANK_RTOL = 1e-10


def coefficient_f(tau: int, l: int, angle: float) -> float:
    """Amplitude weight cos(angle/2)**(tau-l) * sin(angle/2)**l of the weight-l basis state."""
    if not 0 <= l <= tau:
        raise ValueError(f"Hamming weight must lie in [0, {tau}], got {l}")
    half = angle / 2.0
    return math.cos(half) ** (tau - l) * math.sin(half) ** l


@lru_cache(maxsize=64)
def symmetric_state_components(tau: int, n: int) -> np.ndarray:
    """Components of all 2**n repeated-copy states in the Hamming-weight basis.

    Returns an array A of shape (2**n, tau+1) with
    A[k, l] = sqrt(binom(tau, l)) * cos(k*theta/2)**(tau-l) * sin(k*theta/2)**l,
    i.e. row k is the state vector of tau copies of key value k.
    """
    theta = elementary_angle(n)
    half = np.arange(1 << n) * (theta / 2.0)
    weights = np.arange(tau + 1)
    c = np.cos(half)[:, None]
    s = np.sin(half)[:, None]
    # 0.0 ** 0 evaluates to 1.0, which is the correct endpoint value
    comps = c ** (tau - weights)[None, :] * s ** weights[None, :]
    comps *= np.sqrt([math.comb(tau, int(l)) for l in weights])
    comps.flags.writeable = False
    return comps


@dataclass(frozen=True)
class SymmetricDensityOperator:
    """(tau+1) x (tau+1) real symmetric density matrix in the Hamming-weight basis."""

    tau: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.shape != (self.tau + 1, self.tau + 1):
            raise ValueError(f"expected shape {(self.tau + 1, self.tau + 1)}, got {m.shape}")
        if np.max(np.abs(m - m.T)) > 1e-14:
            raise ValueError("matrix is not symmetric to 1e-14")
        if abs(np.trace(m) - 1.0) > 1e-12:
            raise ValueError(f"trace must be 1 to 1e-12, got {np.trace(m)}")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.tau + 1


def mixture_density(weights: np.ndarray, tau: int, n: int) -> SymmetricDensityOperator:
    """Density operator of tau copies mixed over key values with the given weights.

    ``weights`` is a probability vector over Z_{2**n}.  Entries are accumulated
    with pairwise summation over the 2**n key values to limit round-off.
    """
    _check_ranges(tau, n)
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (1 << n,):
        raise ValueError(f"weights must have shape ({1 << n},), got {weights.shape}")
    comps = symmetric_state_components(tau, n)
    dim = tau + 1
    mat = np.empty((dim, dim))
    for l in range(dim):
        wl = weights * comps[:, l]
        for lp in range(l, dim):
            # np.sum uses pairwise accumulation
            mat[l, lp] = mat[lp, l] = np.sum(wl * comps[:, lp])
    return SymmetricDensityOperator(tau, mat)


def prior_density(tau: int, n: int) -> SymmetricDensityOperator:
    """A-priori density operator of tau copies, uniform over all 2**n key values."""
    _check_ranges(tau, n)
    size = 1 << n
    return mixture_density(np.full(size, 1.0 / size), tau, n)


def _check_ranges(tau: int, n: int) -> None:
    if not 1 <= tau <= MAX_TAU:
        raise ValueError(f"copy count must lie in [1, {MAX_TAU}], got {tau}")
    if not 1 <= n <= MAX_N:
        raise ValueError(f"resolution exponent must lie in [1, {MAX_N}], got {n}")


def jacobi_eigh(matrix: np.ndarray, tol: float = 1e-12, max_sweeps: int = 60) -> tuple[np.ndarray, np.ndarray]:
    """Diagonalize a real symmetric matrix by cyclic Jacobi rotations.

    Sweeps annihilate every off-diagonal pair in turn until the off-diagonal
    Frobenius norm drops below ``tol``.

    Returns
    -------
    (values, vectors) : eigenvalues in descending order and the matching
        orthonormal eigenvectors as columns.

    Raises
    ------
    RuntimeError
        If the off-diagonal norm has not converged after ``max_sweeps`` sweeps.
    """
    a = np.array(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix must be square, got shape {a.shape}")
    if np.max(np.abs(a - a.T)) > 1e-12:
        raise ValueError("matrix must be symmetric")
    dim = a.shape[0]
    vecs = np.eye(dim)
    if dim == 1:
        return a.diagonal().copy(), vecs

    diag_mask = ~np.eye(dim, dtype=bool)
    for _ in range(max_sweeps):
        # norm of the off-diagonal part, measured directly (a difference of
        # squared sums would hit a sqrt(eps) cancellation floor)
        off = math.sqrt(np.sum(a[diag_mask] ** 2))
        if off < tol:
            break
        for p in range(dim - 1):
            for q in range(p + 1, dim):
                apq = a[p, q]
                if abs(apq) < tol / (dim * dim):
                    continue
                # classic two-sided Givens rotation (Rutishauser angle choice)
                diff = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, diff) / (abs(diff) + math.hypot(1.0, diff))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0
                vec_p = vecs[:, p].copy()
                vec_q = vecs[:, q].copy()
                vecs[:, p] = c * vec_p - s * vec_q
                vecs[:, q] = s * vec_p + c * vec_q
    else:
        raise RuntimeError(f"Jacobi diagonalization did not converge in {max_sweeps} sweeps")

    values = a.diagonal().copy()
    order = np.argsort(values)[::-1]
    return values[order], vecs[:, order]


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues of a density operator, descending, with the numerical rank."""

    eigenvalues: np.ndarray
    rank: int

    def __post_init__(self):
        vals = np.asarray(self.eigenvalues, dtype=float)
        if abs(np.sum(vals) - 1.0) > 1e-10:
            raise ValueError(f"eigenvalues must sum to 1 to 1e-10, got {np.sum(vals)}")
        if np.min(vals) < -1e-10 or np.max(vals) > 1.0 + 1e-10:
            raise ValueError("eigenvalues must lie in [-1e-10, 1 + 1e-10]")
        vals.flags.writeable = False
        object.__setattr__(self, "eigenvalues", vals)


def eigendecompose(rho: SymmetricDensityOperator, tol: float = 1e-12) -> Spectrum:
    """Full spectrum of a density operator via cyclic Jacobi diagonalization."""
    values, _ = jacobi_eigh(rho.matrix, tol=tol)
    rank = int(np.sum(values > RANK_RTOL * max(values[0], 0.0)))
    return Spectrum(values, rank)


def shannon_entropy(probs: np.ndarray) -> float:
    """Shannon entropy in bits, with 0 * log 0 = 0."""
    p = np.asarray(probs, dtype=float)
    p = p[p > 0.0]
    return float(-np.sum(p * np.log2(p)))


def von_neumann_entropy(rho: SymmetricDensityOperator) -> float:
    """Von Neumann entropy in bits: Shannon entropy of the eigenvalue spectrum."""
    values = eigendecompose(rho).eigenvalues
    return shannon_entropy(np.clip(values, 0.0, None))


def binomial_spectrum(tau: int) -> np.ndarray:
    """Reference spectrum binom(tau, i) / 2**tau, i = 0..tau, in descending order."""
    vals = np.array([math.comb(tau, i) for i in range(tau + 1)], dtype=float) / 2.0 ** tau
    return np.sort(vals)[::-1]


def holevo_bound_loose(tau: int) -> float:
    """Dimension bound on extractable information from tau copies: log2(tau + 1) bits."""
    if tau < 1:
        raise ValueError(f"copy count must be >= 1, got {tau}")
    return math.log2(tau + 1)


def holevo_bound_tight(tau: int) -> float:
    """Gaussian bound on the binomial-spectrum entropy: (1/2) log2(tau) + (1/2) log2(pi e / 2) bits."""
    if tau < 1:
        raise ValueError(f"copy count must be >= 1, got {tau}")
    return 0.5 * math.log2(tau) + 0.5 * math.log2(math.pi * math.e / 2.0)


class OneWayCheck(NamedTuple):
    margin: float
    satisfied: bool


def one_way_condition(n: int, tau: int, guard: float = 4.0) -> OneWayCheck:
    """Margin of the one-way requirement n >> log2(tau + 1).

    Returns the margin n - log2(tau + 1) and whether it clears the guard band
    (default 4 bits).
    """
    margin = n - math.log2(tau + 1)
    return OneWayCheck(margin, margin >= guard)


def critical_n(tau: int, tol: float = 1e-12, max_n: int = MAX_N) -> int | None:
    """Smallest n at which the prior density operator stops depending on n.

    Detected by comparing consecutive resolutions elementwise; returns None if
    no stabilization is found below ``max_n`` (unresolved).
    """
    if not 1 <= tau <= MAX_TAU:
        raise ValueError(f"copy count must lie in [1, {MAX_TAU}], got {tau}")
    previous = prior_density(tau, 1).matrix
    for n in range(1, max_n):
        current = prior_density(tau, n + 1).matrix
        if np.max(np.abs(current - previous)) < tol:
            return n
        previous = current
    return None
