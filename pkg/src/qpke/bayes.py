"""State estimation from independent projective measurements, and what it buys an eavesdropper.

The attacker splits 2T public-key copies evenly between the z and x bases,
counts the "0" outcomes per basis, and updates a uniform prior over the 2**n
key values by Bayes' rule.  The posterior yields an estimated Bloch vector,
the measurement basis for the cipher qubit, and from there per-bit and
per-codeword success probabilities together with their closed-form bounds.

All grid computations sum exactly over Z_{2**n}; cost is O(2**n * T**2), so
the resolution exponent is capped at n = 14 here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .protocol import elementary_angle
from .symspace import SymmetricDensityOperator, mixture_density

MAX_N = 14

#: below this estimated-Bloch-vector norm the attacker has no preferred basis
DEGENERATE_NORM = 1e-12

#: switch binomial likelihoods to log-space evaluation beyond this T
LOG_SPACE_T = 30


class ImpossibleOutcomeError(ValueError):
    """Raised when conditioning on an outcome that has zero probability."""


@dataclass(frozen=True)
class MeasurementOutcome:
    """Counts of "0" outcomes from T measurements in each of the z and x bases."""

    t0z: int
    t0x: int

    def __post_init__(self):
        if self.t0z < 0 or self.t0x < 0:
            raise ValueError(f"outcome counts must be >= 0, got {self}")


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_N:
        raise ValueError(f"resolution exponent must lie in [1, {MAX_N}], got {n}")


@lru_cache(maxsize=32)
def _prob0_tables(n: int) -> tuple[np.ndarray, np.ndarray]:
    # P("0" | k) in the z and x bases for every key value k.  Structural
    # zeros/ones (orthogonal or identical states) must be exact: the smallest
    # genuine probability at n <= 14 is sin^2(pi/2^15) ~ 9e-9, so snapping
    # below 1e-30 cannot touch a real value.
    half = np.arange(1 << n) * (elementary_angle(n) / 2.0)
    p0z = np.cos(half) ** 2
    p0x = np.cos(np.pi / 4.0 - half) ** 2
    for p in (p0z, p0x):
        p[p < 1e-30] = 0.0
        p[p > 1.0 - 1e-15] = 1.0
        p.flags.writeable = False
    return p0z, p0x


def outcome_prob_single(basis: str, outcome: int, k: int, n: int) -> float:
    """Probability of one outcome when measuring the key-k state in the z or x basis.

    P("0") = cos^2(beta*pi/4 - k*theta/2) with beta = 0 for z and 1 for x;
    P("1") is its exact complement.
    """
    if basis not in ("z", "x"):
        raise ValueError(f"basis must be 'z' or 'x', got {basis!r}")
    if outcome not in (0, 1):
        raise ValueError(f"outcome must be 0 or 1, got {outcome}")
    _check_n(n)
    if not 0 <= k < (1 << n):
        raise ValueError(f"key integer must lie in [0, 2**{n}), got {k}")
    p0z, p0x = _prob0_tables(n)
    p0 = float(p0z[k] if basis == "z" else p0x[k])
    return p0 if outcome == 0 else 1.0 - p0


def _binomial_pmf_rows(T: int, p0: np.ndarray) -> np.ndarray:
    """PMF matrix of shape (T+1, len(p0)): row c is P(count = c) for each success probability."""
    counts = np.arange(T + 1)[:, None]
    if T <= LOG_SPACE_T:
        comb = np.array([math.comb(T, c) for c in range(T + 1)], dtype=float)[:, None]
        return comb * p0[None, :] ** counts * (1.0 - p0)[None, :] ** (T - counts)
    # log-space with log-gamma binomials; p0 in {0, 1} handled by masks
    log_comb = np.array(
        [math.lgamma(T + 1) - math.lgamma(c + 1) - math.lgamma(T - c + 1) for c in range(T + 1)]
    )[:, None]
    interior = (p0 > 0.0) & (p0 < 1.0)
    pmf = np.zeros((T + 1, p0.size))
    if np.any(interior):
        p = p0[interior]
        logs = log_comb + counts * np.log(p)[None, :] + (T - counts) * np.log1p(-p)[None, :]
        pmf[:, interior] = np.exp(logs)
    pmf[0, p0 == 0.0] = 1.0
    pmf[T, p0 == 1.0] = 1.0
    return pmf


@lru_cache(maxsize=16)
def _likelihood_grid(T: int, n: int) -> np.ndarray:
    """Joint outcome likelihoods, shape (T+1, T+1, 2**n): [t0z, t0x, k]."""
    p0z, p0x = _prob0_tables(n)
    pz = _binomial_pmf_rows(T, p0z)
    px = _binomial_pmf_rows(T, p0x)
    grid = pz[:, None, :] * px[None, :, :]
    grid.flags.writeable = False
    return grid


def likelihood(outcome: MeasurementOutcome, k: int, T: int, n: int) -> float:
    """Probability of the outcome pair (t0z, t0x) given the key-k state.

    Product of two binomial likelihoods, one per measurement basis.
    """
    _check_n(n)
    if T < 0:
        raise ValueError(f"T must be >= 0, got {T}")
    if outcome.t0z > T or outcome.t0x > T:
        raise ValueError(f"outcome counts exceed T={T}: {outcome}")
    if not 0 <= k < (1 << n):
        raise ValueError(f"key integer must lie in [0, 2**{n}), got {k}")
    return float(_likelihood_grid(T, n)[outcome.t0z, outcome.t0x, k])


def evidence(outcome: MeasurementOutcome, T: int, n: int) -> float:
    """Marginal probability of the outcome pair under the uniform key prior."""
    _check_n(n)
    if outcome.t0z > T or outcome.t0x > T:
        raise ValueError(f"outcome counts exceed T={T}: {outcome}")
    return float(np.mean(_likelihood_grid(T, n)[outcome.t0z, outcome.t0x, :]))


@dataclass(frozen=True)
class PosteriorDistribution:
    """Probabilities over key values after conditioning on a measurement outcome."""

    probabilities: np.ndarray
    outcome: MeasurementOutcome
    T: int
    n: int

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=float)
        if p.shape != (1 << self.n,):
            raise ValueError(f"expected {1 << self.n} probabilities, got shape {p.shape}")
        if np.min(p) < 0.0 or np.max(p) > 1.0 + 1e-12:
            raise ValueError("posterior entries must lie in [0, 1]")
        if abs(np.sum(p) - 1.0) > 1e-12:
            raise ValueError(f"posterior must sum to 1 to 1e-12, got {np.sum(p)}")
        p.flags.writeable = False
        object.__setattr__(self, "probabilities", p)


def posterior(outcome: MeasurementOutcome, T: int, n: int) -> PosteriorDistribution:
    """Bayes update of the uniform key prior on an outcome pair.

    Raises
    ------
    ImpossibleOutcomeError
        If the outcome has zero probability under every key value.
    """
    _check_n(n)
    if outcome.t0z > T or outcome.t0x > T:
        raise ValueError(f"outcome counts exceed T={T}: {outcome}")
    row = _likelihood_grid(T, n)[outcome.t0z, outcome.t0x, :]
    total = np.sum(row)
    if total <= 0.0:
        raise ImpossibleOutcomeError(f"outcome {outcome} has zero evidence at T={T}, n={n}")
    return PosteriorDistribution(row / total, outcome, T, n)


def information_gain(T: int, n: int) -> float:
    """Average Shannon-entropy drop of the key-value distribution, in bits.

    n minus the expected posterior entropy over the full outcome grid; lies in
    [0, n], and is 0 for T = 0.
    """
    _check_n(n)
    if T < 0:
        raise ValueError(f"T must be >= 0, got {T}")
    grid = _likelihood_grid(T, n)
    q = grid.mean(axis=2)
    size = 1 << n
    gain = float(n)
    for iz in range(T + 1):
        for ix in range(T + 1):
            if q[iz, ix] <= 0.0:
                continue
            p = grid[iz, ix, :] / (size * q[iz, ix])
            mask = p > 0.0
            gain += q[iz, ix] * float(np.sum(p[mask] * np.log2(p[mask])))
    return gain


def posterior_density(tau: int, post: PosteriorDistribution) -> SymmetricDensityOperator:
    """Density operator of tau copies re-weighted by a measurement posterior."""
    return mixture_density(post.probabilities, tau, post.n)


@dataclass(frozen=True)
class BlochEstimate:
    """Posterior-mean Bloch vector (z, x) on the x-z great circle; generally shorter than 1."""

    z: float
    x: float

    def __post_init__(self):
        if self.norm > 1.0 + 1e-12:
            raise ValueError(f"Bloch estimate norm exceeds 1: {self.norm}")

    @property
    def norm(self) -> float:
        return math.hypot(self.z, self.x)


def bloch_estimate(post: PosteriorDistribution) -> BlochEstimate:
    """Posterior-averaged Bloch vector sum_k p(k) (cos k*theta, sin k*theta)."""
    angles = np.arange(1 << post.n) * elementary_angle(post.n)
    z = float(np.sum(post.probabilities * np.cos(angles)))
    x = float(np.sum(post.probabilities * np.sin(angles)))
    return BlochEstimate(z, x)


def success_given_outcome(k: int, post: PosteriorDistribution) -> float:
    """Probability of guessing the encrypted bit by measuring along the estimated Bloch vector.

    Equals 1/2 + (est . actual) / (2 |est|); a vanishing estimate means a pure
    guess, by convention 1/2.
    """
    if not 0 <= k < (1 << post.n):
        raise ValueError(f"key integer must lie in [0, 2**{post.n}), got {k}")
    est = bloch_estimate(post)
    if est.norm < DEGENERATE_NORM:
        return 0.5
    angle = k * elementary_angle(post.n)
    return 0.5 + (est.z * math.cos(angle) + est.x * math.sin(angle)) / (2.0 * est.norm)


def _success_table(T: int, n: int) -> np.ndarray:
    """Per-key success probabilities, shape (2**n,), averaged over the outcome grid."""
    grid = _likelihood_grid(T, n)
    size = 1 << n
    angles = np.arange(size) * elementary_angle(n)
    cos_a = np.cos(angles)
    sin_a = np.sin(angles)
    flat = grid.reshape(-1, size)
    totals = flat.sum(axis=1)
    est_z = flat @ cos_a
    est_x = flat @ sin_a
    norms = np.hypot(est_z, est_x)
    possible = totals > 0.0
    est_z[possible] /= totals[possible]
    est_x[possible] /= totals[possible]
    norms[possible] /= totals[possible]
    directed = possible & (norms >= DEGENERATE_NORM)
    success = np.full((flat.shape[0], size), 0.5)
    success[directed] = 0.5 + (
        np.outer(est_z[directed], cos_a) + np.outer(est_x[directed], sin_a)
    ) / (2.0 * norms[directed][:, None])
    return np.einsum("ok,ok->k", flat, success)


def success_given_key(k: int, T: int, n: int) -> float:
    """Per-key bit-recovery probability: outcome-weighted success of the estimate basis."""
    _check_n(n)
    if not 0 <= k < (1 << n):
        raise ValueError(f"key integer must lie in [0, 2**{n}), got {k}")
    return float(_success_table(T, n)[k])


def success_by_key(T: int, n: int) -> np.ndarray:
    """Per-key bit-recovery probabilities for every key value (copy of the internal table)."""
    _check_n(n)
    return _success_table(T, n).copy()


def mean_success(T: int, n: int) -> float:
    """Bit-recovery probability averaged over the uniform key ensemble."""
    _check_n(n)
    return float(np.mean(_success_table(T, n)))


def bound_U(T: int) -> float:
    """Empirical cap 1 - 1/(6T) on the ensemble-average bit-recovery probability (T > 1)."""
    if T <= 1:
        raise ValueError(f"bound requires T > 1, got {T}")
    return 1.0 - 1.0 / (6.0 * T)


def optimal_collective(T: int) -> float:
    """Best possible state-estimation success with collective measurements on 2T copies.

    1/2 + 2**-(2T+1) * sum_i sqrt(binom(2T, i) binom(2T, i+1)); approaches
    1 - 1/(8T) for large T.
    """
    if T < 1:
        raise ValueError(f"T must be >= 1, got {T}")
    m = 2 * T
    total = sum(math.sqrt(math.comb(m, i) * math.comb(m, i + 1)) for i in range(m))
    return 0.5 + total / 2.0 ** (m + 1)


def codeword_success(p_bit: float, s: int) -> float:
    """Probability of guessing the parity of s independent bits, each recovered with probability p_bit.

    The guess survives any even number of bit errors:
    sum over even error counts a of binom(s, a) (1-p)**a p**(s-a).
    """
    if not 0.0 <= p_bit <= 1.0:
        raise ValueError(f"bit success probability must lie in [0, 1], got {p_bit}")
    if s < 1:
        raise ValueError(f"codeword length must be >= 1, got {s}")
    return sum(
        math.comb(s, a) * (1.0 - p_bit) ** a * p_bit ** (s - a)
        for a in range(0, s + 1, 2)
    )


def codeword_bound(T: int, s: int) -> float:
    """Closed-form cap 1/2 + (1/2)(1 - 1/(3T))**s on the parity-guess probability (T > 1)."""
    if T <= 1:
        raise ValueError(f"bound requires T > 1, got {T}")
    if s < 1:
        raise ValueError(f"codeword length must be >= 1, got {s}")
    return 0.5 + 0.5 * (1.0 - 1.0 / (3.0 * T)) ** s


def required_codeword_length(epsilon: float, T: int) -> tuple[int, int]:
    """Codeword lengths that pin the parity-guess advantage below epsilon.

    Returns (exact, simple): the exact requirement
    ceil(|1 + log2(eps)| / |log2((3T-1)/(3T))|) and the weaker but simpler
    ceil(3T |1 + log2(eps)|), which always dominates it.
    """
    if not 0.0 < epsilon <= 0.5:
        raise ValueError(f"security parameter must lie in (0, 1/2], got {epsilon}")
    if T <= 1:
        raise ValueError(f"requires T > 1, got {T}")
    numerator = abs(1.0 + math.log2(epsilon))
    denominator = abs(math.log2((3.0 * T - 1.0) / (3.0 * T)))
    s_exact = math.ceil(numerator / denominator)
    s_simple = math.ceil(3.0 * T * numerator)
    return s_exact, s_simple
