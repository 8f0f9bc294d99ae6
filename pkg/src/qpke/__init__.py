"""Numerical laboratory for a quantum-public-key encryption scheme built on single-qubit rotations.

Covers the exact protocol model (keys, parity-codeword encryption,
decryption), the symmetric-subspace density operators of repeated public-key
copies with their entropy bounds, the Bayesian projective-measurement attack,
the single-copy symmetry-test attack with its forward-search closed forms,
and seeded Monte Carlo validation of every analytic success probability.
"""

from .protocol import (
    CipherState,
    Codeword,
    PrivateKey,
    ProtocolParams,
    QubitAngle,
    decrypt,
    elementary_angle,
    encode_message,
    encrypt,
    encrypt_bit,
    generate_private_key,
    public_qubit_state,
)
from .symspace import (
    OneWayCheck,
    Spectrum,
    SymmetricDensityOperator,
    binomial_spectrum,
    coefficient_f,
    critical_n,
    eigendecompose,
    holevo_bound_loose,
    holevo_bound_tight,
    jacobi_eigh,
    mixture_density,
    one_way_condition,
    prior_density,
    shannon_entropy,
    von_neumann_entropy,
)
from .bayes import (
    BlochEstimate,
    ImpossibleOutcomeError,
    MeasurementOutcome,
    PosteriorDistribution,
    bloch_estimate,
    bound_U,
    codeword_bound,
    codeword_success,
    evidence,
    information_gain,
    likelihood,
    mean_success,
    optimal_collective,
    outcome_prob_single,
    posterior,
    posterior_density,
    required_codeword_length,
    success_by_key,
    success_given_key,
    success_given_outcome,
)
from .symmetry import (
    PairOutcome,
    PairTableRow,
    average_success_symmetry,
    enumerate_pair_table,
    forward_search_length,
    forward_search_success,
    pair_fidelity,
    pair_success,
    parity_iteration,
)
from .montecarlo import (
    EstimateWithError,
    TrialConfig,
    analytic_success,
    estimate,
    run_bayes_trial,
    run_symmetry_trial,
    sample_measurement,
)

__all__ = [name for name in dir() if not name.startswith("_")]
