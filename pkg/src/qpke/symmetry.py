"""Single-copy symmetry-test attack and collective forward-search closed forms.

The symmetry test pairs each cipher qubit with one public-key copy, measures
both in a random shared basis, and reads the parity of the guessed bits; the
verdict on a pair survives when both single-qubit outcomes are right or both
are wrong.  The forward-search expressions cover the collective variant that
consumes all 2T copies; only its success probability is modeled here.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass


@dataclass(frozen=True)
class PairOutcome:
    """Number of wrong single-qubit outcomes within one public/cipher pair."""

    wrong: int

    def __post_init__(self):
        if self.wrong not in (0, 1, 2):
            raise ValueError(f"a pair has 0, 1, or 2 wrong outcomes, got {self.wrong}")

    @property
    def verdict_correct(self) -> bool:
        """The parallel/antiparallel verdict is right iff the wrong count is even."""
        return self.wrong % 2 == 0


def pair_fidelity(omega: float) -> float:
    """Probability cos^2(omega/2) of a correct single-qubit outcome at basis offset omega."""
    return math.cos(omega / 2.0) ** 2


def pair_success(omega: float) -> float:
    """Probability F^2 + (1-F)^2 that a pair verdict is right (both outcomes right or both wrong)."""
    f = pair_fidelity(omega)
    return f * f + (1.0 - f) * (1.0 - f)


def average_success_symmetry(s: int) -> float:
    """Parity-guess probability 1/2 + 2**-(s+1) of the symmetry test, averaged over bases and keys."""
    if s < 1:
        raise ValueError(f"codeword length must be >= 1, got {s}")
    return 0.5 + 2.0 ** -(s + 1)


def forward_search_success(T: int, s: int) -> float:
    """Parity-recovery probability 1/2 + (1/2)(1 - 1/(2T))**s of the collective forward search."""
    if T < 1:
        raise ValueError(f"T must be >= 1, got {T}")
    if s < 1:
        raise ValueError(f"codeword length must be >= 1, got {s}")
    return 0.5 + 0.5 * (1.0 - 1.0 / (2.0 * T)) ** s


def forward_search_length(epsilon: float, T: int) -> int:
    """Codeword length ceil(T |1 + log2(eps)|) that pins the forward-search advantage below epsilon."""
    if not 0.0 < epsilon <= 0.5:
        raise ValueError(f"security parameter must lie in (0, 1/2], got {epsilon}")
    if T < 1:
        raise ValueError(f"T must be >= 1, got {T}")
    return math.ceil(T * abs(1.0 + math.log2(epsilon)))


def parity_iteration(q1: float, s: int) -> float:
    """Chain the per-position success q1 through s positions of a parity guess.

    Iterates Q(s) = Q(1) Q(s-1) + (1 - Q(1))(1 - Q(s-1)); equals
    1/2 + (2 q1 - 1)**s / 2 in closed form.
    """
    if not 0.0 <= q1 <= 1.0:
        raise ValueError(f"per-position success must lie in [0, 1], got {q1}")
    if s < 1:
        raise ValueError(f"codeword length must be >= 1, got {s}")
    q = q1
    for _ in range(s - 1):
        q = q1 * q + (1.0 - q1) * (1.0 - q)
    return q


@dataclass(frozen=True)
class PairTableRow:
    """One true/false outcome combination for the two-pair case (s = 2)."""

    public: tuple[str, str]
    cipher: tuple[str, str]
    e1: int
    e2: int
    e: int
    success: bool


def enumerate_pair_table() -> list[PairTableRow]:
    """All 16 true/false outcome combinations for s = 2 with their wrong counts.

    The parity guess succeeds exactly when the total wrong count e is even;
    8 of the 16 combinations qualify.
    """
    rows = []
    for pub1, pub2, ciph1, ciph2 in itertools.product("tf", repeat=4):
        e1 = (pub1 == "f") + (ciph1 == "f")
        e2 = (pub2 == "f") + (ciph2 == "f")
        e = e1 + e2
        rows.append(
            PairTableRow(
                public=(pub1, pub2),
                cipher=(ciph1, ciph2),
                e1=e1,
                e2=e2,
                e=e,
                success=e % 2 == 0,
            )
        )
    return rows
