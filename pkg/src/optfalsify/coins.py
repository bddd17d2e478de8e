"""Falsification of random generators.

A declared generator is a pure state plus a canonical-basis observation:
the biased coin sqrt(p)|0> + sqrt(1-p) e^{i phi}|1>, or its N-ary
generalization.  Declaring the full state makes the generator falsifiable:
the projector onto the complement of the declared vector fires with
positive probability exactly when the source emits something else.  A
classical non-deterministic coin admits no such test: every outcome has
positive probability unless p is 0 or 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    DimensionMismatchError,
    NotDeterministicError,
    OutOfRangeError,
)
from .falsification import (
    FalsificationTest,
    SupportHypothesis,
    falsification_probability,
    support_falsification_test,
)
from .linalg import DEFAULT_RANK_TOL
from .quantum import Effect, QuantumState, born_probability

# Campaign trials consume variates of a counter-based stream keyed by the
# master seed, so trial i's uniform is a keyed hash of i: reproducible,
# independent of execution order, and cheap to draw in bulk.


def seeded_stream(master_seed: int) -> np.random.Generator:
    if master_seed < 0:
        raise OutOfRangeError("seed must be a non-negative integer")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(master_seed)))


def campaign_uniforms(master_seed: int, n_trials: int) -> np.ndarray:
    """Per-trial uniforms u_0 .. u_{n-1}; u_i depends only on (seed, i)."""
    if n_trials < 1:
        raise OutOfRangeError("n_trials must be at least 1")
    return seeded_stream(master_seed).random(n_trials)


@dataclass(frozen=True, eq=False)
class CoinSetup:
    """Biased quantum coin: sqrt(p)|0> + sqrt(1-p) e^{i phi} |1>."""

    p: float
    phi: float = 0.0

    def __post_init__(self) -> None:
        if not (np.isfinite(self.p) and 0.0 <= self.p <= 1.0):
            raise OutOfRangeError(f"coin bias p={self.p!r} outside [0, 1]")
        if not np.isfinite(self.phi):
            raise OutOfRangeError("coin phase must be finite")

    @property
    def dim(self) -> int:
        return 2

    @property
    def state_vector(self) -> np.ndarray:
        return np.array(
            [np.sqrt(self.p), np.sqrt(1.0 - self.p) * np.exp(1j * self.phi)],
            dtype=complex,
        )

    def state(self) -> QuantumState:
        return QuantumState.pure(self.state_vector)

    def observation_test(self) -> tuple[Effect, ...]:
        """Canonical-basis readout whose outcome statistics are (p, 1-p)."""
        return _canonical_observation(self.dim)


@dataclass(frozen=True, eq=False)
class NaryGenerator:
    """N-outcome generator: sum_n sqrt(p_n) e^{i phi_n} |n>."""

    probs: tuple[float, ...]
    phases: tuple[float, ...]

    def __post_init__(self) -> None:
        probs = tuple(float(x) for x in self.probs)
        phases = tuple(float(x) for x in self.phases)
        if len(probs) < 2:
            raise DimensionMismatchError("generator needs at least two outcomes")
        if len(phases) != len(probs):
            raise DimensionMismatchError(
                f"{len(phases)} phases for {len(probs)} outcome weights"
            )
        if not all(np.isfinite(x) for x in probs + phases):
            raise OutOfRangeError("generator parameters must be finite")
        if min(probs) < -1e-12:
            raise OutOfRangeError("outcome weights must be non-negative")
        if abs(sum(probs) - 1.0) > 1e-10:
            raise OutOfRangeError(
                f"outcome weights sum to {sum(probs)!r}, expected 1"
            )
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "phases", phases)

    @property
    def dim(self) -> int:
        return len(self.probs)

    @property
    def state_vector(self) -> np.ndarray:
        amps = np.sqrt(np.maximum(np.asarray(self.probs), 0.0)).astype(complex)
        return amps * np.exp(1j * np.asarray(self.phases))

    def state(self) -> QuantumState:
        return QuantumState.pure(self.state_vector)

    def observation_test(self) -> tuple[Effect, ...]:
        return _canonical_observation(self.dim)


DeclaredGenerator = CoinSetup | NaryGenerator


def _canonical_observation(dim: int) -> tuple[Effect, ...]:
    effects = []
    for k in range(dim):
        m = np.zeros((dim, dim), dtype=complex)
        m[k, k] = 1.0
        effects.append(Effect(m))
    return tuple(effects)


def make_coin(p: float, phi: float = 0.0) -> CoinSetup:
    return CoinSetup(p=float(p), phi=float(phi))


def make_nary(probs, phases=None) -> NaryGenerator:
    probs = tuple(float(x) for x in probs)
    if phases is None:
        phases = (0.0,) * len(probs)
    return NaryGenerator(probs=probs, phases=tuple(float(x) for x in phases))


def sample_generator(
    declared: DeclaredGenerator, n_samples: int, rng: np.random.Generator
) -> np.ndarray:
    """Draw observation outcomes from the declared state's Born statistics."""
    if n_samples < 1:
        raise OutOfRangeError("n_samples must be at least 1")
    rho = declared.state()
    probs = np.array(
        [born_probability(rho, e) for e in declared.observation_test()]
    )
    edges = np.cumsum(probs)
    edges[-1] = 1.0
    return np.searchsorted(edges, rng.random(n_samples), side="right").astype(np.int64)


def coin_falsification_test(declared: DeclaredGenerator) -> FalsificationTest:
    """Most efficient test of "the source emits the declared state":
    falsifier = identity minus the declared pure-state projector."""
    psi = declared.state_vector
    hypothesis = SupportHypothesis(
        projector=np.outer(psi, psi.conj()),
        label="source emits the declared generator state",
    )
    return support_falsification_test(hypothesis, efficiency=1.0)


class BaselineVerdict(Enum):
    FALSIFIED = "FALSIFIED"
    NOT_FALSIFIABLE = "NOT_FALSIFIABLE"
    NOT_FALSIFIED = "NOT_FALSIFIED"


@dataclass(frozen=True, eq=False)
class CampaignReport:
    """Outcome summary of a Monte Carlo falsification campaign."""

    n_trials: int
    n_falsified: int
    empirical_rate: float
    theoretical_rate: float
    z_score: float
    z_degenerate: bool
    seed: int
    verdict: str


def falsify_campaign(
    declared: DeclaredGenerator,
    true_state: QuantumState,
    n_trials: int,
    master_seed: int,
) -> CampaignReport:
    """Repeat the declared-state falsification test on n_trials emissions of
    true_state.  One falsifying click settles the verdict (falsification is
    single-shot), but all trials run so the empirical rate can be compared
    with the theoretical rate 1 - <psi|rho|psi>.

    Trial i fires iff the i-th keyed uniform falls below the theoretical
    rate, which is exactly the single-trial Bernoulli sampling of run_test.
    """
    if n_trials < 1:
        raise OutOfRangeError("n_trials must be at least 1")
    test = coin_falsification_test(declared)
    if true_state.dim != test.dim:
        raise DimensionMismatchError(
            f"true state dim {true_state.dim} vs declared dim {test.dim}"
        )
    if not true_state.deterministic:
        raise NotDeterministicError("campaign requires a trace-one true state")
    rate = falsification_probability(test, true_state)
    uniforms = campaign_uniforms(master_seed, n_trials)
    n_falsified = int(np.count_nonzero(uniforms < rate))
    empirical = n_falsified / n_trials
    if 0.0 < rate < 1.0:
        z = (empirical - rate) / np.sqrt(rate * (1.0 - rate) / n_trials)
        z_degenerate = False
    else:
        z = 0.0
        z_degenerate = True
    return CampaignReport(
        n_trials=n_trials,
        n_falsified=n_falsified,
        empirical_rate=empirical,
        theoretical_rate=rate,
        z_score=float(z),
        z_degenerate=z_degenerate,
        seed=master_seed,
        verdict="FALSIFIED" if n_falsified >= 1 else "NOT_FALSIFIED",
    )


def classical_baseline(
    declared_p: float, outcomes, rank_tol: float = DEFAULT_RANK_TOL
) -> BaselineVerdict:
    """Logical falsifiability of a classical coin declaring P(outcome 0) = p.

    For p strictly inside (0, 1) both outcomes have positive probability, so
    no outcome sequence can refute the declaration.  Only the deterministic
    endpoints are falsifiable: p = 1 is refuted by any outcome 1, p = 0 by
    any outcome 0.
    """
    if not (np.isfinite(declared_p) and 0.0 <= declared_p <= 1.0):
        raise OutOfRangeError(f"declared_p={declared_p!r} outside [0, 1]")
    seq = np.asarray(outcomes, dtype=np.int64).reshape(-1)
    if seq.size and not np.all((seq == 0) | (seq == 1)):
        raise OutOfRangeError("classical coin outcomes must be 0 or 1")
    if declared_p >= 1.0 - rank_tol:
        hit = bool(np.any(seq == 1))
    elif declared_p <= rank_tol:
        hit = bool(np.any(seq == 0))
    else:
        return BaselineVerdict.NOT_FALSIFIABLE
    return BaselineVerdict.FALSIFIED if hit else BaselineVerdict.NOT_FALSIFIED


def sample_classical_coin(
    true_p: float, n_trials: int, master_seed: int
) -> np.ndarray:
    """Outcome sequence of a classical coin with P(outcome 0) = true_p,
    drawn from the same keyed per-trial uniforms as quantum campaigns."""
    if not (np.isfinite(true_p) and 0.0 <= true_p <= 1.0):
        raise OutOfRangeError(f"true_p={true_p!r} outside [0, 1]")
    u = campaign_uniforms(master_seed, n_trials)
    return (u >= true_p).astype(np.int64)
