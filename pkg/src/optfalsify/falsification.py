"""Falsification tests for support hypotheses.

A test is a binary observation {F, F_?}: outcome F is impossible whenever
the hypothesis holds, so a single F click refutes it; F_? is inconclusive.
The most efficient falsifier for "the state is supported inside K" is the
projector onto the orthogonal complement of K.
"""

from __future__ import annotations

from dataclasses import InitVar, dataclass
from enum import Enum

import numpy as np

from .errors import (
    DimensionMismatchError,
    NotDeterministicError,
    OutOfRangeError,
    UnfalsifiableHypothesisError,
)
from .linalg import (
    DEFAULT_RANK_TOL,
    as_matrix,
    dagger,
    is_hermitian,
    projector_rank,
    support_projector,
)
from .quantum import Effect, QuantumState, born_probability


class TestOutcome(Enum):
    FALSIFIED = "FALSIFIED"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True, eq=False)
class SupportHypothesis:
    """Claim that a state's support lies inside the subspace projected onto
    by `projector`.  Only proper subspaces are falsifiable, so a full-space
    projector is rejected outright."""

    projector: np.ndarray
    label: str = ""

    def __post_init__(self) -> None:
        p = as_matrix(self.projector, square=True, name="hypothesis projector")
        if not is_hermitian(p, 1e-10):
            raise OutOfRangeError("hypothesis projector must be Hermitian")
        if float(np.max(np.abs(p @ p - p))) > 1e-10:
            raise OutOfRangeError("hypothesis projector must be idempotent")
        if p.shape[0] < 2:
            raise DimensionMismatchError(
                "support hypotheses need dimension >= 2"
            )
        if projector_rank(p) >= p.shape[0]:
            raise UnfalsifiableHypothesisError(
                "hypothesis subspace is the whole space; no falsifier exists "
                "(only the inconclusive test F = 0 remains)"
            )
        p = (p + dagger(p)) / 2.0
        p.setflags(write=False)
        object.__setattr__(self, "projector", p)

    @classmethod
    def from_state(
        cls,
        declared: QuantumState,
        rank_tol: float = DEFAULT_RANK_TOL,
        label: str = "",
    ) -> "SupportHypothesis":
        """Hypothesis that a source emits states inside Supp(declared)."""
        return cls(
            projector=support_projector(declared.matrix, rank_tol),
            label=label or "support of declared state",
        )

    @property
    def dim(self) -> int:
        return self.projector.shape[0]

    @property
    def rank(self) -> int:
        return projector_rank(self.projector)


@dataclass(frozen=True, eq=False)
class FalsificationTest:
    """Binary observation {F, F_?} with F + F_? = I.

    The canonical constructors reject a zero falsifier (such a test can
    never falsify anything); deserialized external data may still carry the
    degenerate F = 0 object, flagged through is_inconclusive_test.
    """

    falsifier: Effect
    inconclusive: Effect
    hypothesis_label: str = ""
    allow_inconclusive: InitVar[bool] = False

    def __post_init__(self, allow_inconclusive: bool) -> None:
        if self.falsifier.dim != self.inconclusive.dim:
            raise DimensionMismatchError(
                f"falsifier dim {self.falsifier.dim} vs "
                f"inconclusive dim {self.inconclusive.dim}"
            )
        eye = np.eye(self.falsifier.dim)
        gap = float(
            np.max(np.abs(self.falsifier.matrix + self.inconclusive.matrix - eye))
        )
        if gap > 1e-10:
            raise OutOfRangeError(
                f"falsifier and inconclusive effects must sum to identity "
                f"(deviation {gap:.3e})"
            )
        if not allow_inconclusive and self.falsifier.is_zero:
            raise OutOfRangeError(
                "zero falsifier: the test can never falsify; "
                "deserialize with allow_inconclusive to represent it"
            )

    @classmethod
    def from_falsifier(
        cls,
        falsifier: Effect,
        hypothesis_label: str = "",
        *,
        allow_inconclusive: bool = False,
    ) -> "FalsificationTest":
        eye = np.eye(falsifier.dim, dtype=complex)
        return cls(
            falsifier=falsifier,
            inconclusive=Effect(eye - falsifier.matrix),
            hypothesis_label=hypothesis_label,
            allow_inconclusive=allow_inconclusive,
        )

    @property
    def dim(self) -> int:
        return self.falsifier.dim


def support_falsification_test(
    hypothesis: SupportHypothesis, efficiency: float = 1.0
) -> FalsificationTest:
    """F = efficiency * (I - P_K): supported in the complement of K, so it
    never fires on states obeying the hypothesis.  efficiency = 1 gives the
    most efficient test (largest falsification probability for every state).
    """
    if not 0.0 < efficiency <= 1.0:
        raise OutOfRangeError(f"efficiency {efficiency!r} outside (0, 1]")
    if hypothesis.rank >= hypothesis.dim:
        raise UnfalsifiableHypothesisError(
            "hypothesis subspace is the whole space; no falsifier exists"
        )
    eye = np.eye(hypothesis.dim, dtype=complex)
    falsifier = Effect(efficiency * (eye - hypothesis.projector))
    return FalsificationTest.from_falsifier(
        falsifier, hypothesis_label=hypothesis.label
    )


def falsification_probability(test: FalsificationTest, rho: QuantumState) -> float:
    """Born probability of the falsifying outcome; any strictly positive
    value already refutes the hypothesis at the theory level."""
    return born_probability(rho, test.falsifier)


def run_test(
    test: FalsificationTest, rho: QuantumState, rng: np.random.Generator
) -> TestOutcome:
    """Single-shot Bernoulli sample of the test on a normalized state."""
    if not rho.deterministic:
        raise NotDeterministicError("run_test requires a trace-one state")
    p = falsification_probability(test, rho)
    if rng.random() < p:
        return TestOutcome.FALSIFIED
    return TestOutcome.INCONCLUSIVE


def is_inconclusive_test(
    test: FalsificationTest, rank_tol: float = DEFAULT_RANK_TOL
) -> bool:
    """True for the degenerate F = 0 object that can never falsify."""
    return float(np.max(np.abs(test.falsifier.matrix))) <= rank_tol
