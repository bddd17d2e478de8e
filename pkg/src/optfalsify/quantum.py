"""Quantum theory core.

Immutable validated types (states, effects, Kraus channels) plus the
structure operations falsification rests on: purification and its
connecting unitary, perfect discriminability of orthogonal supports,
compression onto the support face, canonical decomposition of bipartite
states, local falsifiers, and unitary dilation of channels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    NotCompressibleError,
    NotDeterministicError,
    NotHermitianError,
    NotPSDError,
    NotTracePreservingError,
    NumericalContaminationError,
    OutOfRangeError,
    PurificationMismatchError,
)
from .linalg import (
    DEFAULT_RANK_TOL,
    as_matrix,
    complete_to_unitary,
    dagger,
    doubleket_to_mat,
    hermitian_eig,
    is_hermitian,
    kernel_projector,
    mat_to_doubleket,
    partial_trace,
    support_projector,
    tensor,
)

_HERM_TOL = 1e-10
_TRACE_TOL = 1e-10
_SPECTRUM_TOL = 1e-10
_ORTHOGONALITY_TOL = 1e-8


def _frozen_array(obj, field_name: str, value: np.ndarray) -> None:
    value.setflags(write=False)
    object.__setattr__(obj, field_name, value)


@dataclass(frozen=True, eq=False)
class QuantumState:
    """Sub-normalized density matrix: Hermitian, PSD within rank_tol, trace
    in (0, 1 + 1e-10].  Negative eigenvalues within -rank_tol*lam_max are
    treated as zero rather than rejected."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = as_matrix(self.matrix, square=True, name="state matrix")
        if not is_hermitian(m, _HERM_TOL):
            raise NotHermitianError("state matrix is not Hermitian within 1e-10")
        m = (m + dagger(m)) / 2.0
        eig = hermitian_eig(m)
        lam_max = max(float(eig.values[0]), 0.0)
        if float(eig.values[-1]) < -DEFAULT_RANK_TOL * lam_max:
            raise NotPSDError(
                f"state matrix has eigenvalue {eig.values[-1]:.3e} below tolerance"
            )
        tr = float(np.trace(m).real)
        if not 0.0 < tr <= 1.0 + _TRACE_TOL:
            raise OutOfRangeError(f"state trace {tr!r} outside (0, 1]")
        _frozen_array(self, "matrix", m)

    @classmethod
    def pure(cls, vector) -> "QuantumState":
        v = np.asarray(vector, dtype=complex).reshape(-1)
        nrm = float(np.linalg.norm(v))
        if nrm == 0.0:
            raise OutOfRangeError("pure state vector must be nonzero")
        v = v / nrm
        return cls(np.outer(v, v.conj()))

    @classmethod
    def maximally_mixed(cls, dim: int) -> "QuantumState":
        if dim < 1:
            raise DimensionMismatchError("dimension must be positive")
        return cls(np.eye(dim, dtype=complex) / dim)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    @property
    def deterministic(self) -> bool:
        """True when the state is normalized (trace one within 1e-10)."""
        return abs(self.trace - 1.0) <= _TRACE_TOL

    def rank(self, rank_tol: float = DEFAULT_RANK_TOL) -> int:
        eig = hermitian_eig(self.matrix)
        lam_max = max(float(eig.values[0]), 0.0)
        return int(np.count_nonzero(eig.values > rank_tol * lam_max))


@dataclass(frozen=True, eq=False)
class Effect:
    """Measurement element: Hermitian with spectrum in [0, 1] within 1e-10."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = as_matrix(self.matrix, square=True, name="effect matrix")
        if not is_hermitian(m, _HERM_TOL):
            raise NotHermitianError("effect matrix is not Hermitian within 1e-10")
        m = (m + dagger(m)) / 2.0
        eig = hermitian_eig(m)
        if float(eig.values[-1]) < -_SPECTRUM_TOL:
            raise NotPSDError(
                f"effect has eigenvalue {eig.values[-1]:.3e} below zero"
            )
        if float(eig.values[0]) > 1.0 + _SPECTRUM_TOL:
            raise OutOfRangeError(
                f"effect has eigenvalue {eig.values[0]:.3e} above one"
            )
        _frozen_array(self, "matrix", m)

    @classmethod
    def identity(cls, dim: int) -> "Effect":
        return cls(np.eye(dim, dtype=complex))

    @classmethod
    def projector_onto(cls, vector) -> "Effect":
        v = np.asarray(vector, dtype=complex).reshape(-1)
        nrm = float(np.linalg.norm(v))
        if nrm == 0.0:
            raise OutOfRangeError("projector vector must be nonzero")
        v = v / nrm
        return cls(np.outer(v, v.conj()))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def is_zero(self) -> bool:
        return float(np.max(np.abs(self.matrix))) <= _SPECTRUM_TOL


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """Completely positive trace-nonincreasing map sum_k A_k . A_k^dag."""

    kraus: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        if isinstance(self.kraus, np.ndarray) or not len(self.kraus):
            raise DimensionMismatchError("channel needs a nonempty Kraus list")
        ops = tuple(as_matrix(a, name="Kraus operator") for a in self.kraus)
        shape = ops[0].shape
        for a in ops[1:]:
            if a.shape != shape:
                raise DimensionMismatchError(
                    f"Kraus operators disagree in shape: {a.shape} vs {shape}"
                )
        gram = sum(dagger(a) @ a for a in ops)
        eig = hermitian_eig(gram)
        if float(eig.values[0]) > 1.0 + _SPECTRUM_TOL:
            raise OutOfRangeError(
                "channel is not trace-nonincreasing: sum A^dag A exceeds identity "
                f"(top eigenvalue {eig.values[0]:.6f})"
            )
        for a in ops:
            a.setflags(write=False)
        object.__setattr__(self, "kraus", ops)
        _frozen_array(self, "_gram", gram)

    @property
    def dim_in(self) -> int:
        return self.kraus[0].shape[1]

    @property
    def dim_out(self) -> int:
        return self.kraus[0].shape[0]

    @property
    def n_kraus(self) -> int:
        return len(self.kraus)

    @property
    def atomic(self) -> bool:
        return len(self.kraus) == 1

    @property
    def deterministic(self) -> bool:
        """True when trace-preserving: sum A^dag A = I within 1e-10."""
        gram = getattr(self, "_gram")
        eye = np.eye(self.dim_in, dtype=complex)
        return float(np.max(np.abs(gram - eye))) <= _TRACE_TOL


def born_probability(rho: QuantumState, effect: Effect) -> float:
    """Tr(rho E), clamped to [0, 1].  Raises NumericalContaminationError if
    the trace carries imaginary weight above 1e-8."""
    if rho.dim != effect.dim:
        raise DimensionMismatchError(
            f"state dim {rho.dim} vs effect dim {effect.dim}"
        )
    p = complex(np.trace(rho.matrix @ effect.matrix))
    if abs(p.imag) > 1e-8:
        raise NumericalContaminationError(
            f"Born probability has imaginary part {p.imag:.3e}"
        )
    return min(1.0, max(0.0, p.real))


def apply_channel(channel: KrausChannel, rho: QuantumState) -> QuantumState:
    """sum_k A_k rho A_k^dag, revalidated as a state."""
    if channel.dim_in != rho.dim:
        raise DimensionMismatchError(
            f"channel input dim {channel.dim_in} vs state dim {rho.dim}"
        )
    out = sum(a @ rho.matrix @ dagger(a) for a in channel.kraus)
    return QuantumState(out)


@dataclass(frozen=True, eq=False)
class Purification:
    """Pure bipartite vector whose first-factor marginal is a target state."""

    state_vector: np.ndarray
    dim_a: int
    dim_b: int

    def __post_init__(self) -> None:
        v = np.asarray(self.state_vector, dtype=complex).reshape(-1).copy()
        if self.dim_a < 1 or self.dim_b < 1 or v.size != self.dim_a * self.dim_b:
            raise DimensionMismatchError(
                f"purification vector length {v.size} != {self.dim_a}x{self.dim_b}"
            )
        if abs(np.linalg.norm(v) - 1.0) > 1e-10:
            raise OutOfRangeError("purification vector must have unit norm")
        _frozen_array(self, "state_vector", v)

    def marginal(self) -> QuantumState:
        """Reduced state on the first factor."""
        full = np.outer(self.state_vector, self.state_vector.conj())
        return QuantumState(partial_trace(full, self.dim_a, self.dim_b, keep="A"))


def purify(rho: QuantumState, rank_tol: float = DEFAULT_RANK_TOL) -> Purification:
    """Minimal purification: environment dimension equals the rank of rho,
    environment basis ordered by descending eigenvalue."""
    if not rho.deterministic:
        raise NotDeterministicError("only trace-one states are purified")
    eig = hermitian_eig(rho.matrix)
    lam_max = max(float(eig.values[0]), 0.0)
    keep = eig.values > rank_tol * lam_max
    lams = eig.values[keep]
    vecs = eig.vectors[:, keep]
    # psi = sum_i sqrt(lam_i) v_i (x) e_i, i.e. the double-ket of V sqrt(L).
    m = vecs * np.sqrt(lams)[None, :]
    psi = mat_to_doubleket(m)
    psi = psi / np.linalg.norm(psi)
    return Purification(state_vector=psi, dim_a=rho.dim, dim_b=int(lams.size))


def connecting_unitary(
    p1: Purification, p2: Purification, rank_tol: float = DEFAULT_RANK_TOL
) -> np.ndarray:
    """Unitary U on the environment with (I (x) U) psi1 = psi2.

    Both purifications must share dim_a and dim_b and reduce to the same
    marginal within 1e-8 (else PurificationMismatchError).  Identical inputs
    return the identity exactly.
    """
    if p1.dim_a != p2.dim_a:
        raise DimensionMismatchError(
            f"system dims differ: {p1.dim_a} vs {p2.dim_a}"
        )
    if p1.dim_b != p2.dim_b:
        raise DimensionMismatchError(
            f"environment dims differ: {p1.dim_b} vs {p2.dim_b}; "
            "pad the smaller purification before connecting"
        )
    if np.array_equal(p1.state_vector, p2.state_vector):
        return np.eye(p1.dim_b, dtype=complex)
    da, db = p1.dim_a, p1.dim_b
    m1 = doubleket_to_mat(p1.state_vector, da, db)
    m2 = doubleket_to_mat(p2.state_vector, da, db)
    rho1 = m1 @ dagger(m1)
    rho2 = m2 @ dagger(m2)
    if float(np.max(np.abs(rho1 - rho2))) > _ORTHOGONALITY_TOL:
        raise PurificationMismatchError(
            "purifications reduce to different marginals"
        )
    rho = (rho1 + rho2 + dagger(rho1 + rho2)) / 4.0
    eig = hermitian_eig(rho)
    lam_max = max(float(eig.values[0]), 0.0)
    keep = eig.values > rank_tol * lam_max
    lams = eig.values[keep]
    vecs = eig.vectors[:, keep]
    scale = 1.0 / np.sqrt(lams)
    # Columns x_i = M^dag w_i / sqrt(lam_i) are orthonormal in the
    # environment; matching them between the two purifications fixes U on
    # the support, and paired completions fix it on the complement.
    x1 = (dagger(m1) @ vecs) * scale[None, :]
    x2 = (dagger(m2) @ vecs) * scale[None, :]
    y1 = complete_to_unitary(x1)[:, lams.size :]
    y2 = complete_to_unitary(x2)[:, lams.size :]
    ut = x1 @ dagger(x2) + y1 @ dagger(y2)
    return ut.T.copy()


@dataclass(frozen=True, eq=False)
class DiscriminationResult:
    """Outcome of the orthogonal-support test for a pair of states."""

    discriminable: bool
    overlap: float
    falsifier_rho: Effect | None
    falsifier_nu: Effect | None


def perfectly_discriminable(
    rho: QuantumState, nu: QuantumState, rank_tol: float = DEFAULT_RANK_TOL
) -> DiscriminationResult:
    """States are perfectly discriminable in one shot iff their supports are
    orthogonal (max entry of P_rho P_nu at most 1e-8).  The falsifier for
    each state is the projector onto its kernel, which captures the other
    state entirely in the discriminable case."""
    if rho.dim != nu.dim:
        raise DimensionMismatchError(f"state dims differ: {rho.dim} vs {nu.dim}")
    p_rho = support_projector(rho.matrix, rank_tol)
    p_nu = support_projector(nu.matrix, rank_tol)
    overlap = float(np.max(np.abs(p_rho @ p_nu)))
    dim = rho.dim
    k_rho = np.eye(dim, dtype=complex) - p_rho
    k_nu = np.eye(dim, dtype=complex) - p_nu
    falsifier_rho = None
    if float(np.max(np.abs(k_rho))) > _SPECTRUM_TOL:
        falsifier_rho = Effect(k_rho)
    falsifier_nu = None
    if float(np.max(np.abs(k_nu))) > _SPECTRUM_TOL:
        falsifier_nu = Effect(k_nu)
    return DiscriminationResult(
        discriminable=overlap <= _ORTHOGONALITY_TOL,
        overlap=overlap,
        falsifier_rho=falsifier_rho,
        falsifier_nu=falsifier_nu,
    )


@dataclass(frozen=True, eq=False)
class CompressionResult:
    """Isometry onto the support face and the compressed state."""

    isometry: np.ndarray
    state: QuantumState

    def decode(self) -> QuantumState:
        """Embed the compressed state back into the original space."""
        v = self.isometry
        return QuantumState(dagger(v) @ self.state.matrix @ v)


def compress(
    rho: QuantumState, rank_tol: float = DEFAULT_RANK_TOL
) -> CompressionResult:
    """Lossless restriction of a rank-deficient state to its support.

    Returns V of shape (rank, dim) with V V^dag = I_rank and the state
    V rho V^dag.  Full-rank states raise NotCompressibleError.
    """
    eig = hermitian_eig(rho.matrix)
    lam_max = max(float(eig.values[0]), 0.0)
    keep = eig.values > rank_tol * lam_max
    rank = int(np.count_nonzero(keep))
    if rank == rho.dim:
        raise NotCompressibleError(
            f"state has full support (rank {rank} = dim); nothing to compress"
        )
    v = dagger(eig.vectors[:, keep])
    compressed = QuantumState(v @ rho.matrix @ dagger(v))
    return CompressionResult(isometry=v, state=compressed)


@dataclass(frozen=True, eq=False)
class CanonicalForm:
    """Decomposition of a bipartite state as sum_j |A_j>><<A_j| with
    Tr(A_i^dag A_j) = delta_ij p_j."""

    operators: tuple[np.ndarray, ...]
    weights: np.ndarray

    def reconstruction(self) -> np.ndarray:
        dim2 = self.operators[0].shape[0] * self.operators[0].shape[1]
        out = np.zeros((dim2, dim2), dtype=complex)
        for a in self.operators:
            dk = mat_to_doubleket(a)
            out += np.outer(dk, dk.conj())
        return out


def canonical_form(
    r: QuantumState, rank_tol: float = DEFAULT_RANK_TOL
) -> CanonicalForm:
    """Spectral double-ket decomposition of a state on a d x d bipartite
    space: A_j = sqrt(lam_j) unvec(v_j) for each kept eigenpair."""
    d = int(round(np.sqrt(r.dim)))
    if d * d != r.dim:
        raise DimensionMismatchError(
            f"canonical_form needs a bipartite d^2 dimension, got {r.dim}"
        )
    eig = hermitian_eig(r.matrix)
    lam_max = max(float(eig.values[0]), 0.0)
    keep = eig.values > rank_tol * lam_max
    ops = []
    weights = []
    for lam, vec in zip(eig.values[keep], eig.vectors[:, keep].T):
        a = np.sqrt(lam) * doubleket_to_mat(vec, d, d)
        ops.append(a)
        weights.append(float(np.trace(dagger(a) @ a).real))
    return CanonicalForm(operators=tuple(ops), weights=np.array(weights))


@dataclass(frozen=True, eq=False)
class LocalFalsifier:
    """Product falsifier a (x) b for the hypothesis that a bipartite pure
    state is |A>>; degenerate marks the A^dag a = 0 fallback."""

    vector_b: np.ndarray
    effect: Effect
    degenerate: bool


def local_falsifier(
    a_op, a_vec, rank_tol: float = DEFAULT_RANK_TOL
) -> LocalFalsifier:
    """Given A != 0 on a d x d bipartite space (d >= 2) and a unit vector a,
    pick b orthogonal to (A^dag a)* so that (<a| (x) <b|) |A>> = 0.

    When A^dag a vanishes every b works; the first canonical basis vector is
    returned with degenerate=True.
    """
    a_mat = as_matrix(a_op, square=True, name="local_falsifier operator")
    d = a_mat.shape[0]
    if d < 2:
        raise DimensionMismatchError(
            "local falsifier needs local dimension >= 2"
        )
    scale = float(np.linalg.norm(a_mat))
    if scale == 0.0:
        raise OutOfRangeError("local_falsifier: operator must be nonzero")
    a = np.asarray(a_vec, dtype=complex).reshape(-1)
    if a.size != d:
        raise DimensionMismatchError(
            f"vector length {a.size} does not match operator dim {d}"
        )
    if abs(np.linalg.norm(a) - 1.0) > 1e-8:
        raise OutOfRangeError("local_falsifier: vector a must have unit norm")
    c = np.conj(dagger(a_mat) @ a)
    if float(np.linalg.norm(c)) <= rank_tol * scale:
        b = np.zeros(d, dtype=complex)
        b[0] = 1.0
        degenerate = True
    else:
        # Project the canonical vector least aligned with c onto c's
        # complement; its residual norm is at least sqrt(1 - 1/d) > 0.
        j = int(np.argmin(np.abs(c)))
        b = np.zeros(d, dtype=complex)
        b[j] = 1.0
        b = b - c * (np.conj(c[j]) / float(np.vdot(c, c).real))
        b = b / np.linalg.norm(b)
        degenerate = False
    effect = Effect(tensor(np.outer(a, a.conj()), np.outer(b, b.conj())))
    return LocalFalsifier(vector_b=b, effect=effect, degenerate=degenerate)


@dataclass(frozen=True, eq=False)
class Dilation:
    """Unitary realization of a trace-preserving channel: branch k of the
    channel equals Tr_env[U (rho (x) sigma) U^dag (I (x) P_k)]."""

    unitary: np.ndarray
    dim_sys: int
    dim_env: int
    ancilla: QuantumState
    projectors: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        u = as_matrix(self.unitary, square=True, name="dilation unitary")
        d = self.dim_sys * self.dim_env
        if u.shape[0] != d:
            raise DimensionMismatchError(
                f"dilation unitary dim {u.shape[0]} != {self.dim_sys}x{self.dim_env}"
            )
        dev = float(np.max(np.abs(dagger(u) @ u - np.eye(d))))
        if dev > 1e-9:
            raise OutOfRangeError(f"dilation matrix deviates from unitary by {dev:.3e}")
        _frozen_array(self, "unitary", u)

    def branch(self, rho: QuantumState, k: int) -> np.ndarray:
        """Unnormalized post-measurement system state for environment
        outcome k, computed through the dilation circuit."""
        if rho.dim != self.dim_sys:
            raise DimensionMismatchError(
                f"state dim {rho.dim} != system dim {self.dim_sys}"
            )
        if not 0 <= k < len(self.projectors):
            raise OutOfRangeError(f"branch index {k} out of range")
        joint = tensor(rho.matrix, self.ancilla.matrix)
        evolved = self.unitary @ joint @ dagger(self.unitary)
        picked = evolved @ tensor(
            np.eye(self.dim_sys, dtype=complex), self.projectors[k]
        )
        return partial_trace(picked, self.dim_sys, self.dim_env, keep="A")


def dilate(channel: KrausChannel) -> Dilation:
    """Stinespring-style dilation of a trace-preserving square channel.

    The environment has dimension max(n_kraus, 2), the ancilla starts in
    |0><0|, and the isometry column for system basis vector j sits at
    column j * dim_env of the unitary; remaining columns are a deterministic
    orthonormal completion.
    """
    if channel.dim_in != channel.dim_out:
        raise DimensionMismatchError(
            "only square channels are dilated directly; embed the channel "
            "into a square space first"
        )
    if not channel.deterministic:
        raise NotTracePreservingError(
            "dilation requires a trace-preserving channel"
        )
    d = channel.dim_in
    n_env = max(channel.n_kraus, 2)
    big = d * n_env
    v = np.zeros((big, d), dtype=complex)
    for k, a in enumerate(channel.kraus):
        v[k::n_env, :] = a
    w = complete_to_unitary(v)
    u = np.zeros((big, big), dtype=complex)
    occupied = [j * n_env for j in range(d)]
    free = [c for c in range(big) if c not in occupied]
    for j, col in enumerate(occupied):
        u[:, col] = w[:, j]
    for j, col in enumerate(free):
        u[:, col] = w[:, d + j]
    ancilla_vec = np.zeros(n_env, dtype=complex)
    ancilla_vec[0] = 1.0
    projectors = []
    for k in range(n_env):
        p = np.zeros((n_env, n_env), dtype=complex)
        p[k, k] = 1.0
        projectors.append(p)
    return Dilation(
        unitary=u,
        dim_sys=d,
        dim_env=n_env,
        ancilla=QuantumState.pure(ancilla_vec),
        projectors=tuple(projectors),
    )


def state_support(rho: QuantumState, rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    return support_projector(rho.matrix, rank_tol)


def state_kernel(rho: QuantumState, rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    return kernel_projector(rho.matrix, rank_tol)
