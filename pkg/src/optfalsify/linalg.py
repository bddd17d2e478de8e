"""Dense complex linear algebra core.

Everything downstream (states, effects, channels, falsifiers) sits on the
handful of primitives in this module: tensor products, partial traces, a
self-contained Hermitian eigensolver, support/kernel projectors, and the
row-major double-ket vectorization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    EigConvergenceError,
    NotHermitianError,
    NotPSDError,
)

# Relative eigenvalue cutoff separating support from kernel.
DEFAULT_RANK_TOL = 1e-10

_MAX_SWEEPS = 100
_OFFDIAG_FACTOR = 1e-14


def as_matrix(m, *, square: bool = False, name: str = "matrix") -> np.ndarray:
    """Coerce to a fresh complex 2-D array, validating shape and finiteness."""
    a = np.array(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise DimensionMismatchError(
            f"{name}: expected a 2-D matrix, got shape {a.shape}"
        )
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name}: entries must be finite")
    if square and a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"{name}: expected square, got {a.shape}")
    return a


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def is_hermitian(m: np.ndarray, tol: float = 1e-10) -> bool:
    return m.shape[0] == m.shape[1] and np.max(np.abs(m - dagger(m))) <= tol


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product; block (i,j) of the result is a[i, j] * b."""
    a = as_matrix(a, name="tensor lhs")
    b = as_matrix(b, name="tensor rhs")
    return np.kron(a, b)


def partial_trace(m, dim_a: int, dim_b: int, keep: str) -> np.ndarray:
    """Trace out one factor of a (dim_a*dim_b) x (dim_a*dim_b) matrix.

    keep is "A" (trace out the second factor) or "B" (trace out the first).
    """
    m = as_matrix(m, square=True, name="partial_trace input")
    if dim_a < 1 or dim_b < 1 or m.shape[0] != dim_a * dim_b:
        raise DimensionMismatchError(
            f"partial_trace: matrix of dim {m.shape[0]} is not {dim_a}x{dim_b}"
        )
    t = m.reshape(dim_a, dim_b, dim_a, dim_b)
    if keep == "A":
        return np.einsum("ikjk->ij", t)
    if keep == "B":
        return np.einsum("kikj->ij", t)
    raise ValueError(f"partial_trace: keep must be 'A' or 'B', got {keep!r}")


@dataclass(frozen=True)
class HermitianEig:
    """Spectral decomposition; eigenvalues descending, eigenvectors in columns."""

    values: np.ndarray
    vectors: np.ndarray


def _rotate(h: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """One cyclic-Jacobi step annihilating h[p, q], updating h and v in place."""
    apq = h[p, q]
    mag = abs(apq)
    if mag == 0.0:
        return
    # Phase rotation makes the off-diagonal element real, then a standard
    # Givens rotation with the stable t = s/c root of the quadratic kills it.
    phase = apq / mag
    tau = (h[q, q].real - h[p, p].real) / (2.0 * mag)
    sign = 1.0 if tau >= 0.0 else -1.0
    t = sign / (abs(tau) + np.sqrt(1.0 + tau * tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    u = np.array(
        [[c, s], [-s * np.conj(phase), c * np.conj(phase)]], dtype=complex
    )
    cols = h[:, (p, q)] @ u
    h[:, p] = cols[:, 0]
    h[:, q] = cols[:, 1]
    rows = dagger(u) @ h[(p, q), :]
    h[p, :] = rows[0]
    h[q, :] = rows[1]
    h[p, q] = 0.0
    h[q, p] = 0.0
    h[p, p] = h[p, p].real
    h[q, q] = h[q, q].real
    vcols = v[:, (p, q)] @ u
    v[:, p] = vcols[:, 0]
    v[:, q] = vcols[:, 1]


def _offdiag_norm(h: np.ndarray) -> float:
    off = h - np.diag(np.diag(h))
    return float(np.linalg.norm(off))


def hermitian_eig(m, tol: float = 1e-10) -> HermitianEig:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Deterministic: identical input bits give identical output bits.  Raises
    NotHermitianError if max|m - m^dag| > tol and EigConvergenceError if the
    off-diagonal mass has not dropped below 1e-14 * ||m||_F after 100 sweeps.
    """
    m = as_matrix(m, square=True, name="hermitian_eig input")
    if not is_hermitian(m, tol):
        raise NotHermitianError(
            f"hermitian_eig: max|m - m^dag| = {np.max(np.abs(m - dagger(m))):.3e} > {tol:.1e}"
        )
    n = m.shape[0]
    h = (m + dagger(m)) / 2.0
    v = np.eye(n, dtype=complex)
    threshold = _OFFDIAG_FACTOR * float(np.linalg.norm(h))
    converged = False
    for _ in range(_MAX_SWEEPS):
        if _offdiag_norm(h) <= threshold:
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                _rotate(h, v, p, q)
    else:
        converged = _offdiag_norm(h) <= threshold
    if not converged:
        raise EigConvergenceError(
            f"hermitian_eig: off-diagonal norm {_offdiag_norm(h):.3e} "
            f"above {threshold:.3e} after {_MAX_SWEEPS} sweeps"
        )
    values = np.diag(h).real.copy()
    # Stable sort keeps the rotation-produced order among equal eigenvalues,
    # so degenerate spectra still decompose deterministically.
    order = np.argsort(-values, kind="stable")
    return HermitianEig(values=values[order], vectors=v[:, order])


def _psd_eigs(m, rank_tol: float, name: str) -> HermitianEig:
    """Eigendecomposition plus a PSD check at relative tolerance rank_tol."""
    eig = hermitian_eig(m)
    lam_max = float(np.max(eig.values)) if eig.values.size else 0.0
    lam_max = max(lam_max, 0.0)
    if float(np.min(eig.values)) < -rank_tol * lam_max:
        raise NotPSDError(
            f"{name}: eigenvalue {np.min(eig.values):.3e} below -rank_tol*lam_max"
        )
    return eig


def support_projector(m, rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Orthogonal projector onto the span of eigenvectors with eigenvalue
    above rank_tol * lam_max.  Input must be Hermitian PSD up to tolerance."""
    eig = _psd_eigs(m, rank_tol, "support_projector")
    lam_max = max(float(np.max(eig.values)), 0.0)
    keep = eig.values > rank_tol * lam_max
    cols = eig.vectors[:, keep]
    p = cols @ dagger(cols)
    return (p + dagger(p)) / 2.0


def kernel_projector(m, rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Projector onto the orthogonal complement of the support."""
    p = support_projector(m, rank_tol)
    return np.eye(p.shape[0], dtype=complex) - p


def projector_rank(p: np.ndarray) -> int:
    """Rank of an (assumed) orthogonal projector, read off its trace."""
    return int(round(float(np.trace(p).real)))


def mat_to_doubleket(a) -> np.ndarray:
    """Row-major vectorization: |A>> = sum_ij A[i, j] |i>|j>."""
    a = as_matrix(a, name="mat_to_doubleket input")
    return a.reshape(-1).copy()


def doubleket_to_mat(v, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    """Inverse of mat_to_doubleket; square shape inferred when not given."""
    v = np.asarray(v, dtype=complex).reshape(-1)
    if rows is None and cols is None:
        d = int(round(np.sqrt(v.size)))
        if d * d != v.size:
            raise DimensionMismatchError(
                f"doubleket_to_mat: length {v.size} is not a perfect square"
            )
        rows = cols = d
    if rows is None or cols is None or rows * cols != v.size:
        raise DimensionMismatchError(
            f"doubleket_to_mat: length {v.size} != {rows}x{cols}"
        )
    return v.reshape(rows, cols).copy()


def complete_to_unitary(cols: np.ndarray, tol: float = 1e-6) -> np.ndarray:
    """Extend orthonormal columns to a full unitary.

    Deterministic greedy Gram-Schmidt over the canonical basis in index
    order; candidates whose residual norm falls below tol are skipped.
    """
    cols = as_matrix(cols, name="complete_to_unitary input")
    d, k = cols.shape
    if k > d:
        raise DimensionMismatchError(f"complete_to_unitary: {k} columns in dim {d}")
    basis = [cols[:, j].copy() for j in range(k)]
    for j in range(d):
        if len(basis) == d:
            break
        cand = np.zeros(d, dtype=complex)
        cand[j] = 1.0
        for b in basis:
            cand -= np.vdot(b, cand) * b
        # Second pass restores orthogonality lost to cancellation.
        for b in basis:
            cand -= np.vdot(b, cand) * b
        nrm = float(np.linalg.norm(cand))
        if nrm > tol:
            basis.append(cand / nrm)
    if len(basis) != d:
        raise DimensionMismatchError(
            "complete_to_unitary: input columns are not orthonormal enough to extend"
        )
    return np.column_stack(basis)
