"""Dense complex linear algebra for multi-qubit operators.

Qubits are numbered from 1; qubit 1 is the most significant bit of the
computational-basis index, so ``|0...0>`` is index 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

HERMITIAN_TOL = 1e-10
UNITARY_TOL = 1e-9


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues sorted non-increasing with matching orthonormal columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


def qubit_count_of(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim < 1 or 1 << n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= tol)


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(factors: Iterable) -> np.ndarray:
    return reduce(np.kron, (as_matrix(f) for f in factors), np.eye(1, dtype=complex))


def _check_qubits(qubits: Iterable[int], qubit_count: int) -> list[int]:
    out = [int(q) for q in qubits]
    for q in out:
        if not 1 <= q <= qubit_count:
            raise IndexError(f"qubit {q} out of range 1..{qubit_count}")
    if len(set(out)) != len(out):
        raise ValueError(f"repeated qubit index in {out}")
    return out


def partial_trace(m, keep: Iterable[int], qubit_count: int) -> np.ndarray:
    """Trace out every qubit not in ``keep``.

    The kept qubits appear in ascending order in the result.
    """
    m = as_matrix(m)
    if m.shape[0] != 1 << qubit_count:
        qubit_count_of(m.shape[0])
        raise ValueError(f"dim {m.shape[0]} does not match {qubit_count} qubits")
    keep = sorted(_check_qubits(keep, qubit_count))
    traced = [q for q in range(1, qubit_count + 1) if q not in keep]
    t = m.reshape((2,) * (2 * qubit_count))
    # trace from the highest axis down so lower axis numbers stay valid
    n = qubit_count
    for q in reversed(traced):
        t = np.trace(t, axis1=q - 1, axis2=q - 1 + n)
        n -= 1
    d = 1 << len(keep)
    return t.reshape(d, d)


BLOCK_SEARCH_MIN_DIM = 64


def _components(m: np.ndarray) -> np.ndarray | None:
    """Component label per index of the exact nonzero pattern, or None if dense.

    Small matrices skip the search: a direct solve is cheaper than the graph.
    """
    if m.shape[0] < BLOCK_SEARCH_MIN_DIM:
        return None
    nz = m != 0
    if np.count_nonzero(nz) > 4 * m.shape[0]:
        return None
    _, labels = connected_components(csr_matrix(nz | nz.T), directed=False)
    return labels


def _eigvalsh(m: np.ndarray) -> np.ndarray:
    if not np.any(m.imag):
        return np.linalg.eigvalsh(m.real)
    return np.linalg.eigvalsh(m)


def hermitian_spectrum(m: np.ndarray) -> np.ndarray:
    """Spectrum of a matrix already known to be Hermitian (no check)."""
    labels = _components(m)
    if labels is None:
        return _eigvalsh(m)[::-1]
    sizes = np.bincount(labels)
    single = sizes[labels] == 1
    parts = [m.diagonal()[single].real]
    for c in np.flatnonzero(sizes > 1):
        idx = np.flatnonzero(labels == c)
        parts.append(_eigvalsh(m[np.ix_(idx, idx)]))
    return np.sort(np.concatenate(parts))[::-1]


def spectrum(m) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, sorted non-increasing.

    Block structure in the exact-zero pattern is exploited, which keeps
    the 1024-dimensional GHZ-type states cheap.
    """
    m = as_matrix(m)
    if not is_hermitian(m):
        raise ValueError("matrix is not Hermitian within tolerance")
    return hermitian_spectrum(m)


def eig_hermitian(m) -> EigenDecomposition:
    m = as_matrix(m)
    if not is_hermitian(m):
        raise ValueError("matrix is not Hermitian within tolerance")
    w, v = np.linalg.eigh(m)
    return EigenDecomposition(w[::-1].copy(), v[:, ::-1].copy())


def is_unitary(u: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    return bool(np.allclose(u.conj().T @ u, np.eye(u.shape[0]), atol=tol, rtol=0))


def apply_unitary(state, u) -> np.ndarray:
    state, u = as_matrix(state), as_matrix(u)
    if state.shape != u.shape:
        raise ValueError(f"dimension mismatch: state {state.shape} vs unitary {u.shape}")
    if not is_unitary(u):
        raise ValueError("operator is not unitary within tolerance")
    return u @ state @ u.conj().T


def embed(op, targets: Sequence[int], qubit_count: int) -> np.ndarray:
    """Lift a 2^k x 2^k operator on ``targets`` (in the given order) to the register."""
    op = as_matrix(op)
    targets = _check_qubits(targets, qubit_count)
    k = len(targets)
    if op.shape[0] != 1 << k:
        raise ValueError(f"operator of dim {op.shape[0]} does not act on {k} qubits")
    rest = [q for q in range(1, qubit_count + 1) if q not in targets]
    full = np.kron(op, np.eye(1 << len(rest), dtype=complex))
    # full acts on ordering targets + rest; permute axes back to 1..N
    order = targets + rest
    perm = [order.index(q) for q in range(1, qubit_count + 1)]
    n = qubit_count
    t = full.reshape((2,) * (2 * n))
    t = t.transpose(perm + [p + n for p in perm])
    d = 1 << n
    return t.reshape(d, d)


def partial_transpose(m, qubits: Iterable[int], qubit_count: int) -> np.ndarray:
    m = as_matrix(m)
    qubits = _check_qubits(qubits, qubit_count)
    n = qubit_count
    axes = list(range(2 * n))
    for q in qubits:
        axes[q - 1], axes[q - 1 + n] = axes[q - 1 + n], axes[q - 1]
    return m.reshape((2,) * (2 * n)).transpose(axes).reshape(m.shape)


def sqrt_psd(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(m)
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def fidelity(rho, sigma) -> float:
    """Uhlmann fidelity, squared convention: 1 for identical states."""
    s = np.linalg.svd(sqrt_psd(as_matrix(rho)) @ sqrt_psd(as_matrix(sigma)), compute_uv=False)
    return float(np.sum(s) ** 2)


def trace_distance(rho, sigma) -> float:
    d = as_matrix(rho) - as_matrix(sigma)
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh((d + d.conj().T) / 2))))
