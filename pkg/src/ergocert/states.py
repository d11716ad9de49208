"""State families: Bell-diagonal, Werner, noisy GHZ and pseudo-pure inputs."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .tensor import (
    HERMITIAN_TOL,
    as_matrix,
    hermitian_spectrum,
    is_hermitian,
    partial_trace,
    qubit_count_of,
)


class InvalidStateError(ValueError):
    """Matrix fails one of the density-operator invariants."""

    def __init__(self, invariant: str, detail: str):
        super().__init__(f"{invariant}: {detail}")
        self.invariant = invariant


@dataclass(frozen=True, eq=False)
class DensityOperator:
    matrix: np.ndarray
    qubit_count: int

    def __post_init__(self):
        m = as_matrix(self.matrix).copy()
        if m.shape[0] != 1 << self.qubit_count:
            raise InvalidStateError("dimension", f"{m.shape[0]} != 2^{self.qubit_count}")
        if not is_hermitian(m):
            raise InvalidStateError("hermitian", "rho differs from its adjoint by more than 1e-10")
        tr = np.trace(m).real
        if abs(tr - 1) > HERMITIAN_TOL:
            raise InvalidStateError("trace", f"trace is {tr!r}")
        spec = hermitian_spectrum(m)
        lo = spec[-1]
        if lo < -HERMITIAN_TOL:
            raise InvalidStateError("positivity", f"smallest eigenvalue {lo!r}")
        m.setflags(write=False)
        spec.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "_spectrum", spec)

    @classmethod
    def from_matrix(cls, m) -> "DensityOperator":
        m = as_matrix(m)
        return cls(m, qubit_count_of(m.shape[0]))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def spectrum(self) -> np.ndarray:
        """Eigenvalues, non-increasing (computed once, at construction)."""
        return self._spectrum

    def marginal(self, keep) -> "DensityOperator":
        keep = sorted(set(keep))
        return DensityOperator(partial_trace(self.matrix, keep, self.qubit_count), len(keep))

    def energy(self, h) -> float:
        from .hamiltonians import diagonal

        return float(np.real(np.diagonal(self.matrix)) @ diagonal(h))


def _ket(bits: str) -> np.ndarray:
    v = np.zeros(1 << len(bits), dtype=complex)
    v[int(bits, 2)] = 1.0
    return v


def projector(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


def bell_vector(i: int, j: int) -> np.ndarray:
    """|B_0j> = (|00> + (-1)^j |11>)/sqrt2, |B_1j> = (|01> + (-1)^j |10>)/sqrt2."""
    a, b = ("00", "11") if i == 0 else ("01", "10")
    return (_ket(a) + (-1) ** j * _ket(b)) / math.sqrt(2)


def bell_weights(beta: float, gamma: float) -> dict[tuple[int, int], float]:
    sb, cb = math.sin(beta / 2) ** 2, math.cos(beta / 2) ** 2
    sg, cg = math.sin(gamma / 2) ** 2, math.cos(gamma / 2) ** 2
    return {(0, 0): sb * sg, (0, 1): sb * cg, (1, 0): cb * sg, (1, 1): cb * cg}


def bell_diagonal(beta: float, gamma: float) -> DensityOperator:
    for name, v in (("beta", beta), ("gamma", gamma)):
        if not 0 <= v <= math.pi:
            raise ValueError(f"{name}={v} outside [0, pi]")
    m = sum(p * projector(bell_vector(i, j)) for (i, j), p in bell_weights(beta, gamma).items())
    return DensityOperator(m, 2)


def ghz_vector(n: int) -> np.ndarray:
    return (_ket("0" * n) + _ket("1" * n)) / math.sqrt(2)


def _check_purity(lam: float):
    if not 0 <= lam <= 1:
        raise ValueError(f"purity {lam} outside [0, 1]")


def noisy_ghz(lam: float, n: int) -> DensityOperator:
    """(1 - lam) I/2^n + lam |GHZ_n><GHZ_n|."""
    _check_purity(lam)
    if n < 2:
        raise ValueError("noisy GHZ needs n >= 2")
    d = 1 << n
    m = (1 - lam) * np.eye(d, dtype=complex) / d + lam * projector(ghz_vector(n))
    return DensityOperator(m, n)


def noisy_ghz_spectrum(lam: float, n: int) -> np.ndarray:
    d = 1 << n
    return np.array([(1 + (d - 1) * lam) / d] + [(1 - lam) / d] * (d - 1))


SINGLET = (_ket("01") - _ket("10")) / math.sqrt(2)


def werner(lam: float) -> DensityOperator:
    _check_purity(lam)
    return DensityOperator(lam * projector(SINGLET) + (1 - lam) * np.eye(4) / 4, 2)


def werner_spectrum(lam: float) -> np.ndarray:
    return np.array([(1 + 3 * lam) / 4] + [(1 - lam) / 4] * 3)


def werner_purity_at(tau: float, t_lls: float) -> float:
    """Purity left after storing a singlet for ``tau`` seconds (LLS decay)."""
    if tau < 0 or t_lls <= 0:
        raise ValueError("need tau >= 0 and t_lls > 0")
    return math.exp(-tau / t_lls)


def pseudo_pure(bits: str, epsilon: float = 1.0) -> DensityOperator:
    """(1 - eps) I/d + eps |bits><bits|; eps = 1 is the logical pure state."""
    _check_purity(epsilon)
    d = 1 << len(bits)
    m = (1 - epsilon) * np.eye(d, dtype=complex) / d + epsilon * projector(_ket(bits))
    return DensityOperator(m, len(bits))


class GhzClass(str, Enum):
    FULLY_SEPARABLE = "fully_separable"
    BISEPARABLE_REGION = "biseparable_region"
    GENUINELY_ENTANGLED = "genuinely_entangled"


def ghz_separable_bound(n: int) -> float:
    return 1 / (1 + 2 ** (n - 1))


def ghz_genuine_bound(n: int) -> float:
    r = 2.0 ** (1 - n)
    return (1 - r) / (2 - r)


def ghz_classifier(lam: float, n: int) -> GhzClass:
    _check_purity(lam)
    if lam <= ghz_separable_bound(n):
        return GhzClass.FULLY_SEPARABLE
    if lam > ghz_genuine_bound(n):
        return GhzClass.GENUINELY_ENTANGLED
    return GhzClass.BISEPARABLE_REGION
