"""Passive states, ergotropy and the thermodynamic separability bounds.

For a cut X | X^c of an N-qubit register the certifier is

    Delta = W(rho) - W_X(rho_X) - E(rho_Xc) + E_g(Xc)
          = sum_j m_j x_j - sum_j n_j t_j

with t, x the non-increasing spectra of rho and rho_X, and n, m the sorted
level offsets of H and H_X.  Separable states obey Delta <= bound for each
of the three bounds below; exceeding any of them certifies entanglement.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields
from enum import Enum
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.optimize import bisect

from .hamiltonians import LevelStructure, QubitHamiltonian, diagonal, level_structure
from .states import DensityOperator

VERDICT_TOL = 1e-9
SPECTRAL_TOL = 1e-10


class NumericalInvariantError(RuntimeError):
    """Two routes to the same quantity disagree beyond tolerance."""


class Bound(str, Enum):
    GL = "gl"
    G = "g"
    I = "i"  # noqa: E741


class Verdict(str, Enum):
    ENTANGLED = "entangled"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Bipartition:
    x: tuple[int, ...]
    total_qubits: int

    def __post_init__(self):
        x = tuple(sorted(int(q) for q in self.x))
        if len(set(x)) != len(x):
            raise ValueError(f"repeated qubit in {self.x}")
        if not 1 <= len(x) <= self.total_qubits - 1:
            raise ValueError(f"|X| = {len(x)} must lie in 1..{self.total_qubits - 1}")
        if x[0] < 1 or x[-1] > self.total_qubits:
            raise ValueError(f"X = {x} out of range 1..{self.total_qubits}")
        object.__setattr__(self, "x", x)

    @property
    def kappa(self) -> int:
        return len(self.x)

    @property
    def complement(self) -> tuple[int, ...]:
        return tuple(q for q in range(1, self.total_qubits + 1) if q not in self.x)

    def label(self) -> str:
        return ",".join(map(str, self.x))


def spectral_vector(values: Iterable[float]) -> np.ndarray:
    """Validate and sort a probability vector non-increasing."""
    v = np.sort(np.asarray(list(values), dtype=float))[::-1]
    if v.size == 0 or v[-1] < -SPECTRAL_TOL or abs(v.sum() - 1) > SPECTRAL_TOL:
        raise ValueError("not a probability vector")
    return v


def _check_dims(rho: DensityOperator, h: QubitHamiltonian):
    if rho.qubit_count != h.qubit_count:
        raise ValueError(f"state has {rho.qubit_count} qubits, Hamiltonian {h.qubit_count}")


def _check_partition(rho: DensityOperator, part: Bipartition):
    if part.total_qubits != rho.qubit_count:
        raise ValueError(f"partition is for {part.total_qubits} qubits, state has {rho.qubit_count}")


def passive_state(rho: DensityOperator, h: QubitHamiltonian) -> DensityOperator:
    _check_dims(rho, h)
    levels = level_structure(h)
    pops = np.zeros(rho.dim)
    pops[levels.basis_index] = np.clip(rho.spectrum(), 0.0, None)
    pops /= pops.sum()
    return DensityOperator(np.diag(pops).astype(complex), rho.qubit_count)


def passive_energy(t: np.ndarray, levels: LevelStructure) -> float:
    return float(levels.ground_energy + t @ levels.offsets)


def ergotropy(rho: DensityOperator, h: QubitHamiltonian) -> float:
    _check_dims(rho, h)
    return rho.energy(h) - passive_energy(rho.spectrum(), level_structure(h))


def _sub_hamiltonian(h: QubitHamiltonian, qubits: Sequence[int]) -> QubitHamiltonian:
    return QubitHamiltonian(
        tuple(h.gaps[q - 1] for q in qubits),
        tuple(h.energies[q - 1] for q in qubits),
        tuple(h.labels[q - 1] for q in qubits),
        name=h.name,
    )


def local_ergotropy(rho: DensityOperator, h: QubitHamiltonian, part: Bipartition) -> float:
    _check_dims(rho, h)
    _check_partition(rho, part)
    return ergotropy(rho.marginal(part.x), _sub_hamiltonian(h, part.x))


@dataclass(frozen=True)
class _Pieces:
    t: np.ndarray
    x: np.ndarray
    levels_full: LevelStructure
    levels_x: LevelStructure
    w_global: float
    w_local: float
    delta: float


def _pieces(rho: DensityOperator, h: QubitHamiltonian, part: Bipartition) -> _Pieces:
    _check_dims(rho, h)
    _check_partition(rho, part)
    levels_full = level_structure(h)
    levels_x = level_structure(h, part.x)
    t = rho.spectrum()
    rho_x = rho.marginal(part.x)
    x = rho_x.spectrum()
    h_x = _sub_hamiltonian(h, part.x)
    h_xc = _sub_hamiltonian(h, part.complement)

    w_global = rho.energy(h) - passive_energy(t, levels_full)
    w_local = rho_x.energy(h_x) - passive_energy(x, levels_x)
    diag_xc = np.real(np.diagonal(rho.marginal(part.complement).matrix))
    e_xc = float(diag_xc @ diagonal(h_xc))
    ground_xc = sum(h_xc.energies)
    delta = w_global - w_local - e_xc + ground_xc

    # spectral form of the same quantity
    spectral = float(x @ levels_x.offsets - t @ levels_full.offsets)
    scale = max(1.0, sum(h.gaps))
    if abs(delta - spectral) > 1e-9 * scale:
        raise NumericalInvariantError(
            f"work form {delta!r} and spectral form {spectral!r} of Delta disagree")
    return _Pieces(t, x, levels_full, levels_x, w_global, w_local, delta)


def delta(rho: DensityOperator, h: QubitHamiltonian, part: Bipartition) -> float:
    return _pieces(rho, h, part).delta


def delta_spectral(t: np.ndarray, x: np.ndarray, levels_full: LevelStructure,
                   levels_x: LevelStructure) -> float:
    return float(np.asarray(x) @ levels_x.offsets - np.asarray(t) @ levels_full.offsets)


def _check_lengths(t, levels_full, x=None, levels_x=None):
    if len(t) != len(levels_full):
        raise ValueError(f"global spectrum has length {len(t)}, expected {len(levels_full)}")
    if x is not None and len(x) != len(levels_x):
        raise ValueError(f"local spectrum has length {len(x)}, expected {len(levels_x)}")


def bound_gl(t, x, levels_full: LevelStructure, levels_x: LevelStructure) -> float:
    """Global-local bound: needs both the global and the X-marginal spectrum."""
    t, x = np.asarray(t, float), np.asarray(x, float)
    _check_lengths(t, levels_full, x, levels_x)
    m, n = levels_x.offsets, levels_full.offsets
    return float((m[1:] - m[1]) @ x[1:] + (m[1] - n[1:]) @ t[1:])


def _g_coefficients(levels_full: LevelStructure, levels_x: LevelStructure) -> np.ndarray:
    """Coefficients c_i of the global bound, sum_{i>=1} c_i t_i (c_0 = 0)."""
    m, n = levels_x.offsets, levels_full.offsets
    top = len(m) - 1
    m_ext = np.full(len(n), m[top])
    m_ext[:top] = m[:top]
    c = m_ext - n
    c[0] = 0.0
    return c


def bound_g(t, levels_full: LevelStructure, levels_x: LevelStructure) -> float:
    """Global bound: needs only the global spectrum."""
    t = np.asarray(t, float)
    _check_lengths(t, levels_full)
    return float(_g_coefficients(levels_full, levels_x) @ t)


def bound_i(levels_full: LevelStructure, levels_x: LevelStructure) -> float:
    """State-independent bound: the global bound maximised over all spectra.

    A linear function on the ordered simplex t_0 >= ... >= t_{d-1} >= 0
    peaks at a vertex, and the vertices are the uniform-on-prefix vectors,
    so the maximum is max_k (1/k) sum_{i<k} c_i.
    """
    c = _g_coefficients(levels_full, levels_x)
    k = np.arange(1, len(c) + 1)
    return float(np.max(np.cumsum(c) / k))


@dataclass(frozen=True)
class CertificationReport:
    delta: float
    bound_gl: float
    bound_g: float
    bound_i: float
    verdict_gl: Verdict
    verdict_g: Verdict
    verdict_i: Verdict
    units: str
    ergotropy_global: float
    ergotropy_local: float

    def to_dict(self) -> dict:
        d = asdict(self)
        for k, v in d.items():
            if isinstance(v, Enum):
                d[k] = v.value
        return d

    @classmethod
    def field_names(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def verdict(self, bound: Bound) -> Verdict:
        return getattr(self, f"verdict_{Bound(bound).value}")


def _verdict(d: float, b: float) -> Verdict:
    return Verdict.ENTANGLED if d > b + VERDICT_TOL else Verdict.INCONCLUSIVE


def certify(rho: DensityOperator, h: QubitHamiltonian, part: Bipartition,
            units: str | None = None) -> CertificationReport:
    """Evaluate Delta and all three bounds; values reported in ``units``.

    Verdicts are decided in MHz (the Hamiltonian's own units) before scaling.
    """
    p = _pieces(rho, h, part)
    gl = bound_gl(p.t, p.x, p.levels_full, p.levels_x)
    g = bound_g(p.t, p.levels_full, p.levels_x)
    i = bound_i(p.levels_full, p.levels_x)
    unit, scale = h.unit(units)
    return CertificationReport(
        delta=p.delta / scale,
        bound_gl=gl / scale,
        bound_g=g / scale,
        bound_i=i / scale,
        verdict_gl=_verdict(p.delta, gl),
        verdict_g=_verdict(p.delta, g),
        verdict_i=_verdict(p.delta, i),
        units=unit,
        ergotropy_global=p.w_global / scale,
        ergotropy_local=p.w_local / scale,
    )


def margins(rho: DensityOperator, h: QubitHamiltonian, part: Bipartition) -> dict[Bound, float]:
    """Delta minus each bound, in MHz; positive means entangled."""
    p = _pieces(rho, h, part)
    return {
        Bound.GL: p.delta - bound_gl(p.t, p.x, p.levels_full, p.levels_x),
        Bound.G: p.delta - bound_g(p.t, p.levels_full, p.levels_x),
        Bound.I: p.delta - bound_i(p.levels_full, p.levels_x),
    }


def majorizes(p, q, tol: float = SPECTRAL_TOL) -> bool:
    """True iff p majorizes q (shorter vector padded with zeros)."""
    p = np.sort(np.asarray(p, float))[::-1]
    q = np.sort(np.asarray(q, float))[::-1]
    n = max(len(p), len(q))
    p = np.pad(p, (0, n - len(p)))
    q = np.pad(q, (0, n - len(q)))
    cp, cq = np.cumsum(p), np.cumsum(q)
    return bool(abs(cp[-1] - cq[-1]) <= tol and np.all(cp >= cq - tol))


def nielsen_kempe(rho: DensityOperator, part: Bipartition) -> Verdict:
    _check_partition(rho, part)
    t = rho.spectrum()
    ok = (majorizes(rho.marginal(part.x).spectrum(), t)
          and majorizes(rho.marginal(part.complement).spectrum(), t))
    return Verdict.INCONCLUSIVE if ok else Verdict.ENTANGLED


def gl_threshold_formula(n: int, kappa: int) -> float:
    """Purity above which the global-local bound flags a noisy GHZ state."""
    if not 1 <= kappa <= n - 1:
        raise ValueError(f"kappa={kappa} outside 1..{n - 1}")
    a = 2 ** (n - kappa) - 1
    return a / (2 ** (n - 1) + a)


class ThresholdNotFound(ValueError):
    def __init__(self, kind: str, bound: Bound):
        super().__init__(f"bound {bound.value}: detection {kind} on [0, 1]")
        self.kind = kind
        self.bound = bound


class NonMonotoneError(ValueError):
    pass


MONOTONE_SAMPLES = 64


def solve_threshold(family: Callable[[float], DensityOperator], h: QubitHamiltonian,
                    part: Bipartition, bound: Bound | str, xtol: float = 1e-9) -> float:
    """Smallest purity at which Delta reaches ``bound`` for a one-parameter family.

    Delta - bound must be non-decreasing on [0, 1]; this is checked on a
    64-point grid before bisecting inside the bracketing grid cell.
    """
    bound = Bound(bound)
    scale = max(1.0, sum(h.gaps))

    def gap(lam: float) -> float:
        return margins(family(lam), h, part)[bound]

    grid = np.linspace(0.0, 1.0, MONOTONE_SAMPLES)
    vals = np.array([gap(v) for v in grid])
    if np.any(np.diff(vals) < -1e-9 * scale):
        raise NonMonotoneError(f"Delta - bound {bound.value} is not monotone in the purity")
    if vals[0] > 0:
        raise ThresholdNotFound("always", bound)
    if vals[-1] <= 0:
        raise ThresholdNotFound("never", bound)
    k = int(np.argmax(vals > 0))
    lo, hi = grid[k - 1], grid[k]
    if vals[k - 1] == 0:
        return float(lo)
    return float(bisect(gap, lo, hi, xtol=xtol, maxiter=200))


def family_threshold_closed_form(family: str, n: int, kappa: int) -> float | None:
    """Global-local closed form; a Werner state is a two-qubit noisy GHZ up to local unitaries."""
    if family == "werner":
        return gl_threshold_formula(2, 1)
    if family == "ghz":
        return gl_threshold_formula(n, kappa)
    return None
