"""Non-interacting qubit Hamiltonians and their sorted level structures."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

# Larmor frequencies (MHz) on a 500 MHz spectrometer.
OMEGA_F = 470.385
OMEGA_P = 202.404
OMEGA_C = 125.721
OMEGA_H = 500.0
OMEGA_H_BRTP = 500.2


@dataclass(frozen=True)
class QubitHamiltonian:
    """H = sum_l (E_l |0><0| + (E_l + alpha_l) |1><1|) on qubit l.

    ``labels`` name each qubit (e.g. ``"F"``, ``"P"``) and ``reference``
    names the gap used to normalise reported quantities.
    """

    gaps: tuple[float, ...]
    energies: tuple[float, ...] = ()
    labels: tuple[str, ...] = ()
    name: str = "custom"
    reference: str | None = None
    couplings: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        gaps = tuple(float(a) for a in self.gaps)
        if not gaps:
            raise ValueError("a Hamiltonian needs at least one qubit")
        if any(a < 0 or not np.isfinite(a) for a in gaps):
            raise ValueError(f"gaps must be finite and non-negative, got {gaps}")
        energies = tuple(float(e) for e in self.energies) or (0.0,) * len(gaps)
        if len(energies) != len(gaps):
            raise ValueError("energies and gaps differ in length")
        labels = tuple(self.labels) or tuple(f"q{i}" for i in range(1, len(gaps) + 1))
        if len(labels) != len(gaps):
            raise ValueError("labels and gaps differ in length")
        object.__setattr__(self, "gaps", gaps)
        object.__setattr__(self, "energies", energies)
        object.__setattr__(self, "labels", labels)

    @property
    def qubit_count(self) -> int:
        return len(self.gaps)

    def unit(self, name: str | None = None) -> tuple[str, float]:
        """Resolve a unit name to ``(label, scale)``.

        Accepts ``"MHz"``, a qubit label (``"P"``) or ``"omega_P"``.
        Defaults to the Hamiltonian's reference gap.
        """
        name = name or self.reference
        if name is None or name == "MHz":
            return "MHz", 1.0
        label = name[len("omega_"):] if name.startswith("omega_") else name
        if label not in self.labels:
            raise ValueError(f"unknown unit {name!r}; qubit labels are {self.labels}")
        gap = self.gaps[self.labels.index(label)]
        if gap <= 0:
            raise ValueError(f"reference gap {label} is zero")
        return f"omega_{label}", gap


@dataclass(frozen=True)
class LevelStructure:
    """Sorted level offsets above the ground energy of a set of qubits."""

    offsets: np.ndarray
    ground_energy: float
    basis_labels: tuple[str, ...]
    basis_index: np.ndarray

    def __len__(self):
        return len(self.offsets)


def _bit_table(k: int) -> np.ndarray:
    idx = np.arange(1 << k)
    return (idx[:, None] >> np.arange(k - 1, -1, -1)) & 1


def diagonal(h: QubitHamiltonian, subset: Sequence[int] | None = None) -> np.ndarray:
    """Energies of the computational basis states of ``subset`` (ascending qubit order)."""
    subset = list(range(1, h.qubit_count + 1)) if subset is None else sorted(subset)
    gaps = np.array([h.gaps[q - 1] for q in subset])
    e0 = sum(h.energies[q - 1] for q in subset)
    return e0 + _bit_table(len(subset)) @ gaps


def full_matrix(h: QubitHamiltonian) -> np.ndarray:
    return np.diag(diagonal(h)).astype(complex)


def level_structure(h: QubitHamiltonian, subset: Iterable[int] | None = None) -> LevelStructure:
    """Levels n_j (full register) or m_j (subset), ties broken by bitstring value."""
    subset = list(range(1, h.qubit_count + 1)) if subset is None else sorted(set(subset))
    if not subset:
        raise ValueError("subset must be non-empty")
    for q in subset:
        if not 1 <= q <= h.qubit_count:
            raise IndexError(f"qubit {q} out of range 1..{h.qubit_count}")
    gaps = np.array([h.gaps[q - 1] for q in subset])
    offsets = _bit_table(len(subset)) @ gaps
    order = np.argsort(offsets, kind="stable")
    k = len(subset)
    return LevelStructure(
        offsets=offsets[order],
        ground_energy=float(sum(h.energies[q - 1] for q in subset)),
        basis_labels=tuple(format(int(i), f"0{k}b") for i in order),
        basis_index=order,
    )


NAMED_SYSTEMS = ("NAFP", "BRTP", "FAN", "TMP", "DBFM")


def named_system(name: str, n: int | None = None, gap: float = 1.0) -> QubitHamiltonian:
    """Register used in one of the experiments, or ``identical`` qubits.

    J couplings (Hz) are kept as metadata only; they never enter the levels.
    """
    key = name.upper()
    if key == "NAFP":
        return QubitHamiltonian((OMEGA_F, OMEGA_P), labels=("F", "P"), name="NAFP",
                                reference="P", couplings={"FP": None})
    if key == "BRTP":
        return QubitHamiltonian((OMEGA_H_BRTP, OMEGA_H_BRTP), labels=("H", "H"), name="BRTP",
                                reference="H", couplings={"HH": 4.01, "shift_hz": 192.0})
    if key == "FAN":
        return QubitHamiltonian((OMEGA_F, OMEGA_H, OMEGA_H), labels=("F", "H", "H"), name="FAN",
                                reference="H", couplings={"FH": 45.5})
    if key == "TMP":
        return QubitHamiltonian((OMEGA_P,) + (OMEGA_H,) * 9, labels=("P",) + ("H",) * 9,
                                name="TMP", reference="H", couplings={"PH": 11.04})
    if key == "DBFM":
        return QubitHamiltonian((OMEGA_H, OMEGA_C, OMEGA_F), labels=("H", "C", "F"),
                                name="DBFM", reference="H")
    if key == "IDENTICAL":
        if n is None or n < 1:
            raise ValueError("identical system needs a qubit count n >= 1")
        return QubitHamiltonian((float(gap),) * n, labels=("q",) * n, name=f"identical{n}",
                                reference="q")
    raise ValueError(f"unknown system {name!r}")


def identical(n: int, gap: float = 1.0) -> QubitHamiltonian:
    return named_system("identical", n=n, gap=gap)
