"""Ideal-gate density-matrix simulation of the preparation and
passivization sequences run on the NMR registers.

Gates are exact unitaries; the pulsed-field-gradient crusher is full
dephasing in the computational basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hamiltonians import QubitHamiltonian, diagonal, named_system
from .oracles import GLOBAL_PERMUTATIONS, LOCAL_PERMUTATIONS, restricted_passive
from .states import DensityOperator, pseudo_pure

PAULI = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)

ROTATIONS = ("RX", "RY", "RZ")
OPS = ROTATIONS + ("H", "CNOT", "CRUSH", "LABEL")


class ProgramError(ValueError):
    def __init__(self, msg: str, line: int | None = None):
        super().__init__(f"line {line}: {msg}" if line is not None else msg)
        self.line = line


@dataclass(frozen=True)
class Instruction:
    op: str
    qubits: tuple[int, ...] = ()
    angle: float = 0.0
    text: str = ""

    def to_text(self) -> str:
        if self.op in ROTATIONS:
            return f"{self.op} {self.angle!r} " + " ".join(map(str, self.qubits))
        if self.op in ("H", "CNOT"):
            return f"{self.op} " + " ".join(map(str, self.qubits))
        if self.op == "LABEL":
            return f"LABEL {self.text}"
        return self.op


def rotation(axis: str, angle: float, *targets: int) -> Instruction:
    return Instruction("R" + axis.upper(), tuple(targets), float(angle))


def hadamard(target: int) -> Instruction:
    return Instruction("H", (target,))


def cnot(control: int, target: int) -> Instruction:
    return Instruction("CNOT", (control, target))


def crusher() -> Instruction:
    return Instruction("CRUSH")


def label(text: str) -> Instruction:
    return Instruction("LABEL", text=text)


@dataclass(frozen=True)
class GateProgram:
    qubit_count: int
    steps: tuple[Instruction, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        for s in self.steps:
            _validate(s, self.qubit_count)

    def __add__(self, other: "GateProgram") -> "GateProgram":
        if other.qubit_count != self.qubit_count:
            raise ValueError("programs act on different registers")
        return GateProgram(self.qubit_count, self.steps + other.steps)

    def to_text(self) -> str:
        lines = [f"QUBITS {self.qubit_count}"] + [s.to_text() for s in self.steps]
        return "\n".join(lines) + "\n"


def _validate(s: Instruction, n: int, line: int | None = None):
    if s.op not in OPS:
        raise ProgramError(f"unknown instruction {s.op!r}", line)
    if s.op in ROTATIONS:
        if not math.isfinite(s.angle):
            raise ProgramError("rotation angle is not finite", line)
        if not s.qubits:
            raise ProgramError(f"{s.op} needs at least one target", line)
    expected = {"H": 1, "CNOT": 2, "CRUSH": 0, "LABEL": 0}.get(s.op)
    if expected is not None and len(s.qubits) != expected:
        raise ProgramError(f"{s.op} takes {expected} qubit(s), got {len(s.qubits)}", line)
    for q in s.qubits:
        if not 1 <= q <= n:
            raise ProgramError(f"qubit {q} out of range 1..{n}", line)
    if len(set(s.qubits)) != len(s.qubits):
        raise ProgramError(f"repeated qubit in {s.op}", line)


def parse_program(text: str, qubit_count: int | None = None) -> GateProgram:
    """Read the line format written by :meth:`GateProgram.to_text`.

    Blank lines and ``#`` comments are skipped; a ``QUBITS n`` line is
    optional and otherwise the register size is the largest index used.
    """
    steps: list[tuple[int, Instruction]] = []
    declared = None
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        op = head.upper()
        try:
            if op == "QUBITS":
                declared = int(rest[0])
                continue
            if op == "LABEL":
                steps.append((no, label(line.split(None, 1)[1] if rest else "")))
            elif op in ROTATIONS:
                if len(rest) < 2:
                    raise ProgramError(f"{op} needs an angle and targets", no)
                steps.append((no, Instruction(op, tuple(int(q) for q in rest[1:]), float(rest[0]))))
            elif op in ("H", "CNOT", "CRUSH"):
                steps.append((no, Instruction(op, tuple(int(q) for q in rest))))
            else:
                raise ProgramError(f"unknown instruction {head!r}", no)
        except (IndexError, ValueError) as exc:
            if isinstance(exc, ProgramError):
                raise
            raise ProgramError(f"cannot parse {raw.strip()!r}: {exc}", no) from None
    n = qubit_count or declared or max((q for _, s in steps for q in s.qubits), default=0)
    if n < 1:
        raise ProgramError("cannot determine the register size")
    for no, s in steps:
        _validate(s, n, no)
    return GateProgram(n, tuple(s for _, s in steps))


def _gate_matrix(s: Instruction) -> list[tuple[np.ndarray, tuple[int, ...]]]:
    if s.op in ROTATIONS:
        sigma = PAULI[s.op[1]]
        u = math.cos(s.angle / 2) * np.eye(2) - 1j * math.sin(s.angle / 2) * sigma
        return [(u, (q,)) for q in s.qubits]
    if s.op == "H":
        return [(HADAMARD, s.qubits)]
    if s.op == "CNOT":
        return [(CNOT, s.qubits)]
    return []


def apply_gate(rho: np.ndarray, gate: np.ndarray, targets: tuple[int, ...], n: int) -> np.ndarray:
    """U rho U^dagger for a k-qubit gate, by tensor contraction."""
    k = len(targets)
    g = gate.reshape((2,) * (2 * k))
    t = rho.reshape((2,) * (2 * n))
    rows = [q - 1 for q in targets]
    cols = [q - 1 + n for q in targets]
    t = np.tensordot(g, t, axes=(list(range(k, 2 * k)), rows))
    t = np.moveaxis(t, list(range(k)), rows)
    t = np.tensordot(t, g.conj(), axes=(cols, list(range(k, 2 * k))))
    t = np.moveaxis(t, list(range(2 * n - k, 2 * n)), cols)
    d = 1 << n
    return t.reshape(d, d)


@dataclass(frozen=True)
class SimulationTrace:
    snapshots: tuple[tuple[str, DensityOperator], ...]
    final: DensityOperator

    def __getitem__(self, key: str) -> DensityOperator:
        for name, state in self.snapshots:
            if name == key:
                return state
        raise KeyError(key)


def run(program: GateProgram, state: DensityOperator) -> SimulationTrace:
    if state.qubit_count != program.qubit_count:
        raise ValueError(f"program acts on {program.qubit_count} qubits, state has {state.qubit_count}")
    n = program.qubit_count
    rho = np.array(state.matrix)
    snaps = []
    for s in program.steps:
        if s.op == "CRUSH":
            rho = np.diag(np.diagonal(rho))
        elif s.op == "LABEL":
            snaps.append((s.text, DensityOperator(rho, n)))
        else:
            for gate, targets in _gate_matrix(s):
                rho = apply_gate(rho, gate, targets, n)
    return SimulationTrace(tuple(snaps), DensityOperator(rho, n))


# Named sequences.

def bell_diag_input() -> DensityOperator:
    return pseudo_pure("11")


def bell_diag_program(beta: float, gamma: float) -> GateProgram:
    """|11> -> Bell-diagonal state with the (beta, gamma) weights.

    The rotations and the crusher leave populations p_ij on |ij>; the
    Hadamard on qubit 2 and CNOT(2 -> 1) then map |ij> to |B_ij>.
    """
    return GateProgram(2, (
        rotation("y", beta, 1), rotation("y", gamma, 2), crusher(),
        hadamard(2), cnot(2, 1), label("prepared"),
    ))


_CNOT_GATES = {"CNOT1": cnot(1, 2), "CNOT2": cnot(2, 1)}
_FLIP_GATES = {"Y1": rotation("y", math.pi, 1), "Y2": rotation("y", math.pi, 2)}


def permutation_gates(global_name: str, local_name: str) -> list[Instruction]:
    """Gate sequence for U_G o U_L (local flips first)."""
    gates = [_FLIP_GATES[o] for o in LOCAL_PERMUTATIONS[local_name]]
    gates += [_CNOT_GATES[o] for o in reversed(GLOBAL_PERMUTATIONS[global_name])]
    return gates


def _diagonal_passivization(pops: np.ndarray, h: QubitHamiltonian) -> list[Instruction]:
    _, gname, lname = restricted_passive(pops, diagonal(h))
    return permutation_gates(gname, lname)


def bell_diag_passivization(beta: float, gamma: float, h: QubitHamiltonian | None = None) -> GateProgram:
    """CNOT(1 -> 2) and H(1) diagonalise, then the cheapest of the 24 permutations."""
    from .states import bell_weights

    h = h or named_system("NAFP")
    pops = np.zeros(4)
    # after CNOT(1,2), H(1) the weight of |B_ab> sits on |ba>
    for (a, b), p in bell_weights(beta, gamma).items():
        pops[2 * b + a] = p
    steps = [cnot(1, 2), hadamard(1), label("diagonal")]
    steps += _diagonal_passivization(pops, h) + [label("passive")]
    return GateProgram(2, tuple(steps))


def ghz_input(n: int, lam: float) -> DensityOperator:
    """Pseudo-pure |0...0> with purity lam."""
    return pseudo_pure("0" * n, lam)


def ghz_program(n: int, theta: float) -> tuple[GateProgram, float]:
    """Star-register GHZ preparation; purity lam = cos(theta).

    The purity is carried by the pseudo-pure input (see :func:`ghz_input`);
    the program is the Hadamard on the centre and the fan-out CNOTs.
    """
    if n < 2:
        raise ValueError("GHZ preparation needs n >= 2")
    if not 0 <= theta <= math.pi / 2 + 1e-15:
        raise ValueError("theta must lie in [0, pi/2] so that cos(theta) is a purity")
    lam = min(max(math.cos(theta), 0.0), 1.0)
    steps = [hadamard(1)] + [cnot(1, k) for k in range(2, n + 1)] + [label("prepared")]
    return GateProgram(n, tuple(steps)), lam


def lopsidedness(n: int, omega_satellite: float, omega_centre: float) -> float:
    """Gradient ratio selecting the GHZ coherence order on a star register (metadata only)."""
    return 1 + (n - 1) * omega_satellite / omega_centre


def ghz_passivization(n: int) -> GateProgram:
    steps = [cnot(1, k) for k in range(n, 1, -1)] + [hadamard(1), label("passive")]
    return GateProgram(n, tuple(steps))


def exp3_program() -> GateProgram:
    """Three-qubit chain preparation: H(1), CNOT(1 -> 2), CNOT(2 -> 3)."""
    return GateProgram(3, (hadamard(1), cnot(1, 2), cnot(2, 3), label("prepared")))


def exp3_passivization() -> GateProgram:
    return GateProgram(3, (cnot(2, 3), cnot(1, 2), hadamard(1), label("passive")))


def exp3_local_program(rho12: DensityOperator, h12: QubitHamiltonian) -> GateProgram:
    if rho12.qubit_count != 2 or h12.qubit_count != 2:
        raise ValueError("local passivization acts on a two-qubit marginal")
    m = rho12.matrix
    if np.max(np.abs(m - np.diag(np.diagonal(m)))) > 1e-12:
        raise ValueError("marginal is not diagonal in the computational basis")
    pops = np.real(np.diagonal(m))
    return GateProgram(2, tuple(_diagonal_passivization(pops, h12)) + (label("passive"),))


def exp3_local_passive(rho12: DensityOperator, h12: QubitHamiltonian | None = None) -> DensityOperator:
    """Passive state of the (H, C) marginal, reached by a gate program."""
    if h12 is None:
        dbfm = named_system("DBFM")
        h12 = QubitHamiltonian(dbfm.gaps[:2], labels=dbfm.labels[:2], name="DBFM-HC")
    return run(exp3_local_program(rho12, h12), rho12).final


PASSIVIZATION_FAMILIES = ("bell_diagonal", "noisy_ghz", "exp3_ghz")


def passivization_program(family: str, **params) -> GateProgram:
    if family == "bell_diagonal":
        return bell_diag_passivization(params["beta"], params["gamma"], params.get("h"))
    if family == "noisy_ghz":
        return ghz_passivization(params["n"])
    if family == "exp3_ghz":
        return exp3_passivization()
    raise ValueError(f"unknown family {family!r}; expected one of {PASSIVIZATION_FAMILIES}")
