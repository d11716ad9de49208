"""Independent checks: brute-force passivity, NPT, random separable states,
and the closed-form state-independent bounds for specific gap patterns."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .certify import Bipartition, Bound, margins
from .hamiltonians import QubitHamiltonian
from .states import DensityOperator, projector
from .tensor import kron_all, partial_transpose

MAX_BRUTE_FORCE = 8


@lru_cache(maxsize=None)
def _all_permutations(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.intp)


def brute_force_passive(populations, energies) -> float:
    """Minimum of sum_i pop[perm(i)] * energy[i] over every permutation."""
    pops = np.asarray(populations, float)
    en = np.asarray(energies, float)
    if pops.shape != en.shape or pops.ndim != 1:
        raise ValueError("populations and energies must be equal-length vectors")
    if len(pops) > MAX_BRUTE_FORCE:
        raise ValueError(f"length {len(pops)} > {MAX_BRUTE_FORCE}: too many permutations")
    return float(np.min(pops[_all_permutations(len(pops))] @ en))


# Two-qubit basis permutations built from CNOTs and bit flips, as maps on (i, j).
def _cnot_1(b):
    i, j = b
    return i, j ^ i


def _cnot_2(b):
    i, j = b
    return i ^ j, j


def _flip_1(b):
    return b[0] ^ 1, b[1]


def _flip_2(b):
    return b[0], b[1] ^ 1


def _ident(b):
    return b


def _compose(*maps):
    """compose(f, g)(b) == f(g(b))."""
    def run(b):
        for f in reversed(maps):
            b = f(b)
        return b
    return run


GLOBAL_PERMUTATIONS = {
    "I": (),
    "CNOT1": ("CNOT1",),
    "CNOT2": ("CNOT2",),
    "CNOT1*CNOT2": ("CNOT1", "CNOT2"),
    "CNOT2*CNOT1": ("CNOT2", "CNOT1"),
    "CNOT1*CNOT2*CNOT1": ("CNOT1", "CNOT2", "CNOT1"),
}
LOCAL_PERMUTATIONS = {"I": (), "Y2": ("Y2",), "Y1": ("Y1",), "Y1Y2": ("Y1", "Y2")}
_MAPS = {"CNOT1": _cnot_1, "CNOT2": _cnot_2, "Y1": _flip_1, "Y2": _flip_2}


def restricted_permutations() -> list[tuple[str, str, np.ndarray]]:
    """The 24 operations U_G o U_L as (global name, local name, index map).

    ``index_map[k]`` is the basis index that population at index k moves to.
    """
    out = []
    for gname, gops in GLOBAL_PERMUTATIONS.items():
        for lname, lops in LOCAL_PERMUTATIONS.items():
            f = _compose(*(_MAPS[o] for o in gops), *(_MAPS[o] for o in lops))
            dest = [f((k >> 1, k & 1)) for k in range(4)]
            out.append((gname, lname, np.array([2 * i + j for i, j in dest])))
    return out


def restricted_passive(populations, energies) -> tuple[float, str, str]:
    """Lowest energy reachable with the 24 restricted permutations, and which one."""
    pops = np.asarray(populations, float)
    en = np.asarray(energies, float)
    if pops.shape != (4,) or en.shape != (4,):
        raise ValueError("restricted permutations act on two qubits")
    best = None
    for gname, lname, dest in restricted_permutations():
        e = float(pops @ en[dest])
        if best is None or e < best[0]:
            best = (e, gname, lname)
    return best


class PptVerdict(str, Enum):
    NPT = "npt"
    PPT = "ppt"


def partial_transpose_check(rho: DensityOperator, part: Bipartition, tol: float = 1e-10) -> PptVerdict:
    pt = partial_transpose(rho.matrix, part.complement, rho.qubit_count)
    low = np.linalg.eigvalsh((pt + pt.conj().T) / 2)[0]
    return PptVerdict.NPT if low < -tol else PptVerdict.PPT


def random_qubit_state(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    return v / np.linalg.norm(v)


def random_product_state(n: int, rng: np.random.Generator) -> np.ndarray:
    return kron_all(projector(random_qubit_state(rng)) for _ in range(n))


def random_separable(n: int, rng: np.random.Generator, max_terms: int | None = None) -> DensityOperator:
    """Mixture of 1..max_terms random pure product states, flat simplex weights."""
    max_terms = max_terms or 1 << n
    k = int(rng.integers(1, max_terms + 1))
    w = rng.dirichlet(np.ones(k))
    m = sum(wi * random_product_state(n, rng) for wi in w)
    m = (m + m.conj().T) / 2
    return DensityOperator(m / np.trace(m).real, n)


def random_diagonal_populations(dim: int, rng: np.random.Generator) -> np.ndarray:
    return rng.dirichlet(np.ones(dim))


@dataclass
class BatteryResult:
    checked: int
    violations: dict[Bound, int]
    worst_slack: dict[Bound, float]

    @property
    def ok(self) -> bool:
        return not any(self.violations.values())


def separable_battery(h: QubitHamiltonian, part: Bipartition, count: int,
                      rng: np.random.Generator, tol: float = 1e-9) -> BatteryResult:
    """Check Delta <= bound for ``count`` random separable states.

    Slack is Delta - bound in MHz; soundness means it never exceeds ``tol``.
    """
    viol = {b: 0 for b in Bound}
    worst = {b: -np.inf for b in Bound}
    for _ in range(count):
        rho = random_separable(h.qubit_count, rng)
        for b, s in margins(rho, h, part).items():
            worst[b] = max(worst[b], s)
            if s > tol:
                viol[b] += 1
    return BatteryResult(count, viol, worst)


# Closed-form state-independent bounds for the gap patterns studied case by case.

def prop_two_qubit(a1: float, a2: float) -> float:
    """Cut 1|2 of two qubits."""
    return max((a1 - a2) / 2, 0.0)


def prop_three_qubit_single(a1: float, a2: float, a3: float) -> float:
    """Cut 1|23 of three qubits."""
    if a1 < a2 == a3:
        return 0.0
    if a1 == a2 > a3:
        return (a1 - a3) / 2
    raise ValueError("gap pattern not covered")


def prop_three_qubit_pair(a1: float, a2: float, a3: float) -> float:
    """Cut 12|3 of three qubits."""
    if 0 < a1 < a2 == a3:
        return a1 / 4
    if a1 == a2 > a3 > 0:
        a = a1
        if a3 >= 2 * a / 3:
            return (a - a3) / 4 + a / 4
        return (a - a3) / 2 + a / 6
    raise ValueError("gap pattern not covered")


def prop_star(alpha_c: float, alpha: float, central_in_x: bool) -> float:
    """Star register, one qubit on the X side: the centre or a satellite."""
    if not alpha > alpha_c > 0:
        raise ValueError("need alpha > alpha_c > 0")
    return 0.0 if central_in_x else (alpha - alpha_c) / 2


def star_independent_threshold(n: int, alpha_c: float, alpha: float) -> float:
    """Purity above which the state-independent bound flags a noisy GHZ state
    on a star register, cut centre | satellites."""
    return (n - 1) * alpha / (alpha_c + (n - 1) * alpha)
