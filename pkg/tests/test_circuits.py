import math

import numpy as np
import pytest
from conftest import random_density
from hypothesis import given
from hypothesis import strategies as st

from ergocert.certify import passive_state
from ergocert.circuits import (
    CNOT,
    HADAMARD,
    GateProgram,
    Instruction,
    ProgramError,
    apply_gate,
    bell_diag_input,
    bell_diag_passivization,
    bell_diag_program,
    cnot,
    crusher,
    exp3_local_passive,
    exp3_passivization,
    exp3_program,
    ghz_input,
    ghz_passivization,
    ghz_program,
    hadamard,
    label,
    lopsidedness,
    parse_program,
    passivization_program,
    rotation,
    run,
)
from ergocert.hamiltonians import OMEGA_C, OMEGA_F, OMEGA_H, diagonal, named_system
from ergocert.oracles import brute_force_passive
from ergocert.states import (
    DensityOperator,
    bell_diagonal,
    bell_vector,
    bell_weights,
    noisy_ghz,
    projector,
    pseudo_pure,
)
from ergocert.tensor import embed, fidelity, trace_distance

FID = 1 - 1e-10
angles = st.floats(0, math.pi, allow_nan=False)
seeds = st.integers(0, 2**32 - 1)


def test_run_examples():
    rho = DensityOperator(random_density(2, np.random.default_rng(0)), 2)
    assert np.allclose(run(GateProgram(2), rho).final.matrix, rho.matrix)
    out = run(GateProgram(2, (hadamard(1), cnot(1, 2))), pseudo_pure("00")).final
    assert np.allclose(out.matrix, projector(bell_vector(0, 0)))
    out = run(GateProgram(2, (crusher(),)), DensityOperator(projector(bell_vector(0, 0)), 2)).final
    assert np.allclose(out.matrix, np.diag([0.5, 0, 0, 0.5]))


def test_run_dim_mismatch():
    with pytest.raises(ValueError):
        run(GateProgram(3), pseudo_pure("00"))


def test_rotation_convention():
    out = run(GateProgram(1, (rotation("x", math.pi, 1),)), pseudo_pure("0")).final
    assert np.allclose(out.matrix, np.diag([0, 1]))
    out = run(GateProgram(1, (rotation("y", math.pi / 2, 1),)), pseudo_pure("0")).final
    assert np.allclose(out.matrix, np.full((2, 2), 0.5))
    # RZ only adds a phase to the coherence
    plus = DensityOperator(np.full((2, 2), 0.5), 1)
    out = run(GateProgram(1, (rotation("z", math.pi / 2, 1),)), plus).final
    assert np.isclose(out.matrix[1, 0], 0.5j)


def test_rotation_on_several_targets():
    out = run(GateProgram(2, (rotation("x", math.pi, 1, 2),)), pseudo_pure("00")).final
    assert np.allclose(out.matrix, pseudo_pure("11").matrix)


@given(seeds, st.sampled_from([(1,), (2,), (3,), (1, 3), (3, 1), (2, 3)]))
def test_apply_gate_matches_dense_embedding(seed, targets):
    r = np.random.default_rng(seed)
    rho = random_density(3, r)
    k = len(targets)
    q, _ = np.linalg.qr(r.normal(size=(1 << k,) * 2) + 1j * r.normal(size=(1 << k,) * 2))
    u = embed(q, targets, 3)
    assert np.allclose(apply_gate(rho, q, targets, 3), u @ rho @ u.conj().T)


@given(seeds, st.lists(st.sampled_from(["H1", "H2", "C12", "C21", "RY", "CR"]), max_size=8))
def test_steps_keep_states_valid(seed, ops):
    table = {"H1": hadamard(1), "H2": hadamard(2), "C12": cnot(1, 2), "C21": cnot(2, 1),
             "RY": rotation("y", 0.7, 2), "CR": crusher()}
    rho = DensityOperator(random_density(2, np.random.default_rng(seed)), 2)
    steps = []
    for o in ops:
        steps += [table[o], label(o)]
    trace = run(GateProgram(2, tuple(steps)), rho)
    prev = rho
    for name, snap in trace.snapshots:
        if name == "CR":
            assert np.allclose(np.diagonal(snap.matrix), np.diagonal(prev.matrix))
        else:
            assert np.allclose(snap.spectrum(), prev.spectrum(), atol=1e-10)
        prev = snap


# Bell-diagonal preparation and passivization

def test_bell_program_examples():
    out = run(bell_diag_program(0, 0), bell_diag_input()).final
    assert np.allclose(out.matrix, projector(bell_vector(1, 1)))
    out = run(bell_diag_program(math.pi / 2, math.pi / 2), bell_diag_input()).final
    assert np.allclose(out.matrix, np.eye(4) / 4)
    b, g = 2 * math.pi / 5, 3 * math.pi / 10
    out = run(bell_diag_program(b, g), bell_diag_input()).final
    assert np.allclose(out.spectrum(), sorted(bell_weights(b, g).values(), reverse=True), atol=1e-10)


def test_bell_program_grid():
    grid = np.linspace(0, math.pi, 9)
    for b in grid:
        for g in grid:
            out = run(bell_diag_program(b, g), bell_diag_input()).final
            target = bell_diagonal(b, g)
            assert np.allclose(out.spectrum(), target.spectrum(), atol=1e-10)
            assert fidelity(out.matrix, target.matrix) >= FID


def test_bell_passivization_singlet_goes_to_ground():
    h = named_system("NAFP")
    out = run(bell_diag_passivization(0, 0, h), bell_diagonal(0, 0)).final
    assert np.allclose(out.matrix, np.diag([1, 0, 0, 0]))


@given(angles, angles)
def test_bell_passivization_reaches_passive_state(beta, gamma):
    h = named_system("NAFP")
    rho = bell_diagonal(beta, gamma)
    out = run(passivization_program("bell_diagonal", beta=beta, gamma=gamma, h=h), rho).final
    assert trace_distance(out.matrix, passive_state(rho, h).matrix) < 1e-9
    assert abs(out.energy(h) - brute_force_passive(rho.spectrum(), diagonal(h))) < 1e-9


# GHZ preparation

def test_ghz_program_examples():
    prog, lam = ghz_program(3, 0)
    assert lam == 1
    out = run(prog, ghz_input(3, lam)).final
    assert fidelity(out.matrix, noisy_ghz(1, 3).matrix) >= FID
    prog, lam = ghz_program(3, math.pi / 2)
    assert abs(lam) < 1e-15
    assert np.allclose(run(prog, ghz_input(3, lam)).final.matrix, np.eye(8) / 8)
    prog, lam = ghz_program(10, math.pi / 3)
    assert np.isclose(lam, 0.5)
    out = run(prog, ghz_input(10, lam)).final
    assert fidelity(out.matrix, noisy_ghz(0.5, 10).matrix) >= FID


def test_ghz_program_errors():
    with pytest.raises(ValueError):
        ghz_program(1, 0)
    with pytest.raises(ValueError):
        ghz_program(3, 2.0)


@given(st.floats(0, math.pi / 2), st.integers(2, 5))
def test_ghz_round_trip(theta, n):
    prog, lam = ghz_program(n, theta)
    h = named_system("identical", n=n)
    full = prog + ghz_passivization(n)
    trace = run(full, ghz_input(n, lam))
    assert fidelity(trace["prepared"].matrix, noisy_ghz(lam, n).matrix) >= FID
    assert trace_distance(trace.final.matrix, passive_state(noisy_ghz(lam, n), h).matrix) < 1e-9


def test_ghz_passivization_pure():
    out = run(passivization_program("noisy_ghz", n=3), noisy_ghz(1, 3)).final
    assert np.allclose(out.matrix, pseudo_pure("000").matrix)


def test_lopsidedness():
    assert lopsidedness(3, 500.0, 470.385) == pytest.approx(1 + 2 * 500 / 470.385)


# Three-qubit chain

def test_exp3_passive_form():
    lam = 0.5
    h = named_system("DBFM")
    rho = run(exp3_program(), ghz_input(3, lam)).final
    assert fidelity(rho.matrix, noisy_ghz(lam, 3).matrix) >= FID
    out = run(passivization_program("exp3_ghz"), rho).final
    expect = (1 - lam) * np.eye(8) / 8
    expect[0, 0] += lam
    assert np.allclose(out.matrix, expect, atol=1e-12)
    assert abs(out.energy(h) - float(np.diag(expect).real @ diagonal(h))) < 1e-9
    assert abs(out.energy(h) - brute_force_passive(rho.spectrum(), diagonal(h))) < 1e-9
    assert out.matrix.shape == (8, 8) and exp3_passivization().qubit_count == 3


@pytest.mark.parametrize("lam, want", [(1.0, [0.5, 0.5, 0, 0]), (0.0, [0.25] * 4),
                                       (0.4, [0.35, 0.35, 0.15, 0.15])])
def test_exp3_local_passive(lam, want):
    rho12 = noisy_ghz(lam, 3).marginal((1, 2))
    out = exp3_local_passive(rho12)
    assert np.allclose(out.matrix, np.diag(want), atol=1e-10)


def test_exp3_marginal_shape():
    lam = 0.3
    m = noisy_ghz(lam, 3).marginal((1, 2)).matrix
    a, b = (1 + lam) / 4, (1 - lam) / 4
    assert np.allclose(m, np.diag([a, b, b, a]))
    assert OMEGA_C < OMEGA_F < OMEGA_H


def test_passivization_unknown_family():
    with pytest.raises(ValueError):
        passivization_program("w-state")


# text format

def test_program_text_example():
    text = """
    # preparation
    RY 0.7853981633974483 1 2
    CNOT 1 2
      H   1
    CRUSH
    LABEL after-prep
    """
    prog = parse_program(text)
    assert prog.qubit_count == 2
    assert [s.op for s in prog.steps] == ["RY", "CNOT", "H", "CRUSH", "LABEL"]
    assert prog.steps[0].qubits == (1, 2) and prog.steps[-1].text == "after-prep"


instructions = st.one_of(
    st.builds(lambda a, q: rotation(a, q[0], *q[1]), st.sampled_from("xyz"),
              st.tuples(st.floats(-10, 10, allow_nan=False),
                        st.lists(st.integers(1, 4), min_size=1, max_size=4, unique=True))),
    st.builds(hadamard, st.integers(1, 4)),
    st.builds(lambda c: cnot(*c), st.lists(st.integers(1, 4), min_size=2, max_size=2, unique=True)),
    st.just(crusher()),
    st.builds(label, st.text("abcxyz-_0123", min_size=1, max_size=10)),
)


@given(st.lists(instructions, max_size=12))
def test_program_round_trip(steps):
    prog = GateProgram(4, tuple(steps))
    assert parse_program(prog.to_text()) == prog


@pytest.mark.parametrize("text, line", [
    ("H 1\nFOO 2\n", 2),
    ("H 1\n\nCNOT 1\n", 3),
    ("RY abc 1\n", 1),
    ("QUBITS 2\nH 3\n", 2),
    ("CNOT 1 1\n", 1),
])
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ProgramError) as e:
        parse_program(text)
    assert e.value.line == line
    assert f"line {line}" in str(e.value)


def test_program_validation():
    with pytest.raises(ProgramError):
        GateProgram(2, (Instruction("RY", (1,), float("inf")),))
    with pytest.raises(ValueError):
        GateProgram(2) + GateProgram(3)
    assert np.allclose(HADAMARD @ HADAMARD, np.eye(2)) and np.allclose(CNOT @ CNOT, np.eye(4))
