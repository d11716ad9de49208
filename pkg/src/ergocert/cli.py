"""Command-line front end.

    ergocert certify   --system NAFP --family bell-diag --beta 1.2566 --gamma 0.9425
    ergocert sweep     --system NAFP --family bell-diag --resolution 11
    ergocert threshold --system FAN --family ghz --bound all
    ergocert simulate  ghz --n 3 --theta 0
    ergocert oracle    --seed 7

Exit status: 0 success, 2 input error, 3 numerical failure, 4 oracle failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import circuits, oracles
from .certify import (
    Bipartition,
    Bound,
    NonMonotoneError,
    NumericalInvariantError,
    ThresholdNotFound,
    bound_i,
    certify,
    family_threshold_closed_form,
    margins,
    passive_energy,
    passive_state,
    solve_threshold,
)
from .circuits import ProgramError, parse_program
from .hamiltonians import QubitHamiltonian, diagonal, level_structure, named_system
from .io import InputFormatError, load_system, read_state, serialize, write_state
from .states import (
    DensityOperator,
    InvalidStateError,
    bell_diagonal,
    noisy_ghz,
    pseudo_pure,
    werner,
)
from .tensor import fidelity, trace_distance

EXIT_OK, EXIT_INPUT, EXIT_NUMERICAL, EXIT_ORACLE = 0, 2, 3, 4
FAMILIES = ("bell-diag", "werner", "ghz", "exp3")
LAMBDA_FAMILIES = ("werner", "ghz", "exp3")
DEFAULT_SEED = 20_240_917


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    system: str | None = None
    config: str | None = None
    partition: tuple[int, ...] = (1,)
    family: str | None = None
    lam: float | None = None
    beta: float | None = None
    gamma: float | None = None
    theta: float | None = None
    n: int | None = None
    matrix: str | None = None
    bound: str = "all"
    out: str | None = None
    format: str = "csv"
    resolution: int = 101
    seed: int = DEFAULT_SEED
    units: str | None = None
    workers: int = 1
    program: str | None = None
    dump: str | None = None
    count: int = 1000

    def bounds(self) -> list[Bound]:
        return list(Bound) if self.bound == "all" else [Bound(self.bound)]


# -- states and systems ----------------------------------------------------

def exp3_state(lam: float) -> DensityOperator:
    """Three-qubit chain output on a pseudo-pure |000> of purity lam."""
    return circuits.run(circuits.exp3_program(), circuits.ghz_input(3, lam)).final


def family_state(family: str, n: int, lam=None, beta=None, gamma=None) -> DensityOperator:
    if family == "bell-diag":
        if beta is None or gamma is None:
            raise InputError("bell-diag needs --beta and --gamma")
        return bell_diagonal(beta, gamma)
    if lam is None:
        raise InputError(f"family {family} needs --lambda")
    if family == "werner":
        return werner(lam)
    if family == "ghz":
        return noisy_ghz(lam, n)
    if family == "exp3":
        return exp3_state(lam)
    raise InputError(f"unknown family {family!r}; expected one of {FAMILIES}")


class _Family:
    """Picklable lam -> state map, so sweeps can run in worker processes."""

    def __init__(self, family: str, n: int):
        self.family, self.n = family, n

    def __call__(self, lam: float) -> DensityOperator:
        return family_state(self.family, self.n, lam=lam)


_FAMILY_QUBITS = {"bell-diag": 2, "werner": 2, "exp3": 3}
_DEFAULT_SYSTEM = {"bell-diag": "NAFP", "werner": "BRTP", "exp3": "DBFM"}


def resolve_system(cfg: RunConfig) -> QubitHamiltonian:
    name = cfg.system
    if name is None:
        name = _DEFAULT_SYSTEM.get(cfg.family or "")
        if name is None:
            raise InputError("--system is required")
    return load_system(name, cfg.config)


def resolve_partition(cfg: RunConfig, n: int) -> Bipartition:
    return Bipartition(cfg.partition, n)


def check_family_size(family: str, h: QubitHamiltonian):
    need = _FAMILY_QUBITS.get(family)
    if need is not None and h.qubit_count != need:
        raise InputError(f"family {family} is a {need}-qubit state; system has {h.qubit_count}")


def resolve_state(cfg: RunConfig, h: QubitHamiltonian) -> DensityOperator:
    if cfg.matrix:
        rho = read_state(cfg.matrix)
        if rho.qubit_count != h.qubit_count:
            raise InputError(f"matrix has {rho.qubit_count} qubits, system {h.qubit_count}")
        return rho
    if not cfg.family:
        raise InputError("give --family or --matrix")
    check_family_size(cfg.family, h)
    return family_state(cfg.family, h.qubit_count, cfg.lam, cfg.beta, cfg.gamma)


def _report_row(rho, h, part, units, **params) -> dict:
    row = dict(params)
    row.update(certify(rho, h, part, units).to_dict())
    return row


# -- commands --------------------------------------------------------------

def cmd_certify(cfg: RunConfig) -> list[dict]:
    h = resolve_system(cfg)
    part = resolve_partition(cfg, h.qubit_count)
    rho = resolve_state(cfg, h)
    params = {"system": h.name, "partition": part.label(),
              "family": "matrix" if cfg.matrix else cfg.family}
    return [_report_row(rho, h, part, cfg.units, **params)]


def _bell_cell(args):
    beta, gamma, h, part, units = args
    return _report_row(bell_diagonal(beta, gamma), h, part, units, beta=beta, gamma=gamma)


def _lambda_cell(args):
    lam, fam, h, part, units = args
    return _report_row(fam(lam), h, part, units, **{"lambda": lam})


def _ordered_map(fn, jobs, workers: int) -> list:
    if workers <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map keeps submission order, whatever the completion order
        return list(pool.map(fn, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


def cmd_sweep(cfg: RunConfig) -> list[dict]:
    if cfg.resolution < 2:
        raise InputError(f"--resolution must be at least 2, got {cfg.resolution}")
    if not cfg.family:
        raise InputError("sweep needs --family")
    h = resolve_system(cfg)
    check_family_size(cfg.family, h)
    part = resolve_partition(cfg, h.qubit_count)
    if cfg.family == "bell-diag":
        axis = np.linspace(0.0, math.pi, cfg.resolution)
        jobs = [(float(b), float(g), h, part, cfg.units) for b in axis for g in axis]
        return _ordered_map(_bell_cell, jobs, cfg.workers)
    fam = _Family(cfg.family, h.qubit_count)
    jobs = [(float(v), fam, h, part, cfg.units) for v in np.linspace(0.0, 1.0, cfg.resolution)]
    return _ordered_map(_lambda_cell, jobs, cfg.workers)


def cmd_threshold(cfg: RunConfig) -> list[dict]:
    if cfg.family not in LAMBDA_FAMILIES:
        raise InputError(f"threshold needs a purity family: {LAMBDA_FAMILIES}")
    h = resolve_system(cfg)
    check_family_size(cfg.family, h)
    part = resolve_partition(cfg, h.qubit_count)
    fam = _Family(cfg.family, h.qubit_count)
    closed_key = "werner" if cfg.family == "werner" else "ghz"
    rows = []
    for b in cfg.bounds():
        lam = solve_threshold(fam, h, part, b)
        closed = None
        if b is Bound.GL:
            closed = family_threshold_closed_form(closed_key, h.qubit_count, part.kappa)
        rows.append({
            "system": h.name, "family": cfg.family, "partition": part.label(),
            "bound": b.value, "threshold": lam, "closed_form": closed,
            "difference": None if closed is None else lam - closed,
        })
    return rows


def _simulation_plan(cfg: RunConfig, name: str):
    """(program, input, hamiltonian, {label: analytic target})."""
    if name == "bell-diag":
        beta, gamma = cfg.beta or 0.0, cfg.gamma or 0.0
        h = load_system(cfg.system or "NAFP", cfg.config)
        check_family_size("bell-diag", h)
        prog = circuits.bell_diag_program(beta, gamma) + circuits.bell_diag_passivization(beta, gamma, h)
        target = bell_diagonal(beta, gamma)
        return prog, circuits.bell_diag_input(), h, target
    if name == "ghz":
        n = cfg.n or 3
        if cfg.theta is not None:
            theta = cfg.theta
        else:
            theta = math.acos(1.0 if cfg.lam is None else cfg.lam)
        default = {3: "FAN", 10: "TMP"}.get(n)
        h = load_system(cfg.system, cfg.config) if cfg.system else (
            named_system(default) if default else named_system("identical", n=n))
        if h.qubit_count != n:
            raise InputError(f"system has {h.qubit_count} qubits, --n is {n}")
        prog, lam = circuits.ghz_program(n, theta)
        prog = prog + circuits.ghz_passivization(n)
        return prog, circuits.ghz_input(n, lam), h, noisy_ghz(lam, n)
    if name == "exp3":
        lam = 1.0 if cfg.lam is None else cfg.lam
        h = load_system(cfg.system or "DBFM", cfg.config)
        check_family_size("exp3", h)
        prog = circuits.exp3_program() + circuits.exp3_passivization()
        return prog, circuits.ghz_input(3, lam), h, noisy_ghz(lam, 3)
    raise InputError(f"unknown program {name!r}; expected bell-diag, ghz, exp3 or --program FILE")


def cmd_simulate(cfg: RunConfig, name: str | None = None) -> list[dict]:
    if cfg.program:
        try:
            text = Path(cfg.program).read_text()
        except OSError as e:
            raise InputError(f"cannot read {cfg.program}: {e.strerror}") from None
        prog = parse_program(text)
        h = load_system(cfg.system, cfg.config) if cfg.system else None
        if cfg.matrix:
            state = read_state(cfg.matrix)
        else:
            state = pseudo_pure("0" * prog.qubit_count)
        if h is not None and h.qubit_count != prog.qubit_count:
            raise InputError(f"system has {h.qubit_count} qubits, program {prog.qubit_count}")
        targets = {}
    else:
        prog, state, h, prepared = _simulation_plan(cfg, name or "")
        passive = passive_state(prepared, h)
        targets = {"prepared": prepared, "passive": passive, "final": passive}
    trace = circuits.run(prog, state)
    unit, scale = h.unit(cfg.units) if h is not None else ("MHz", 1.0)
    rows = []
    steps = list(trace.snapshots) + [("final", trace.final)]
    for lbl, rho in steps:
        t = targets.get(lbl)
        rows.append({
            "step": lbl,
            "energy": None if h is None else rho.energy(h) / scale,
            "ground_energy": None if h is None else level_structure(h).ground_energy / scale,
            "fidelity": None if t is None else fidelity(rho.matrix, t.matrix),
            "trace_distance": None if t is None else trace_distance(rho.matrix, t.matrix),
            "units": unit,
        })
    if cfg.dump:
        write_state(cfg.dump, trace.final)
    return rows


ORACLE_CUTS = (("NAFP", (1,)), ("FAN", (1,)), ("FAN", (2,)),
               ("DBFM", (1,)), ("DBFM", (2,)), ("DBFM", (3,)), ("DBFM", (1, 2)))
ORACLE_TOL = 1e-9


def _suite_separable(rng, count) -> list[dict]:
    rows = []
    for name, x in ORACLE_CUTS:
        h = named_system(name)
        res = oracles.separable_battery(h, Bipartition(x, h.qubit_count), count, rng, ORACLE_TOL)
        rows.append({"suite": "separable", "case": f"{name} X={','.join(map(str, x))}",
                     "checked": res.checked, "failures": sum(res.violations.values()),
                     "worst_slack": max(res.worst_slack.values())})
    return rows


def _suite_passive(rng, count) -> list[dict]:
    rows = []
    for n in (2, 3):
        h = QubitHamiltonian(tuple(rng.uniform(0.1, 1.0, n)))
        lv = level_structure(h)
        en_basis = diagonal(h)
        worst, bad = 0.0, 0
        for _ in range(count):
            p = oracles.random_diagonal_populations(1 << n, rng)
            a = passive_energy(np.sort(p)[::-1], lv)
            b = oracles.brute_force_passive(p, en_basis)
            worst = max(worst, abs(a - b))
            bad += abs(a - b) > 1e-12
        rows.append({"suite": "passive", "case": f"dim {1 << n}", "checked": count,
                     "failures": bad, "worst_slack": worst})
    h = named_system("NAFP")
    en_basis = diagonal(h)
    worst, bad = 0.0, 0
    for _ in range(count):
        beta, gamma = rng.uniform(0, math.pi, 2)
        p = np.array(sorted(bell_diagonal(beta, gamma).spectrum()))
        p = rng.permutation(p)
        a = oracles.restricted_passive(p, en_basis)[0]
        b = oracles.brute_force_passive(p, en_basis)
        worst = max(worst, abs(a - b))
        bad += abs(a - b) > 1e-12 * max(1.0, sum(h.gaps))
    rows.append({"suite": "passive", "case": "restricted 24 vs all 24", "checked": count,
                 "failures": bad, "worst_slack": worst})
    return rows


def _bound_i(gaps, x) -> float:
    h = QubitHamiltonian(tuple(gaps))
    return bound_i(level_structure(h), level_structure(h, x))


def _suite_propositions(rng, count) -> list[dict]:
    cases = []
    for _ in range(count):
        a1, a2 = rng.uniform(0.1, 1.0, 2)
        cases.append(("two-qubit", (a1, a2), (1,), oracles.prop_two_qubit(a1, a2)))
        lo, hi = np.sort(rng.uniform(0.1, 1.0, 2))
        cases.append(("three 1|23 a1<a2=a3", (lo, hi, hi), (1,),
                      oracles.prop_three_qubit_single(lo, hi, hi)))
        cases.append(("three 1|23 a1=a2>a3", (hi, hi, lo), (1,),
                      oracles.prop_three_qubit_single(hi, hi, lo)))
        cases.append(("three 12|3 a1<a2=a3", (lo, hi, hi), (1, 2),
                      oracles.prop_three_qubit_pair(lo, hi, hi)))
        a = rng.uniform(0.1, 1.0)
        big = a * rng.uniform(2 / 3, 1.0)
        small = a * rng.uniform(0.05, 2 / 3)
        cases.append(("three 12|3 a3>=2a/3", (a, a, big), (1, 2),
                      oracles.prop_three_qubit_pair(a, a, big)))
        cases.append(("three 12|3 a3<2a/3", (a, a, small), (1, 2),
                      oracles.prop_three_qubit_pair(a, a, small)))
        n = int(rng.integers(3, 6))
        ac = rng.uniform(0.1, 0.5)
        al = rng.uniform(ac + 0.05, 1.0)
        gaps = (ac,) + (al,) * (n - 1)
        cases.append(("star centre in X", gaps, (1,), oracles.prop_star(ac, al, True)))
        cases.append(("star satellite in X", gaps, (2,), oracles.prop_star(ac, al, False)))
    rows = {}
    for name, gaps, x, closed in cases:
        d = abs(_bound_i(gaps, x) - closed)
        r = rows.setdefault(name, {"suite": "propositions", "case": name, "checked": 0,
                                   "failures": 0, "worst_slack": 0.0})
        r["checked"] += 1
        r["failures"] += d >= 1e-12
        r["worst_slack"] = max(r["worst_slack"], d)
    return list(rows.values())


def _suite_npt(resolution: int) -> list[dict]:
    h = named_system("NAFP")
    part = Bipartition((1,), 2)
    axis = np.linspace(0.0, math.pi, resolution)
    checked = bad = 0
    worst = -np.inf
    for b in axis:
        for g in axis:
            rho = bell_diagonal(float(b), float(g))
            m = margins(rho, h, part)[Bound.GL]
            if m > ORACLE_TOL:
                checked += 1
                worst = max(worst, m)
                bad += oracles.partial_transpose_check(rho, part) is not oracles.PptVerdict.NPT
    return [{"suite": "npt", "case": f"bell grid {resolution}x{resolution}", "checked": checked,
             "failures": bad, "worst_slack": float(worst) if checked else 0.0}]


def cmd_oracle(cfg: RunConfig) -> list[dict]:
    rng = np.random.default_rng(cfg.seed)
    rows = _suite_separable(rng, cfg.count)
    rows += _suite_passive(rng, 500)
    rows += _suite_propositions(rng, 50)
    rows += _suite_npt(cfg.resolution)
    for r in rows:
        r["failures"] = int(r["failures"])
        r["worst_slack"] = float(r["worst_slack"])
    return rows


# -- argument parsing ------------------------------------------------------

def _partition(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad partition {text!r}; use e.g. 1,2") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ergocert", description="Ergotropy-based entanglement certification.")
    sub = p.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--system")
    common.add_argument("--config", help="file of 'name = gap1,gap2,...' lines (MHz)")
    common.add_argument("--partition", type=_partition, default=(1,))
    common.add_argument("--family", choices=FAMILIES)
    common.add_argument("--lambda", dest="lam", type=float)
    common.add_argument("--beta", type=float)
    common.add_argument("--gamma", type=float)
    common.add_argument("--theta", type=float)
    common.add_argument("--n", type=int)
    common.add_argument("--matrix", help="density matrix file ('qubits N' header)")
    common.add_argument("--bound", choices=("gl", "g", "i", "all"), default="all")
    common.add_argument("--out")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--resolution", type=int, default=101)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--units")
    common.add_argument("--workers", type=int, default=1)
    for name in ("certify", "sweep", "threshold", "oracle"):
        sp = sub.add_parser(name, parents=[common])
        if name == "oracle":
            sp.add_argument("--count", type=int, default=1000,
                            help="random separable states per cut")
    sp = sub.add_parser("simulate", parents=[common])
    sp.add_argument("name", nargs="?", help="bell-diag, ghz or exp3")
    sp.add_argument("--program", help="gate program file")
    sp.add_argument("--dump", help="write the final density matrix here")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    keys = RunConfig.__dataclass_fields__
    return RunConfig(**{k: v for k, v in vars(ns).items() if k in keys and v is not None})


def emit(rows: list[dict], cfg: RunConfig):
    text = serialize(rows, cfg.format)
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)


def _summarize_oracle(rows):
    for r in rows:
        status = "ok" if r["failures"] == 0 else "FAIL"
        print(f"{status:4} {r['suite']:<12} {r['case']:<28} checked={r['checked']:<6} "
              f"failures={r['failures']} worst={r['worst_slack']:.3e}", file=sys.stderr)


COMMANDS = {"certify": cmd_certify, "sweep": cmd_sweep, "threshold": cmd_threshold,
            "oracle": cmd_oracle}


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    cfg = config_from_args(ns)
    try:
        if cfg.command == "simulate":
            rows = cmd_simulate(cfg, ns.name)
        else:
            rows = COMMANDS[cfg.command](cfg)
        emit(rows, cfg)
    except (NumericalInvariantError, ThresholdNotFound, NonMonotoneError) as e:
        print(f"numerical error: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except InvalidStateError as e:
        print(f"invalid state ({e.invariant}): {e}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, InputFormatError, ProgramError, ValueError, IndexError, KeyError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    if cfg.command == "oracle":
        _summarize_oracle(rows)
        if any(r["failures"] for r in rows):
            return EXIT_ORACLE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
