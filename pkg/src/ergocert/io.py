"""Plain-text file formats: density matrices, system configs and result tables."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .hamiltonians import NAMED_SYSTEMS, QubitHamiltonian, named_system
from .states import DensityOperator, InvalidStateError
from .tensor import qubit_count_of


class InputFormatError(ValueError):
    """Malformed input file; ``line`` is 1-based when known."""

    def __init__(self, msg: str, line: int | None = None):
        super().__init__(f"line {line}: {msg}" if line else msg)
        self.line = line


def format_complex(z: complex) -> str:
    """``re+imj`` with round-trip precision, e.g. ``0.5-0.25j``."""
    z = complex(z)
    im = repr(float(z.imag))
    sign = "" if im.startswith("-") else "+"
    return f"{float(z.real)!r}{sign}{im}j"


def parse_complex(token: str, line: int | None = None) -> complex:
    try:
        return complex(token)
    except ValueError:
        raise InputFormatError(f"bad complex entry {token!r}", line) from None


def dump_matrix(rho: DensityOperator | np.ndarray, qubit_count: int | None = None) -> str:
    m = rho.matrix if isinstance(rho, DensityOperator) else np.asarray(rho, complex)
    n = qubit_count if qubit_count is not None else qubit_count_of(m.shape[0])
    rows = [f"qubits {n}"]
    rows += [" ".join(format_complex(z) for z in row) for row in m]
    return "\n".join(rows) + "\n"


def parse_matrix(text: str) -> np.ndarray:
    """Raw matrix from the ``qubits N`` format; blank lines and ``#`` comments skipped."""
    lines = [(i, ln.split("#", 1)[0].strip()) for i, ln in enumerate(text.splitlines(), 1)]
    lines = [(i, ln) for i, ln in lines if ln]
    if not lines:
        raise InputFormatError("empty matrix file")
    i0, head = lines[0]
    parts = head.split()
    if len(parts) != 2 or parts[0].lower() != "qubits" or not parts[1].isdigit():
        raise InputFormatError(f"expected header 'qubits N', got {head!r}", i0)
    n = int(parts[1])
    if n < 1:
        raise InputFormatError("qubit count must be positive", i0)
    d = 1 << n
    body = lines[1:]
    if len(body) != d:
        raise InputFormatError(f"expected {d} rows for {n} qubits, found {len(body)}")
    m = np.empty((d, d), dtype=complex)
    for r, (i, ln) in enumerate(body):
        toks = ln.split()
        if len(toks) != d:
            raise InputFormatError(f"expected {d} entries, found {len(toks)}", i)
        m[r] = [parse_complex(t, i) for t in toks]
    return m


def read_state(path: str | Path) -> DensityOperator:
    """Load and validate; invariant failures surface as InvalidStateError."""
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InputFormatError(f"cannot read {path}: {e.strerror}") from None
    m = parse_matrix(text)
    return DensityOperator(m, qubit_count_of(m.shape[0]))


def write_state(path: str | Path, rho: DensityOperator):
    Path(path).write_text(dump_matrix(rho))


def parse_config(text: str) -> dict[str, tuple[float, ...]]:
    """``name = gap1,gap2,...`` per line, gaps in MHz."""
    out = {}
    for i, raw in enumerate(text.splitlines(), 1):
        ln = raw.split("#", 1)[0].strip()
        if not ln:
            continue
        if "=" not in ln:
            raise InputFormatError(f"expected 'name = gaps', got {ln!r}", i)
        name, rhs = (s.strip() for s in ln.split("=", 1))
        if not name:
            raise InputFormatError("missing system name", i)
        try:
            gaps = tuple(float(g) for g in rhs.split(","))
        except ValueError:
            raise InputFormatError(f"bad gap list {rhs!r}", i) from None
        if any(g < 0 or not np.isfinite(g) for g in gaps):
            raise InputFormatError("gaps must be finite and non-negative", i)
        out[name] = gaps
    return out


def load_system(name: str, config: str | Path | None = None) -> QubitHamiltonian:
    """A named system, overridden or extended by a config file when one is given.

    Overriding a built-in keeps its qubit labels (and so its reference unit)
    as long as the qubit count is unchanged.
    """
    systems = {}
    if config is not None:
        try:
            systems = parse_config(Path(config).read_text())
        except OSError as e:
            raise InputFormatError(f"cannot read {config}: {e.strerror}") from None
    if name in systems:
        gaps = systems[name]
        if name.upper() in NAMED_SYSTEMS:
            base = named_system(name)
            if base.qubit_count == len(gaps):
                return QubitHamiltonian(gaps, labels=base.labels, name=base.name,
                                        reference=base.reference, couplings=base.couplings)
        labels = tuple(f"q{i}" for i in range(1, len(gaps) + 1))
        return QubitHamiltonian(gaps, labels=labels, name=name)
    return named_system(name)


def _cell(v) -> str:
    """Canonical text of one value; CSV cells are written exactly like this."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return repr(v)
    return str(v)


def to_csv(rows: Iterable[Mapping], columns: list[str] | None = None) -> str:
    rows = list(rows)
    columns = columns or (list(rows[0]) if rows else [])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(r[c]) for c in columns])
    return buf.getvalue()


def to_json(rows: Iterable[Mapping]) -> str:
    return json.dumps(list(rows), indent=2) + "\n"


def serialize(rows: Iterable[Mapping], fmt: str) -> str:
    if fmt == "csv":
        return to_csv(rows)
    if fmt == "json":
        return to_json(rows)
    raise ValueError(f"unknown format {fmt!r}")


def read_table(text: str, fmt: str) -> list[dict]:
    """Rows of a serialized table; CSV cells come back as text."""
    if fmt == "json":
        return json.loads(text)
    return [dict(r) for r in csv.DictReader(io.StringIO(text))]


def canonical(rows: Iterable[Mapping]) -> list[dict[str, str]]:
    """Rows with every value in its canonical text form, for comparing formats."""
    return [{k: _cell(v) for k, v in r.items()} for r in rows]


__all__ = [
    "InputFormatError", "InvalidStateError", "format_complex", "parse_complex", "dump_matrix",
    "parse_matrix", "read_state", "write_state", "parse_config", "load_system", "to_csv",
    "to_json", "serialize", "read_table", "canonical",
]
