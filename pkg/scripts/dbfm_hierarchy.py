"""Bound hierarchy on the three-qubit DBFM register, cut (H, C) | F.

Prints the three noisy-GHZ thresholds and compares the vertex-scan
state-independent bound with the expression (2wH - 2wF + wC)/5, which a
separable product state already exceeds.
"""

import numpy as np

from ergocert.certify import (
    Bipartition,
    Bound,
    bound_i,
    delta,
    level_structure,
    solve_threshold,
)
from ergocert.hamiltonians import OMEGA_C, OMEGA_F, OMEGA_H, named_system
from ergocert.states import DensityOperator, noisy_ghz


def main():
    h = named_system("DBFM")
    part = Bipartition((1, 2), 3)
    fam = lambda lam: noisy_ghz(lam, 3)  # noqa: E731
    th = {b: solve_threshold(fam, h, part, b) for b in Bound}
    print("thresholds: " + "  ".join(f"{b.value}={v:.6f}" for b, v in th.items()))

    di = bound_i(level_structure(h), level_structure(h, part.x))
    quoted = (2 * OMEGA_H - 2 * OMEGA_F + OMEGA_C) / 5
    product = DensityOperator(np.kron(np.eye(4) / 4, np.diag([1.0, 0.0])), 3)
    d = delta(product, h, part)
    print(f"state-independent bound (vertex scan): {di / OMEGA_H:.6f} omega_H")
    print(f"(2wH - 2wF + wC)/5:                    {quoted / OMEGA_H:.6f} omega_H")
    print(f"Delta of separable I/4 (x) |0><0|:     {d / OMEGA_H:.6f} omega_H")
    # Delta = (wC + wF) lam / 2 - wF / 2 crosses a constant bound at lam = (2b + wF)/(wC + wF)
    lam_quoted = (2 * quoted + OMEGA_F) / (OMEGA_C + OMEGA_F)
    print(f"threshold implied by the quoted expression: {lam_quoted:.6f}")


if __name__ == "__main__":
    main()
