"""Gap pattern (a, a, 2a/3), cut 12 | 3: the three noisy-GHZ thresholds
land on 1/5, 1/2 and 4/5."""

import argparse

from ergocert.certify import Bipartition, Bound, solve_threshold
from ergocert.hamiltonians import QubitHamiltonian
from ergocert.states import noisy_ghz


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha", type=float, default=1.0)
    a = ap.parse_args().alpha
    h = QubitHamiltonian((a, a, 2 * a / 3))
    part = Bipartition((1, 2), 3)
    for b, want in zip(Bound, (1 / 5, 1 / 2, 4 / 5)):
        got = solve_threshold(lambda lam: noisy_ghz(lam, 3), h, part, b)
        print(f"{b.value:2}: {got:.8f}  (expected {want:.8f})")


if __name__ == "__main__":
    main()
