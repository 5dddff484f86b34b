"""Leading tau-order and coefficient of the mode residual for a few potentials."""

import argparse
from fractions import Fraction

from jacobipath.config import parse_potential
from jacobipath.jacobi import Potential, compute_jacobi_series
from jacobipath.modes import build_mode, residual_direct_check, schrodinger_residual


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--potentials", nargs="*", default=["2:1", "3:1", "3:2,1:1", "4:1", "4:1,3:1"])
    ap.add_argument("--m", default="2")
    ap.add_argument("--hbar", default="3")
    ap.add_argument("--order", type=int, default=8)
    args = ap.parse_args()
    m, hbar = Fraction(args.m), Fraction(args.hbar)
    for text in args.potentials:
        pot = Potential.from_coeffs(parse_potential(text), m=m, hbar=hbar)
        mode = build_mode(compute_jacobi_series(pot, args.order))
        rep = schrodinger_residual(mode)
        agree = residual_direct_check(mode).is_zero()
        print(f"V = {pot.v}: leading order {rep.leading_order}, coefficient {rep.leading_coefficient}, routes agree: {agree}")


if __name__ == "__main__":
    main()
