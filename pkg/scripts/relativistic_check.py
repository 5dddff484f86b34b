"""Euclidean relativistic momentum integral against the Bessel-function kernel."""

import argparse
import math

import numpy as np

from jacobipath.kernels import newton_wigner_reference, relativistic_momentum_integral


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=float, default=1.0)
    ap.add_argument("--c", type=float, default=1.0)
    ap.add_argument("--dq", default="0,1,3,10")
    ap.add_argument("--beta", default="0.5,1,2,5,10,20")
    args = ap.parse_args()

    print("dq      beta    z         quadrature       bessel           rel_err")
    for dq in map(float, args.dq.split(",")):
        for beta in map(float, args.beta.split(",")):
            z = args.m * args.c * math.hypot(args.c * beta, dq)
            val, _ = relativistic_momentum_integral(dq, beta, args.m, args.c)
            ref = newton_wigner_reference(dq, -1j * beta, args.m, args.c)
            print(f"{dq:<7g} {beta:<7g} {z:<9.4g} {val:<16.9e} {ref:<16.9e} {abs(val / ref - 1):.2e}")

    print("\nrest-energy limit at dq = 0: ratio to heat kernel times exp(-m c^2 beta) against 1 + 3/(8z)")
    for z in (10.0, 50.0, 200.0):
        val, _ = relativistic_momentum_integral(0.0, 1.0, m=z)
        heat = math.sqrt(z / (2 * math.pi)) * math.exp(-z)
        print(f"z = {z:<6g} ratio - 1 = {val / heat - 1:.4e}   3/(8z) = {3 / (8 * z):.4e}")


if __name__ == "__main__":
    np.set_printoptions(precision=4)
    main()
