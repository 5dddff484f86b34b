"""Composed Euclidean oscillator kernel against the exact one, for several truncation orders."""

import argparse

import numpy as np

from jacobipath.jacobi import Potential, compute_jacobi_series
from jacobipath.kernels import harmonic_kernel
from jacobipath.propagator import Grid1D, QuadParams, build_slice_matrix, loglog_slope


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--orders", default="1,2,8")
    ap.add_argument("--slices", default="16,32,64,128,256")
    ap.add_argument("--n-points", type=int, default=128)
    ap.add_argument("--half-width", type=float, default=4.0)
    ap.add_argument("--beta", type=float, default=0.5)
    ap.add_argument("--scheme", default="band", choices=["band", "contour"])
    args = ap.parse_args()

    grid = Grid1D(-args.half_width, args.half_width, args.n_points)
    x = grid.points
    exact = harmonic_kernel(x[:, None], x[None, :], -1j * args.beta).real
    inner = np.ix_(np.abs(x) <= args.half_width / 2, np.abs(x) <= args.half_width / 2)
    slices = [int(s) for s in args.slices.split(",")]
    print(f"dq = {grid.dq:.4f}, scheme = {args.scheme}")
    print("order " + " ".join(f"N={n:<9d}" for n in slices) + " slope")
    for order in (int(o) for o in args.orders.split(",")):
        js = compute_jacobi_series(Potential.harmonic(1, 1), order)
        errs = []
        for n in slices:
            K = build_slice_matrix(js, grid, -1j * args.beta / n, QuadParams(scheme=args.scheme)).power(n)
            errs.append(np.max(np.abs(K.kernel - exact)[inner]) / np.max(np.abs(exact[inner])))
        slope = loglog_slope([1 / n for n in slices], errs)
        print(f"{order:<5d} " + " ".join(f"{e:<11.3e}" for e in errs) + f" {slope:.2f}")


if __name__ == "__main__":
    main()
