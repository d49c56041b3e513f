"""Plancherel inversion on the 3-dimensional Heisenberg group.

Reconstructs a Gaussian from its operator-valued Fourier transform,
truncated at J Laguerre components and integrated over 64 frequency
nodes, then runs the case I identity probe with two widths.

Usage: python3 demos/heisenberg_inversion_demo.py [--J 20] [--nodes 64]
"""

import argparse

import numpy as np

from nilharm import general_inversion_probe, heisenberg_inversion_check


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--J", type=int, default=20, help="Laguerre truncation")
    ap.add_argument("--nodes", type=int, default=64, help="frequency nodes")
    ap.add_argument("--mc-samples", type=int, default=4000)
    args = ap.parse_args()

    rep = heisenberg_inversion_check(J=args.J, lam_nodes=args.nodes)
    print(f"Heisenberg inversion, J = {rep.J}, {rep.lam_nodes} nodes on (0, {rep.lam_max}]")
    print(f"fitted c    = {rep.fitted_c:.10f}")
    print(f"classical c = {rep.classical_c:.10f}  (= 1/(2 pi)^2)")
    print()
    print(f"{'probe (t, v)':<24} {'f(x)':>12} {'reconstructed':>14} {'rel err':>10} {'raw err':>10}")
    for (t, v), f, r, e, raw in zip(rep.probes, rep.f_values, rep.reconstructed,
                                    rep.rel_errors, rep.raw_rel_errors):
        ptxt = f"({t:+.2f}, {v[0]:+.2f}, {v[1]:+.2f})"
        print(f"{ptxt:<24} {f:>12.6f} {np.real(r):>14.6f} {e:>10.2e} {raw:>10.2e}")
    print()
    print("raw err is the truncated series; rel err includes the Wynn")
    print("epsilon tail estimate extrapolated from the measured partial sums.")
    print()

    gen = general_inversion_probe(samples=args.mc_samples)
    print(f"case I identity probe, J = {gen.J}, {gen.samples} Haar samples per node")
    for (a, b), r, s in zip(gen.widths, gen.ratios, gen.stderrs):
        print(f"widths a = {a}, b = {b}:  ratio = {r:10.2f} +- {s:.2f}")
    print(f"spread = {gen.spread:.2f} vs combined sigma {gen.combined_sigma:.2f} "
          f"-> consistent: {gen.consistent()}")


if __name__ == "__main__":
    main()
