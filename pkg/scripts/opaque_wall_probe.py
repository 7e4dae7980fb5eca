#!/usr/bin/env python3
"""Watch the merged-block scatterer turn into a hard wall as h -> 0.

For fixed physical momentum kappa the lattice angle is phi = kappa*h, and
both |T| and |psi(0)| shrink linearly with h while R approaches -1.
"""

from __future__ import annotations

import argparse

from qhscatter import continuum_probe


def run(g: float, kappa: float, h_start: float, halvings: int) -> None:
    hs = [h_start / 2**i for i in range(halvings + 1)]
    result = continuum_probe(g, kappa, hs)
    print(f"g={g}, kappa={kappa}")
    print(f"{'h':>12} {'phi':>12} {'|T|':>14} {'|R|':>12} {'|psi0|':>14}")
    for row in result.rows:
        print(
            f"{row.h:12.6f} {row.phi:12.6f} {row.abs_T:14.6e} "
            f"{row.abs_R:12.8f} {row.abs_psi0:14.6e}"
        )
    print(f"fitted |T| exponent    : {result.t_exponent:.4f}")
    print(f"fitted |psi0| exponent : {result.psi0_exponent:.4f}")
    print(f"closed vs numeric gap  : {result.max_closed_numeric_gap:.2e}")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--g", type=float, default=0.5)
    parser.add_argument("--kappa", type=float, default=1.0)
    parser.add_argument("--h-start", type=float, default=0.2)
    parser.add_argument("--halvings", type=int, default=6)
    args = parser.parse_args()
    run(args.g, args.kappa, args.h_start, args.halvings)
