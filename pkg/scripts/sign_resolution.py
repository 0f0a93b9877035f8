"""Fix the sign of the large-b law for Re S2 and measure how fast it is approached.

On the sine peaks b = (k + 5/8)^2 / 2 the ratio asymptotic/exact should tend
to 1; the fitted exponent of 1 - ratio tells which correction dominates.
"""
import math

import numpy as np

from bandcorr import lattice_sums as ls


def main():
    print(f"resolved sign: {ls.resolve_asymptotic_sign():+d}")
    print(f"{'k':>3} {'b':>10} {'exact':>14} {'asymptotic':>14} {'1-ratio':>10} {'(1-ratio)sqrt(b)':>17}")
    bs, devs = [], []
    for k in range(2, 14):
        b = (k + 0.625) ** 2 / 2
        exact = ls.re_s2_theta(b)
        asym = ls.re_s2_asymptotic(b)
        dev = 1 - asym / exact
        bs.append(b)
        devs.append(dev)
        print(f"{k:>3} {b:>10.4f} {exact:>14.6e} {asym:>14.6e} {dev:>10.3e} {dev * math.sqrt(b):>17.5f}")
    slope = np.polyfit(np.log(bs[3:]), np.log(devs[3:]), 1)[0]
    print(f"fitted exponent of 1 - ratio: {slope:.3f}")


if __name__ == "__main__":
    main()
