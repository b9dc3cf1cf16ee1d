#!/usr/bin/env python3
"""Regenerate the Chebyshev coefficients used by mcvd::erfcx.

The expansion is of f(t) = (1 + 2x) * exp(x^2) * erfc(x) with the map
t = (x - K) / (x + K), K = 3.75, which sends [0, inf) onto [-1, 1).
Coefficients are computed at 50 digits and printed as C++ literals.
"""
import mpmath as mp

K = mp.mpf("3.75")
N = 96
CUTOFF = mp.mpf("1e-19")


def f(t):
    x = K * (1 + t) / (1 - t)
    return (1 + 2 * x) * mp.erfc(x) * mp.exp(x * x)


def main():
    mp.mp.dps = 50
    nodes = [mp.cos(mp.pi * (j + mp.mpf(1) / 2) / N) for j in range(N)]
    vals = [f(t) for t in nodes]
    coeffs = []
    for n in range(N):
        s = mp.fsum(vals[j] * mp.cos(mp.pi * n * (j + mp.mpf(1) / 2) / N) for j in range(N))
        coeffs.append(2 * s / N)
    coeffs[0] /= 2
    last = max(i for i, c in enumerate(coeffs) if abs(c) > CUTOFF)
    for c in coeffs[: last + 1]:
        print(f"    {mp.nstr(c, 21, min_fixed=1, max_fixed=0)},")


if __name__ == "__main__":
    main()
