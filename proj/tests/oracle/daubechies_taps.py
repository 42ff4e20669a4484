"""Daubechies extremal-phase lowpass taps by spectral factorization.

Independent of the C++ tables: solves the vanishing-moment polynomial in
high precision and keeps the roots inside the unit circle.
"""
import mpmath as mp

mp.mp.dps = 60


def daubechies_lowpass(k):
    # P(y) = sum_j C(k-1+j, j) y^j with y = (2 - z - 1/z)/4; multiply by z^(k-1)
    # to get a polynomial in z of degree 2(k-1).
    if k == 1:
        s = 1 / mp.sqrt(2)
        return [s, s]
    poly = [mp.mpf(0)] * (2 * k - 1)  # coefficients of z^0..z^(2k-2)
    for j in range(k):
        c = mp.binomial(k - 1 + j, j)
        # ((2 - z - 1/z)/4)^j * z^(k-1) = (-(z-1)^2 / (4 z))^j z^(k-1)
        #   = (-1/4)^j (z-1)^(2j) z^(k-1-j)
        base = [mp.binomial(2 * j, i) * (-1) ** (2 * j - i) for i in range(2 * j + 1)]
        for i, b in enumerate(base):
            poly[k - 1 - j + i] += c * (mp.mpf(-1) / 4) ** j * b
    roots = mp.polyroots(list(reversed(poly)), maxsteps=500, extraprec=200)
    inside = [r for r in roots if abs(r) < 1]
    # H(z) ∝ (1 + z)^k * prod (z - r)
    coeffs = [mp.mpc(1)]
    for _ in range(k):
        coeffs = _mul(coeffs, [mp.mpc(1), mp.mpc(1)])
    for r in inside:
        coeffs = _mul(coeffs, [-r, mp.mpc(1)])
    coeffs = [c.real for c in coeffs]
    s = mp.fsum(coeffs)
    coeffs = [c * mp.sqrt(2) / s for c in coeffs]
    # extremal phase ordering: large taps first
    if abs(coeffs[0]) < abs(coeffs[-1]):
        coeffs = coeffs[::-1]
    return coeffs


def _mul(a, b):
    out = [mp.mpc(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


if __name__ == "__main__":
    for k in range(1, 9):
        taps = daubechies_lowpass(k)
        print(f"db{k}:")
        for t in taps:
            print("    " + mp.nstr(t, 20, min_fixed=-50, max_fixed=50) + ",")
