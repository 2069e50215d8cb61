"""Exact-rational reference values for the collision bound, variance bound and
upper-bound threshold. Output is frozen into tests/test_comb.cpp."""
from fractions import Fraction as F
from math import comb, log
import sys


def w_star(n, q):
    s, w = 0, 0
    while w < n and s + comb(n, w + 1) <= q - 1:
        w += 1
        s += comb(n, w)
    return w, q - 1 - s


def epsilon(n, m, q, f):
    f = F(f)
    x = 1 - 2 * f
    w, r = w_star(n, q)
    total = sum(comb(n, k) * ((1 + x**k) / 2) ** m for k in range(1, w + 1))
    total += r * ((1 + x ** (w + 1)) / 2) ** m
    return total / (q - 1)


def v(n, m, q, f):
    if q == 1:
        e_term = F(0)
    else:
        e_term = epsilon(n, m, q, f) * (q - 1)
    return F(q, 2**m) * (1 + e_term - F(q, 2**m))


def pred(n, m, z, f):
    # 1/(1 + 4^m v/z^2) >= 3/4  <=>  3 * 4^m * v <= z^2
    return 3 * 4**m * v(n, m, z, f) <= z * z


def pred_float(n, m, z, f):
    x = 1 - 2 * f
    w, r = w_star(n, z)
    s = sum(comb(n, k) * ((1 + x**k) / 2) ** m for k in range(1, w + 1)) + r * ((1 + x ** (w + 1)) / 2) ** m
    vv = z / 2**m * (1 + s - z / 2**m)
    return 3 * 4**m * vv <= z * z * (1 + 1e-9)


def scan_u(n, m, f):
    for z in range(1, 2**n + 1):
        if pred_float(n, m, z, f):
            # confirm exactly at the boundary
            for zz in range(max(1, z - 3), z + 4):
                if pred(n, m, zz, f):
                    assert all(not pred(n, m, y, f) for y in range(max(1, zz - 3), zz))
                    return zz
    return 2**n


if __name__ == "__main__":
    e = epsilon(20, 5, 64, 0.25)
    print("epsilon(20,5,64,0.25) =", float(e), "ln =", repr(log(e.numerator) - log(e.denominator)))
    vv = v(12, 4, 100, 0.1)
    print("v(n=12,m=4,q=100,f=0.1) =", repr(float(vv)))
    print("U(20,6,0.08) =", scan_u(20, 6, 0.08))
    print("U(12,3,0.2) =", scan_u(12, 3, 0.2))
    b = comb(576, 288)
    print("ln C(576,288) =", repr(log(b)))
    print("ln C(10,2) =", repr(log(45)))
    print("U(20,6,0.2) =", scan_u(20, 6, 0.2))
    print("U(16,5,0.15) =", scan_u(16, 5, 0.15))
