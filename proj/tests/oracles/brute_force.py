"""Independent brute-force oracles used to freeze expected values in the C++ tests.

Every quantity here is computed by direct enumeration with Python integers and
mpmath, without sharing any code path with the library.
"""
import itertools
import math

import mpmath as mp

mp.mp.dps = 30


def is_prime(n):
    return n >= 2 and all(n % d for d in range(2, int(n ** 0.5) + 1))


def smallest_primitive_root(q):
    for g in range(2, q):
        if len({pow(g, k, q) for k in range(q - 1)}) == q - 1:
            return g


def dlog_table(q):
    g = smallest_primitive_root(q)
    table = {}
    for k in range(q - 1):
        table[pow(g, k, q)] = k
    return g, table


def chi(q, j, n):
    if n % q == 0:
        return mp.mpc(0)
    _, table = dlog_table(q)
    return mp.expjpi(2 * mp.mpf(j * table[n % q]) / (q - 1))


def gauss(q, j):
    return mp.fsum(chi(q, j, n) * mp.expjpi(2 * mp.mpf(n) / q) for n in range(1, q))


def d_n(N, x):
    return sum(1 for t in itertools.product(range(1, x + 1), repeat=N) if math.prod(t) == x)


def hyper_kloosterman(q, N, b):
    total = mp.mpc(0)
    for xs in itertools.product(range(1, q), repeat=N):
        if math.prod(xs) % q == b % q:
            total += mp.expjpi(2 * mp.mpf(sum(xs)) / q)
    return total


def beta_odd(N, t, x):
    total = mp.mpf(0)
    for ys in itertools.product(range(1, x + 1), repeat=N):
        if math.prod(ys) == x:
            total += mp.fprod(1 - mp.cos(2 * mp.pi * y * t) for y in ys)
    return total / x


if __name__ == "__main__":
    print("q=5", dlog_table(5))
    print("q=7 g", smallest_primitive_root(7))
    print("chi_5,1(2)", chi(5, 1, 2))
    print("tau(5,0)", gauss(5, 0))
    print("tau(5,2)", gauss(5, 2))
    print("d2(6)", d_n(2, 6), "d3(4)", d_n(3, 4), "d4(60)", d_n(4, 60))
    print("HK(7,2,1)", hyper_kloosterman(7, 2, 1),
          2 * mp.cos(4 * mp.pi / 7) + 4 * mp.cos(2 * mp.pi / 7))
    print("beta_2,1/4(2)", beta_odd(2, mp.mpf(1) / 4, 2))
    # max_t |S_chi(t)| for q=5, j=1
    partial = [mp.fsum(chi(5, 1, n) for n in range(1, m + 1)) / mp.sqrt(5) for m in range(6)]
    print("max|S| q=5 j=1", max(abs(p) for p in partial), mp.sqrt(2) / mp.sqrt(5))
    print("zeta(2)^4/zeta(4)", mp.zeta(2) ** 4 / mp.zeta(4), 5 * mp.pi ** 4 / 72)
    print("zeta(3)^4/zeta(6)", mp.zeta(3) ** 4 / mp.zeta(6))
    print("zeta(1.5)", mp.zeta(1.5), "zeta(2.5)", mp.zeta(2.5))
    # Limiting second moments via sum_{a>=1} cos(2 pi a x)/a^2 = pi^2 B2({x}).
    def b2(x):
        x = x - mp.floor(x)
        return x * x - x + mp.mpf(1) / 6

    for t in (mp.mpf(1) / 10, mp.mpf(1) / 4, mp.mpf(1) / 2):
        odd = mp.mpf(1) / 4 - 2 * b2(t) + b2(2 * t) / 2
        even = mp.mpf(1) / 12 - b2(2 * t) / 2
        print("M_limit t=", t, "odd", odd, "even", even)
