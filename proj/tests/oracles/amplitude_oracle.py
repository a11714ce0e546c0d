"""Independent 50-digit transcription of the pre-symmetrized amplitude.

Regenerates the frozen values in tests/test_kernel.cpp:
    python3 tests/oracles/amplitude_oracle.py
"""
import mpmath as mp

mp.mp.dps = 50


def nrm(a):
    return mp.sqrt(a[0] ** 2 + a[1] ** 2)


def w(a):
    return mp.sqrt(nrm(a))


def dot(a, b):
    return a[0] * b[0] + a[1] * b[1]


def fp(a, b):
    return dot(a, b) + nrm(a) * nrm(b)


def fm(a, b):
    return dot(a, b) - nrm(a) * nrm(b)


def sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def t_pre(k1, k2, k3, k4):
    k1, k2, k3, k4 = [tuple(mp.mpf(x) for x in v) for v in (k1, k2, k3, k4)]
    o1, o2, o3, o4 = w(k1), w(k2), w(k3), w(k4)
    br = -12 * nrm(k1) * nrm(k2) * nrm(k3) * nrm(k4)
    br -= 2 * (o1 + o2) ** 2 * (o3 * o4 * fm(k1, k2) + o1 * o2 * fm(k3, k4))
    br -= 2 * (o1 - o3) ** 2 * (o2 * o4 * fp(k1, k3) + o1 * o3 * fp(k2, k4))
    br -= 2 * (o1 - o4) ** 2 * (o2 * o3 * fp(k1, k4) + o1 * o4 * fp(k2, k3))
    br += fp(k1, k2) * fp(k3, k4) + fm(k1, k3) * fm(k2, k4) + fm(k1, k4) * fm(k2, k3)
    # omega_{a}^2 = |a|
    br += 4 * (o1 + o2) ** 2 * fm(k1, k2) * fm(k3, k4) / (nrm(add(k1, k2)) - (o1 + o2) ** 2)
    br += 4 * (o1 - o3) ** 2 * fp(k1, k3) * fp(k2, k4) / (nrm(sub(k1, k3)) - (o1 - o3) ** 2)
    br += 4 * (o1 - o4) ** 2 * fp(k1, k4) * fp(k2, k3) / (nrm(sub(k1, k4)) - (o1 - o4) ** 2)
    return -br / (16 * mp.pi ** 2 * mp.root(nrm(k1) * nrm(k2) * nrm(k3) * nrm(k4), 4))


CASES = [
    ((1.0, 0.0), (0.0, 2.0), (-1.5, 0.5), (0.7, -1.1)),
    ((0.3, 0.4), (2.0, -1.0), (1.1, 0.9), (-0.6, 0.25)),
    ((5.0, 1.0), (-0.2, 3.0), (0.04, 0.01), (2.5, -2.5)),
    ((0.05, 0.02), (8.0, 0.0), (0.03, -0.04), (7.9, 0.3)),
    ((-3.0, -4.0), (1.0, 1.0), (2.0, -0.5), (-0.5, 6.0)),
]

if __name__ == "__main__":
    for c in CASES:
        print(mp.nstr(t_pre(*c), 20))
