"""Regenerates tests/unit/oracle_values.hpp.

Independent of the C++ code paths: mpmath at 40 digits for special functions and kernels,
numpy/scipy Nystrom (closed-form Airy kernel, different node layout) for the determinants.
Run once; the header is committed and frozen.
"""

import os
import sys

import mpmath as mp
import numpy as np
from scipy import integrate, special

mp.mp.dps = 40
out_lines = []


def emit(name, rows, fields):
    out_lines.append(f"inline constexpr {name}Case {name.lower()}_cases[] = {{")
    for r in rows:
        vals = ", ".join(mp.nstr(mp.mpf(v), 20) if not isinstance(v, int) else str(v) for v in r)
        out_lines.append(f"    {{{vals}}},")
    out_lines.append("};")
    out_lines.append("")


def hn(n, x):
    return mp.hermite(n, x) / mp.sqrt(2**n * mp.factorial(n) * mp.sqrt(mp.pi))


def psi(beta, n, x):
    beta = mp.mpf(beta)
    x = mp.mpf(x)
    return mp.sqrt(beta) * hn(n, beta * x) * mp.exp(-(beta * x) ** 2 / 2)


# ---- Airy
airy_x = [-50, -20, -8.5, -6, -3, -1, 0, 0.5, 1, 2.5, 5, 6.4, 6.6, 10, 20, 50]
emit("Airy", [(x, mp.airyai(x), mp.airyai(x, derivative=1)) for x in airy_x], None)
first_zero = mp.airyaizero(1)

# ---- Hermite functions
herm = []
for beta, n, x in [(1, 0, 0), (1, 1, 0.3), (1, 2, -1.1), (1, 7, 0.9), (1, 30, 2.5), (1, 30, 9.0),
                   (1, 100, 3.3), (1, 100, 16.0), (1, 300, 7.7), (1, 300, 29.5), (2, 5, 0.4),
                   (0.5, 12, 3.0), (3, 40, -1.7)]:
    herm.append((beta, n, x, psi(beta, n, x)))
emit("Hermite", herm, None)


# ---- Airy kernel, closed form
def airy_k(x, y):
    x, y = mp.mpf(x), mp.mpf(y)
    if x == y:
        return mp.airyai(x, derivative=1) ** 2 - x * mp.airyai(x) ** 2
    return (mp.airyai(x) * mp.airyai(y, derivative=1) - mp.airyai(x, derivative=1) * mp.airyai(y)) / (x - y)


emit("AiryKernel", [(x, y, airy_k(x, y)) for x, y in [(0, 0), (1, -0.5), (-2, -2), (3, 0.5), (-5, -4)]], None)


# ---- M_alpha by direct quadrature over lambda
def m_alpha(alpha, x, y):
    with mp.workdps(20):
        alpha = mp.mpf(alpha)
        f = lambda l: mp.exp(alpha * l) / (mp.exp(alpha * l) + 1) * mp.airyai(x + l) * mp.airyai(y + l)
        left = -mp.mpf(60) / alpha
        pts = list(mp.linspace(left, 0, int(-left) // 2 + 1)) + [10, 30]
        return mp.quad(f, pts)


malpha = []
for a, x, y in [(1, 0, 0), (1, 1, -0.5), (1, -2, 1), (0.5, 0, 0), (4, -1, 0), (0.25, 3, 3)]:
    malpha.append((a, x, y, m_alpha(a, x, y)))
    print("m_alpha", a, x, y, malpha[-1][-1], file=sys.stderr)
emit("MAlpha", malpha, None)


# ---- GUE kernel sum
def gue(n, x, y):
    x, y = mp.mpf(x), mp.mpf(y)
    return sum(hn(k, x) * hn(k, y) for k in range(n)) * mp.exp(-(x * x + y * y) / 2)


emit("Gue", [(10, x, y, gue(10, x, y)) for x, y in [(0, 0), (1, -0.7), (3, 3), (4.5, 2)]] +
     [(1, 0, 0, gue(1, 0, 0)), (60, 0.3, -0.2, gue(60, 0.3, -0.2))], None)


# ---- MNS kernel: q = e^{-mu}, lambda = e^{mu N} - 1, p_n = lambda q^{n+1/2} / (1 + lambda q^{n+1/2})
def mns(mu, npart, x, y, terms):
    mu = mp.mpf(mu)
    q = mp.exp(-mu)
    lam = mp.expm1(mu * npart)
    beta = mp.sqrt((1 + q) / (1 - q))
    s = 0
    for n in range(terms):
        a = lam * q ** (n + mp.mpf(0.5))
        s += a / (1 + a) * psi(beta, n, x) * psi(beta, n, y)
    return s


def mns_mean(mu, npart, terms):
    mu = mp.mpf(mu)
    q = mp.exp(-mu)
    lam = mp.expm1(mu * npart)
    return mp.nsum(lambda n: lam * q ** (n + 0.5) / (1 + lam * q ** (n + 0.5)), [0, mp.inf])


mns_rows = []
for mu, npart, x, y in [(0.1, 20, 0, 0), (0.1, 20, 0.5, -0.3), (2.0, 10, 1.0, 0.2), (0.05, 10, 0, 1)]:
    terms = int(40 / mu) + 40
    mns_rows.append((mu, npart, x, y, mns(mu, npart, x, y, terms)))
emit("Mns", mns_rows, None)
mns_means = [(0.1, 20, mns_mean(0.1, 20, 0)), (0.02, 50, mns_mean(0.02, 50, 0))]
emit("MnsMean", mns_means, None)


# ---- bulk kernel L_c
def bulk(c, d):
    c = mp.mpf(c)
    lam = mp.expm1(1 / c)
    f = lambda u: mp.cos(mp.pi * d * u) / (mp.exp(u * u / c) / lam + 1)
    u0 = mp.sqrt(c * max(mp.log(lam), 1))
    return mp.quad(f, [0, u0 / 2, u0, u0 * 1.5, u0 * 3 + 5 * mp.sqrt(c), mp.inf])


emit("Bulk", [(c, d, bulk(c, d)) for c, d in [(1, 0), (1, 0.7), (1, 1.5), (0.05, 0), (0.05, 0.3), (5, 2)]], None)


# ---- Nystrom determinants in double precision (numpy/scipy), independent layout
def airy_kernel_np(x, y):
    ai_x, aip_x, _, _ = special.airy(x)
    ai_y, aip_y, _, _ = special.airy(y)
    X, Y = np.meshgrid(x, y, indexing="ij")
    AX, AY = np.meshgrid(ai_x, ai_y, indexing="ij")
    PX, PY = np.meshgrid(aip_x, aip_y, indexing="ij")
    with np.errstate(divide="ignore", invalid="ignore"):
        K = (AX * PY - PX * AY) / (X - Y)
    d = aip_x**2 - x * ai_x**2
    K[np.diag_indices_from(K)] = d
    return K


def nystrom_det(kfun, s, length, m):
    z, w = np.polynomial.legendre.leggauss(m)
    x = s + (z + 1) * length / 2
    w = w * length / 2
    sw = np.sqrt(w)
    K = kfun(x, x)
    return np.linalg.det(np.eye(m) - sw[:, None] * K * sw[None, :])


tw = []
for s in [-6, -3, -2, -1, 0, 1, 2, 4]:
    v1 = nystrom_det(airy_kernel_np, s, 16, 70)
    v2 = nystrom_det(airy_kernel_np, s, 18, 100)
    assert abs(v1 - v2) < 1e-13, (s, v1, v2)
    tw.append((s, v2))
emit("TracyWidom", tw, None)


def m_alpha_np(alpha):
    def k(x, y):
        n = len(x)
        K = np.empty((n, n))
        for i in range(n):
            for j in range(i, n):
                f = lambda l: special.expit(alpha * l) * special.airy(x[i] + l)[0] * special.airy(y[j] + l)[0]
                lo = -60.0 / alpha
                v = integrate.quad(f, lo, 0, limit=2000, epsabs=1e-15, epsrel=1e-13)[0]
                v += integrate.quad(f, 0, 40, limit=500, epsabs=1e-15, epsrel=1e-13)[0]
                K[i, j] = K[j, i] = v
        return K
    return k


falpha = []
for s in [-2.0, 0.0, 1.5]:
    v1 = nystrom_det(m_alpha_np(1.0), s, 22, 48)
    v2 = nystrom_det(m_alpha_np(1.0), s, 24, 64)
    print("F_1", s, v1, v2, file=sys.stderr)
    assert abs(v1 - v2) < 1e-9, (s, v1, v2)
    falpha.append((1.0, s, v2))
emit("FAlpha", falpha, None)

# ---- scalars
N = mp.mpf(100)
ln = mp.log(N)
a100 = mp.sqrt(ln) - mp.log(4 * mp.pi * ln) / (4 * mp.sqrt(ln))
b100 = 1 / (2 * mp.sqrt(ln))
logistic_2_5 = mp.exp(10) / (1 + mp.exp(10))

header = f"""#pragma once

// Frozen by tests/oracle/make_oracle.py (mpmath 40 digits; numpy/scipy Nystrom for determinants).

namespace oracle {{

struct AiryCase {{ double x, ai, aip; }};
struct HermiteCase {{ double beta; int n; double x, psi; }};
struct AiryKernelCase {{ double x, y, k; }};
struct MAlphaCase {{ double alpha, x, y, k; }};
struct GueCase {{ int n; double x, y, k; }};
struct MnsCase {{ double mu, particles, x, y, k; }};
struct MnsMeanCase {{ double mu, particles, mean; }};
struct BulkCase {{ double c, d, k; }};
struct TracyWidomCase {{ double t, f; }};
struct FAlphaCase {{ double alpha, t, f; }};

inline constexpr double airy_first_zero = {mp.nstr(first_zero, 22)};
inline constexpr double gumbel_a100 = {mp.nstr(a100, 20)};
inline constexpr double gumbel_b100 = {mp.nstr(b100, 20)};
inline constexpr double logistic_2_5 = {mp.nstr(logistic_2_5, 20)};

"""
path = os.path.join(os.path.dirname(__file__), "..", "unit", "oracle_values.hpp")
with open(path, "w") as fh:
    fh.write(header + "\n".join(out_lines) + "} // namespace oracle\n")
print("wrote", os.path.normpath(path), file=sys.stderr)
