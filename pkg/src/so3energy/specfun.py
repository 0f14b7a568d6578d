"""Special functions: Gamma/digamma, Bessel J, Jacobi and Gegenbauer
polynomials, the surrogate kernel's Fourier coefficients and derivatives,
and oscillatory Bessel moment integrals.

Only the orders actually used downstream are supported; accuracy contracts
are enforced by the test suite against independent references.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .quadrature import integrate

_SQRT2 = math.sqrt(2.0)


# --- Gamma family -----------------------------------------------------------


def log_gamma(x):
    """log Gamma(x) for x > 0 (relative error well under 1e-12)."""
    if x <= 0.0:
        raise ValueError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def digamma(x):
    """Logarithmic derivative of Gamma for x > 0.

    Upward recurrence to x >= 8, then the asymptotic series with Bernoulli
    coefficients through 1/x^12; worst-case relative error ~1e-14.
    """
    if x <= 0.0:
        raise ValueError(f"digamma requires x > 0, got {x}")
    acc = 0.0
    while x < 12.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = inv2 * (
        1.0 / 12.0
        - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * 691.0 / 32760.0))))
    )
    return acc + math.log(x) - 0.5 / x - series


# --- Bessel J ---------------------------------------------------------------


def _j32(x):
    # sqrt(2/(pi x)) (sin x / x - cos x); series for the parenthesis when x
    # is tiny, where the two terms cancel to O(x^2)
    if x == 0.0:
        return 0.0
    if x < 1e-2:
        x2 = x * x
        core = x2 / 3.0 - x2 * x2 / 30.0 + x2 * x2 * x2 / 840.0
    else:
        core = math.sin(x) / x - math.cos(x)
    return math.sqrt(2.0 / (math.pi * x)) * core


def _j01_series(x):
    q = x * x / 4.0
    t0, t1 = 1.0, 0.5
    s0, s1 = 1.0, 0.5
    for k in range(1, 40):
        t0 *= -q / (k * k)
        t1 *= -q / (k * (k + 1))
        s0 += t0
        s1 += t1
        if abs(t0) < 1e-18 and abs(t1) < 1e-18:
            break
    return s0, x * s1


def _j01_miller(x):
    # downward recurrence normalized by J0 + 2 sum J_{2k} = 1
    m = int(2 * math.ceil((1.4 * x + 60.0) / 2.0))
    jkp1, jk = 0.0, 1e-30
    j0 = j1 = 0.0
    even_sum = 0.0
    for k in range(m - 1, 0, -1):
        jkm1 = (2.0 * k / x) * jk - jkp1
        jkp1, jk = jk, jkm1
        idx = k - 1
        if idx >= 2 and idx % 2 == 0:
            even_sum += jkm1
        elif idx == 1:
            j1 = jkm1
        elif idx == 0:
            j0 = jkm1
        if abs(jk) > 1e250:
            jk *= 1e-250
            jkp1 *= 1e-250
            even_sum *= 1e-250
            j1 *= 1e-250
    norm = j0 + 2.0 * even_sum
    return j0 / norm, j1 / norm


def bessel_j(nu, x):
    """J_nu(x) for nu in {0, 1, 3/2} and x >= 0, absolute error <= 1e-12 on [0, 100]."""
    if x < 0.0:
        raise ValueError(f"bessel_j requires x >= 0, got {x}")
    if nu == 1.5:
        return _j32(x)
    if nu == 0 or nu == 1:
        if x < 5.0:
            pair = _j01_series(x)
        else:
            pair = _j01_miller(x)
        return pair[int(nu)]
    raise ValueError(f"unsupported order nu={nu} (expected 0, 1 or 3/2)")


# --- Jacobi / Gegenbauer ----------------------------------------------------


def jacobi_p(L, alpha, beta, x):
    """Jacobi polynomial P_L^(alpha, beta)(x) by the three-term recurrence.

    Works elementwise on arrays.
    """
    if L < 0 or L != int(L):
        raise ValueError(f"degree must be a nonnegative integer, got {L}")
    x = np.asarray(x, dtype=float)
    p_prev = np.ones_like(x)
    if L == 0:
        return float(p_prev) if p_prev.ndim == 0 else p_prev
    p = (alpha + 1.0) + (alpha + beta + 2.0) * (x - 1.0) / 2.0
    for n in range(2, int(L) + 1):
        c = 2.0 * n + alpha + beta
        a_n = 2.0 * n * (n + alpha + beta) * (c - 2.0)
        b_n = (c - 1.0) * (alpha * alpha - beta * beta)
        c_n = (c - 1.0) * c * (c - 2.0)
        d_n = 2.0 * (n + alpha - 1.0) * (n + beta - 1.0) * c
        p, p_prev = ((b_n + c_n * x) * p - d_n * p_prev) / a_n, p
    return float(p) if p.ndim == 0 else p


def gegenbauer(n, lam, x):
    """Gegenbauer polynomial C_n^(lam)(x) by its own recurrence, elementwise."""
    if n < 0 or n != int(n):
        raise ValueError(f"degree must be a nonnegative integer, got {n}")
    x = np.asarray(x, dtype=float)
    c_prev = np.ones_like(x)
    if n == 0:
        return float(c_prev) if c_prev.ndim == 0 else c_prev
    c = 2.0 * lam * x
    for k in range(2, int(n) + 1):
        c, c_prev = (2.0 * (k + lam - 1.0) * x * c - (k + 2.0 * lam - 2.0) * c_prev) / k, c
    return float(c) if c.ndim == 0 else c


def gegenbauer_via_jacobi(n, lam, x):
    """Cross-check route: Gegenbauer from the Jacobi family with a Gamma ratio."""
    pref = math.exp(
        log_gamma(n + 2.0 * lam) + log_gamma(lam + 0.5) - log_gamma(n + lam + 0.5) - log_gamma(2.0 * lam)
    )
    return pref * jacobi_p(n, lam - 0.5, lam - 0.5, x)


# --- surrogate kernel: Fourier coefficients and derivatives -----------------


@dataclass(frozen=True)
class GegenbauerCoefficient:
    n: int
    value: float


def kernel_gegenbauer_coeff(n, d=2, tol=1e-11):
    """Coefficient of index n in the Legendre expansion of
    f(t) = -log(1 + sqrt((1-t)/2)) for the sphere (d = 2), weight 1/2.

    f_hat(n) = (2n+1)/2 * int_{-1}^{1} f(t) P_n(t) dt.
    """
    if d != 2:
        raise ValueError("only the two-sphere (d=2) is supported")
    if n < 0:
        raise ValueError("index must be >= 0")

    def f(t):
        return -np.log1p(np.sqrt((1.0 - t) / 2.0)) * jacobi_p(n, 0.0, 0.0, t)

    val = (2.0 * n + 1.0) / 2.0 * integrate(f, -1.0, 1.0, tol=tol)
    return GegenbauerCoefficient(n=int(n), value=val)


# integer partitions of n (as part multisets) for the chain-rule sum, n <= 6
_PARTITIONS = {
    1: [(1,)],
    2: [(2,), (1, 1)],
    3: [(3,), (2, 1), (1, 1, 1)],
    4: [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)],
    5: [(5,), (4, 1), (3, 2), (3, 1, 1), (2, 2, 1), (2, 1, 1, 1), (1, 1, 1, 1, 1)],
    6: [
        (6,),
        (5, 1),
        (4, 2),
        (3, 3),
        (4, 1, 1),
        (3, 2, 1),
        (2, 2, 2),
        (3, 1, 1, 1),
        (2, 2, 1, 1),
        (2, 1, 1, 1, 1),
        (1, 1, 1, 1, 1, 1),
    ],
}

_ODD_DOUBLE_FACT = {1: 1.0, 2: 1.0, 3: 3.0, 4: 15.0, 5: 105.0, 6: 945.0}  # (2j-3)!!


def _partition_coeff(n, parts):
    mult = {}
    for j in parts:
        mult[j] = mult.get(j, 0) + 1
    denom = 1.0
    for j, m in mult.items():
        denom *= math.factorial(j) ** m * math.factorial(m)
    return math.factorial(n) / denom


def kernel_derivative(n, t):
    """n-th derivative of f(t) = -log(1 + sqrt((1-t)/2)) for 1 <= n <= 6.

    Chain rule through f = g(h) with g(y) = (1/2) log 2 - log(sqrt 2 + y)
    and h(t) = sqrt(1 - t); every summand is positive on (-1, 1).
    """
    if n not in _PARTITIONS:
        raise ValueError(f"derivative order must be in 1..6, got {n}")
    if not -1.0 < t < 1.0:
        raise ValueError(f"t must lie strictly inside (-1, 1), got {t}")
    h = math.sqrt(1.0 - t)
    # h^(j)(t) = -((2j-3)!! / 2^j) (1-t)^{-(2j-1)/2}
    hder = {
        j: -(_ODD_DOUBLE_FACT[j] / 2.0**j) * (1.0 - t) ** (-(2 * j - 1) / 2.0)
        for j in range(1, n + 1)
    }
    total = 0.0
    for parts in _PARTITIONS[n]:
        k = len(parts)
        g_k = (-1.0) ** k * math.factorial(k - 1) * (_SQRT2 + h) ** (-k)
        term = g_k * _partition_coeff(n, parts)
        for j in parts:
            term *= hder[j]
        total += term
    return total


# --- oscillatory Bessel moments ---------------------------------------------
#
# int_0^inf w(t) J_nu(t)^2 dt with w = t^{-s-1} or w = log(t)/t. The finite
# part [0, T] is integrated over panels aligned with the oscillation; the
# tail uses the large-argument form of J_nu^2,
#   J_nu(t)^2 = (1/(pi t)) [A(t) + B(t) cos 2t + D(t) sin 2t],
# exact elementary for nu = 3/2 and a truncated large-t expansion for
# nu in {0, 1}, reduced to integrals of t^{-m} {1, cos 2t, sin 2t} {1, log t}
# with stable integration-by-parts recurrences.


def _tail_primitives(T, m, want_log=False, depth=20):
    """Integrals over (T, inf) of t^{-(m+k)} cos/sin(2t) (and log-weighted)."""
    c = [0.0] * (depth + 2)
    s = [0.0] * (depth + 2)
    sin2t, cos2t = math.sin(2.0 * T), math.cos(2.0 * T)
    for k in range(depth, -1, -1):
        mm = m + k
        tp = T ** (-mm)
        c[k] = -sin2t * tp / 2.0 + mm / 2.0 * s[k + 1]
        s[k] = cos2t * tp / 2.0 - mm / 2.0 * c[k + 1]
    if not want_log:
        return c[0], s[0]
    cl = [0.0] * (depth + 2)
    sl = [0.0] * (depth + 2)
    logT = math.log(T)
    for k in range(depth, -1, -1):
        mm = m + k
        tp = T ** (-mm)
        cl[k] = -sin2t * logT * tp / 2.0 + mm / 2.0 * sl[k + 1] - s[k + 1] / 2.0
        sl[k] = cos2t * logT * tp / 2.0 - mm / 2.0 * cl[k + 1] + c[k + 1] / 2.0
    return c[0], s[0], cl[0], sl[0]


def _power_tail(T, m, want_log=False):
    """Integral over (T, inf) of t^{-m} (optionally times log t); needs m > 1."""
    p = T ** (1.0 - m) / (m - 1.0)
    if not want_log:
        return p
    return p, T ** (1.0 - m) * (math.log(T) / (m - 1.0) + 1.0 / (m - 1.0) ** 2)


def _hankel_sq_coeffs(nu, jmax=7):
    """Coefficient tables A, B, D (power -> coefficient) of the J_nu^2 form."""
    if nu == 1.5:
        return {0: 1.0, 2: 1.0}, {0: 1.0, 2: -1.0}, {1: -2.0}
    mu = 4.0 * nu * nu
    a = [1.0]
    for k in range(1, jmax + 1):
        a.append(a[-1] * (mu - (2 * k - 1) ** 2) / (8.0 * k))
    p = {2 * k: (-1.0) ** k * a[2 * k] for k in range(0, jmax // 2 + 1) if 2 * k <= jmax}
    q = {2 * k + 1: (-1.0) ** k * a[2 * k + 1] for k in range(0, (jmax + 1) // 2) if 2 * k + 1 <= jmax}

    def conv(u, v, sign=1.0):
        out = {}
        for i, ci in u.items():
            for j, cj in v.items():
                if i + j <= jmax:
                    out[i + j] = out.get(i + j, 0.0) + sign * ci * cj
        return out

    def add(u, v):
        out = dict(u)
        for j, cj in v.items():
            out[j] = out.get(j, 0.0) + cj
        return out

    pp, qq, pq = conv(p, p), conv(q, q), conv(p, q)
    a_tab = add(pp, qq)
    diff = add(pp, conv(q, q, sign=-1.0))
    if nu == 0:
        return a_tab, {j: 2.0 * c for j, c in pq.items()}, diff
    if nu == 1:
        return a_tab, {j: -2.0 * c for j, c in pq.items()}, {j: -c for j, c in diff.items()}
    raise ValueError(f"unsupported order nu={nu}")


def _moment_tail(T, s_exp, nu, log_weight):
    a_tab, b_tab, d_tab = _hankel_sq_coeffs(nu)
    total = 0.0
    if not log_weight:
        for j, coeff in a_tab.items():
            total += coeff * _power_tail(T, s_exp + 2.0 + j)
        for j, coeff in b_tab.items():
            total += coeff * _tail_primitives(T, s_exp + 2.0 + j)[0]
        for j, coeff in d_tab.items():
            total += coeff * _tail_primitives(T, s_exp + 2.0 + j)[1]
    else:
        for j, coeff in a_tab.items():
            total += coeff * _power_tail(T, 2.0 + j, want_log=True)[1]
        for j, coeff in b_tab.items():
            total += coeff * _tail_primitives(T, 2.0 + j, want_log=True)[2]
        for j, coeff in d_tab.items():
            total += coeff * _tail_primitives(T, 2.0 + j, want_log=True)[3]
    return total / math.pi


def _moment_quadrature(weight, nu, s_exp, tol, log_weight):
    # T sits on an oscillation boundary; the exact elementary tail for
    # nu = 3/2 allows a shorter finite part
    n_zero = 14 if nu == 1.5 else 27
    zeros = [(k + nu / 2.0 + 0.25) * math.pi for k in range(n_zero)]
    T = zeros[-1]
    edges = [0.0] + zeros
    panel_tol = max(tol / (4.0 * len(edges)), 1e-12)

    def f(t):
        t = np.asarray(t, dtype=float)
        jv = np.array([bessel_j(nu, x) for x in np.atleast_1d(t)])
        return weight(t) * jv * jv

    finite = math.fsum(integrate(f, edges[k], edges[k + 1], tol=panel_tol) for k in range(len(edges) - 1))
    return finite + _moment_tail(T, s_exp, nu, log_weight)


def bessel_moment(s_exp, nu, tol=1e-10):
    """Quadrature value of int_0^inf t^{-s-1} J_nu(t)^2 dt.

    Convergence needs -1 < s_exp < 2 nu. Compare with
    bessel_moment_closed_form for the Gamma-ratio identity.
    """
    if nu not in (0, 1, 1.5):
        raise ValueError(f"unsupported order nu={nu}")
    if not (-1.0 < s_exp < 2.0 * nu):
        raise ValueError(f"moment diverges: need -1 < s < 2 nu, got s={s_exp}, nu={nu}")

    def weight(t):
        return np.power(t, -s_exp - 1.0, where=t > 0, out=np.zeros_like(t))

    return _moment_quadrature(weight, nu, s_exp, tol, log_weight=False)


def bessel_log_moment(nu, tol=1e-10):
    """Quadrature value of int_0^inf log(t)/t * J_nu(t)^2 dt (needs nu > 0)."""
    if nu not in (1, 1.5):
        raise ValueError(f"log moment needs nu in {{1, 3/2}}, got {nu}")

    def weight(t):
        return np.where(t > 0, np.log(np.where(t > 0, t, 1.0)) / np.where(t > 0, t, 1.0), 0.0)

    return _moment_quadrature(weight, nu, 0.0, tol, log_weight=True)


def bessel_moment_closed_form(s_exp, nu):
    """Gamma(s+1) Gamma(nu - s/2) / (2^{s+1} Gamma(s/2+1)^2 Gamma(nu + s/2 + 1))."""
    if not (-1.0 < s_exp < 2.0 * nu):
        raise ValueError(f"moment diverges: need -1 < s < 2 nu, got s={s_exp}, nu={nu}")
    return math.exp(
        log_gamma(s_exp + 1.0)
        + log_gamma(nu - s_exp / 2.0)
        - (s_exp + 1.0) * math.log(2.0)
        - 2.0 * log_gamma(s_exp / 2.0 + 1.0)
        - log_gamma(nu + s_exp / 2.0 + 1.0)
    )


def bessel_log_moment_closed_form(nu):
    """((psi(nu) + psi(nu+1))/2 + log 2) / (2 nu) for nu > 0."""
    if nu <= 0:
        raise ValueError(f"log moment needs nu > 0, got {nu}")
    return ((digamma(nu) + digamma(nu + 1.0)) / 2.0 + math.log(2.0)) / (2.0 * nu)
