"""Logarithmic energy of rotation configurations and its closed-form expectations.

The energy of O_1..O_n is -(1/2) sum_{i != j} log(6 - 2 trace(O_i^T O_j)).
Pair sums are reduced over fixed 64x64 index tiles with an exact (fsum)
combination of tile partials, so the value never depends on thread count or
chunking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .quadrature import integrate

_TILE = 64
# squared-distance threshold under which a pair counts as coincident
COINCIDENCE_TOL = 1e-14

_LOG2 = math.log(2.0)
_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class EnergyValue:
    value: float
    is_infinite: bool = False

    def __float__(self):
        return self.value


def _tile_slices(n):
    edges = list(range(0, n, _TILE)) + [n]
    return [(edges[k], edges[k + 1]) for k in range(len(edges) - 1)]


def pair_log_sums(dist_sq):
    """Tiled sum over unordered pairs of log(dist_sq), batched.

    dist_sq has shape (b, n, n); returns (sums, min_offdiag) with shape (b,).
    Tiles are visited in a fixed order and combined with fsum per batch row,
    independent of any outer parallelism.
    """
    d = np.asarray(dist_sq, dtype=float)
    b, n, _ = d.shape
    if n < 2:
        return np.zeros(b), np.full(b, np.inf)
    slices = _tile_slices(n)
    partials = []
    mins = np.full(b, np.inf)
    with np.errstate(divide="ignore", invalid="ignore"):
        for ti, (a0, a1) in enumerate(slices):
            for tj, (b0, b1) in enumerate(slices[ti:], start=ti):
                block = d[:, a0:a1, b0:b1]
                if ti == tj:
                    iu = np.triu_indices(a1 - a0, 1)
                    vals = block[:, iu[0], iu[1]]
                else:
                    vals = block.reshape(b, -1)
                if vals.shape[1] == 0:
                    continue
                mins = np.minimum(mins, vals.min(axis=1))
                partials.append(np.log(vals).sum(axis=1))
    stacked = np.stack(partials, axis=1)
    sums = np.array([math.fsum(row) for row in stacked])
    return sums, mins


def log_energy(config):
    """Logarithmic energy of a configuration (or a raw (n, 3, 3) array).

    Returns EnergyValue; a pair closer than the coincidence tolerance sets
    the infinite flag instead of producing a silent -inf.
    """
    mats = getattr(config, "matrices", config)
    mats = np.asarray(mats, dtype=float)
    n = len(mats)
    if n < 1:
        raise ValueError("configuration must contain at least one rotation")
    if n == 1:
        return EnergyValue(0.0)
    rows = mats.reshape(n, 9)
    d = 6.0 - 2.0 * (rows @ rows.T)
    sums, mins = pair_log_sums(d[None, :, :])
    if mins[0] < COINCIDENCE_TOL:
        return EnergyValue(math.inf, is_infinite=True)
    return EnergyValue(float(-sums[0]))


def sphere_kernel(t):
    """log(1 + sqrt((1 - t)/2)) for inner products t, clamped at the ends."""
    t = np.asarray(t, dtype=float)
    if np.any(t < -1.0 - 1e-12) or np.any(t > 1.0 + 1e-12):
        raise ValueError("inner product outside [-1, 1] beyond tolerance")
    t = np.clip(t, -1.0, 1.0)
    out = np.log1p(np.sqrt((1.0 - t) / 2.0))
    return float(out) if out.ndim == 0 else out


def sphere_kernel_energy(points):
    """Sum of sphere_kernel over ordered pairs of distinct indices."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    r = len(pts)
    if r < 2:
        return 0.0
    g = np.clip(pts @ pts.T, -1.0, 1.0)
    slices = _tile_slices(r)
    partials = []
    for ti, (a0, a1) in enumerate(slices):
        for tj, (b0, b1) in enumerate(slices[ti:], start=ti):
            block = g[a0:a1, b0:b1]
            if ti == tj:
                iu = np.triu_indices(a1 - a0, 1)
                vals = block[iu]
            else:
                vals = block.ravel()
            if vals.size:
                partials.append(float(np.log1p(np.sqrt((1.0 - vals) / 2.0)).sum()))
    return 2.0 * math.fsum(partials)


def predicted_energy(points, s):
    """Expected energy of the fiber configuration over fixed base points.

    -(n^2/2) log 2 + (n/2) log 2 - n log s - s^2 * sphere_kernel_energy(points)
    with n = r s.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    r = len(pts)
    if r < 1 or s < 1:
        raise ValueError("need r >= 1 and s >= 1")
    n = r * s
    return (
        -(n * n / 2.0) * _LOG2
        + (n / 2.0) * _LOG2
        - n * math.log(s)
        - s * s * sphere_kernel_energy(pts)
    )


def circle_average(h33, alpha, beta):
    """Closed-form circle mean of log(alpha + beta * trace(H R(phi))).

    h33 is the (3,3) entry of H. Requires |beta| <= alpha/3, which keeps the
    argument of the logarithm nonnegative for every rotation H.
    """
    if abs(beta) > alpha / 3.0:
        raise ValueError(f"need |beta| <= alpha/3, got alpha={alpha}, beta={beta}")
    if not -1.0 - 1e-12 <= h33 <= 1.0 + 1e-12:
        raise ValueError("h33 must lie in [-1, 1]")
    h33 = min(1.0, max(-1.0, h33))
    return 2.0 * math.log((math.sqrt(alpha - beta) + math.sqrt(alpha + beta + 2.0 * beta * h33)) / 2.0)


def circle_average_quadrature(h, alpha, beta, tol=1e-10):
    """Quadrature twin of circle_average for an explicit rotation H."""
    if abs(beta) > alpha / 3.0:
        raise ValueError(f"need |beta| <= alpha/3, got alpha={alpha}, beta={beta}")
    h = np.asarray(h, dtype=float)
    # trace(H R(phi)) = (h11 + h22) cos phi + (h12 - h21) sin phi + h33
    a_c = h[0, 0] + h[1, 1]
    a_s = h[0, 1] - h[1, 0]
    h33 = h[2, 2]

    def f(phi):
        return np.log(alpha + beta * (a_c * np.cos(phi) + a_s * np.sin(phi) + h33))

    return integrate(f, 0.0, 2.0 * math.pi, tol=tol) / (2.0 * math.pi)


def crossed_expectation(p, q, s):
    """Expected crossed pair sum between two fibers of count s.

    Equals s^2 log(sqrt 2 + sqrt(1 - <p, q>)), i.e.
    s^2 ((1/2) log 2 + sphere_kernel(<p, q>)).
    """
    if s < 1:
        raise ValueError(f"fiber count must be >= 1, got {s}")
    t = float(np.dot(np.asarray(p, dtype=float), np.asarray(q, dtype=float)))
    t = min(1.0, max(-1.0, t))
    return s * s * math.log(_SQRT2 + math.sqrt(1.0 - t))
