"""Seeded, parallel Monte Carlo over random fiber configurations.

Determinism contract: the report depends only on the experiment config, not
on the worker count. Trials are split into fixed-size chunks (a function of
n alone), each trial draws from its own counter-keyed stream, chunk results
are reduced in trial order, and all statistics use exact (fsum) summation.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from multiprocessing import get_context

import numpy as np

from .constants import eap_energy_upper_bound, expected_configuration_energy, optimal_s
from .construct import fiber_matrices
from .energy import COINCIDENCE_TOL, pair_log_sums, predicted_energy
from .ensembles import EnsembleSpec, sample_points
from .geometry import base_frames
from .streams import DOMAIN_POINTS, DOMAIN_TRIAL, keyed_stream

REPORT_VERSION = "1"
_Z_THRESHOLD = 4.0
_MAX_EXCLUDED_FRACTION = 1e-3
_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ExperimentConfig:
    """What to run: which ensemble, how many trials, and the master seed.

    resample_points=False freezes one draw of base points (from the seed's
    point stream) and varies only the fiber phases across trials; the
    prediction is then conditional on those points.
    """

    spec: EnsembleSpec
    trials: int
    master_seed: int = 0
    output_format: str = "json"
    resample_points: bool = True

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"need trials >= 1, got {self.trials}")
        if self.output_format not in ("json", "csv"):
            raise ValueError(f"unknown output format {self.output_format!r}")


@dataclass(frozen=True)
class EstimateReport:
    ensemble: str
    r: int
    s: int
    trials: int
    master_seed: int
    mean: float
    std_error: float
    prediction: float
    prediction_kind: str  # "mean" | "upper_bound"
    z_score: float
    passed: bool
    excluded: int

    def to_dict(self):
        return {
            "format_version": REPORT_VERSION,
            "ensemble": self.ensemble,
            "r": self.r,
            "s": self.s,
            "trials": self.trials,
            "master_seed": self.master_seed,
            "mean": self.mean,
            "std_error": self.std_error,
            "prediction": self.prediction,
            "prediction_kind": self.prediction_kind,
            "z_score": self.z_score,
            "pass": self.passed,
            "excluded": self.excluded,
        }

    def to_json(self):
        return json.dumps(self.to_dict())

    def to_csv(self):
        d = self.to_dict()
        keys = list(d)
        row = [repr(v) if isinstance(v, float) else str(v) for v in d.values()]
        return ",".join(keys) + "\n" + ",".join(row) + "\n"


def chunk_size(n):
    """Trials per chunk, capped so one Gram batch stays near 32 MB."""
    return max(1, min(4096, 2**25 // (8 * n * n)))


def _chunk_energies(args):
    """Energies and coincidence minima for trials lo..hi-1 of one experiment."""
    kind, r, s, master_seed, lo, hi, frames = args
    rows = np.empty((hi - lo, r * s, 9))
    for i, t in enumerate(range(lo, hi)):
        rng = keyed_stream(master_seed, DOMAIN_TRIAL, t)
        if frames is None:
            h = base_frames(sample_points(kind, r, rng))
        else:
            h = frames
        rows[i] = fiber_matrices(h, rng.uniform(0.0, _TWO_PI, r), s)
    gram = rows @ rows.transpose(0, 2, 1)
    sums, mins = pair_log_sums(6.0 - 2.0 * gram)
    return -sums, mins


def resolve_workers(workers=None):
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get("SO3ENERGY_WORKERS", "")
    if env.strip():
        return max(1, int(env))
    return 1


def run_experiment(cfg, workers=None):
    """Run the Monte Carlo and compare against the matching prediction.

    Trials whose configuration has a coincident pair (infinite energy) are
    excluded and counted; more than 0.1% of them fails the run.
    """
    spec = cfg.spec
    kind, r = spec.kind, spec.r
    s = spec.s if spec.s is not None else optimal_s(kind, r)
    n = r * s

    frames = None
    if not cfg.resample_points:
        points = sample_points(kind, r, keyed_stream(cfg.master_seed, DOMAIN_POINTS))
        frames = base_frames(points)
        prediction = predicted_energy(points, s)
        prediction_kind = "mean"
    elif kind == "eap":
        prediction = eap_energy_upper_bound(r, s)
        prediction_kind = "upper_bound"
    else:
        prediction = expected_configuration_energy(kind, r, s)
        prediction_kind = "mean"

    b = chunk_size(n)
    tasks = [
        (kind, r, s, cfg.master_seed, lo, min(lo + b, cfg.trials), frames)
        for lo in range(0, cfg.trials, b)
    ]
    nworkers = resolve_workers(workers)
    if nworkers == 1 or len(tasks) == 1:
        results = [_chunk_energies(t) for t in tasks]
    else:
        with get_context("fork").Pool(nworkers) as pool:
            results = pool.map(_chunk_energies, tasks)

    energies = np.concatenate([res[0] for res in results])
    mins = np.concatenate([res[1] for res in results])
    good = (mins >= COINCIDENCE_TOL) & np.isfinite(energies)
    excluded = int(np.count_nonzero(~good))
    if excluded > _MAX_EXCLUDED_FRACTION * cfg.trials:
        raise RuntimeError(f"{excluded} of {cfg.trials} trials coincident; seed or sampler is broken")
    vals = energies[good]
    m = len(vals)
    if m == 0:
        raise RuntimeError("all trials excluded")
    mean = math.fsum(vals) / m
    if m >= 2:
        var = math.fsum((v - mean) ** 2 for v in vals) / (m - 1)
        std_error = math.sqrt(var / m)
    else:
        std_error = math.inf
    if std_error == 0.0:
        z = 0.0 if mean == prediction else math.inf
    elif math.isinf(std_error):
        z = 0.0
    else:
        z = (mean - prediction) / std_error
    if prediction_kind == "upper_bound":
        passed = mean <= prediction
    else:
        passed = abs(z) <= _Z_THRESHOLD
    return EstimateReport(
        ensemble=kind,
        r=r,
        s=s,
        trials=cfg.trials,
        master_seed=cfg.master_seed,
        mean=mean,
        std_error=std_error,
        prediction=prediction,
        prediction_kind=prediction_kind,
        z_score=z,
        passed=passed,
        excluded=excluded,
    )
