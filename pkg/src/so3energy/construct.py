"""Fibers of equally spaced rotations over spherical base points.

A fiber over p with count s and phase phi is the set
H_p R(2 pi (j+1)/s + phi) for j = 0..s-1; a configuration stacks the fibers
of r base points, each with an independent uniform phase. The flat index of
(fiber i, slot j) is i*s + j.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import base_frame, base_frames, rotation_about_z
from .streams import DOMAIN_FIBER, keyed_stream

FORMAT_VERSION = "1"

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Fiber:
    base: np.ndarray
    s: int
    phase: float
    matrices: np.ndarray  # (s, 3, 3)


@dataclass(frozen=True)
class ConfigMeta:
    ensemble: str
    r: int
    s: int
    seed: int | None
    version: str = FORMAT_VERSION


@dataclass(frozen=True)
class Configuration:
    matrices: np.ndarray  # (n, 3, 3)
    meta: ConfigMeta

    @property
    def n(self):
        return len(self.matrices)


def build_fiber(p, s, phase):
    """The s equally spaced rotations over base point p at the given phase."""
    if s < 1:
        raise ValueError(f"fiber count must be >= 1, got {s}")
    p = np.asarray(p, dtype=float)
    h = base_frame(p)
    mats = np.stack([h @ rotation_about_z(_TWO_PI * (j + 1) / s + phase) for j in range(s)])
    return Fiber(base=p, s=s, phase=float(phase), matrices=mats)


def fiber_matrices(frames, phases, s):
    """Vectorized fiber construction: (r,3,3) frames, (r,) phases -> (r*s, 9) rows.

    Row i*s+j is frames[i] @ R(2 pi (j+1)/s + phases[i]) flattened row-major.
    Columns 1 and 2 of each product mix the frame's first two columns by the
    angle; column 3 is the frame's third column unchanged.
    """
    r = len(frames)
    ang = np.asarray(phases, dtype=float)[:, None] + _TWO_PI * np.arange(1, s + 1)[None, :] / s
    c, sn = np.cos(ang), np.sin(ang)
    out = np.empty((r, s, 3, 3))
    out[..., 0] = frames[:, None, :, 0] * c[..., None] + frames[:, None, :, 1] * sn[..., None]
    out[..., 1] = -frames[:, None, :, 0] * sn[..., None] + frames[:, None, :, 1] * c[..., None]
    out[..., 2] = np.broadcast_to(frames[:, None, :, 2], (r, s, 3))
    return out.reshape(r * s, 9)


def build_configuration(points, s, rng, ensemble="custom"):
    """Stack fibers over `points` with independent uniform phases.

    `rng` is either an integer master seed (each fiber's phase then comes
    from its own derived stream, so parallel construction is reproducible)
    or a numpy Generator (phases drawn from it in fiber order).
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    r = len(points)
    if r < 1:
        raise ValueError("need at least one base point")
    if s < 1:
        raise ValueError(f"fiber count must be >= 1, got {s}")
    if isinstance(rng, (int, np.integer)):
        seed = int(rng)
        phases = np.array(
            [keyed_stream(seed, DOMAIN_FIBER, i).uniform(0.0, _TWO_PI) for i in range(r)]
        )
    else:
        seed = None
        phases = rng.uniform(0.0, _TWO_PI, r)
    rows = fiber_matrices(base_frames(points), phases, s)
    meta = ConfigMeta(ensemble=ensemble, r=r, s=s, seed=seed)
    return Configuration(matrices=rows.reshape(r * s, 3, 3), meta=meta)


def fiber_energy_closed_form(s):
    """Sum over ordered pairs within one fiber of log ||O_i - O_j||_F.

    Equals s(s-1)/2 log 2 + s log s for every base point and phase.
    """
    if s < 1:
        raise ValueError(f"fiber count must be >= 1, got {s}")
    return s * (s - 1) / 2.0 * math.log(2.0) + s * math.log(s)


# --- serialization ---------------------------------------------------------
#
# JSON: {"meta": {...}, "matrices": [[9 numbers row-major], ...]}
# CSV: a '# meta: {...}' comment line, a header row, one matrix per row.
# Floats are written with repr (shortest round-trip), so load(save(c)) is
# bit-exact for finite doubles.

_CSV_HEADER = ["m11", "m12", "m13", "m21", "m22", "m23", "m31", "m32", "m33"]


def _meta_dict(meta):
    return {
        "ensemble": meta.ensemble,
        "r": meta.r,
        "s": meta.s,
        "seed": meta.seed,
        "version": meta.version,
    }


def save_configuration(config, path, fmt="json"):
    rows = config.matrices.reshape(config.n, 9)
    if fmt == "json":
        doc = {
            "meta": _meta_dict(config.meta),
            "matrices": [[float(v) for v in row] for row in rows],
        }
        with open(path, "w", newline="") as fh:
            json.dump(doc, fh)
            fh.write("\n")
    elif fmt == "csv":
        with open(path, "w", newline="") as fh:
            fh.write("# meta: " + json.dumps(_meta_dict(config.meta)) + "\n")
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(_CSV_HEADER)
            for row in rows:
                writer.writerow([repr(float(v)) for v in row])
    else:
        raise ValueError(f"unknown format {fmt!r} (expected 'json' or 'csv')")


def load_configuration(path):
    with open(path, newline="") as fh:
        head = fh.read(1)
        fh.seek(0)
        if head == "{":
            doc = json.load(fh)
            meta = ConfigMeta(**doc["meta"])
            mats = np.array(doc["matrices"], dtype=float).reshape(-1, 3, 3)
            return Configuration(matrices=mats, meta=meta)
        meta = None
        rows = []
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                if "meta:" in line:
                    meta = ConfigMeta(**json.loads(line.split("meta:", 1)[1]))
                continue
            if line.startswith(_CSV_HEADER[0]):
                continue
            rows.append([float(v) for v in line.split(",")])
        mats = np.array(rows, dtype=float).reshape(-1, 3, 3)
        if meta is None:
            meta = ConfigMeta(ensemble="unknown", r=len(mats), s=1, seed=None)
        return Configuration(matrices=mats, meta=meta)
