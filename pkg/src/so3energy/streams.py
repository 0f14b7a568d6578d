"""Counter-based random streams for reproducible parallel sampling.

Each logical consumer (a fiber's phase, a Monte Carlo trial, a point-set
draw) gets its own Philox stream keyed by (master seed, domain | index).
Streams are therefore pure functions of those integers: any worker can
recreate any stream without coordination, and results cannot depend on
scheduling or worker count.
"""

from __future__ import annotations

import numpy as np

# domain tags keep index spaces from colliding (fiber 3 vs trial 3, etc.)
DOMAIN_FIBER = 1
DOMAIN_POINTS = 2
DOMAIN_TRIAL = 3

_MASK64 = (1 << 64) - 1
_INDEX_BITS = 56


def keyed_stream(seed, domain, index=0):
    """An independent numpy Generator keyed by (seed, domain, index)."""
    if index < 0 or index >= (1 << _INDEX_BITS):
        raise ValueError(f"stream index out of range: {index}")
    key = np.array([seed & _MASK64, ((domain << _INDEX_BITS) | index) & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))
