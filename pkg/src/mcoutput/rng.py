"""Deterministic random streams for the built-in samplers.

Each chain draws from its own counter-based (Philox) stream keyed by
(seed, stream index), so chains are independent, reproducible bit-for-bit
across runs and thread counts, and insensitive to how work is scheduled.
Normal variates come from the inverse CDF applied to 53-bit uniforms, which
keeps the draw sequence identical across platforms and backends.
"""

import numpy as np

from ._special import norm_ppf

_U64 = np.uint64
_TWO53_INV = 2.0 ** -53


def substream(seed, stream):
    """Philox bit generator keyed by (seed, stream)."""
    seed = int(seed)
    stream = int(stream)
    if not 0 <= seed < 2 ** 64:
        raise ValueError("seed must be in [0, 2^64)")
    if not 0 <= stream < 2 ** 64:
        raise ValueError("stream index must be in [0, 2^64)")
    return np.random.Philox(key=np.array([seed, stream], dtype=_U64))


def uniforms(bitgen, count):
    """``count`` uniforms strictly inside (0, 1): (raw53 + 0.5) * 2^-53."""
    raw = bitgen.random_raw(int(count))
    return ((raw >> _U64(11)).astype(np.float64) + 0.5) * _TWO53_INV


def normals(bitgen, count):
    """Standard normals by inverse CDF of the uniform stream."""
    return norm_ppf(uniforms(bitgen, count))
