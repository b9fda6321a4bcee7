"""Counter-based random streams for shard-invariant Monte Carlo runs.

Every draw is a pure function of ``(seed, trial, slot)``: a splitmix64-style
finalizer hashes the trial index into a per-trial key and the slot index
into the final 64-bit word.  Trials can therefore be processed in any batch
size and split across any number of shards without changing a single draw.

Slot layout is owned by the caller; by convention the decoding loops use
slots [0, n) for channel noise, [n, 2n) for tie draws (the draw at slot
n + i resolves the tie at position i, if any), and [2n, 3n) for random
message symbols.
"""

from __future__ import annotations

import numpy as np
from scipy.special import ndtri

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def _mix64(z):
    # wraparound modulo 2^64 is the whole point here
    with np.errstate(over="ignore"):
        z = np.asarray(z, dtype=np.uint64)
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
        return z ^ (z >> np.uint64(31))


def uniforms(seed, trials, slots):
    """(len(trials), len(slots)) float64 array of draws in the open (0, 1)."""
    # 0-d arrays keep the wraparound arithmetic silent (numpy warns on
    # overflowing scalar ops but not on array ops)
    seed = np.asarray(int(seed) % (1 << 64), dtype=np.uint64)
    t = np.asarray(trials, dtype=np.uint64).reshape(-1, 1)
    s = np.asarray(slots, dtype=np.uint64).reshape(1, -1)
    with np.errstate(over="ignore"):
        key = _mix64(seed + _GOLDEN)
        per_trial = _mix64(key + _GOLDEN * (t + np.uint64(1)))
        word = _mix64(per_trial + _GOLDEN * (s + np.uint64(1)))
    return ((word >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53


def normals(seed, trials, slots):
    """Standard normal draws via the inverse CDF, same indexing as uniforms."""
    return ndtri(uniforms(seed, trials, slots))
