"""Shared trial loop for every Monte Carlo path (estimator, genie, harness).

One trial = sample a message (all-zero unless ``random_message``), push its
codeword through the channel, SC-decode, and tally per-index symbol errors.
All randomness is drawn from the counter streams in :mod:`qpolar.rng`, so
tallies depend only on ``(seed, trial index)`` and shard or batch layout
cannot change them.
"""

from __future__ import annotations

import numpy as np

from . import rng
from .code import polar_transform_indices
from .sc import sc_decode_batch

DEFAULT_BATCH = 1 << 14


def decode_tallies(code, ch, seed, start, stop, batch=DEFAULT_BATCH,
                   genie=False, random_message=False):
    """Per-index error counts over trials [start, stop).

    Returns ``(message_errors, codeword_errors, trials)`` as int64 arrays of
    length n.  In genie mode the decoder propagates the true symbols, the
    message tally counts raw per-position decision errors, and the codeword
    tally is identically zero.
    """
    if stop < start:
        raise ValueError("empty or negative trial range")
    field = code.field
    n = code.n
    q = field.q
    msg_err = np.zeros(n, dtype=np.int64)
    cw_err = np.zeros(n, dtype=np.int64)
    channel_slots = np.arange(n)
    tie_slots = np.arange(n, 2 * n)
    message_slots = np.arange(2 * n, 3 * n)
    for lo in range(start, stop, batch):
        hi = min(lo + batch, stop)
        t_idx = np.arange(lo, hi, dtype=np.uint64)
        b = hi - lo
        if random_message:
            mu = rng.uniforms(seed, t_idx, message_slots)
            u = np.minimum((mu * q).astype(np.intp), q - 1)
            u[:, list(code.frozen_set)] = code.frozen_index_array[list(code.frozen_set)]
            x = polar_transform_indices(field, u)
        else:
            u = np.broadcast_to(code.frozen_index_array, (b, n))
            x = polar_transform_indices(field, np.asarray(u))
        if ch.is_finite:
            noise = rng.uniforms(seed, t_idx, channel_slots)
        else:
            noise = rng.normals(seed, t_idx, channel_slots)
        y = ch.sample_batch(x, noise)
        likes = ch.likelihood_batch(y)
        tie_u = rng.uniforms(seed, t_idx, tie_slots)
        if genie:
            decisions, _ = sc_decode_batch(code, likes, tie_u, force=u)
            msg_err += (decisions != u).sum(axis=0)
        else:
            decisions, x_hat = sc_decode_batch(code, likes, tie_u)
            msg_err += (decisions != u).sum(axis=0)
            cw_err += (x_hat != x).sum(axis=0)
    return msg_err, cw_err, stop - start
