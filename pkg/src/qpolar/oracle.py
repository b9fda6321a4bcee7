"""Exhaustive exact-rational error rates for small polar code instances.

Everything here enumerates the full output space Y^n with Fraction
arithmetic, so results are exact and can certify exact-equality claims.
Output vectors are enumerated lexicographically; vectors whose block
transition probability is zero are skipped (they contribute nothing).
The Monte Carlo estimator lives here too so its reports can be checked
against the exact values in one place.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .code import PolarCode, polar_transform
from .mc import DEFAULT_BATCH, decode_tallies
from .sc import _argmax_set, sc_decode_distribution, synthetic_channel

MAX_ENUMERATION = 10**6


@dataclass
class SerReport:
    """Per-codeword-index symbol error rates.

    ``per_index`` holds exact Fractions in exact mode and float estimates in
    Monte Carlo mode; Monte Carlo reports also carry raw error counts, the
    trial count, and binomial standard errors.
    """

    per_index: tuple
    mode: str
    trials: int | None = None
    stderr: tuple | None = None
    errors: tuple | None = None

    def to_json(self):
        obj = {"mode": self.mode}
        if self.mode == "exact":
            obj["per_index"] = [f"{v.numerator}/{v.denominator}" for v in self.per_index]
        else:
            obj["per_index"] = list(self.per_index)
            obj["trials"] = self.trials
            obj["stderr"] = list(self.stderr)
            obj["errors"] = list(self.errors)
        return obj


def _check_enumeration_cap(ch, n):
    if not ch.is_finite:
        raise ValueError("exact enumeration requires a finite channel")
    if ch.num_outputs ** n > MAX_ENUMERATION:
        raise ValueError(
            f"|Y|^n = {ch.num_outputs}^{n} exceeds the enumeration cap {MAX_ENUMERATION}")


def exact_ser(code, ch, u_full):
    """Exact per-index SER for a specific transmitted message.

    ``u_full`` is the complete length-n message; its values at frozen
    positions become the code's frozen values for this computation, so the
    operation can probe arbitrary (frozen, information) combinations.
    """
    _check_enumeration_cap(ch, code.n)
    field = code.field
    u_full = [field.element(v) for v in u_full]
    if len(u_full) != code.n:
        raise ValueError(f"message length {len(u_full)} != n = {code.n}")
    probe = code.with_frozen_values([u_full[i] for i in code.frozen_set])
    x_bar = polar_transform(field, u_full)
    x_bar_idx = [e.index for e in x_bar]
    totals = [Fraction(0)] * code.n
    mat = ch.matrix
    for y in itertools.product(range(ch.num_outputs), repeat=code.n):
        w = Fraction(1)
        for yj, xj in zip(y, x_bar_idx):
            w *= mat[xj][yj]
            if not w:
                break
        if not w:
            continue
        for x, p in sc_decode_distribution(probe, ch, y).items():
            mass = w * p
            for j in range(code.n):
                if x[j] != x_bar[j]:
                    totals[j] += mass
    return SerReport(tuple(totals), "exact")


def exact_average_ser(code, ch):
    """Per-index SER averaged over messages.

    Equals the all-zero-message run because the SER of every codeword
    symbol is message independent; the frozen values recorded in the code
    are irrelevant here and are overridden by zeros.
    """
    return exact_ser(code, ch, [code.field.zero] * code.n)


def exact_synthetic(code, ch, i):
    """Full table of the i-th synthetic channel over (y, prefix) pairs.

    Returns a dict mapping ``(y, prefix)`` to the length-q tuple of exact
    channel values W_i(y, prefix | u).
    """
    _check_enumeration_cap(ch, code.n)
    field = code.field
    if ch.num_outputs ** code.n * field.q ** i > MAX_ENUMERATION:
        raise ValueError("synthetic channel table exceeds the enumeration cap")
    table = {}
    for y in itertools.product(range(ch.num_outputs), repeat=code.n):
        for prefix in itertools.product(field.elements, repeat=i):
            table[(y, prefix)] = synthetic_channel(code, ch, y, prefix, i)
    return table


def exact_genie_error_probs(field, m, ch):
    """Exact per-index genie-aided decision error probabilities.

    For the all-zero transmission, position i errs when the uniform pick
    among the maximizers of its synthetic channel (given the true all-zero
    prefix) is nonzero.
    """
    n = 1 << m
    _check_enumeration_cap(ch, n)
    probe = PolarCode(field, m, range(n))
    zero = field.zero
    mat = ch.matrix
    out = [Fraction(0)] * n
    for y in itertools.product(range(ch.num_outputs), repeat=n):
        w = Fraction(1)
        for yj in y:
            w *= mat[0][yj]
            if not w:
                break
        if not w:
            continue
        for i in range(n):
            t = synthetic_channel(probe, ch, y, (zero,) * i, i)
            cands = _argmax_set(t)
            if 0 in cands:
                out[i] += w * (len(cands) - 1) / len(cands)
            else:
                out[i] += w
    return tuple(out)


def mc_ser(code, ch, trials, seed, shards=1, batch=DEFAULT_BATCH):
    """Monte Carlo per-index SER of the all-zero transmission.

    Deterministic given the seed; any shard count or batch size produces
    the identical report because every draw is counter indexed.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if shards < 1:
        raise ValueError("shards must be >= 1")
    bounds = [trials * s // shards for s in range(shards + 1)]
    cw_total = None
    for s in range(shards):
        _, cw, _ = decode_tallies(code, ch, seed, bounds[s], bounds[s + 1], batch=batch)
        cw_total = cw if cw_total is None else cw_total + cw
    rates = tuple(int(e) / trials for e in cw_total)
    stderr = tuple(math.sqrt(r * (1 - r) / trials) for r in rates)
    return SerReport(rates, "monte_carlo", trials=trials, stderr=stderr,
                     errors=tuple(int(e) for e in cw_total))
