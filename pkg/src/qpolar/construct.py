"""Information-set construction.

The decoder and the equal-SER machinery assume the information set is
given; this module produces one.  Reliability estimates come either from
the exact erasure recursion (z -> 2z - z^2 on the check branch, z -> z^2 on
the variable branch, most significant bit first) or from genie-aided Monte
Carlo decoding.  Selection is greedy by estimated reliability but only ever
adds an index together with all indices dominating it, so the result is
closed upward under domination by construction; when that forces a
departure from the naive top-k choice, the swapped-in indices are reported
in a warning.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction

from .code import PolarCode, check_condition_A, dominates
from .mc import DEFAULT_BATCH, decode_tallies


@dataclass
class ErasureExact:
    """Exact erasure-probability ranking; epsilon taken from the channel."""


@dataclass
class GenieMC:
    trials: int
    seed: int

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("genie-aided estimation needs at least one trial")


@dataclass
class Manual:
    info_set: tuple

    def __post_init__(self):
        self.info_set = tuple(sorted(self.info_set))


def erasure_params(m, epsilon):
    """Synthetic-channel erasure probabilities of all 2^m indices.

    Exact rationals when epsilon is rational.
    """
    eps = Fraction(epsilon) if not isinstance(epsilon, float) else epsilon
    if not 0 <= eps <= 1:
        raise ValueError("epsilon must lie in [0, 1]")
    out = []
    for i in range(1 << m):
        z = eps
        for r in range(m - 1, -1, -1):
            z = z * z if (i >> r) & 1 else 2 * z - z * z
        out.append(z)
    return tuple(out)


def _select_decreasing(estimates, k, m):
    """k indices with smallest estimates whose set is upward closed.

    Ties prefer the larger index.  Returns the set and the indices that
    displaced naive top-k picks.
    """
    n = 1 << m
    if not 0 <= k <= n:
        raise ValueError(f"k={k} outside [0, {n}]")
    order = sorted(range(n), key=lambda i: (estimates[i], -i))
    naive = set(order[:k])
    selected = set()
    for i in order:
        if len(selected) >= k:
            break
        if i in selected:
            continue
        need = [d for d in range(i, n) if dominates(d, i) and d not in selected]
        if len(selected) + len(need) <= k:
            selected.update(need)
    while len(selected) < k:
        # any unselected index maximal under domination is addable
        addable = [i for i in range(n) if i not in selected
                   and all(d in selected for d in range(i + 1, n)
                           if d != i and dominates(d, i))]
        best = min(addable, key=lambda i: (estimates[i], -i))
        selected.add(best)
    swapped = sorted(selected - naive)
    return tuple(sorted(selected)), swapped


def genie_mc_rank(field, m, ch, trials, seed, batch=DEFAULT_BATCH):
    """Per-index genie-aided decision error frequencies.

    Decodes the all-zero transmission with every earlier position fed its
    true value, counting raw argmax errors per position.  Deterministic
    given the seed.
    """
    if trials < 1:
        raise ValueError("genie-aided estimation needs at least one trial")
    probe = PolarCode(field, m, range(1 << m))
    msg_err, _, _ = decode_tallies(probe, ch, seed, 0, trials, batch=batch, genie=True)
    return tuple(int(e) / trials for e in msg_err)


def construct_info_set(field, m, k, ch, method=None):
    """Choose k information indices for length 2^m over the given channel.

    The returned set always satisfies the upward-closure condition.  The
    default method is the exact erasure ranking for erasure and symmetric
    channels (using epsilon as an erasure proxy for the latter) and
    genie-aided Monte Carlo for AWGN.
    """
    n = 1 << m
    if not 0 <= k <= n:
        raise ValueError(f"k={k} outside [0, {n}]")
    if method is None:
        if getattr(ch, "kind", None) in ("qsc", "qec"):
            method = ErasureExact()
        elif getattr(ch, "kind", None) == "awgn_bpsk":
            raise ValueError("AWGN construction needs an explicit GenieMC(trials, seed)")
        else:
            raise ValueError(f"no default construction for channel kind {ch.kind!r}")

    if isinstance(method, Manual):
        a = method.info_set
        if len(a) != k:
            raise ValueError(f"manual set has {len(a)} indices, expected {k}")
        ok, witness = check_condition_A(a, m)
        if not ok:
            raise ValueError(
                f"manual set violates upward closure: {witness[0]} is in but "
                f"dominating {witness[1]} is not")
        return a

    if isinstance(method, ErasureExact):
        if getattr(ch, "kind", None) not in ("qsc", "qec"):
            raise ValueError("the erasure ranking needs an erasure or symmetric channel")
        estimates = erasure_params(m, ch.params["epsilon"])
    elif isinstance(method, GenieMC):
        estimates = genie_mc_rank(field, m, ch, method.trials, method.seed)
    else:
        raise ValueError(f"unknown construction method {method!r}")

    info, swapped = _select_decreasing(estimates, k, m)
    if swapped:
        warnings.warn(
            f"upward-closure repair swapped in indices {swapped}", stacklevel=2)
    ok, witness = check_condition_A(info, m)
    assert ok, f"internal error: construction produced a non-closed set, witness {witness}"
    return info
