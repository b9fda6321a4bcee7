"""Code automorphisms and the equal-SER verification machinery.

``delta(m, r, .)`` flips bit r of an index; the signed map ``xi`` composes
that position permutation with per-coordinate multiplication by -alpha
(where bit r of the destination index is 0) or -alpha^(-1) (where it is 1).
Applied to codewords of a polar code whose information set is decreasing
and whose frozen symbols are zero, xi is a code automorphism, and applied
jointly to channel outputs and codewords it leaves the SC decode
distribution invariant.  Chaining bit flips maps any index to 0, which is
exactly why every codeword symbol inherits the same SER.

The checkers here restate each claim as an executable identity over the
exact oracle: they return ``(ok, witness)`` and never sample unless given
explicit output vectors to test.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .code import polar_transform
from .oracle import MAX_ENUMERATION, exact_average_ser, exact_ser
from .sc import sc_decode_distribution


def delta(m, r, i):
    """Flip bit r of an m-bit index."""
    if not 0 <= r < m:
        raise ValueError(f"bit position {r} outside [0, {m})")
    if not 0 <= i < (1 << m):
        raise ValueError(f"index {i} outside [0, {1 << m})")
    return i ^ (1 << r)


def orbit_to_zero(j, m):
    """Bit positions whose flips map index j to 0 (its set bits)."""
    if not 0 <= j < (1 << m):
        raise ValueError(f"index {j} outside [0, {1 << m})")
    return [r for r in range(m) if (j >> r) & 1]


def xi_coefficients(field, m, r):
    """Per-coordinate multipliers of the signed map: -alpha or its inverse."""
    neg_alpha = -field.alpha
    neg_alpha_inv = -field.alpha.inverse()
    return tuple(neg_alpha_inv if (i >> r) & 1 else neg_alpha for i in range(1 << m))


def xi_apply_field(m, r, x):
    """Signed bit-flip map on a length-2^m vector of field elements."""
    n = 1 << m
    if len(x) != n:
        raise ValueError(f"vector length {len(x)} != {n}")
    coeffs = xi_coefficients(x[0].field, m, r)
    return tuple(coeffs[i] * x[delta(m, r, i)] for i in range(n))


def xi_apply_output(m, r, ch, y):
    """The same signed map acting on channel outputs through the pi family."""
    n = 1 << m
    if len(y) != n:
        raise ValueError(f"vector length {len(y)} != {n}")
    coeffs = xi_coefficients(ch.field, m, r)
    return tuple(ch.scale(y[delta(m, r, i)], coeffs[i]) for i in range(n))


def coset_transform(code, ch, a, b, y, x):
    """Map (y, x) to (a*y + x_b, a*x + x_b) with x_b the codeword of b.

    The output action runs through the channel's permutation families:
    scaling by pi_a first, then shifting by sigma.
    """
    if a.index == 0:
        raise ValueError("coset transforms need a nonzero scaling element")
    field = code.field
    b = [field.element(v) for v in b]
    xb = polar_transform(field, b)
    y2 = tuple(ch.shift(ch.scale(yi, a), xi) for yi, xi in zip(y, xb))
    x2 = tuple(a * v + w for v, w in zip(x, xb))
    return y2, x2


def pushforward_coset(dist, a, xb):
    """Image of a decode distribution under x -> a*x + xb."""
    return {tuple(a * v + w for v, w in zip(x, xb)): p for x, p in dist.items()}


def pushforward_xi(dist, m, r):
    """Image of a decode distribution under the signed bit-flip map."""
    return {xi_apply_field(m, r, x): p for x, p in dist.items()}


def _all_outputs(ch, n):
    if ch.num_outputs ** n > MAX_ENUMERATION:
        raise ValueError("output space too large for exhaustive checking")
    return itertools.product(range(ch.num_outputs), repeat=n)


def _require_zero_frozen(code):
    if any(v.index for v in code.frozen_values):
        raise ValueError("this identity is stated for all-zero frozen symbols")


def check_message_invariance(code, ch, messages):
    """SER vectors are identical for every transmitted message (Lemma on cosets).

    ``messages`` is an iterable of full length-n messages; the first one is
    the baseline.  Holds for arbitrary information sets.
    """
    baseline = None
    base_msg = None
    for u in messages:
        per = exact_ser(code, ch, u).per_index
        if baseline is None:
            baseline, base_msg = per, u
        elif per != baseline:
            return False, {"message": u, "ser": per,
                           "baseline_message": base_msg, "baseline_ser": baseline}
    return True, None


def check_coset_invariance(code, ch, ys=None, scalings=None, cosets=None):
    """Decode distributions transport along a*y + x_b for codewords x_b.

    Exhausts all nonzero a, all codewords of the zero-frozen code, and all
    output vectors unless narrowed via the keyword arguments.  ``cosets``
    is an iterable of information-symbol tuples.
    """
    _require_zero_frozen(code)
    field = code.field
    exhaustive = ys is None
    ys = list(_all_outputs(ch, code.n)) if exhaustive else [tuple(y) for y in ys]
    dists = {y: sc_decode_distribution(code, ch, y) for y in ys}
    if scalings is None:
        scalings = [e for e in field.elements if e]
    if cosets is None:
        cosets = itertools.product(field.elements, repeat=code.k)
    for info in cosets:
        b = code.full_message(info)
        xb = polar_transform(field, b)
        for a in scalings:
            for y in ys:
                y2 = tuple(ch.shift(ch.scale(yi, a), w) for yi, w in zip(y, xb))
                d2 = dists[y2] if exhaustive and y2 in dists else \
                    sc_decode_distribution(code, ch, y2)
                if d2 != pushforward_coset(dists[y], a, xb):
                    return False, {"a": a, "b": b, "y": y}
    return True, None


def check_xi_invariance(code, ch, r, ys=None):
    """Decode distributions are invariant under the signed flip of bit r.

    Needs a decreasing information set and zero frozen symbols; bit
    ``r = m-1`` is the base case proved directly, lower bits follow by
    recursion.
    """
    _require_zero_frozen(code)
    if not code.is_decreasing:
        raise ValueError("the xi identities need a decreasing information set")
    m = code.m
    exhaustive = ys is None
    ys = list(_all_outputs(ch, code.n)) if exhaustive else [tuple(y) for y in ys]
    dists = {y: sc_decode_distribution(code, ch, y) for y in ys}
    for y in ys:
        y2 = xi_apply_output(m, r, ch, y)
        d2 = dists[y2] if exhaustive and y2 in dists else \
            sc_decode_distribution(code, ch, y2)
        if d2 != pushforward_xi(dists[y], m, r):
            return False, {"r": r, "y": y}
    return True, None


def check_ser_bit_flip_symmetry(code, ch):
    """Per-index SERs agree across every bit flip of the index."""
    if not code.is_decreasing:
        raise ValueError("SER flip symmetry needs a decreasing information set")
    per = exact_average_ser(code, ch).per_index
    for r in range(code.m):
        for j in range(code.n):
            jj = delta(code.m, r, j)
            if per[j] != per[jj]:
                return False, {"r": r, "j": j, "ser_j": per[j], "ser_flip": per[jj]}
    return True, None


def check_equal_ser(code, ch):
    """The headline claim: every codeword index has the same exact SER."""
    if not code.is_decreasing:
        raise ValueError(
            "equal SER is claimed for decreasing information sets only; "
            f"violating pair {code.condition_witness}")
    per = exact_average_ser(code, ch).per_index
    first = per[0]
    for j, v in enumerate(per):
        if v != first:
            return False, {"j": j, "ser_0": first, "ser_j": v, "per_index": per}
    return True, {"ser": first}
