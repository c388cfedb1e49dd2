"""Genus-zero descendant invariants of projective space.

The evaluator reduces everything to the two-point number <pt, pt>_1 = 1:

* degree zero: closed form, using that psi_1^(n-3) integrates to 1 on M_{0,n};
* descendants with n >= 3: topological recursion for psi_1;
* descendants with n < 3: the divisor equation read backwards, which adds a
  hyperplane insertion;
* primary invariants: string and divisor equations strip classes of degree
  0 and 1, and a WDVV relation (first reconstruction) trades H^a for
  H * H^(a-1).

Sub-invariants are requested through ``ctx.evaluate`` so that the caller's
memo table and recursion guard see every step.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import comb

from .keys import (
    Insertion,
    InvariantKey,
    Kind,
    ambient_key,
    is_trivially_zero,
)

__all__ = [
    "SplitTerm",
    "degree0_invariant",
    "trr_expand",
    "evaluate_ambient",
    "wdvv_residual",
    "ambient_rank",
]

ZERO = Fraction(0)


@dataclass(frozen=True)
class SplitTerm:
    coeff: int
    left: InvariantKey
    right: InvariantKey


def degree0_invariant(key: InvariantKey) -> Fraction:
    """Degree-zero invariant of P^N (kind A) or of Y (kind Y)."""
    if key.d != 0:
        raise ValueError("degree0_invariant needs d = 0")
    if key.n < 3:
        raise ValueError(f"unstable degree-zero invariant with n = {key.n}")
    if key.psi != key.n - 3:
        return ZERO
    total = sum(e for e, _ in key.insertions)
    if key.kind is Kind.HYPERSURFACE:
        return Fraction(key.l) if total == key.N - 1 else ZERO
    return Fraction(1) if total == key.N else ZERO


def _submultisets(counts: Counter):
    """Yield (chosen, complement, multiplicity) over sub-multisets."""
    items = sorted(counts.items(), reverse=True)
    ranges = [range(c + 1) for _, c in items]
    for pick in product(*ranges):
        chosen, rest, mult = [], [], 1
        for (val, c), k in zip(items, pick):
            chosen += [val] * k
            rest += [val] * (c - k)
            mult *= comb(c, k)
        yield chosen, rest, mult


def trr_expand(key: InvariantKey, group: bool = False) -> list[SplitTerm]:
    """Split psi_1 on a descendant invariant into boundary terms.

    <tau_k(g1), g2, g3, R>_d
        = sum over d1 + d2 = d, S subset of R, e in 0..N of
          <tau_{k-1}(g1), S, H^e>_{d1} * <H^(N-e), g2, g3, R - S>_{d2}

    With ``group=False`` every subset of slots gives its own coefficient-1
    term; ``group=True`` merges subsets with equal classes.
    """
    if key.kind is not Kind.AMBIENT:
        raise ValueError("trr_expand needs an ambient key")
    if key.n < 3 or key.psi < 1:
        raise ValueError("trr_expand needs n >= 3 and a psi power at slot 1")
    N, d = key.N, key.d
    g1 = key.insertions[0]
    first = Insertion(g1.exp, g1.psi - 1)
    g2, g3 = key.insertions[1], key.insertions[2]
    rest = [ins.exp for ins in key.insertions[3:]]

    if group:
        splits = list(_submultisets(Counter(rest)))
    else:
        splits = []
        idx = range(len(rest))
        for size in range(len(rest) + 1):
            for S in combinations(idx, size):
                chosen = [rest[i] for i in S]
                other = [rest[i] for i in idx if i not in S]
                splits.append((chosen, other, 1))

    terms = []
    for d1 in range(d + 1):
        d2 = d - d1
        for chosen, other, mult in splits:
            if d1 == 0 and len(chosen) + 2 < 3:
                continue
            if d2 == 0 and len(other) + 3 < 3:
                continue
            for e in range(N + 1):
                left = ambient_key(N, d1, [first, *((c, 0) for c in chosen), (e, 0)])
                right = ambient_key(
                    N, d2, [(N - e, 0), g2, g3, *((c, 0) for c in other)]
                )
                terms.append(SplitTerm(mult, left, right))
    return terms


def _split_sum(ctx, N, d, left, right, rest, skip_bare_d0=False):
    """Sum over d1+d2=d and R1|R2 of <left,R1,T_e>_{d1} <T^e,right,R2>_{d2}.

    ``left``/``right``/``rest`` are lists of exponents. The dual index e is
    fixed by the dimension of the first factor. ``skip_bare_d0`` drops the
    term with d1 = 0 and R1 empty.
    """
    total = ZERO
    for chosen, other, mult in _submultisets(Counter(rest)):
        for d1 in range(d + 1):
            d2 = d - d1
            # degree-zero primary invariants vanish beyond three points
            if d1 == 0 and chosen:
                continue
            if d2 == 0 and other:
                continue
            if skip_bare_d0 and d1 == 0:
                continue
            n1 = len(left) + len(chosen) + 1
            e = d1 * (N + 1) + N - 3 + n1 - sum(left) - sum(chosen)
            if not 0 <= e <= N:
                continue
            k1 = ambient_key(N, d1, [(x, 0) for x in (*left, *chosen, e)])
            v1 = ctx.evaluate(k1)
            if not v1:
                continue
            k2 = ambient_key(N, d2, [(x, 0) for x in (N - e, *right, *other)])
            v2 = ctx.evaluate(k2)
            if v2:
                total += mult * v1 * v2
    return total


def _wdvv_sides(ctx, N, d, A, B, C, D, rest, skip_target=False):
    lhs = _split_sum(ctx, N, d, [A, B], [C, D], rest, skip_bare_d0=skip_target)
    rhs = _split_sum(ctx, N, d, [A, C], [B, D], rest)
    return lhs, rhs


def wdvv_residual(N, d, A, B, C, D, rest, ctx) -> Fraction:
    """LHS minus RHS of the WDVV relation for the split (A B | C D).

    A..D and ``rest`` are primary insertions, given as exponents or as
    :class:`Insertion` with psi 0.
    """
    def exp(x):
        if isinstance(x, tuple):
            if x[1]:
                raise ValueError("wdvv_residual takes primary insertions")
            return x[0]
        return x

    lhs, rhs = _wdvv_sides(
        ctx, N, d, exp(A), exp(B), exp(C), exp(D), [exp(x) for x in rest]
    )
    return lhs - rhs


def ambient_rank(key: InvariantKey) -> tuple:
    """Well-founded order; every recursive call below strictly decreases it."""
    if key.psi:
        return (key.d, key.psi, -key.n, 0, 0)
    exps = [e for e, _ in key.insertions]
    big = [e for e in exps if e >= 2]
    return (key.d, 0, len(big), -sum(e * e for e in big), key.n)


def evaluate_ambient(key: InvariantKey, ctx) -> Fraction:
    """Value of an ambient key; sub-invariants go through ``ctx.evaluate``."""
    if key.kind is not Kind.AMBIENT:
        raise ValueError("evaluate_ambient needs an ambient key")
    if is_trivially_zero(key):
        return ZERO
    N, d = key.N, key.d
    if d == 0:
        return degree0_invariant(key)

    k = key.psi
    if k:
        if key.n >= 3:
            total = ZERO
            for t in trr_expand(key, group=True):
                v = ctx.evaluate(t.left)
                if v:
                    total += t.coeff * v * ctx.evaluate(t.right)
            return total
        # divisor equation solved for the invariant without the extra H
        g1 = key.insertions[0]
        padded = ambient_key(N, d, [*key.insertions, (1, 0)])
        lowered = ambient_key(N, d, [(g1.exp + 1, k - 1), *key.insertions[1:]])
        return (ctx.evaluate(padded) - ctx.evaluate(lowered)) / d

    exps = [e for e, _ in key.insertions]
    if 0 in exps:
        return ZERO
    if 1 in exps:
        i = exps.index(1)
        return d * ctx.evaluate(ambient_key(N, d, key.insertions[:i] + key.insertions[i + 1:]))
    if key.n <= 2:
        # dimension leaves <pt, pt>_1 = 1 (one line through two points), and
        # <>_1 = 1 on P^1
        return Fraction(1) if d == 1 and all(e == N for e in exps) else ZERO

    # WDVV with A = H, B = H^(a-1) for the smallest exponent a, C the largest
    # of the others; the target is the (d1 = 0, R1 = {}) term of the LHS.
    a = exps[-1]
    C, D = exps[0], exps[1]
    rest = exps[2:-1]
    lhs, rhs = _wdvv_sides(ctx, N, d, 1, a - 1, C, D, rest, skip_target=True)
    return rhs - lhs
