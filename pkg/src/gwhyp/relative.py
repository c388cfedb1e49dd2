"""Relative invariants of Y in P^N and absolute invariants of Y.

For a relative key with contact order m >= 1 at slot 1 the engine uses

    (m-1) * I_{m-1}(tau_{k+1}(g1), ...) + l * I_{m-1}(tau_k(H g1), ...)
        = I_m(tau_k(g1), ...) + sum of D-terms at contact order m-1,

i.e. intersecting (m-1) psi_1 + ev_1^* Y with the space of contact order
m-1 gives the space of contact order m plus correction spaces D. A D-term
is a comb: an internal curve of degree d0 inside Y carrying slot 1, with r
external curves attached, the i-th of degree d_i meeting Y with contact
order m_i at the node. Its weight is (m_1 ... m_r) / r!, and every node
contributes the restricted diagonal of Y.

Absolute invariants of Y of degree d come out of the same relation at
contact order l*d: the space with contact order l*d + 1 is empty, and the
r = 0 D-term is the invariant of Y itself.
"""
from __future__ import annotations

import sys
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import factorial, prod

from .algebra import Geometry
from .ambient import ambient_rank, degree0_invariant, evaluate_ambient
from .cache import CacheStore
from .keys import (
    Insertion,
    InvariantKey,
    Kind,
    canonicalize,
    hyp_key,
    is_trivially_zero,
    rel_key,
    serialize,
)

__all__ = [
    "DTermComponent",
    "Part",
    "Engine",
    "RecursionOrderError",
    "enumerate_dterms",
    "enumerate_dterms_multiset",
    "dterm_value",
    "reduce_relative",
    "extract_hypersurface",
    "divisor_pad",
    "key_rank",
]

ZERO = Fraction(0)


@dataclass(frozen=True)
class Part:
    """One external component: slots it carries, degree, contact order."""

    slots: tuple[int, ...]
    d: int
    m: int


@dataclass(frozen=True)
class DTermComponent:
    """One summand of the D-space together with a diagonal assignment.

    Slots are 0-based indices into the parent insertion list; slot 0 always
    sits on the internal component.
    """

    r: int
    S0: tuple[int, ...]
    parts: tuple[Part, ...]
    d0: int
    diag: tuple[int, ...]
    coeff: Fraction


class RecursionOrderError(RuntimeError):
    """A recursive call failed to decrease the well-founded rank."""


def key_rank(key: InvariantKey) -> tuple:
    """Rank used by the recursion guard.

    Ambient keys live in tier 0 (they never call back into tier 1). In
    tier 1 the order is by degree, then number of points, then a kind
    marker (relative < absolute-with-points < absolute-without-points),
    then contact order.
    """
    if key.kind is Kind.AMBIENT:
        return (0, *ambient_rank(key))
    if key.kind is Kind.HYPERSURFACE:
        if key.n == 0:
            return (1, key.d, 1, 3, 0)
        return (1, key.d, key.n, 2, 0)
    # beyond the contact budget (only reachable with the gate disabled)
    # the relation at m = l*d + 1 calls the absolute invariant
    if key.m > key.l * key.d:
        return (1, key.d, key.n, 3, key.m)
    return (1, key.d, key.n, 1, key.m)


def _compositions(total, parts, lo=1):
    """Ordered tuples of ``parts`` integers >= lo summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(lo, total - lo * (parts - 1) + 1):
        for tail in _compositions(total - first, parts - 1, lo):
            yield (first, *tail)


def _raw_dterms(geom: Geometry, d: int, m_red: int, n: int):
    """Yield (r, S0, parts, d0) before diagonal assignment, ordered tuples."""
    l = geom.l
    for r in range(0, d + 1):
        for d0 in range(d - r + 1):
            contact = m_red - l * d0
            if contact < r or (r == 0 and contact != 0):
                continue
            for degs in _compositions(d - d0, r):
                for mults in _compositions(contact, r):
                    if any(mi > l * di for mi, di in zip(mults, degs)):
                        continue
                    for labels in product(range(r + 1), repeat=n - 1):
                        S0 = (0, *(j + 1 for j, lab in enumerate(labels) if lab == 0))
                        if d0 == 0 and len(S0) + r < 3:
                            continue
                        parts = tuple(
                            Part(
                                tuple(j + 1 for j, lab in enumerate(labels) if lab == i + 1),
                                degs[i],
                                mults[i],
                            )
                            for i in range(r)
                        )
                        yield r, S0, parts, d0


def _internal_exp_ok(geom, insertions, S0):
    return all(insertions[s].exp <= geom.N - 1 for s in S0)


def enumerate_dterms(geom: Geometry, d: int, m_red: int, insertions) -> list[DTermComponent]:
    """All D-components at reduced contact order ``m_red``, as ordered r-tuples.

    Coefficient is (prod m_i) / r! times (1/l)^r from the diagonal.
    Components that vanish for free are dropped: internal classes above
    the top degree of Y, contact order above l*d_i on an external part,
    and unstable degree-zero internal curves.
    """
    insertions = tuple(Insertion(*x) for x in insertions)
    out = []
    for r, S0, parts, d0 in _raw_dterms(geom, d, m_red, len(insertions)):
        if not _internal_exp_ok(geom, insertions, S0):
            continue
        c = Fraction(prod(p.m for p in parts), factorial(r) * geom.l**r)
        for diag in product(range(geom.N), repeat=r):
            out.append(DTermComponent(r, S0, parts, d0, diag, c))
    return out


def enumerate_dterms_multiset(geom: Geometry, d: int, m_red: int, insertions) -> list[DTermComponent]:
    """Same sum as :func:`enumerate_dterms`, over unordered collections.

    Each collection of external parts (with their diagonal labels) appears
    once, weighted by (prod m_i) / prod(mult_j!) * (1/l)^r where mult_j
    counts repeated identical parts.
    """
    insertions = tuple(Insertion(*x) for x in insertions)
    out = []
    for r, S0, parts, d0 in _raw_dterms(geom, d, m_red, len(insertions)):
        if not _internal_exp_ok(geom, insertions, S0):
            continue
        for diag in product(range(geom.N), repeat=r):
            labelled = list(zip(parts, diag))
            if labelled != sorted(labelled, key=_part_order):
                continue
            reps = Counter(labelled).values()
            c = Fraction(
                prod(p.m for p in parts),
                prod(factorial(k) for k in reps) * geom.l**r,
            )
            out.append(DTermComponent(r, S0, parts, d0, diag, c))
    return out


def _part_order(item):
    part, b = item
    return (part.slots, part.d, part.m, b)


def dterm_value(geom: Geometry, comp: DTermComponent, insertions, ctx) -> Fraction:
    """coeff * <internal>^Y_{d0} * prod_i <external_i>^{rel, m_i}_{d_i}."""
    N, l = geom.N, geom.l
    total = comp.coeff
    for part, b in zip(comp.parts, comp.diag):
        ext = rel_key(
            N, l, part.d, part.m,
            [(N - 1 - b, 0), *(insertions[s] for s in part.slots)],
        )
        v = ctx.evaluate(ext)
        if not v:
            return ZERO
        total *= v
    internal = hyp_key(
        N, l, comp.d0,
        [*(insertions[s] for s in comp.S0), *((b, 0) for b in comp.diag)],
    )
    return total * ctx.evaluate(internal)


def _dterm_sum(geom, d, m_red, insertions, ctx, skip_full=False):
    log = getattr(ctx, "dterm_log", None)
    if log is not None:
        log.add((geom, d, m_red, tuple(insertions), skip_full))
    total = ZERO
    for comp in enumerate_dterms(geom, d, m_red, insertions):
        if skip_full and comp.r == 0:
            continue
        total += dterm_value(geom, comp, insertions, ctx)
    return total


def _raised(key: InvariantKey, m, dexp=0, dpsi=0) -> InvariantKey:
    g1 = key.insertions[0]
    first = (g1.exp + dexp, g1.psi + dpsi)
    return rel_key(key.N, key.l, key.d, m, [first, *key.insertions[1:]])


def reduce_relative(key: InvariantKey, ctx) -> Fraction:
    """Relative invariant with m >= 1 from contact order m - 1."""
    if key.kind is not Kind.RELATIVE or key.m < 1:
        raise ValueError("reduce_relative needs a relative key with m >= 1")
    geom = key.geometry
    m = key.m
    lhs = ZERO
    if m > 1:
        lhs += (m - 1) * ctx.evaluate(_raised(key, m - 1, dpsi=1))
    lhs += geom.l * ctx.evaluate(_raised(key, m - 1, dexp=1))
    return lhs - _dterm_sum(geom, key.d, m - 1, key.insertions, ctx)


def extract_hypersurface(key: InvariantKey, ctx) -> Fraction:
    """Invariant of Y with d >= 1 and n >= 1 from contact order l*d."""
    if key.kind is not Kind.HYPERSURFACE or key.d < 1 or key.n < 1:
        raise ValueError("extract_hypersurface needs a Y key with d >= 1 and n >= 1")
    geom = key.geometry
    top = geom.contact_budget(key.d)
    ins = key.insertions
    rel = InvariantKey(Kind.RELATIVE, key.N, key.d, ins, l=key.l, m=top)
    lhs = top * ctx.evaluate(_raised(rel, top, dpsi=1))
    lhs += geom.l * ctx.evaluate(_raised(rel, top, dexp=1))
    return lhs - _dterm_sum(geom, key.d, top, ins, ctx, skip_full=True)


def divisor_pad(key: InvariantKey, ctx) -> Fraction:
    """Y invariant without insertions, via <H>^Y_d = d * <>^Y_d."""
    if key.kind is not Kind.HYPERSURFACE or key.n != 0:
        raise ValueError("divisor_pad needs a Y key without insertions")
    if key.d < 1:
        raise ValueError("divisor_pad needs d >= 1")
    padded = hyp_key(key.N, key.l, key.d, [(1, 0)])
    return ctx.evaluate(padded) / key.d


class Engine:
    """Memoized evaluator for ambient, relative and hypersurface keys.

    ``store`` is an optional :class:`CacheStore`; entries found there are
    used as-is and every computed value is written back to it.
    """

    def __init__(
        self,
        store: CacheStore | None = None,
        check_order: bool = True,
        contact_gate: bool = True,
        record_dterms: bool = False,
    ):
        self.store = store if store is not None else CacheStore()
        self.check_order = check_order
        self.contact_gate = contact_gate
        # (geometry, d, reduced m, insertions, extraction flag) of every D-sum
        self.dterm_log = set() if record_dterms else None
        self.memo: dict[InvariantKey, Fraction] = {}
        self.cache_hits = 0
        self._stack: list[tuple[tuple, InvariantKey]] = []

    def evaluate(self, key: InvariantKey) -> Fraction:
        if key.kind is Kind.RELATIVE and key.m == 0:
            # no contact condition: the relative space is the absolute one
            key = InvariantKey(Kind.AMBIENT, key.N, key.d, key.insertions)
        key = canonicalize(key)
        if is_trivially_zero(key, self.contact_gate):
            return ZERO
        try:
            return self.memo[key]
        except KeyError:
            pass
        text = serialize(key)
        hit = self.store.get(text)
        if hit is not None:
            self.cache_hits += 1
            self.memo[key] = hit
            return hit

        rank = key_rank(key)
        if self.check_order and self._stack and not rank < self._stack[-1][0]:
            chain = " -> ".join(serialize(k) for _, k in self._stack[-5:])
            raise RecursionOrderError(
                f"rank did not decrease: {chain} -> {text}"
            )
        self._stack.append((rank, key))
        try:
            value = self._dispatch(key)
        finally:
            self._stack.pop()
        self.memo[key] = value
        self.store.put(text, value)
        return value

    def _dispatch(self, key: InvariantKey) -> Fraction:
        if key.kind is Kind.AMBIENT:
            return evaluate_ambient(key, self)
        if key.kind is Kind.RELATIVE:
            return reduce_relative(key, self)
        if key.d == 0:
            return degree0_invariant(key)
        if key.n == 0:
            return divisor_pad(key, self)
        return extract_hypersurface(key, self)

    def __call__(self, key: InvariantKey) -> Fraction:
        return self.evaluate(key)


# deep chains of contact orders and WDVV steps
if sys.getrecursionlimit() < 20000:
    sys.setrecursionlimit(20000)
