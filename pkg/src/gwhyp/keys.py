"""Invariant keys: canonical form, dimension gates and the text grammar.

A key names one genus-zero invariant::

    A;N=2;d=3;ins=2.0,2.0,2.0,2.0,2.0,2.0,2.0,2.0    <pt^8>_3 on P^2
    Y;N=4;l=5;d=1;ins=1.0                           <H>_1 on the quintic
    R;N=2;l=1;d=2;m=2;ins=0.0,2.0,2.0,2.0,2.0       conics tangent to a line

Each insertion is ``exp.psi``. Cotangent powers and the contact order live
at the first slot only; every other slot carries a primary class.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, replace
from typing import NamedTuple

__all__ = [
    "Kind",
    "Insertion",
    "InvariantKey",
    "Reason",
    "KeyParseError",
    "vdim",
    "is_trivially_zero",
    "canonicalize",
    "serialize",
    "parse",
    "ambient_key",
    "hyp_key",
    "rel_key",
]


class Kind(str, enum.Enum):
    AMBIENT = "A"
    HYPERSURFACE = "Y"
    RELATIVE = "R"


class Insertion(NamedTuple):
    exp: int
    psi: int = 0


class Reason(enum.Enum):
    EXP_OVERFLOW = "ExpOverflow"
    DIM_MISMATCH = "DimMismatch"
    CONTACT_OVERFLOW = "ContactOverflow"
    UNSTABLE_DEGREE_ZERO = "UnstableDegreeZero"
    NONE = "None"

    def __bool__(self):
        return self is not Reason.NONE


@dataclass(frozen=True)
class InvariantKey:
    """Identifier of a single invariant.

    ``l`` is ``None`` for ambient keys and ``m`` is ``None`` unless the key
    is relative. ``d`` is always the degree H.beta of the pushed-forward
    curve class.
    """

    kind: Kind
    N: int
    d: int
    insertions: tuple[Insertion, ...] = ()
    l: int | None = None
    m: int | None = None

    def __post_init__(self):
        kind = Kind(self.kind)
        object.__setattr__(self, "kind", kind)
        ins = tuple(Insertion(int(e), int(p)) for e, p in self.insertions)
        object.__setattr__(self, "insertions", ins)
        if kind is Kind.AMBIENT:
            if self.l is not None or self.m is not None:
                raise ValueError("ambient keys carry neither l nor m")
            if self.N < 1:
                raise ValueError("N must be >= 1")
        else:
            if self.N < 2:
                raise ValueError("N must be >= 2 for hypersurface keys")
            if self.l is None or self.l < 1:
                raise ValueError("l must be >= 1")
            if kind is Kind.RELATIVE:
                if self.m is None or self.m < 0:
                    raise ValueError("relative keys need m >= 0")
            elif self.m is not None:
                raise ValueError("only relative keys carry m")
        if self.d < 0:
            raise ValueError("degree must be >= 0")
        for i, (e, p) in enumerate(ins):
            if e < 0 or p < 0:
                raise ValueError("exponents and psi powers must be >= 0")
            if p and i:
                raise ValueError("psi powers are only allowed at slot 1")
        if self.m and not ins:
            raise ValueError("positive contact order needs a first slot")

    @property
    def n(self) -> int:
        return len(self.insertions)

    @property
    def psi(self) -> int:
        return self.insertions[0].psi if self.insertions else 0

    @property
    def codim(self) -> int:
        return sum(e + p for e, p in self.insertions)

    @property
    def geometry(self):
        from .algebra import Geometry

        if self.l is None:
            raise ValueError("ambient keys have no hypersurface")
        return Geometry(self.N, self.l)

    def __str__(self):
        return serialize(self)


def ambient_key(N, d, insertions):
    return canonicalize(InvariantKey(Kind.AMBIENT, N, d, tuple(insertions)))


def hyp_key(N, l, d, insertions):
    return canonicalize(InvariantKey(Kind.HYPERSURFACE, N, d, tuple(insertions), l=l))


def rel_key(N, l, d, m, insertions):
    return canonicalize(InvariantKey(Kind.RELATIVE, N, d, tuple(insertions), l=l, m=m))


def vdim(key: InvariantKey) -> int:
    """Virtual dimension of the moduli space behind ``key``."""
    base = key.d * (key.N + 1) + key.N - 3 + key.n
    if key.kind is Kind.RELATIVE:
        return base - key.m
    if key.kind is Kind.HYPERSURFACE:
        return base - key.l * key.d - 1
    return base


def is_trivially_zero(key: InvariantKey, contact_gate: bool = True) -> Reason:
    """First reason (in a fixed order) why ``key`` vanishes for free.

    ``contact_gate=False`` skips the contact-order check so that callers can
    confirm the recursion produces the zero by itself.
    """
    top = key.N - 1 if key.kind is Kind.HYPERSURFACE else key.N
    if any(e > top for e, _ in key.insertions):
        return Reason.EXP_OVERFLOW
    if contact_gate and key.kind is Kind.RELATIVE and key.m > key.l * key.d:
        return Reason.CONTACT_OVERFLOW
    if key.codim != vdim(key):
        return Reason.DIM_MISMATCH
    if key.d == 0 and key.n < 3:
        return Reason.UNSTABLE_DEGREE_ZERO
    return Reason.NONE


def canonicalize(key: InvariantKey) -> InvariantKey:
    ins = key.insertions
    if not ins:
        return key
    pinned = ins[0].psi > 0 or (key.kind is Kind.RELATIVE and key.m > 0)
    if pinned:
        tail = tuple(sorted(ins[1:], reverse=True))
        new = (ins[0],) + tail
    else:
        new = tuple(sorted(ins, reverse=True))
    if new == ins:
        return key
    return replace(key, insertions=new)


def serialize(key: InvariantKey) -> str:
    parts = [key.kind.value, f"N={key.N}"]
    if key.l is not None:
        parts.append(f"l={key.l}")
    parts.append(f"d={key.d}")
    if key.m is not None:
        parts.append(f"m={key.m}")
    parts.append("ins=" + ",".join(f"{e}.{p}" for e, p in key.insertions))
    return ";".join(parts)


class KeyParseError(ValueError):
    """Malformed key string; ``pos`` is the 0-based offset of the problem."""

    def __init__(self, code: str, pos: int, text: str, detail: str = ""):
        self.code = code
        self.pos = pos
        self.text = text
        msg = f"{code} at position {pos} in {text!r}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


_INT = re.compile(r"0|[1-9][0-9]*")


class _Reader:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def fail(self, code, detail=""):
        raise KeyParseError(code, self.pos, self.text, detail)

    def at_end(self):
        return self.pos >= len(self.text)

    def literal(self, s, code="UnexpectedToken"):
        if self.text.startswith(s, self.pos):
            self.pos += len(s)
            return
        if self.at_end():
            self.fail("MissingField", f"expected {s!r}")
        self.fail(code, f"expected {s!r}")

    def integer(self):
        mt = _INT.match(self.text, self.pos)
        if not mt:
            self.fail("BadInteger")
        self.pos = mt.end()
        return int(mt.group())

    def field(self, name):
        self.literal(f"{name}=")
        return self.integer()


def parse(text: str) -> InvariantKey:
    """Inverse of :func:`serialize`."""
    rd = _Reader(text)
    if rd.at_end():
        rd.fail("MissingField", "empty key")
    try:
        kind = Kind(text[0])
    except ValueError:
        rd.fail("BadKind")
    rd.pos = 1
    rd.literal(";")
    N = rd.field("N")
    rd.literal(";")
    l = m = None
    if kind is not Kind.AMBIENT:
        l = rd.field("l")
        rd.literal(";")
    d = rd.field("d")
    rd.literal(";")
    if kind is Kind.RELATIVE:
        m = rd.field("m")
        rd.literal(";")
    rd.literal("ins=")
    ins = []
    if not rd.at_end():
        while True:
            e = rd.integer()
            rd.literal(".")
            p = rd.integer()
            ins.append(Insertion(e, p))
            if rd.at_end():
                break
            rd.literal(",")
    start = rd.pos
    try:
        return InvariantKey(kind, N, d, tuple(ins), l=l, m=m)
    except ValueError as exc:
        raise KeyParseError("InvalidKey", start, text, str(exc)) from None
