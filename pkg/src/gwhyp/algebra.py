"""Cohomology bookkeeping for P^N and a degree-l hypersurface Y in P^N.

Only the subring generated by the hyperplane class is modelled, so a class
is just an exponent ``a`` standing for ``H^a`` (ambient) or ``i^*H^a`` (on
Y). Exponents past the top degree are legal and denote the zero class.

All values are exact :class:`fractions.Fraction` instances.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "Fraction",
    "Geometry",
    "pair_ambient",
    "pair_hyp",
    "diagonal_hyp",
    "dual_ambient",
    "RESTRICTED_ONLY",
]

ZERO = Fraction(0)
ONE = Fraction(1)

# Geometries where A*(Y) is strictly bigger than the restricted subring.
RESTRICTED_ONLY = frozenset({(3, 2), (3, 3)})


@dataclass(frozen=True, order=True)
class Geometry:
    """A hypersurface of degree ``l`` in ``P^N``."""

    N: int
    l: int

    def __post_init__(self):
        if not isinstance(self.N, int) or not isinstance(self.l, int):
            raise TypeError("N and l must be integers")
        if self.N < 2:
            raise ValueError(f"ambient dimension N must be >= 2, got {self.N}")
        if self.l < 1:
            raise ValueError(f"hypersurface degree l must be >= 1, got {self.l}")

    def contact_budget(self, d: int) -> int:
        """Intersection number Y.beta of a degree-d curve with Y."""
        return self.l * d

    @property
    def restricted_only(self) -> bool:
        return (self.N, self.l) in RESTRICTED_ONLY

    @property
    def is_calabi_yau(self) -> bool:
        return self.l == self.N + 1


def pair_ambient(geom: Geometry | int, a: int, b: int) -> Fraction:
    """Poincare pairing of H^a and H^b on P^N."""
    N = geom if isinstance(geom, int) else geom.N
    return ONE if a + b == N else ZERO


def pair_hyp(geom: Geometry, a: int, b: int) -> Fraction:
    """Pairing of i^*H^a and i^*H^b on Y; the top class integrates to l."""
    return Fraction(geom.l) if a + b == geom.N - 1 else ZERO


def diagonal_hyp(geom: Geometry) -> list[tuple[int, int, Fraction]]:
    """Restricted part of the class of the diagonal of Y.

    Returns terms ``(a, b, c)`` meaning ``c * H^a (x) H^b``. The dual of
    ``H^a`` with respect to :func:`pair_hyp` is ``H^(N-1-a) / l``.
    """
    w = Fraction(1, geom.l)
    top = geom.N - 1
    return [(a, top - a, w) for a in range(geom.N)]


def dual_ambient(geom: Geometry | int, a: int) -> tuple[int, Fraction]:
    """Dual basis element of H^a on P^N.

    Raises ``ValueError`` when ``a`` is outside ``0..N`` (zero class).
    """
    N = geom if isinstance(geom, int) else geom.N
    if not 0 <= a <= N:
        raise ValueError(f"H^{a} is the zero class on P^{N}")
    return N - a, ONE
