"""Exact genus-zero Gromov-Witten invariants of hypersurfaces in P^N.

Quick start::

    >>> from gwhyp import Engine, parse
    >>> Engine().evaluate(parse("Y;N=4;l=5;d=1;ins=1.0"))
    Fraction(2875, 1)
"""
from .algebra import Geometry, diagonal_hyp, dual_ambient, pair_ambient, pair_hyp
from .cache import CacheConflict, CacheStore
from .keys import (
    Insertion,
    InvariantKey,
    Kind,
    Reason,
    ambient_key,
    canonicalize,
    hyp_key,
    is_trivially_zero,
    parse,
    rel_key,
    serialize,
    vdim,
)
from .relative import Engine

__version__ = "0.1.0"
