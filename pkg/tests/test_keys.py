import pytest
from hypothesis import given
from hypothesis import strategies as st

from gwhyp.keys import (
    Insertion,
    InvariantKey,
    KeyParseError,
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


@st.composite
def keys(draw):
    kind = draw(st.sampled_from(list(Kind)))
    N = draw(st.integers(2, 6))
    d = draw(st.integers(0, 4))
    n = draw(st.integers(0, 6))
    exps = draw(st.lists(st.integers(0, N + 1), min_size=n, max_size=n))
    ins = [(e, 0) for e in exps]
    if ins:
        ins[0] = (ins[0][0], draw(st.integers(0, 5)))
    if kind is Kind.AMBIENT:
        return InvariantKey(kind, N, d, tuple(ins))
    l = draw(st.integers(1, 7))
    if kind is Kind.HYPERSURFACE:
        return InvariantKey(kind, N, d, tuple(ins), l=l)
    m = draw(st.integers(0, 8)) if ins else 0
    return InvariantKey(kind, N, d, tuple(ins), l=l, m=m)


def test_vdim_examples():
    assert vdim(ambient_key(4, 1, [(0, 0), (0, 0)])) == 8
    assert vdim(rel_key(4, 5, 1, 5, [(0, 0)])) == 2
    assert vdim(hyp_key(4, 5, 2, [(0, 0)])) == 1


def test_trivially_zero_examples():
    assert is_trivially_zero(rel_key(2, 1, 1, 2, [(0, 0)])) is Reason.CONTACT_OVERFLOW
    assert is_trivially_zero(rel_key(2, 1, 1, 2, [(2, 3), (1, 0)])) is Reason.CONTACT_OVERFLOW
    assert is_trivially_zero(hyp_key(2, 3, 1, [(1, 0), (1, 0)])) is Reason.DIM_MISMATCH
    assert is_trivially_zero(ambient_key(2, 1, [(2, 0), (2, 0)])) is Reason.NONE
    assert not is_trivially_zero(ambient_key(2, 1, [(2, 0), (2, 0)]))


def test_trivially_zero_order_and_other_reasons():
    # an overflowing exponent wins over the dimension check
    assert is_trivially_zero(hyp_key(4, 5, 1, [(4, 0)])) is Reason.EXP_OVERFLOW
    assert is_trivially_zero(ambient_key(2, 0, [(1, 0), (0, 0)])) is Reason.UNSTABLE_DEGREE_ZERO
    over = rel_key(2, 1, 1, 2, [(0, 0), (2, 0), (2, 0)])
    assert vdim(over) != over.codim
    assert is_trivially_zero(over, contact_gate=False) is Reason.DIM_MISMATCH


def test_canonicalize_examples():
    key = InvariantKey(Kind.AMBIENT, 2, 1, ((1, 0), (2, 0), (1, 0)))
    assert canonicalize(key).insertions == ((2, 0), (1, 0), (1, 0))
    rel = InvariantKey(Kind.RELATIVE, 3, 1, ((0, 1), (1, 0), (2, 0)), l=2, m=2)
    assert canonicalize(rel).insertions == ((0, 1), (2, 0), (1, 0))
    # contact order pins slot 1 even without psi
    rel0 = InvariantKey(Kind.RELATIVE, 3, 1, ((0, 0), (2, 0)), l=2, m=1)
    assert canonicalize(rel0) == rel0


def test_serialize_examples():
    key = rel_key(4, 5, 1, 5, [(1, 2)])
    assert serialize(key) == "R;N=4;l=5;d=1;m=5;ins=1.2"
    n3 = parse("A;N=2;d=3;ins=2.0,2.0,2.0,2.0,2.0,2.0,2.0,2.0")
    assert n3 == ambient_key(2, 3, [(2, 0)] * 8)
    assert serialize(hyp_key(4, 5, 1, [])) == "Y;N=4;l=5;d=1;ins="


@pytest.mark.parametrize(
    "text,code",
    [
        ("R;N=4", "MissingField"),
        ("", "MissingField"),
        ("Q;N=2;d=1;ins=", "BadKind"),
        ("A;N=02;d=1;ins=", "UnexpectedToken"),
        ("A;N=x;d=1;ins=", "BadInteger"),
        ("A;N=2;d=1;ins=2.0,", "BadInteger"),
        ("A;N=2;d=1;ins=2.0;", "UnexpectedToken"),
        ("A;N=2;d=1;ins=2.0,2.1", "InvalidKey"),
        ("Y;N=2;l=0;d=1;ins=", "InvalidKey"),
        ("R;N=2;l=1;d=1;m=1;ins=", "InvalidKey"),
    ],
)
def test_parse_errors(text, code):
    with pytest.raises(KeyParseError) as info:
        parse(text)
    assert info.value.code == code


def test_parse_error_position():
    with pytest.raises(KeyParseError) as info:
        parse("A;N=2;x=1;ins=")
    assert info.value.pos == 6


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(kind=Kind.AMBIENT, N=2, d=1, insertions=((0, 0), (1, 1))),
        dict(kind=Kind.AMBIENT, N=2, d=-1),
        dict(kind=Kind.AMBIENT, N=2, d=1, l=3),
        dict(kind=Kind.HYPERSURFACE, N=2, d=1, l=2, m=1, insertions=((0, 0),)),
        dict(kind=Kind.RELATIVE, N=2, d=1, l=2, m=-1),
        dict(kind=Kind.HYPERSURFACE, N=1, d=1, l=1),
    ],
)
def test_invalid_keys(kwargs):
    with pytest.raises(ValueError):
        InvariantKey(**kwargs)


@given(keys())
def test_serialize_parse_roundtrip(key):
    assert parse(serialize(key)) == key
    text = serialize(key)
    assert serialize(parse(text)) == text


@given(keys())
def test_canonicalize_idempotent(key):
    once = canonicalize(key)
    assert canonicalize(once) == once
    assert sorted(once.insertions) == sorted(key.insertions)
    assert once.insertions[1:] == tuple(sorted(once.insertions[1:], reverse=True))


@given(keys(), st.integers(0, 3))
def test_vdim_linear(key, e):
    bigger = InvariantKey(key.kind, key.N, key.d, (*key.insertions, (e, 0)), l=key.l, m=key.m)
    assert vdim(bigger) == vdim(key) + 1
    assert bigger.codim == key.codim + e


@given(keys())
def test_gate_none_implies_dimension_match(key):
    if not is_trivially_zero(key):
        assert vdim(key) == key.codim >= 0


def test_insertion_defaults():
    assert Insertion(2) == (2, 0)
    key = hyp_key(4, 5, 1, [(1, 0)])
    assert key.geometry.l == 5 and key.n == 1 and key.psi == 0
    with pytest.raises(ValueError):
        ambient_key(2, 1, []).geometry
