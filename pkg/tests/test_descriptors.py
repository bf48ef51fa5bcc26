import pytest

from basisforest.descriptors import (
    Composite,
    DescriptorError,
    DescriptorSyntaxError,
    Lagrange,
    Power,
    composite,
    dg,
    format_descriptor,
    lagrange,
    parse_descriptor,
    power,
    taylor_hood,
)
from basisforest.indexing import (
    BLOCKED_BY_ENTITY,
    BLOCKED_INTERLEAVED,
    BLOCKED_LEXICOGRAPHIC,
    FLAT_INTERLEAVED,
)

TH_TEXT = "composite(power(lagrange(2),2,blockedInterleaved),lagrange(1),blockedLexicographic)"


def test_parse_taylor_hood():
    assert parse_descriptor(TH_TEXT) == taylor_hood(2, BLOCKED_INTERLEAVED)
    assert parse_descriptor(TH_TEXT) == Composite(
        (Power(Lagrange(2), 2, BLOCKED_INTERLEAVED), Lagrange(1)), BLOCKED_LEXICOGRAPHIC
    )


def test_parse_power():
    assert parse_descriptor("power(lagrange(1),3,flatInterleaved)") == Power(
        Lagrange(1), 3, FLAT_INTERLEAVED
    )


def test_whitespace_insensitive():
    spaced = " composite ( power( lagrange (2) , 2,\n blockedInterleaved ), lagrange(1) , blockedLexicographic ) "
    assert parse_descriptor(spaced) == parse_descriptor(TH_TEXT)


def test_dg_leaf():
    assert parse_descriptor("dg(1)") == Lagrange(1, continuous=False)


@pytest.mark.parametrize(
    "text,offset",
    [
        ("lagrange(4)", 0),
        ("lagrange(9)", 0),
        ("power(lagrange(1),2,blocked)", 20),
        ("lagrange(1", 10),
        ("lagrange(1))", 11),
        ("nedelec(1)", 0),
        ("composite(lagrange(1),lagrange(2),blockedInterleaved)", 0),
        ("power(dg(1),2,blockedByEntity)", 0),
        ("lagrange(1) $", 12),
        ("power(lagrange(1),0,flatLexicographic)", 0),
    ],
)
def test_errors_carry_offsets(text, offset):
    with pytest.raises(DescriptorSyntaxError) as info:
        parse_descriptor(text)
    assert info.value.offset == offset
    assert f"offset {offset}" in str(info.value)


def test_degree_error_message():
    with pytest.raises(DescriptorSyntaxError, match="degree out of range"):
        parse_descriptor("lagrange(4)")


def test_depth_cap():
    deep = "power(power(power(power(lagrange(1),2,blockedLexicographic),2,blockedLexicographic),2,blockedLexicographic),2,blockedLexicographic)"
    with pytest.raises(DescriptorSyntaxError, match="depth"):
        parse_descriptor(deep)


@pytest.mark.parametrize(
    "desc",
    [
        lagrange(0),
        dg(3),
        power(lagrange(2), 3, "blockedByEntity"),
        composite(dg(1), power(lagrange(1), 2, "flatLexicographic"), "blockedLexicographic"),
        taylor_hood(3, BLOCKED_LEXICOGRAPHIC),
    ],
)
def test_round_trip(desc):
    assert parse_descriptor(format_descriptor(desc)) == desc


def test_constructor_validation():
    with pytest.raises(DescriptorError):
        Power(dg(1), 2, BLOCKED_BY_ENTITY)
    with pytest.raises(DescriptorError):
        Composite((lagrange(1),), BLOCKED_INTERLEAVED)
    with pytest.raises(DescriptorError):
        Lagrange(-1)
