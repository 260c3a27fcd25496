import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import DUAL, GROUP_RING, TWO_EPS
from localdrr.groupg import GroupElem, LieElem, membership, random_group_elem, random_lie_elem
from localdrr.laurent import LaurentSeries
from localdrr.nilring import QQ
from localdrr.parser import ParseError, kind_of, parse_expr, parse_ring, parse_value, render_value
from strategies import automorphisms, ring_elems, series, units


class TestExamples:
    def test_ring(self):
        ring = parse_ring("Q[e1^2=0]")
        assert ring.generators == ("e1",) and ring.exponents == (2,)

    def test_series(self):
        ring = parse_ring("Q[e1^2=0]")
        f = parse_value("1 + e1*t^-1", "series", ring)
        assert f.coeffs == {-1: ring.gen("e1"), 0: ring.one}

    def test_group(self):
        x = parse_value("(h=1; phi=t+t^2)", "group")
        assert isinstance(x, GroupElem) and membership(x).in_Gplus

    def test_lie(self):
        z = parse_value("(s=t^-1; r=t^2)", "lie")
        assert z == LieElem(LaurentSeries.monomial(QQ, -1), LaurentSeries.monomial(QQ, 2))

    def test_capped_ring(self):
        ring = parse_ring("Q[a^3=0, b^3=0; cap=3]")
        assert ring.cap == 3 and ring.dim == 6

    def test_big_o(self):
        f = parse_value("1 + 2t + O(t^3)", "series")
        assert f.prec == 3

    def test_division(self):
        f = parse_value("1/(1-t) + O(t^4)", "series")
        assert f == parse_value("1 + t + t^2 + t^3 + O(t^4)", "series")

    def test_juxtaposition_and_rationals(self):
        assert parse_value("3t^2/2 - 2 e t", "series", DUAL) == parse_value("(3/2)*t^2 + (-2)*e*t", "series", DUAL)


class TestErrors:
    @pytest.mark.parametrize("text,kind,span", [
        ("1 + * t", "series", (4, 5)),
        ("1 + x", "series", (4, 5)),
        ("(h=1; psi=t)", "group", (6, 9)),
        ("Q[e^0=0]", "ring", (4, 5)),
        ("1 + t $", "series", (6, 7)),
    ])
    def test_spans(self, text, kind, span):
        with pytest.raises(ParseError) as info:
            parse_value(text, kind)
        assert info.value.span == span
        assert "^" in str(info.value)

    def test_not_invertible(self):
        with pytest.raises(ParseError):
            parse_value("1/(e t)", "series", DUAL)

    def test_not_admissible(self):
        with pytest.raises(ParseError):
            parse_value("(h=1; phi=t^2)", "group")

    def test_elem_with_t(self):
        with pytest.raises(ParseError):
            parse_value("1 + t", "elem")

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            parse_expr("1", "matrix")


def roundtrip(value, ring=QQ):
    text = render_value(value)
    back = parse_value(text, kind_of(value), ring)
    assert back == value, text


@settings(max_examples=60, deadline=None)
@given(f=series(GROUP_RING, -3, 4), p=st.one_of(st.none(), st.integers(-2, 6)))
def test_series_roundtrip(f, p):
    if p is not None:
        f = f.truncate(p)
    roundtrip(f, GROUP_RING)


@settings(max_examples=60, deadline=None)
@given(a=ring_elems(GROUP_RING))
def test_elem_roundtrip(a):
    roundtrip(a, GROUP_RING)


@settings(max_examples=40, deadline=None)
@given(h=units(TWO_EPS), phi=automorphisms(TWO_EPS))
def test_group_roundtrip(h, phi):
    roundtrip(GroupElem(h, phi), TWO_EPS)


@pytest.mark.parametrize("seed", range(10))
def test_random_elements_roundtrip(seed):
    roundtrip(random_group_elem(GROUP_RING, "general", seed=seed), GROUP_RING)
    roundtrip(random_lie_elem(TWO_EPS, seed=seed), TWO_EPS)


@pytest.mark.parametrize("text", ["Q", "Q[e^2=0]", "Q[e1^3=0, e2^2=0]", "Q[a^3=0, b^2=0; cap=2]"])
def test_ring_roundtrip(text):
    ring = parse_ring(text)
    assert parse_ring(str(ring)) == ring
