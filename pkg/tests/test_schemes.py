import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

import oracles as O
from feynhopf.momenta import momentum_space
from feynhopf.poly import Poly
from feynhopf.schemes import I_minus_P_ms, I_minus_P_taylor, Laurent, P_ms, P_taylor

VARS = ["x", "y", "u", "w"]
fractions = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 4))
monos = st.dictionaries(st.sampled_from(VARS), st.integers(1, 3), max_size=3).map(lambda d: tuple(sorted(d.items())))
polys = st.dictionaries(monos, fractions, max_size=4).map(Poly)
laurents = st.dictionaries(st.integers(-3, 2), polys, max_size=4).map(Laurent)


@given(laurents, laurents)
def test_rota_baxter_ms(a, b):
    assert P_ms(a) * P_ms(b) == P_ms(-(a * b) + P_ms(a) * b + a * P_ms(b))


@given(laurents, laurents)
def test_complement_is_also_rota_baxter(a, b):
    # the regular part forms a subalgebra, so 1 - P satisfies the same identity
    Q = I_minus_P_ms
    assert Q(a) * Q(b) == Q(-(a * b) + Q(a) * b + a * Q(b))


@given(laurents)
def test_ms_projection(a):
    assert P_ms(P_ms(a)) == P_ms(a)
    assert P_ms(a) + I_minus_P_ms(a) == a
    assert all(n < 0 for n in P_ms(a).powers) and all(n >= 0 for n in I_minus_P_ms(a).powers)


@given(polys, polys, st.integers(0, 4), st.integers(0, 4))
def test_taylor_family(f, g, s, t):
    lhs = P_taylor(s, f) * P_taylor(t, g)
    assert lhs == P_taylor(s + t, P_taylor(s, f) * g + f * P_taylor(t, g) - f * g)


@given(polys, st.integers(0, 6))
def test_taylor_matches_derivative_formula(f, m):
    expr, syms = O.taylor_by_derivatives(f, m)
    assert O.fraction_poly_equal(P_taylor(m, f), expr, syms)


@given(polys, st.integers(0, 5), st.integers(0, 5))
def test_taylor_projections_nest(f, m, n):
    assert P_taylor(m, P_taylor(n, f)) == P_taylor(min(m, n), f)
    assert P_taylor(m, f) + I_minus_P_taylor(m, f) == f


def test_taylor_rejects_negative_order():
    with pytest.raises(ValueError):
        P_taylor(-1, Poly.const(1))


@given(laurents, laurents, laurents)
def test_laurent_ring(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


def test_laurent_parse_round_trip(phi3_graphs):
    g = phi3_graphs["nested_fish"].graph
    sp = momentum_space(g)
    rng = random.Random(4)
    for _ in range(30):
        terms = {}
        for n in range(-2, 2):
            if rng.random() < 0.6:
                p = Poly.const(rng.randint(-3, 3))
                for v in sp.free:
                    p = p + Poly.var(v) * Fraction(rng.randint(-4, 4), rng.randint(1, 3))
                terms[n] = sp.one() * p
        x = Laurent(terms, sp)
        assert Laurent.parse(x.format(), sp) == x


def test_laurent_parse_reduces_raw_momenta(phi3_graphs):
    g = phi3_graphs["fish"].graph
    sp = momentum_space(g)
    # p0 + p3 = 0 by conservation
    assert Laurent.parse("z^-1: p0 + p3", sp).is_zero()
