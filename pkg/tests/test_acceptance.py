"""Acceptance criteria 1-10.

Every check is exact (rational arithmetic, zero tolerance).  Each test
prints one line ``criterion N: PASS|FAIL ...`` straight to the terminal, so
the lines show up in ``pytest -v`` output; run this file as a script to get
just the ten lines.
"""
import random
import sys
import time
from fractions import Fraction

import pytest

import oracles as O
from feynhopf import load_theory
from feynhopf.enumerate import corpus
from feynhopf.graph import loop_number
from feynhopf.hopf import (
    AlgebraElement,
    coproduct_hopf,
    coproduct_tilde,
    coproduct_unspecified,
    counit,
    counit_left,
    counit_right,
    delta_tensor_id,
    forget_specification,
    hopf_project,
    id_tensor_delta,
    mult_id_s,
    mult_s_id,
)
from feynhopf.momenta import momentum_space
from feynhopf.poly import Poly
from feynhopf.renorm import Birkhoff, Convolution, concatenate, identity_character, inverse_character, verify_character
from feynhopf.schemes import I_minus_P_ms, Laurent, P_ms, P_taylor
from feynhopf.specified import SpecifiedGraph
from feynhopf.textio import load_graphs
from feynhopf.toys import random_character, toy_ms, toy_taylor
from importlib.resources import files

_capsys = None


def report(n: int, ok: bool, what: str, detail: str = ""):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {what}" + (f"  [{detail}]" if detail else "")
    if _capsys is not None:
        with _capsys.disabled():
            print("\n" + line)
    else:
        print(line)
    assert ok, line


@pytest.fixture(autouse=True)
def _terminal(capsys):
    global _capsys
    _capsys = capsys
    yield
    _capsys = None


_cache = {}


def theory(name):
    return _cache.setdefault(("t", name), load_theory(name))


def graphs(name, max_loops=None):
    key = ("c", name, max_loops)
    if key not in _cache:
        _cache[key] = corpus(name, max_loops)
    return _cache[key]


def bundled(name):
    return load_graphs(str(files("feynhopf.data") / f"{name}.graphs"))


def seeded_pairs(gs, n, seed, max_degree=2):
    rng = random.Random(seed)
    small = [G for G in gs if loop_number(G.graph) <= max_degree]
    return [(rng.choice(small), rng.choice(small)) for _ in range(n)]


# 1 ------------------------------------------------------------------------------


def test_criterion_1_coassociativity():
    t0 = time.perf_counter()
    checked, bad = 0, []
    for name, L in (("phi3", 3), ("qed", 2)):
        T = theory(name)
        for G in graphs(name, L):
            for hopf in (False, True):
                d = coproduct_hopf(G, T) if hopf else coproduct_tilde(G, T)
                checked += 1
                if delta_tensor_id(d, T, hopf) != id_tensor_delta(d, T, hopf):
                    bad.append((name, hopf, G))
    dt = time.perf_counter() - t0
    report(
        1,
        not bad and dt < 120,
        f"(D x id)D = (id x D)D, tilde and hopf, phi3 <= 3 loops + qed <= 2 loops: {checked} checks",
        f"{dt:.1f}s, limit 120s" + (f"; first failure {bad[0][0]} hopf={bad[0][1]}" if bad else ""),
    )


# 2 ------------------------------------------------------------------------------


def test_criterion_2_counit_antipode():
    checked, bad = 0, []
    for name, L in (("phi3", 3), ("qed", 2)):
        T = theory(name)
        for G in graphs(name, L):
            x = AlgebraElement.of(G)
            d = coproduct_tilde(G, T)
            dh = coproduct_hopf(G, T)
            ue = AlgebraElement.one().scale(counit(hopf_project(x)))
            ok = counit_left(d) == x and counit_right(d) == x
            ok = ok and mult_s_id(dh, T) == ue and mult_id_s(dh, T) == ue
            checked += 1
            if not ok:
                bad.append(G)
    report(2, not bad, f"(e x id)D = id = (id x e)D and m(S x id)D = ue = m(id x S)D on {checked} graphs", f"{len(bad)} failures")


# 3 ------------------------------------------------------------------------------


def test_criterion_3_examples():
    T = theory("phi3")
    recs = bundled("phi3")
    rec = recs["nested_fish"]
    G = SpecifiedGraph(rec.graph, rec.spec)
    d = coproduct_tilde(G, T)
    terms = list(d.items())
    lefts = [forget_specification(AlgebraElement({a: 1})) for (a, _), _ in terms]
    twins = [
        (i, j)
        for i in range(len(terms))
        for j in range(i + 1, len(terms))
        if lefts[i] == lefts[j] and terms[i][0][0] != terms[j][0][0]
    ]
    oracle_specified = O.tensor_sum_matches(d, O.collect(O.specified_coproduct_terms(O.Raw.of(G.graph, G.spec_map), T)))
    ok_spec = len(d) == 4 and all(c == 1 for _, c in terms) and len(twins) == 1 and oracle_specified == ""
    idx = []
    if twins:
        # the twin subgraphs: the same one-loop graph, with index 0 in one term and 1 in the other
        i, j = twins[0]
        gi = [f for f in terms[i][0][0].factors if _degree(f) > 0]
        gj = [f for f in terms[j][0][0].factors if _degree(f) > 0]
        idx = sorted(f[1] for f in gi + gj)
        ok_spec = ok_spec and idx == [0, 1] and gi[0][0] == gj[0][0]

    g2 = recs["two_triangles"].graph
    du = coproduct_unspecified(g2, T)
    coeffs = sorted(du.terms.values())
    oracle_plain = O.tensor_sum_matches(du, O.collect(O.unspecified_coproduct_terms(O.Raw.of(g2), T)))
    G2 = SpecifiedGraph(g2, recs["two_triangles"].spec)
    forgotten = forget_specification(coproduct_tilde(G2, T))
    oracle_forget = O.tensor_sum_matches(forgotten, O.collect(O.unspecified_coproduct_terms(O.Raw.of(g2), T, weighted=True)))
    ok_plain = coeffs.count(2) == 2 and oracle_plain == "" and oracle_forget == ""
    report(
        3,
        ok_spec and ok_plain,
        "nested fish: 4 coproduct terms, one pair differing only by subgraph index 0/1; "
        "two-triangle graph: coefficient-2 terms; all term multisets equal the brute-force oracle",
        f"nested fish terms={len(d)} indices={idx}; two triangles coefficients={[str(c) for c in coeffs]}",
    )


def _degree(factor):
    from feynhopf.hopf import factor_graph

    return loop_number(factor_graph(factor).graph)


# 4 ------------------------------------------------------------------------------


def test_criterion_4_group():
    t0 = time.perf_counter()
    checked, bad = 0, []
    seeds = [101, 202, 303, 404, 505]
    for name in ("phi3", "qed"):
        T = theory(name)
        gs = graphs(name)
        for mode in ("ms", "taylor"):
            chars = [random_character(T, s, mode) for s in seeds]
            e = identity_character(T, mode)
            for k, a in enumerate(chars):
                b, c = chars[(k + 1) % 5], chars[(k + 2) % 5]
                left, right = Convolution(Convolution(a, b), c), Convolution(a, Convolution(b, c))
                inv = inverse_character(a)
                ea, ae, ia, ai = Convolution(e, a), Convolution(a, e), Convolution(inv, a), Convolution(a, inv)
                for G in gs:
                    checked += 1
                    if not (left(G) == right(G) and ea(G) == a(G) == ae(G) and ia(G) == e(G) == ai(G)):
                        bad.append((name, mode, seeds[k], G))
    report(
        4,
        not bad,
        f"associativity, identity e, inverse sum (e - phi)^n for 5 seeded characters x 2 modes: {checked} graph checks",
        f"{time.perf_counter() - t0:.1f}s",
    )


# 5 ------------------------------------------------------------------------------


def test_criterion_5_multiplicativity():
    T = theory("phi3")
    pairs = seeded_pairs(graphs("phi3"), 20, seed=5)
    bad = []
    for mode in ("ms", "taylor"):
        phi, psi = random_character(T, 1, mode), random_character(T, 2, mode)
        conv = Convolution(phi, psi)
        for G1, G2 in pairs:
            G2s, GG = concatenate(G1, G2)
            if conv(GG) != conv(G1).bullet(conv(G2s)):
                bad.append(GG)
    report(5, not bad, "(phi * psi)(G G') = (phi * psi)(G) . (phi * psi)(G') on 20 seeded pairs, both modes", f"{len(bad)} failures")


# 6 ------------------------------------------------------------------------------


def _rand_poly(rng, xs, deg, nterms=5):
    p = Poly()
    for _ in range(rng.randint(0, nterms)):
        mono = {}
        for _ in range(rng.randint(0, deg)):
            v = rng.choice(xs)
            mono[v] = mono.get(v, 0) + 1
        p = p + Poly({tuple(mono.items()): Fraction(rng.randint(-9, 9), rng.randint(1, 5))})
    return p


def test_criterion_6_rota_baxter():
    rng = random.Random(6)
    xs = ["x", "y", "u"]
    bad_rb = 0
    for _ in range(50):
        a, b = (Laurent({n: _rand_poly(rng, xs, 2, 3) for n in range(-3, 3) if rng.random() < 0.7}) for _ in range(2))
        if P_ms(a) * P_ms(b) != P_ms(-(a * b) + P_ms(a) * b + a * P_ms(b)):
            bad_rb += 1
    bad_fam, n_fam = 0, 0
    for _ in range(50):
        f, g = _rand_poly(rng, xs + ["w"], 6), _rand_poly(rng, xs + ["w"], 6)
        for s in range(5):
            for t in range(5):
                n_fam += 1
                if P_taylor(s, f) * P_taylor(t, g) != P_taylor(s + t, P_taylor(s, f) * g + f * P_taylor(t, g) - f * g):
                    bad_fam += 1
    report(
        6,
        bad_rb == 0 and bad_fam == 0,
        f"Rota-Baxter for P_ms on 50 Laurent pairs; Taylor family for s,t in 0..4 on 50 polynomial pairs ({n_fam} identities)",
        f"failures {bad_rb} + {bad_fam}",
    )


# 7, 8 ---------------------------------------------------------------------------


def _birkhoff_checks(mode, phi_for):
    bad = []
    checked = 0
    for name in ("phi3", "qed", "phi4"):
        T = theory(name)
        gs = [G for G in graphs(name) if loop_number(G.graph) <= 3]
        pairs = seeded_pairs(gs, 10, seed=7)
        for phi in phi_for(T):
            B = Birkhoff(phi)
            B2 = Birkhoff(phi, order_seed=4242, extend="direct")
            recon = Convolution(inverse_character(B.minus), B.plus)
            for G in gs:
                checked += 1
                m, p = B(G)
                L = loop_number(G.graph)
                if recon(G) != phi(G):
                    bad.append(("a", name, G))
                if L:
                    if mode == "ms" and not (I_minus_P_ms(m).is_zero() and P_ms(p).is_zero()):
                        bad.append(("b", name, G))
                    if mode == "taylor" and any(sum(e for _, e in mono) <= L for mono in p.poly.terms):
                        bad.append(("b", name, G))
                if B2.minus(G) != m or B2.plus(G) != p:
                    bad.append(("d", name, G))
            for G1, G2 in pairs:
                _, GG = concatenate(G1, G2)
                if B2.minus(GG) != B.minus(GG) or B2.plus(GG) != B.plus(GG):
                    bad.append(("d", name, GG))
            for part in (B.minus, B.plus):
                rep = verify_character(part, gs, pairs)
                if not rep.ok:
                    bad.append(("c", name, rep.violations[0]))
    return checked, bad


def test_criterion_7_birkhoff_ms():
    t0 = time.perf_counter()
    checked, bad = _birkhoff_checks("ms", lambda T: [toy_ms(T), random_character(T, 77, "ms")])
    dt = time.perf_counter() - t0
    report(
        7,
        not bad and dt < 300,
        f"MS Birkhoff, toy + seeded random character, every corpus graph <= 3 loops ({checked} decompositions): "
        "(a) phi = phi_-^-1 * phi_+, (b) pole/regular split, (c) characters, (d) permuted order agrees",
        f"{dt:.1f}s, limit 300s" + (f"; first failure {bad[0][:2]}" if bad else ""),
    )


def test_criterion_8_birkhoff_taylor():
    t0 = time.perf_counter()
    # the toy Taylor character is degree <= 2, so on two-point graphs phi_+ vanishes;
    # the random character exercises the nontrivial case
    checked, bad = _birkhoff_checks("taylor", lambda T: [toy_taylor(T), random_character(T, 88, "taylor")])
    report(
        8,
        not bad,
        f"Taylor Birkhoff with P_L, toy + seeded random character ({checked} decompositions): "
        "(a)-(d) and every monomial of phi_+(G) has degree > L(G)",
        f"{time.perf_counter() - t0:.1f}s" + (f"; first failure {bad[0][:2]}" if bad else ""),
    )


# 9 ------------------------------------------------------------------------------


def test_criterion_9_dimensions():
    checked, bad = 0, []
    for name in ("phi3", "qed", "phi4"):
        for G in graphs(name):
            g = G.graph
            checked += 1
            formula = len(g.external_half_edges) - len(g.components) + loop_number(g)
            if not (momentum_space(g).dim == formula == O.momentum_dimension(O.Raw.of(g))):
                bad.append(G)
    report(9, not bad, f"dim W = |Ext| - |pi0| + L at D = 1 on {checked} corpus graphs, cross-checked by sympy rank", f"{len(bad)} failures")


# 10 -----------------------------------------------------------------------------


def test_criterion_10_taylor_equivalence():
    rng = random.Random(10)
    bad, checked = 0, 0
    for _ in range(100):
        xs = ["a", "b", "c", "d"][: rng.randint(1, 4)]
        p = _rand_poly(rng, xs, 8, nterms=6)
        m = rng.randint(0, 8)
        expr, syms = O.taylor_by_derivatives(p, m)
        checked += 1
        if not O.fraction_poly_equal(P_taylor(m, p), expr, syms):
            bad += 1
    report(10, bad == 0, f"P_taylor by truncation = sum of derivatives x^a / a! on {checked} seeded polynomials (degree <= 8, <= 4 variables)", f"{bad} failures")


if __name__ == "__main__":
    failed = 0
    tests = [(int(n.split("_")[2]), f) for n, f in globals().items() if n.startswith("test_criterion_")]
    for _, fn in sorted(tests):
        try:
            fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
