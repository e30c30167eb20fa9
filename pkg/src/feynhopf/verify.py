"""Executable checks of the algebraic identities, shared by the CLI and tests.

Every check returns a :class:`CheckResult` holding a witness for the first
failure it meets.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .graph import loop_number
from .hopf import (
    AlgebraElement,
    coproduct_hopf,
    coproduct_tilde,
    counit,
    counit_left,
    counit_right,
    delta_tensor_id,
    hopf_project,
    id_tensor_delta,
    mult_id_s,
    mult_s_id,
)
from .momenta import BElement, PolyFn, momentum_space
from .poly import Poly
from .renorm import Birkhoff, Convolution, IdentityMap, concatenate, inverse_character, verify_character
from .schemes import I_minus_P_ms, Laurent, P_ms, P_taylor
from .specified import SpecifiedGraph, specification_problems
from .textio import graph_code
from .theory import Theory
from .toys import random_character, toy_ms, toy_taylor

__all__ = [
    "CheckResult",
    "check_structure",
    "check_coassociativity",
    "check_counit",
    "check_antipode",
    "check_group_axioms",
    "check_convolution_multiplicative",
    "check_rota_baxter",
    "check_taylor_family",
    "check_concat",
    "check_birkhoff",
    "check_momentum_dimensions",
    "random_poly",
    "random_laurent",
    "sample_pairs",
    "run_suite",
]


@dataclass
class CheckResult:
    name: str
    passed: bool
    checked: int = 0
    witness: str = ""
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"  witness: {self.witness}" if self.witness else ""
        return f"{status} {self.name} ({self.checked} cases, {self.seconds:.2f}s){extra}"


def _timed(name: str, body: Callable[[], tuple[int, str]]) -> CheckResult:
    t = time.perf_counter()
    checked, witness = body()
    return CheckResult(name, not witness, checked, witness, time.perf_counter() - t)


def _code(G: SpecifiedGraph) -> str:
    return graph_code(G.graph, G.spec_map)


def check_structure(records) -> CheckResult:
    """Graph invariants (involution, types, incidence) on parsed records."""

    def body():
        for r in records:
            if r.problems:
                return len(records), f"graph {r.name!r}: {r.problems[0]}"
        return len(records), ""

    return _timed("graph structure", body)


def check_specification(graphs: Sequence[SpecifiedGraph], theory: Theory) -> CheckResult:
    def body():
        for G in graphs:
            p = specification_problems(G, theory)
            if p:
                return len(graphs), f"{_code(G)}: {p[0]}"
        return len(graphs), ""

    return _timed("specified graphs valid", body)


def check_coassociativity(graphs, theory: Theory, hopf: bool) -> CheckResult:
    def body():
        for G in graphs:
            d = coproduct_hopf(G, theory) if hopf else coproduct_tilde(G, theory)
            if delta_tensor_id(d, theory, hopf) != id_tensor_delta(d, theory, hopf):
                return len(graphs), _code(G)
        return len(graphs), ""

    return _timed(f"coassociativity ({'hopf' if hopf else 'tilde'})", body)


def check_counit(graphs, theory: Theory) -> CheckResult:
    def body():
        for G in graphs:
            x = AlgebraElement.of(G)
            d = coproduct_tilde(G, theory)
            if counit_left(d) != x or counit_right(d) != x:
                return len(graphs), f"tilde: {_code(G)}"
            dh = coproduct_hopf(G, theory)
            if counit_left(dh) != hopf_project(x) or counit_right(dh) != hopf_project(x):
                return len(graphs), f"hopf: {_code(G)}"
        return len(graphs), ""

    return _timed("counit axioms", body)


def check_antipode(graphs, theory: Theory) -> CheckResult:
    def body():
        for G in graphs:
            d = coproduct_hopf(G, theory)
            want = AlgebraElement.one().scale(counit(hopf_project(G)))
            if mult_s_id(d, theory) != want or mult_id_s(d, theory) != want:
                return len(graphs), _code(G)
        return len(graphs), ""

    return _timed("antipode axioms", body)


def check_group_axioms(graphs, theory: Theory, seeds: Iterable[int], D: int = 1) -> CheckResult:
    """Identity, associativity and series inverse for seeded random characters."""

    def body():
        seeds_ = list(seeds)
        chars = [random_character(theory, s, "taylor", D) for s in seeds_]
        e = IdentityMap(theory, "taylor", D)
        n = 0
        for k, phi in enumerate(chars):
            left, right = Convolution(e, phi), Convolution(phi, e)
            inv = inverse_character(phi)
            li, ri = Convolution(inv, phi), Convolution(phi, inv)
            a, b = phi, chars[(k + 1) % len(chars)]
            c = chars[(k + 2) % len(chars)]
            lhs, rhs = Convolution(Convolution(a, b), c), Convolution(a, Convolution(b, c))
            for G in graphs:
                n += 1
                if left(G) != phi(G) or right(G) != phi(G):
                    return n, f"identity, seed {seeds_[k]}, {_code(G)}"
                if li(G) != e(G) or ri(G) != e(G):
                    return n, f"inverse, seed {seeds_[k]}, {_code(G)}"
                if lhs(G) != rhs(G):
                    return n, f"associativity, seeds {seeds_[k]}, {_code(G)}"
        return n, ""

    return _timed("convolution group axioms", body)


def sample_pairs(graphs: Sequence[SpecifiedGraph], n: int, seed: int, max_degree: int | None = None):
    rng = random.Random(seed)
    pool = [G for G in graphs if max_degree is None or loop_number(G.graph) <= max_degree]
    return [(rng.choice(pool), rng.choice(pool)) for _ in range(n)]


def check_convolution_multiplicative(pairs, theory: Theory, seed: int, D: int = 1) -> CheckResult:
    def body():
        phi = random_character(theory, seed, "taylor", D)
        psi = random_character(theory, seed + 1, "taylor", D)
        conv = Convolution(phi, psi)
        for G1, G2 in pairs:
            G2s, GG = concatenate(G1, G2)
            if conv(GG) != conv(G1).bullet(conv(G2s)):
                return len(pairs), _code(GG)
        return len(pairs), ""

    return _timed("convolution multiplicative", body)


def random_poly(rng: random.Random, variables, max_degree: int, max_terms: int = 5) -> Poly:
    p = Poly()
    if not variables:
        max_degree = 0
    for _ in range(rng.randint(0, max_terms)):
        mono = {}
        for _ in range(rng.randint(0, max_degree)):
            v = rng.choice(variables)
            mono[v] = mono.get(v, 0) + 1
        p = p + Poly({tuple(mono.items()): Fraction(rng.randint(-9, 9), rng.randint(1, 4))})
    return p


def random_laurent(rng: random.Random, variables, lo: int = -3, hi: int = 2) -> Laurent:
    return Laurent({n: random_poly(rng, variables, 2, 3) for n in range(lo, hi + 1) if rng.random() < 0.7})


def check_rota_baxter(n: int, seed: int) -> CheckResult:
    """P(a)P(b) = P(-ab + P(a)b + aP(b)) for minimal subtraction."""

    def body():
        rng = random.Random(seed)
        xs = ["x", "y", "u"]
        for k in range(n):
            a, b = random_laurent(rng, xs), random_laurent(rng, xs)
            lhs = P_ms(a) * P_ms(b)
            rhs = P_ms(-(a * b) + P_ms(a) * b + a * P_ms(b))
            if lhs != rhs:
                return k + 1, f"pair {k}: a = {a}, b = {b}"
        return n, ""

    return _timed("Rota-Baxter (minimal subtraction)", body)


def check_taylor_family(n: int, seed: int, max_st: int = 4) -> CheckResult:
    """(P_s f)(P_t g) = P_{s+t}[(P_s f) g + f (P_t g) - f g]."""

    def body():
        rng = random.Random(seed)
        xs = ["x", "y", "u", "w"]
        count = 0
        for k in range(n):
            f, g = random_poly(rng, xs, 5), random_poly(rng, xs, 5)
            for s in range(max_st + 1):
                for t in range(max_st + 1):
                    count += 1
                    lhs = P_taylor(s, f) * P_taylor(t, g)
                    rhs = P_taylor(s + t, P_taylor(s, f) * g + f * P_taylor(t, g) - f * g)
                    if lhs != rhs:
                        return count, f"pair {k}, s={s}, t={t}: f = {f}, g = {g}"
        return count, ""

    return _timed("Taylor Rota-Baxter family", body)


def check_concat(pairs, seed: int, D: int = 1) -> CheckResult:
    """(v1 v1') . (v2 v2') = (v1 . v2)(v1' . v2') for functions on two graphs."""

    def body():
        rng = random.Random(seed)
        for G1, G2 in pairs:
            G2s, GG = concatenate(G1, G2)
            s1, s2 = momentum_space(G1.graph, D), momentum_space(G2s.graph, D)
            fs = []
            for sp in (s1, s1, s2, s2):
                fs.append(PolyFn(sp, random_poly(rng, list(sp.free), 2, 3)))
            v1, w1, v2, w2 = fs
            lhs = (BElement.of(v1 * w1).bullet(BElement.of(v2 * w2))).collapse()
            rhs = (v1.bullet(v2)) * (w1.bullet(w2))
            if lhs != rhs or lhs.space != momentum_space(GG.graph, D):
                return len(pairs), _code(GG)
        return len(pairs), ""

    return _timed("concatenation product", body)


def check_birkhoff(graphs, theory: Theory, mode: str, D: int = 1, phi=None, pairs=()) -> CheckResult:
    """phi = phi_-^{*-1} * phi_+, value split, characters, permuted-order uniqueness."""

    def body():
        ph = phi or (toy_ms(theory, D) if mode == "ms" else toy_taylor(theory, D))
        B = Birkhoff(ph)
        B2 = Birkhoff(ph, order_seed=12345, extend="direct")
        recon = Convolution(inverse_character(B.minus), B.plus)
        n = 0
        for G in graphs:
            n += 1
            m, p = B(G)
            L = loop_number(G.graph)
            if recon(G) != ph(G):
                return n, f"phi != phi_-^(-1) * phi_+ on {_code(G)}"
            if L >= 1:
                if mode == "ms":
                    if not I_minus_P_ms(m).is_zero() or not P_ms(p).is_zero():
                        return n, f"pole split violated on {_code(G)}"
                elif any(sum(e for _, e in mono) <= L for mono in p.poly.terms):
                    return n, f"phi_+ has a monomial of degree <= {L} on {_code(G)}"
            if B2.minus(G) != m or B2.plus(G) != p:
                return n, f"permuted order differs on {_code(G)}"
        for part in (B.minus, B.plus, B2.minus, B2.plus):
            rep = verify_character(part, list(graphs), pairs)
            n += rep.checked
            if not rep.ok:
                return n, rep.violations[0]
        return n, ""

    return _timed(f"Birkhoff decomposition ({mode})", body)


def check_momentum_dimensions(graphs) -> CheckResult:
    """dim W = |Ext| - |components| + L at D = 1."""

    def body():
        for G in graphs:
            g = G.graph
            want = len(g.external_half_edges) - len(g.components) + loop_number(g)
            if momentum_space(g, 1).dim != want:
                return len(graphs), _code(G)
        return len(graphs), ""

    return _timed("momentum space dimensions", body)


def run_suite(
    graphs: Sequence[SpecifiedGraph],
    theory: Theory,
    seed: int = 0,
    D: int = 1,
    records=(),
) -> list[CheckResult]:
    """The full invariant suite.  Structural failures stop the run early."""
    out = [check_structure(records)]
    if not out[0].passed:
        return out
    out.append(check_specification(graphs, theory))
    if not out[-1].passed:
        return out
    pairs = sample_pairs(graphs, 20, seed, max_degree=2) if graphs else []
    out += [
        check_coassociativity(graphs, theory, hopf=False),
        check_coassociativity(graphs, theory, hopf=True),
        check_counit(graphs, theory),
        check_antipode(graphs, theory),
        check_group_axioms(graphs, theory, [seed + k for k in range(5)], D),
        check_convolution_multiplicative(pairs, theory, seed, D),
        check_concat(pairs, seed, D),
        check_rota_baxter(50, seed),
        check_taylor_family(50, seed),
        check_birkhoff(graphs, theory, "ms", D, pairs=pairs),
        check_birkhoff(graphs, theory, "taylor", D, pairs=pairs),
        check_momentum_dimensions(graphs),
    ]
    return out
