"""Sparse multivariate polynomials over the rationals.

A monomial is a sorted tuple of ``(variable, exponent)`` pairs; variables are
any hashable, orderable keys.  A polynomial maps monomials to nonzero
``Fraction`` coefficients.
"""
from __future__ import annotations

import re
from fractions import Fraction
from math import factorial
from typing import Callable, Mapping

__all__ = ["Poly", "PolyParseError"]

Mono = tuple


class PolyParseError(ValueError):
    pass


def _mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def _mono_degree(m: Mono) -> int:
    return sum(e for _, e in m)


class Poly:
    __slots__ = ("_t", "_hash")

    def __init__(self, terms: Mapping[Mono, object] | None = None):
        t = {}
        if terms:
            for m, c in terms.items():
                c = Fraction(c)
                if c:
                    m = tuple(sorted(m))
                    t[m] = t.get(m, 0) + c
                    if not t[m]:
                        del t[m]
        self._t = t
        self._hash = None

    @classmethod
    def _raw(cls, t: dict) -> "Poly":
        p = cls.__new__(cls)
        p._t = t
        p._hash = None
        return p

    @classmethod
    def const(cls, c) -> "Poly":
        c = Fraction(c)
        return cls._raw({(): c} if c else {})

    @classmethod
    def var(cls, v) -> "Poly":
        return cls._raw({((v, 1),): Fraction(1)})

    @property
    def terms(self) -> dict:
        return dict(self._t)

    def items(self):
        return sorted(self._t.items(), key=lambda mc: (_mono_degree(mc[0]), mc[0]))

    def __bool__(self) -> bool:
        return bool(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        return isinstance(other, Poly) and self._t == other._t

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    def __add__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.const(other)
        t = dict(self._t)
        for m, c in other._t.items():
            s = t.get(m, 0) + c
            if s:
                t[m] = s
            else:
                t.pop(m, None)
        return Poly._raw(t)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw({m: -c for m, c in self._t.items()})

    def __sub__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            c = Fraction(other)
            return Poly._raw({m: v * c for m, v in self._t.items()} if c else {})
        t: dict = {}
        for m1, c1 in self._t.items():
            for m2, c2 in other._t.items():
                m = _mono_mul(m1, m2)
                s = t.get(m, 0) + c1 * c2
                if s:
                    t[m] = s
                else:
                    t.pop(m, None)
        return Poly._raw(t)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power")
        out, base = Poly.const(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    @property
    def variables(self) -> frozenset:
        return frozenset(v for m in self._t for v, _ in m)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((_mono_degree(m) for m in self._t), default=-1)

    def constant_term(self) -> Fraction:
        return self._t.get((), Fraction(0))

    def truncate(self, m: int) -> "Poly":
        """Keep monomials of total degree <= m."""
        return Poly._raw({k: c for k, c in self._t.items() if _mono_degree(k) <= m})

    def above(self, m: int) -> "Poly":
        """Keep monomials of total degree > m."""
        return Poly._raw({k: c for k, c in self._t.items() if _mono_degree(k) > m})

    def diff(self, v, n: int = 1) -> "Poly":
        t: dict = {}
        for mono, c in self._t.items():
            d = dict(mono)
            e = d.get(v, 0)
            if e < n:
                continue
            coeff = c * (factorial(e) // factorial(e - n))
            if e == n:
                del d[v]
            else:
                d[v] = e - n
            t[tuple(sorted(d.items()))] = coeff
        return Poly._raw(t)

    def substitute(self, subs: Mapping) -> "Poly":
        """Replace variables by polynomials; unmapped variables stay."""
        out = Poly()
        powers: dict = {}
        for mono, c in self._t.items():
            term = Poly.const(c)
            for v, e in mono:
                if v in subs:
                    key = (v, e)
                    if key not in powers:
                        powers[key] = subs[v] ** e
                    term = term * powers[key]
                else:
                    term = term * Poly._raw({((v, e),): Fraction(1)})
            out = out + term
        return out

    def rename(self, f: Callable) -> "Poly":
        return Poly({tuple((f(v), e) for v, e in m): c for m, c in self._t.items()})

    def evaluate(self, point: Mapping) -> Fraction:
        total = Fraction(0)
        for mono, c in self._t.items():
            x = c
            for v, e in mono:
                x *= Fraction(point[v]) ** e
            total += x
        return total

    def format(self, name: Callable = str) -> str:
        if not self._t:
            return "0"
        parts = []
        for mono, c in self.items():
            factors = [name(v) + (f"^{e}" if e > 1 else "") for v, e in mono]
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not factors:
                body = str(a)
            elif a == 1:
                body = "*".join(factors)
            else:
                body = f"{a}*" + "*".join(factors)
            parts.append((sign, body))
        head = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        return head + "".join(f" {s} {b}" for s, b in parts[1:])

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"Poly({self.format()})"

    @classmethod
    def parse(cls, text: str, names: Mapping[str, object] | None = None) -> "Poly":
        """Inverse of :meth:`format`; ``names`` maps identifiers to variables."""
        return _parse(text, names)


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\^)|([+\-*()]))")


def _tokens(text: str):
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolyParseError(f"unexpected character {text[pos]!r} at column {pos + 1}")
        num, ident, caret, op = m.groups()
        out.append(("num", num) if num else ("id", ident) if ident else ("op", caret or op))
        pos = m.end()
    return out


def _parse(text: str, names) -> Poly:
    toks = _tokens(text)
    i = 0

    def peek():
        return toks[i] if i < len(toks) else (None, None)

    def take():
        nonlocal i
        tok = peek()
        i += 1
        return tok

    def atom() -> Poly:
        kind, val = take()
        if kind == "num":
            base = Poly.const(Fraction(val))
        elif kind == "id":
            if names is None:
                base = Poly.var(val)
            elif val in names:
                base = Poly.var(names[val])
            else:
                raise PolyParseError(f"unknown variable {val!r}")
        elif (kind, val) == ("op", "("):
            base = expr()
            if take() != ("op", ")"):
                raise PolyParseError("missing ')'")
        elif (kind, val) == ("op", "-"):
            return -atom()
        else:
            raise PolyParseError("unexpected end of input" if kind is None else f"unexpected token {val!r}")
        if peek() == ("op", "^"):
            take()
            k, n = take()
            if k != "num" or "/" in n:
                raise PolyParseError("exponent must be a nonnegative integer")
            base = base ** int(n)
        return base

    def term() -> Poly:
        out = atom()
        while peek() == ("op", "*"):
            take()
            out = out * atom()
        return out

    def expr() -> Poly:
        out = term()
        while peek() in (("op", "+"), ("op", "-")):
            _, op = take()
            t = term()
            out = out + t if op == "+" else out - t
        return out

    if not toks:
        raise PolyParseError("empty polynomial")
    result = expr()
    if i != len(toks):
        raise PolyParseError(f"trailing input at token {toks[i][1]!r}")
    return result
