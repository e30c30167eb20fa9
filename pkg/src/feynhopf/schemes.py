"""Renormalization schemes: minimal subtraction and Taylor truncation.

Laurent elements are finite sums of ``z^n * c_n`` with coefficients in a
commutative ring (``PolyFn`` in practice, bare ``Poly`` also works).  Only
products and projections are ever needed, so finite support suffices.
"""
from __future__ import annotations

import re
from typing import Callable, Mapping

from .momenta import MomentumSpace, PolyFn
from .poly import Poly, PolyParseError

__all__ = [
    "Laurent",
    "P_ms",
    "I_minus_P_ms",
    "P_taylor",
    "I_minus_P_taylor",
    "laurent_mul",
    "laurent_bullet",
]


def _is_zero(c) -> bool:
    return c.is_zero()


class Laurent:
    __slots__ = ("space", "terms")

    def __init__(self, terms: Mapping[int, object] | None = None, space: MomentumSpace | None = None):
        self.terms = {}
        for n, c in sorted((terms or {}).items()):
            if not _is_zero(c):
                self.terms[int(n)] = c
            if space is None and isinstance(c, PolyFn):
                space = c.space
        self.space = space

    @classmethod
    def const(cls, c, power: int = 0) -> "Laurent":
        return cls({power: c}, getattr(c, "space", None))

    def _new(self, terms: dict, other: "Laurent | None" = None) -> "Laurent":
        sp = self.space if self.space is not None else (other.space if other is not None else None)
        return Laurent(terms, sp)

    def __add__(self, other: "Laurent") -> "Laurent":
        t = dict(self.terms)
        for n, c in other.terms.items():
            t[n] = t[n] + c if n in t else c
        return self._new(t, other)

    def __neg__(self) -> "Laurent":
        return self._new({n: -c for n, c in self.terms.items()})

    def __sub__(self, other: "Laurent") -> "Laurent":
        return self + (-other)

    def __mul__(self, other) -> "Laurent":
        if not isinstance(other, Laurent):
            return self._new({n: c * other for n, c in self.terms.items()})
        return laurent_mul(self, other)

    def bullet(self, other: "Laurent") -> "Laurent":
        return laurent_bullet(self, other)

    def pull_to(self, target: MomentumSpace) -> "Laurent":
        return Laurent({n: c.pull_to(target) for n, c in self.terms.items()}, target)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, Laurent) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(tuple(self.terms.items()))

    @property
    def powers(self) -> tuple[int, ...]:
        return tuple(self.terms)

    def coefficient(self, n: int):
        return self.terms.get(n)

    def map(self, f: Callable) -> "Laurent":
        return self._new({n: f(c) for n, c in self.terms.items()})

    def format(self, fmt: Callable | None = None) -> str:
        if not self.terms:
            return "0"
        fmt = fmt or (lambda c: c.format())
        return "; ".join(f"z^{n}: {fmt(c)}" for n, c in self.terms.items())

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"Laurent({self.format()})"

    @classmethod
    def parse(cls, text: str, space: MomentumSpace) -> "Laurent":
        """Parse ``z^-1: <poly>; z^0: <poly>``; a bare polynomial means z^0.

        Polynomials are written in raw half-edge momenta and reduced to the
        space's free coordinates.
        """
        terms: dict[int, PolyFn] = {}
        text = text.strip()
        if text == "0":
            return cls({}, space)
        for chunk in text.split(";"):
            chunk = chunk.strip()
            m = re.fullmatch(r"z\^(-?\d+)\s*:\s*(.+)", chunk)
            n, body = (int(m.group(1)), m.group(2)) if m else (0, chunk)
            p = space.reduce(Poly.parse(body, space.names))
            if n in terms:
                raise PolyParseError(f"power z^{n} given twice")
            terms[n] = PolyFn(space, p)
        return cls(terms, space)


def laurent_mul(a: Laurent, b: Laurent) -> Laurent:
    """Product inside one coefficient ring; z-degrees add."""
    t: dict = {}
    for n, c in a.terms.items():
        for m, d in b.terms.items():
            x = c * d
            t[n + m] = t[n + m] + x if n + m in t else x
    return a._new(t, b)


def laurent_bullet(a: Laurent, b: Laurent) -> Laurent:
    """Concatenation product: coefficients combine by bullet."""
    t: dict = {}
    for n, c in a.terms.items():
        for m, d in b.terms.items():
            x = c.bullet(d)
            t[n + m] = t[n + m] + x if n + m in t else x
    space = None
    if a.space is not None and b.space is not None:
        space = a.space.one().bullet(b.space.one()).space
    return Laurent(t, space)


def P_ms(a: Laurent) -> Laurent:
    """Projection onto strictly negative powers of z."""
    return a._new({n: c for n, c in a.terms.items() if n < 0})


def I_minus_P_ms(a: Laurent) -> Laurent:
    return a._new({n: c for n, c in a.terms.items() if n >= 0})


def P_taylor(m: int, f):
    """Order-m Taylor polynomial at the origin of the free coordinates.

    For polynomials this is truncation to total degree <= m.
    """
    if m < 0:
        raise ValueError("Taylor order must be nonnegative")
    if isinstance(f, PolyFn):
        return PolyFn(f.space, f.poly.truncate(m))
    if isinstance(f, Poly):
        return f.truncate(m)
    if isinstance(f, Laurent):
        return f.map(lambda c: P_taylor(m, c))
    raise TypeError(f"cannot Taylor-expand {type(f).__name__}")


def I_minus_P_taylor(m: int, f):
    return f - P_taylor(m, f)
