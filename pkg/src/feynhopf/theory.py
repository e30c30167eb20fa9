"""Field theories as data: half-edge types, vertex types, refined vertex types."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from importlib import resources

from .graph import GraphError, HalfEdgeGraph, HalfEdgeType, residue

__all__ = [
    "Signature",
    "Theory",
    "TheoryError",
    "signature_of",
    "vertex_signature",
    "is_in_theory",
    "is_superficially_divergent",
    "refinement_indices",
    "load_theory",
    "BUNDLED_THEORIES",
]

BUNDLED_THEORIES = ("phi3", "phi4", "qed")

# sorted ((half-edge type string, multiplicity), ...)
Signature = tuple


class TheoryError(ValueError):
    pass


def signature_of(types) -> Signature:
    return tuple(sorted(Counter(str(t) for t in types).items()))


def vertex_signature(g: HalfEdgeGraph, v: int) -> Signature:
    """Multiset of half-edge types arriving at ``v``."""
    return signature_of(g.htype(h) for h in g.star[v])


@dataclass(frozen=True)
class Theory:
    name: str
    half_edge_types: tuple[tuple[str, bool], ...]
    pairings: frozenset = frozenset()
    vertex_types: tuple[tuple[str, Signature], ...] = ()
    refined: frozenset = frozenset()
    _by_sig: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        by_sig = {}
        for name, sig in self.vertex_types:
            if sig in by_sig:
                raise TheoryError(f"vertex types {by_sig[sig]!r} and {name!r} share a signature")
            by_sig[sig] = name
        names = {n for n, _ in self.vertex_types}
        for vt, _ in self.refined:
            if vt not in names:
                raise TheoryError(f"refined type for unknown vertex type {vt!r}")
        fields = dict(self.half_edge_types)
        for _, sig in self.vertex_types:
            for t, _ in sig:
                ht = HalfEdgeType.parse(t)
                if ht.field not in fields:
                    raise TheoryError(f"unknown half-edge type {ht.field!r} in vertex signature")
                if fields[ht.field] != (ht.orient is not None):
                    raise TheoryError(f"orientation of {t!r} does not match its field declaration")
        object.__setattr__(self, "_by_sig", by_sig)

    @property
    def allowed_half_edge_types(self) -> tuple[HalfEdgeType, ...]:
        out = []
        for f, oriented in self.half_edge_types:
            if oriented:
                out += [HalfEdgeType(f, "in"), HalfEdgeType(f, "out")]
            else:
                out.append(HalfEdgeType(f))
        return tuple(out)

    def can_pair(self, a: HalfEdgeType, b: HalfEdgeType) -> bool:
        if a.field != b.field or a.field not in dict(self.half_edge_types):
            return False
        if a.orient is None and b.orient is None:
            return True
        return (a.field, a.orient, b.orient) in self.pairings or (
            a.field,
            b.orient,
            a.orient,
        ) in self.pairings

    def vertex_type_name(self, sig: Signature) -> str | None:
        return self._by_sig.get(sig)

    def signature(self, name: str) -> Signature:
        return dict(self.vertex_types)[name]

    @property
    def refined_types(self) -> tuple[tuple[Signature, int], ...]:
        sigs = dict(self.vertex_types)
        return tuple(sorted((sigs[n], i) for n, i in self.refined))

    @property
    def max_valence(self) -> int:
        return max((sum(c for _, c in sig) for _, sig in self.vertex_types), default=0)


def refinement_indices(theory: Theory, sig: Signature) -> frozenset[int]:
    """Admissible refined indices of a vertex signature (empty if none)."""
    name = theory.vertex_type_name(sig)
    if name is None:
        return frozenset()
    return frozenset(i for n, i in theory.refined if n == name)


def is_in_theory(g: HalfEdgeGraph, theory: Theory, refined: bool = False) -> bool:
    """Every half-edge type and vertex signature is declared by the theory.

    With ``refined=True`` every vertex's (signature, index) pair must also be
    a declared refined type.
    """
    allowed = set(theory.allowed_half_edge_types)
    if any(g.htype(h) not in allowed for h in g.half_edges):
        return False
    for a, b in g.internal_edges:
        if not theory.can_pair(g.htype(a), g.htype(b)):
            return False
    for v in g.vertices:
        sig = vertex_signature(g, v)
        if theory.vertex_type_name(sig) is None:
            return False
        if refined and g.vertex_index(v) not in refinement_indices(theory, sig):
            return False
    return True


def is_superficially_divergent(g: HalfEdgeGraph, theory: Theory) -> bool:
    """The residue of a connected graph is a vertex type of the theory."""
    if not g.is_connected():
        raise GraphError("superficial divergence is defined per connected component")
    res = residue(g)
    return theory.vertex_type_name(vertex_signature(res, res.vertices[0])) is not None


def load_theory(name_or_path: str) -> Theory:
    """Load a bundled theory by name (``phi3``, ``phi4``, ``qed``) or a theory file."""
    from .textio import parse_theory

    if name_or_path in BUNDLED_THEORIES:
        text = resources.files("feynhopf.data").joinpath(f"{name_or_path}.theory").read_text()
        return parse_theory(text)
    with open(name_or_path) as fh:
        return parse_theory(fh.read())
