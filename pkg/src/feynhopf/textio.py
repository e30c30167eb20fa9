"""Text formats: theories, graph blocks, compact graph codes, sums, characters.

Graph block::

    graph fish
    vertex 0
    vertex 1 index=1
    halfedge 0 type=phi at=0
    halfedge 4 type=electron orient=in at=1
    pair 1 3
    spec 0 = 0
    end

Unpaired half-edges are external legs.  ``sigma <a> <b>`` sets one value
of the involution directly (for inspecting broken input).  ``#`` starts a comment.  A block
ends at ``end``, at the next ``graph`` line or at end of input.

Compact code (used in sums and as a machine-readable graph form)::

    {v=0:0,1:0;h=0:phi@0,1:phi@0,2:phi@1;e=1-2}#0
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .graph import GraphError, HalfEdgeGraph, HalfEdgeType
from .theory import Theory, TheoryError, signature_of

__all__ = [
    "TextFormatError",
    "GraphRecord",
    "CharacterFile",
    "parse_theory",
    "format_theory",
    "parse_graphs",
    "load_graphs",
    "format_graph",
    "graph_code",
    "parse_graph_code",
    "format_monomial",
    "parse_monomial",
    "format_algebra_element",
    "format_tensor_sum",
    "parse_tensor_sum",
    "parse_algebra_element",
    "parse_characters",
]


class TextFormatError(ValueError):
    def __init__(self, msg: str, line: int | None = None, source: str | None = None):
        where = f"{source}:" if source else ""
        if line is not None:
            super().__init__(f"{where}line {line}: {msg}")
        else:
            super().__init__(f"{where} {msg}" if where else msg)
        self.line = line


def _lines(text: str):
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield n, line


def _kv(tokens, n, allowed, source=None):
    out = {}
    for t in tokens:
        k, eq, v = t.partition("=")
        if not eq or k not in allowed:
            raise TextFormatError(f"unexpected field {t!r}", n, source)
        out[k] = v
    return out


# -- theories ---------------------------------------------------------------


def parse_theory(text: str, source: str | None = None) -> Theory:
    name = None
    hts: list[tuple[str, bool]] = []
    pairings = set()
    vts: list[tuple[str, tuple]] = []
    refined = set()
    for n, line in _lines(text):
        words = line.split()
        head = words[0]
        try:
            if head == "theory" and len(words) == 2:
                name = words[1]
            elif head == "halfedge_type" and len(words) in (2, 3):
                if len(words) == 3 and words[2] != "oriented":
                    raise TextFormatError(f"expected 'oriented', got {words[2]!r}", n, source)
                hts.append((words[1], len(words) == 3))
            elif head == "pairing" and len(words) == 4:
                pairings.add((words[1], words[2], words[3]))
            elif head == "vertex_type":
                m = re.fullmatch(r"vertex_type\s+(\S+)\s*=\s*(.*)", line)
                if not m:
                    raise TextFormatError("expected 'vertex_type <name> = <type>:<count>, ...'", n, source)
                types = []
                for part in filter(None, (p.strip() for p in m.group(2).split(","))):
                    t, _, c = part.partition(":")
                    if not c.isdigit():
                        raise TextFormatError(f"bad multiplicity in {part!r}", n, source)
                    types += [t.strip()] * int(c)
                vts.append((m.group(1), signature_of(types)))
            elif head == "refined" and len(words) == 3 and words[2].startswith("index="):
                refined.add((words[1], int(words[2][6:])))
            else:
                raise TextFormatError(f"unrecognised line {line!r}", n, source)
        except TextFormatError:
            raise
        except ValueError as e:
            raise TextFormatError(str(e), n, source) from None
    try:
        return Theory(name or "unnamed", tuple(hts), frozenset(pairings), tuple(vts), frozenset(refined))
    except (TheoryError, GraphError) as e:
        raise TextFormatError(str(e), source=source) from None


def format_theory(t: Theory) -> str:
    out = [f"theory {t.name}"]
    for f, oriented in t.half_edge_types:
        out.append(f"halfedge_type {f}" + (" oriented" if oriented else ""))
    for p in sorted(t.pairings):
        out.append("pairing " + " ".join(p))
    for name, sig in t.vertex_types:
        out.append(f"vertex_type {name} = " + ", ".join(f"{a}:{c}" for a, c in sig))
    for vt, i in sorted(t.refined):
        out.append(f"refined {vt} index={i}")
    return "\n".join(out) + "\n"


# -- graph blocks -------------------------------------------------------------


@dataclass
class GraphRecord:
    name: str
    graph: HalfEdgeGraph
    spec: dict = field(default_factory=dict)
    line: int = 0
    problems: list = field(default_factory=list)


def parse_graphs(text: str, validate: bool = True, source: str | None = None) -> dict[str, GraphRecord]:
    """Parse graph blocks; with ``validate=False`` structural problems are
    collected on the record instead of raised."""
    out: dict[str, GraphRecord] = {}
    cur = None

    def finish():
        nonlocal cur
        if cur is None:
            return
        name, start, vs, hs, inc, pairs, spec, raw_sigma = cur
        sigma = {}
        for n, a, b in pairs:
            for x in (a, b):
                if x not in hs:
                    raise TextFormatError(f"pair uses unknown half-edge {x}", n, source)
                if x in sigma:
                    raise TextFormatError(f"half-edge {x} paired twice", n, source)
            sigma[a], sigma[b] = b, a
        for n, a, b in raw_sigma:
            if a not in hs:
                raise TextFormatError(f"sigma uses unknown half-edge {a}", n, source)
            sigma[a] = b
        g = HalfEdgeGraph(vs, hs, sigma, inc, validate=False)
        problems = g.structural_problems()
        if problems and validate:
            raise TextFormatError(f"graph {name!r}: " + "; ".join(problems), start, source)
        if name in out:
            raise TextFormatError(f"duplicate graph name {name!r}", start, source)
        out[name] = GraphRecord(name, g, spec, start, problems)
        cur = None

    for n, line in _lines(text):
        w = line.split()
        try:
            if w[0] == "graph":
                finish()
                if len(w) != 2:
                    raise TextFormatError("expected 'graph <name>'", n, source)
                cur = (w[1], n, {}, {}, {}, [], {}, [])
                continue
            if w[0] == "end":
                if cur is None:
                    raise TextFormatError("'end' outside a graph block", n, source)
                finish()
                continue
            if cur is None:
                raise TextFormatError(f"{w[0]!r} outside a graph block", n, source)
            _, _, vs, hs, inc, pairs, spec, raw_sigma = cur
            if w[0] == "vertex":
                v = int(w[1])
                if v in vs:
                    raise TextFormatError(f"vertex {v} declared twice", n, source)
                vs[v] = int(_kv(w[2:], n, {"index"}, source).get("index", 0))
            elif w[0] == "halfedge":
                h = int(w[1])
                if h in hs:
                    raise TextFormatError(f"half-edge {h} declared twice", n, source)
                kv = _kv(w[2:], n, {"type", "orient", "at"}, source)
                if "type" not in kv or "at" not in kv:
                    raise TextFormatError("halfedge needs type= and at=", n, source)
                if kv.get("orient") not in (None, "in", "out"):
                    raise TextFormatError(f"orient must be in or out, got {kv['orient']!r}", n, source)
                hs[h] = HalfEdgeType(kv["type"], kv.get("orient"))
                at = int(kv["at"])
                if at not in vs:
                    raise TextFormatError(f"half-edge {h} attached to undeclared vertex {at}", n, source)
                inc[h] = at
            elif w[0] == "pair" and len(w) == 3:
                pairs.append((n, int(w[1]), int(w[2])))
            elif w[0] == "sigma" and len(w) == 3:
                raw_sigma.append((n, int(w[1]), int(w[2])))
            elif w[0] == "spec":
                m = re.fullmatch(r"spec\s+(\d+)\s*=\s*(\d+)", line)
                if not m:
                    raise TextFormatError("expected 'spec <vertex> = <n>'", n, source)
                spec[int(m.group(1))] = int(m.group(2))
            else:
                raise TextFormatError(f"unrecognised line {line!r}", n, source)
        except TextFormatError:
            raise
        except (ValueError, IndexError) as e:
            raise TextFormatError(f"malformed line {line!r} ({e})", n, source) from None
    finish()
    return out


def load_graphs(path: str, validate: bool = True) -> dict[str, GraphRecord]:
    with open(path) as fh:
        return parse_graphs(fh.read(), validate=validate, source=path)


def format_graph(g: HalfEdgeGraph, name: str, spec: dict | None = None) -> str:
    out = [f"graph {name}"]
    for v in g.vertices:
        i = g.vertex_index(v)
        out.append(f"vertex {v}" + (f" index={i}" if i else ""))
    for h in g.half_edges:
        t = g.htype(h)
        o = f" orient={t.orient}" if t.orient else ""
        out.append(f"halfedge {h} type={t.field}{o} at={g.incidence(h)}")
    for a, b in g.internal_edges:
        out.append(f"pair {a} {b}")
    for v, i in sorted((spec or {}).items()):
        out.append(f"spec {v} = {i}")
    out.append("end")
    return "\n".join(out) + "\n"


# -- compact codes -------------------------------------------------------------


def graph_code(g: HalfEdgeGraph, spec: dict | None = None) -> str:
    v = ",".join(f"{x}:{g.vertex_index(x)}" for x in g.vertices)
    h = ",".join(f"{x}:{g.htype(x)}@{g.incidence(x)}" for x in g.half_edges)
    e = ",".join(f"{a}-{b}" for a, b in g.internal_edges)
    code = f"{{v={v};h={h};e={e}}}"
    if spec:
        code += "#" + ",".join(f"{r}={i}" if len(spec) > 1 else str(i) for r, i in sorted(spec.items()))
    return code


_CODE = re.compile(r"\{v=([^;]*);h=([^;]*);e=([^}]*)\}(?:#([0-9=,]+))?")


def parse_graph_code(code: str) -> tuple[HalfEdgeGraph, dict]:
    m = _CODE.fullmatch(code.strip())
    if not m:
        raise TextFormatError(f"malformed graph code {code!r}")
    vs, hs, es, sp = m.groups()
    try:
        vindex = {int(a): int(b) for a, b in (x.split(":") for x in vs.split(",") if x)}
        htype, inc = {}, {}
        for x in filter(None, hs.split(",")):
            hid, rest = x.split(":", 1)
            t, at = rest.split("@")
            htype[int(hid)] = HalfEdgeType.parse(t)
            inc[int(hid)] = int(at)
        sigma = {}
        for x in filter(None, es.split(",")):
            a, b = map(int, x.split("-"))
            sigma[a], sigma[b] = b, a
        g = HalfEdgeGraph(vindex, htype, sigma, inc)
    except (ValueError, KeyError) as e:
        raise TextFormatError(f"malformed graph code {code!r}: {e}") from None
    spec = {}
    if sp:
        if "=" in sp:
            spec = {int(a): int(b) for a, b in (x.split("=") for x in sp.split(","))}
        else:
            spec = {g.vertices[0]: int(sp)}
    return g, spec


def format_monomial(m) -> str:
    if m.is_unit:
        return "[1]"
    return "[" + " ".join(graph_code(G.graph, G.spec_map) for G in m.graphs()) + "]"


def parse_monomial(text: str):
    from .canonical import canonical_form
    from .hopf import Monomial
    from .specified import SpecifiedGraph

    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise TextFormatError(f"monomial must be bracketed: {text!r}")
    body = text[1:-1].strip()
    if body == "1":
        return Monomial.unit()
    factors = []
    for code in body.split():
        g, spec = parse_graph_code(code)
        G = SpecifiedGraph(g, spec)
        for c in G.components:
            factors.append((canonical_form(c.graph), c.spec[0][1]))
    return Monomial.of(factors)


def format_algebra_element(x) -> str:
    if not x:
        return "0"
    return "\n".join(f"{c} * {format_monomial(m)}" for m, c in x.items())


def format_tensor_sum(ts) -> str:
    if not ts:
        return "0"
    return "\n".join(f"{c} * {format_monomial(a)} (x) {format_monomial(b)}" for (a, b), c in ts.items())


_TS_LINE = re.compile(r"(-?\d+(?:/\d+)?) \* (\[[^\]]*\]) \(x\) (\[[^\]]*\])")
_AE_LINE = re.compile(r"(-?\d+(?:/\d+)?) \* (\[[^\]]*\])")


def _sum_lines(text: str):
    # graph codes contain '#', so only whole-line comments are skipped
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("#") and line != "0":
            yield n, line


def parse_tensor_sum(text: str, source: str | None = None):
    """Inverse of :func:`format_tensor_sum`."""
    from .hopf import TensorSum

    out = TensorSum()
    for n, line in _sum_lines(text):
        m = _TS_LINE.fullmatch(line)
        if not m:
            raise TextFormatError("expected 'coeff * [monomial] (x) [monomial]'", n, source)
        out.add((parse_monomial(m.group(2)), parse_monomial(m.group(3))), Fraction(m.group(1)))
    return out


def parse_algebra_element(text: str, source: str | None = None):
    """Inverse of :func:`format_algebra_element`."""
    from .hopf import AlgebraElement

    out = AlgebraElement()
    for n, line in _sum_lines(text):
        m = _AE_LINE.fullmatch(line)
        if not m:
            raise TextFormatError("expected 'coeff * [monomial]'", n, source)
        out.add(parse_monomial(m.group(2)), Fraction(m.group(1)))
    return out


# -- character files -------------------------------------------------------------


@dataclass
class CharacterFile:
    name: str
    mode: str
    values: dict  # graph name -> (expression text, line)


def parse_characters(text: str, source: str | None = None) -> CharacterFile:
    name = mode = None
    values = {}
    for n, line in _lines(text):
        if line.startswith("char "):
            w = line.split()
            if len(w) != 3 or not w[2].startswith("mode=") or w[2][5:] not in ("ms", "taylor"):
                raise TextFormatError("expected 'char <name> mode=ms|taylor'", n, source)
            name, mode = w[1], w[2][5:]
        elif line.startswith("value "):
            m = re.fullmatch(r"value\s+(\S+)\s*=\s*(.+)", line)
            if not m:
                raise TextFormatError("expected 'value <graph-name> = <expression>'", n, source)
            if m.group(1) in values:
                raise TextFormatError(f"value for {m.group(1)!r} given twice", n, source)
            values[m.group(1)] = (m.group(2), n, source)
        else:
            raise TextFormatError(f"unrecognised line {line!r}", n, source)
    if mode is None:
        raise TextFormatError("missing 'char <name> mode=...' header", source=source)
    return CharacterFile(name, mode, values)
