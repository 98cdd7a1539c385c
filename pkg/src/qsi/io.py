"""Text and JSON formats: path expressions, polynomials, quivers, maps, points.

Path-expression grammar::

    expr     := ['-'] term (('+'|'-') term)*
    term     := [rational '*'] path
    path     := 'e_' vertexId | arrowId ('.' arrowId)*
    rational := int ['/' posint]
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from .poly import CoordRing, Poly, RepPoint
from .quiver import (AddMap, DimVector, Path, PathComb, Quiver, QuiverError, dimvector,
                     make_path, trivial_path, validate_quiver)


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int = 0, line: int | None = None):
        if line is None:
            line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{message} (line {line}, column {col})")
        self.line, self.column = line, col


def _fmt_q(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _join_signed(parts) -> str:
    """parts: (coefficient, body) with body '' for a constant."""
    if not parts:
        return "0"
    out = []
    for k, (c, body) in enumerate(parts):
        neg = c < 0
        mag = -c if neg else c
        if body:
            piece = body if mag == 1 else f"{_fmt_q(mag)}*{body}"
        else:
            piece = _fmt_q(mag)
        if k == 0:
            out.append(("-" if neg else "") + piece)
        else:
            out.append((" - " if neg else " + ") + piece)
    return "".join(out)


# ---------------------------------------------------------------- path expressions

def render_path_comb(comb: PathComb) -> str:
    return _join_signed([(c, str(p)) for p, c in comb.terms])


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)(?=\s*\*)|(?P<id>[A-Za-z0-9_]+)|(?P<op>[-+*.]))")


def _tokens(text: str):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"syntax error: unexpected {text[pos:].strip()[:1]!r}", text, pos)
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), start))
        pos = m.end()
    return out


def parse_path_expr(text: str, quiver: Quiver, source: str | None = None,
                    target: str | None = None) -> PathComb:
    """Parse ``text`` into a :class:`PathComb`; endpoints are inferred from the terms."""
    toks = _tokens(text)
    if not toks:
        raise ParseError("empty path expression", text, 0)
    if len(toks) == 1 and toks[0][1] == "0":
        if source is None or target is None:
            raise ParseError("cannot infer endpoints of the zero combination", text, 0)
        return PathComb.zero(source, target)
    i = 0
    terms = []  # (path, coeff, pos)

    def peek(k=0):
        return toks[i + k] if i + k < len(toks) else (None, None, len(text))

    sign = 1
    if peek()[0] == "op" and peek()[1] in "+-":
        sign = -1 if peek()[1] == "-" else 1
        i += 1
    while True:
        coeff = Fraction(sign)
        kind, val, pos = peek()
        if kind == "num":
            coeff *= Fraction(val)
            i += 1
            if peek()[1] != "*":
                raise ParseError("expected '*' after coefficient", text, peek()[2])
            i += 1
            kind, val, pos = peek()
        if kind != "id":
            raise ParseError("expected a path", text, pos)
        i += 1
        arrows = [(val, pos)]
        while peek()[0] == "op" and peek()[1] == ".":
            i += 1
            k2, v2, p2 = peek()
            if k2 != "id":
                raise ParseError("expected an arrow after '.'", text, p2)
            arrows.append((v2, p2))
            i += 1
        terms.append((_make_path(quiver, arrows, text), coeff, pos))
        kind, val, pos = peek()
        if kind is None:
            break
        if kind == "op" and val in "+-":
            sign = -1 if val == "-" else 1
            i += 1
            continue
        raise ParseError(f"syntax error: unexpected {val!r}", text, pos)
    src, tgt = terms[0][0].source, terms[0][0].target
    if source is not None:
        src = source
    if target is not None:
        tgt = target
    d = {}
    for p, c, pos in terms:
        if (p.source, p.target) != (src, tgt):
            raise ParseError(f"mixed endpoints: {p} runs {p.source} -> {p.target}, expected {src} -> {tgt}",
                             text, pos)
        d[p] = d.get(p, 0) + c
    return PathComb(src, tgt, d)


def _make_path(quiver: Quiver, arrows, text) -> Path:
    if len(arrows) == 1:
        name, pos = arrows[0]
        if not quiver.has_arrow(name) and name.startswith("e_"):
            v = name[2:]
            if v not in quiver.vertices:
                raise ParseError(f"unknown vertex {v!r}", text, pos)
            return trivial_path(v)
    for name, pos in arrows:
        if not quiver.has_arrow(name):
            raise ParseError(f"unknown arrow {name!r}", text, pos)
    try:
        return make_path(quiver, [a for a, _ in arrows])
    except QuiverError as exc:
        raise ParseError(str(exc), text, arrows[0][1]) from None


# ---------------------------------------------------------------- polynomials

def render_monomial(ring: CoordRing, mono) -> str:
    parts = []
    for i, e in mono:
        s = str(ring.coords[i])
        parts.append(s if e == 1 else f"{s}^{e}")
    return "*".join(parts)


def render_poly(f: Poly) -> str:
    return _join_signed([(c, render_monomial(f.ring, m)) for m, c in f.sorted_terms()])


_PTOK = re.compile(r"\s*(?:(?P<coord>x\[\s*([A-Za-z0-9_]+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\])"
                   r"|(?P<num>\d+(?:/\d+)?)|(?P<op>[-+*^()]))")


def parse_poly(text: str, ring: CoordRing) -> Poly:
    """Parse the canonical rendering (and general +,-,*,^,() expressions)."""
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _PTOK.match(text, pos)
        if not m:
            raise ParseError(f"syntax error near {text[pos:].strip()[:8]!r}", text, pos)
        kind = m.lastgroup
        if kind == "coord":
            toks.append(("coord", (m.group(2), int(m.group(3)), int(m.group(4))), m.start(kind)))
        else:
            toks.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    state = {"i": 0}

    def peek():
        i = state["i"]
        return toks[i] if i < len(toks) else (None, None, len(text))

    def take():
        t = peek()
        state["i"] += 1
        return t

    def expr():
        sign = 1
        if peek()[0] == "op" and peek()[1] in "+-":
            sign = -1 if take()[1] == "-" else 1
        acc = term() * sign
        while peek()[0] == "op" and peek()[1] in "+-":
            s = take()[1]
            t = term()
            acc = acc + t if s == "+" else acc - t
        return acc

    def term():
        acc = factor()
        while peek()[0] == "op" and peek()[1] == "*":
            take()
            acc = acc * factor()
        return acc

    def factor():
        kind, val, p = take()
        if kind == "num":
            base = ring.const(Fraction(val))
        elif kind == "coord":
            try:
                base = ring.x(*val)
            except ValueError as exc:
                raise ParseError(str(exc), text, p) from None
        elif kind == "op" and val == "(":
            base = expr()
            if take()[1] != ")":
                raise ParseError("expected ')'", text, p)
        elif kind == "op" and val == "-":
            return -factor()
        else:
            raise ParseError("expected a number, coordinate or '('", text, p)
        if peek()[0] == "op" and peek()[1] == "^":
            take()
            k, v, p2 = take()
            if k != "num" or "/" in v:
                raise ParseError("expected a non-negative integer exponent", text, p2)
            base = base ** int(v)
        return base

    if not toks:
        raise ParseError("empty polynomial", text, 0)
    out = expr()
    if peek()[0] is not None:
        raise ParseError(f"unexpected {peek()[1]!r}", text, peek()[2])
    return out


# ---------------------------------------------------------------- flags

def _pairs(text: str, what: str):
    out = {}
    text = text.strip()
    if not text:
        return out
    for k, chunk in enumerate(text.split(",")):
        if ":" not in chunk:
            raise ParseError(f"expected 'key:value' in {what}", text, text.find(chunk), line=1)
        key, val = chunk.split(":", 1)
        try:
            out[key.strip()] = int(val)
        except ValueError:
            raise ParseError(f"expected an integer in {what}", text, text.find(chunk), line=1) from None
    return out


def parse_dimvector(text: str, quiver: Quiver) -> DimVector:
    return dimvector(quiver, _pairs(text, "dimension vector"))


def parse_degree(text: str, quiver: Quiver) -> dict:
    d = _pairs(text, "A-degree")
    for a, m in d.items():
        quiver.arrow(a)
        if m < 0:
            raise QuiverError(f"negative degree for arrow {a}")
    return {a.id: d.get(a.id, 0) for a in quiver.arrows}


def render_dimvector(alpha) -> str:
    return ",".join(f"{v}:{n}" for v, n in alpha.items())


# ---------------------------------------------------------------- JSON files

def load_json(path: str):
    with open(path) as fh:
        text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc.msg}", text, exc.pos) from None


def quiver_from_json(data) -> Quiver:
    return validate_quiver(data)


def quiver_to_json(q: Quiver) -> dict:
    return q.to_dict()


def map_from_json(data, quiver: Quiver) -> AddMap:
    try:
        if "source_slots" in data:
            src = [str(v) for v in data["source_slots"]]
            tgt = [str(v) for v in data["target_slots"]]
        else:
            a = dimvector(quiver, {str(k): v for k, v in data.get("source", {}).items()})
            b = dimvector(quiver, {str(k): v for k, v in data.get("target", {}).items()})
            src = [v for v in quiver.vertices for _ in range(a[v])]
            tgt = [v for v in quiver.vertices for _ in range(b[v])]
        raw = data.get("entries", [])
    except (AttributeError, TypeError) as exc:
        raise ParseError(f"malformed map description: {exc}", "", 0) from None
    if len(raw) != len(src) or any(len(row) != len(tgt) for row in raw):
        raise QuiverError(f"entries must be a {len(src)}x{len(tgt)} array (source-slot-major)")
    rows = [[parse_path_expr(str(e), quiver, src[s], tgt[t]) for t, e in enumerate(row)]
            for s, row in enumerate(raw)]
    return AddMap(quiver, src, tgt, rows)


def map_to_json(phi: AddMap) -> dict:
    out = {}
    canonical = (list(phi.source) == sorted(phi.source, key=phi.quiver.vertices.index)
                 and list(phi.target) == sorted(phi.target, key=phi.quiver.vertices.index))
    if canonical:
        out["source"] = {v: n for v, n in phi.source_mult.items() if n}
        out["target"] = {v: n for v, n in phi.target_mult.items() if n}
    else:
        out["source_slots"] = list(phi.source)
        out["target_slots"] = list(phi.target)
    out["entries"] = [[str(e) for e in row] for row in phi.entries]
    return out


def point_from_json(data, quiver: Quiver, alpha) -> RepPoint:
    alpha = dimvector(quiver, alpha)
    mats = {}
    for a, m in data.items():
        if not m and a in quiver.arrow_ids:  # [] is accepted for any n x 0 or 0 x n block
            m = [[]] * alpha[quiver.arrow(a).source]
        mats[a] = [[Fraction(str(x)) for x in row] for row in m]
    return RepPoint(quiver, alpha, mats)


def point_to_json(p: RepPoint) -> dict:
    return {a: [[_fmt_q(x) for x in row] for row in m] for a, m in p.mats.items()}


def rep_from_json(data, quiver: Quiver) -> RepPoint:
    """A representation file: ``{"dims": {v: n}, "maps": {arrow: matrix}}``."""
    dims = dimvector(quiver, {str(k): v for k, v in data.get("dims", {}).items()})
    return point_from_json(data.get("maps", {}), quiver, dims)


def rep_to_json(p: RepPoint) -> dict:
    return {"dims": dict(p.alpha.items()), "maps": point_to_json(p)}
