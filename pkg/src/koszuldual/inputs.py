"""Line-oriented input format and the polynomial string parser.

Input files look like

    ring x y z
    char 0
    weights 1 1 1
    ideal
    x^2
    y*z
    x*y+z^2
    end

with an optional module block presenting an R-module (rows are generators,
``rel`` lines are relation columns, entries comma-separated and aligned with
the generators; empty entry means zero):

    module
    gen u 0
    rel x, y^2
    end

Polynomials are sums of integer-coefficient monomials: ``-3*x^2*y + z``.
Parse errors carry (line, column).
"""

from __future__ import annotations

import re

from .exact_linalg import Poly, PolyRing


class ParseError(ValueError):
    def __init__(self, message, line=None, col=None):
        loc = ""
        if line is not None:
            loc = f" at line {line}" + (f", column {col}" if col is not None else "")
        super().__init__(message + loc)
        self.line = line
        self.col = col


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|([+\-*^/]))")


def _tokenize(text, line_no=None):
    pos, out = 0, []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos and not text[pos:].strip():
            break
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line_no, pos + 1)
        if m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", line_no, pos + 1)
        kind = "int" if m.group(1) else "name" if m.group(2) else "op"
        out.append((kind, m.group(m.lastindex), m.start(m.lastindex) + 1))
        pos = m.end()
    if text[pos:].strip():
        raise ParseError(f"unexpected character {text[pos:].strip()[0]!r}", line_no, pos + 1)
    return out


def parse_polynomial(ring: PolyRing, text: str, line_no=None) -> Poly:
    toks = _tokenize(text, line_no)
    if not toks:
        raise ParseError("empty polynomial", line_no, 1)
    result = ring.zero()
    i = 0
    sign = 1
    # leading sign
    while i < len(toks):
        coeff = sign
        sign = 1
        if toks[i][:2] == ("op", "-"):
            coeff = -1
            i += 1
        elif toks[i][:2] == ("op", "+"):
            i += 1
        # term: optional integer, factors joined by '*'
        mono = list(ring.one_mono())
        count = 0
        expect_factor = True
        while i < len(toks):
            kind, val, col = toks[i]
            if kind == "int" and expect_factor:
                num = int(val)
                i += 1
                if i < len(toks) and toks[i][:2] == ("op", "/"):
                    i += 1
                    if i >= len(toks) or toks[i][0] != "int":
                        raise ParseError("denominator expected after '/'", line_no, col)
                    from fractions import Fraction

                    coeff *= Fraction(num, int(toks[i][1]))
                    i += 1
                else:
                    coeff *= num
                count += 1
            elif kind == "name" and expect_factor:
                if val not in ring.names:
                    raise ParseError(f"unknown variable {val!r}", line_no, col)
                v = ring.names.index(val)
                e = 1
                i += 1
                if i < len(toks) and toks[i][:2] == ("op", "^"):
                    i += 1
                    if i >= len(toks) or toks[i][0] != "int":
                        raise ParseError("exponent expected after '^'", line_no, col)
                    e = int(toks[i][1])
                    i += 1
                mono[v] += e
                count += 1
            elif kind == "op" and val == "*":
                i += 1
                expect_factor = True
                continue
            elif kind == "op" and val in "+-":
                break
            else:
                raise ParseError(f"unexpected token {val!r}", line_no, col)
            expect_factor = False
            if i < len(toks) and toks[i][:2] == ("op", "*"):
                continue
            if i < len(toks) and toks[i][0] in ("int", "name"):
                raise ParseError(
                    "missing '*' between factors", line_no, toks[i][2]
                )
        if count == 0:
            raise ParseError("empty term", line_no, toks[i - 1][2] if i else 1)
        result = result + ring.monomial(tuple(mono), coeff)
    return result


# ---------------------------------------------------------------------------
# input files


class InputSpec:
    def __init__(self, ring, ideal, module=None, source_text=""):
        self.ring = ring
        self.ideal = ideal
        self.module = module  # (rows, cols) presentation over R, or None
        self.source_text = source_text

    def ring_spec(self):
        from .resolutions import RingSpec

        return RingSpec(self.ring, self.ideal)


def parse_input(text: str, characteristic=None) -> InputSpec:
    lines = text.splitlines()
    names = None
    char = 32003
    weights = None
    ideal_lines: list = []
    module_lines: list = []
    mode = None
    for no, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split(None, 1)
        if mode is None:
            if head == "ring":
                names = rest[0].split() if rest else []
                if not names:
                    raise ParseError("ring line needs variable names", no)
            elif head == "char":
                char = int(rest[0])
            elif head == "weights":
                weights = tuple(int(w) for w in rest[0].split())
            elif head == "ideal":
                mode = "ideal"
            elif head == "module":
                mode = "module"
            else:
                raise ParseError(f"unknown directive {head!r}", no, 1)
        elif line == "end":
            mode = None
        elif mode == "ideal":
            ideal_lines.append((no, line))
        elif mode == "module":
            module_lines.append((no, line))
    if names is None:
        raise ParseError("missing ring declaration", 1)
    if characteristic is not None:
        char = characteristic
    ring = PolyRing(names, characteristic=char, weights=weights)
    ideal = [parse_polynomial(ring, text, no) for no, text in ideal_lines]
    module = _parse_module(ring, module_lines) if module_lines else None
    return InputSpec(ring, ideal, module, source_text=text)


def _parse_module(ring, lines):
    rows: list = []
    cols: list = []
    for no, line in lines:
        head, *rest = line.split(None, 1)
        if head == "gen":
            parts = rest[0].split()
            if len(parts) != 2:
                raise ParseError("gen line: 'gen LABEL DEGREE'", no)
            rows.append((parts[0], int(parts[1])))
        elif head == "rel":
            entries = rest[0].split(",") if rest else []
            col = {}
            for t, entry in enumerate(entries):
                entry = entry.strip()
                if not entry or entry == "0":
                    continue
                if t >= len(rows):
                    raise ParseError("more relation entries than generators", no)
                col[t] = parse_polynomial(ring, entry, no)
            if col:
                cols.append(col)
        else:
            raise ParseError(f"unknown module directive {head!r}", no)
    if not rows:
        raise ParseError("module block without generators", lines[0][0])
    return rows, cols


def read_input_file(path, characteristic=None) -> InputSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_input(fh.read(), characteristic=characteristic)
