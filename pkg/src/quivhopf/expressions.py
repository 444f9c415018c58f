"""Parsing and canonical printing of algebra elements.

Grammar (whitespace-insensitive; juxtaposition multiplies, rightmost factor
applies first):

    element := ['-'] term (('+'|'-') term)*
    term    := coeff ['*' factor+] | factor+
    coeff   := rational | '(' laurent ')'
    factor  := 'e(' ints ')' | 'a(' ints ';' int ')' | 'a*(' ints ';' int ')'
             | 'E_i' | 'F_i' | 'K_i' | 'Kinv_i' | '1' | factor '^' int

The laurent form inside a coefficient is a sum of rational multiples of
q-powers; printing always reduces exponents to 0..n-1.  Printing orders the
terms by the monomial order and round-trips exactly through the parser.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .quivers import AlgebraElement, FreeModel, Path, PathModel, _FAMILY_NAMES
from .scalars import CycNumber

_TOKEN = re.compile(
    r"\s*(?:(?P<astar>a\*)|(?P<name>[A-Za-z]+_\d+|[A-Za-z]+)|(?P<num>\d+)|(?P<op>[()^;,*/+-]))"
)


class QParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__("%s (at position %d)" % (message, pos))
        self.pos = pos


def _tokenize(text: str):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == m.start():
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise QParseError("unexpected character %r" % stripped[0], pos)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, model):
        self.text = text
        self.model = model
        self.tokens = _tokenize(text)
        self.k = 0

    def peek(self):
        return self.tokens[self.k]

    def next(self):
        tok = self.tokens[self.k]
        self.k += 1
        return tok

    def expect(self, value: str):
        kind, val, pos = self.next()
        if val != value:
            raise QParseError("expected %r, found %r" % (value, val or "end of input"), pos)

    def fail(self, message: str):
        raise QParseError(message, self.peek()[2])

    # ---- scalars

    def parse_int(self) -> int:
        sign = 1
        if self.peek()[1] == "-":
            self.next()
            sign = -1
        kind, val, pos = self.next()
        if kind != "num":
            raise QParseError("expected an integer, found %r" % (val or "end"), pos)
        return sign * int(val)

    def parse_rational(self) -> Fraction:
        sign = 1
        if self.peek()[1] == "-":
            self.next()
            sign = -1
        kind, val, pos = self.next()
        if kind != "num":
            raise QParseError("expected a number, found %r" % (val or "end"), pos)
        num = int(val)
        den = 1
        if self.peek()[1] == "/":
            self.next()
            kind, val, pos = self.next()
            if kind != "num":
                raise QParseError("expected a denominator, found %r" % (val or "end"), pos)
            den = int(val)
        return Fraction(sign * num, den)

    def parse_laurent(self) -> CycNumber:
        field = self.model.field
        out = field.zero
        sign = 1
        if self.peek()[1] == "-":
            self.next()
            sign = -1
        while True:
            out = out + self._parse_laurent_term() * sign
            nxt = self.peek()[1]
            if nxt == "+":
                self.next()
                sign = 1
            elif nxt == "-":
                self.next()
                sign = -1
            else:
                return out

    def _parse_laurent_term(self) -> CycNumber:
        field = self.model.field
        kind, val, pos = self.peek()
        coeff = Fraction(1)
        seen_number = False
        if kind == "num":
            coeff = self.parse_rational()
            seen_number = True
            if self.peek()[1] == "*":
                self.next()
            elif self.peek()[1] != "q":
                return field.from_rational(coeff)
        kind, val, pos = self.peek()
        if val == "q":
            self.next()
            exp = 1
            if self.peek()[1] == "^":
                self.next()
                exp = self.parse_int()
            return field.q_power(exp) * coeff
        if seen_number:
            return field.from_rational(coeff)
        raise QParseError("expected a rational or a q-power, found %r" % (val or "end"), pos)

    # ---- elements

    def parse_element(self) -> AlgebraElement:
        if self.peek()[1] == "0" and self.tokens[self.k + 1][0] == "end":
            self.next()
            return AlgebraElement.zero(self.model)
        out = AlgebraElement.zero(self.model)
        sign = 1
        if self.peek()[1] == "-":
            self.next()
            sign = -1
        while True:
            out = out + self.parse_term().scaled(sign)
            nxt = self.peek()[1]
            if nxt == "+":
                self.next()
                sign = 1
            elif nxt == "-":
                self.next()
                sign = -1
            elif self.peek()[0] == "end":
                return out
            else:
                self.fail("expected '+', '-' or end of expression, found %r" % nxt)

    def parse_term(self) -> AlgebraElement:
        kind, val, pos = self.peek()
        coeff = None
        if kind == "num" and val != "1":
            coeff = self.parse_rational()
        elif kind == "num" and val == "1" and self.tokens[self.k + 1][1] in ("*", "/"):
            coeff = self.parse_rational()
        elif val == "(":
            self.next()
            coeff = self.parse_laurent()
            self.expect(")")
        if coeff is not None:
            if self.peek()[1] == "*":
                self.next()
            else:
                # bare scalar term: only the free algebra has a unit word
                return self._unit_term().scaled(coeff)
        factors = []
        while True:
            kind, val, pos = self.peek()
            if kind in ("astar", "name") or (kind == "num" and val == "1"):
                factors.append(self.parse_factor())
            else:
                break
        if not factors:
            if coeff is not None:
                return self._unit_term().scaled(coeff)
            self.fail("expected a generator factor")
        out = factors[0]
        for f in factors[1:]:
            out = out * f
        if coeff is not None:
            out = out.scaled(coeff)
        return out

    def _unit_term(self) -> AlgebraElement:
        if isinstance(self.model, FreeModel):
            return AlgebraElement.from_word(self.model, ())
        self.fail("a bare scalar is not an element of a path algebra")

    def parse_factor(self) -> AlgebraElement:
        kind, val, pos = self.next()
        if kind == "num" and val == "1":
            out = self._unit_term()
        elif kind == "astar" or (kind == "name" and val in ("e", "a")):
            out = self._parse_path_factor(kind, val, pos)
        elif kind == "name":
            out = self._parse_letter(val, pos)
        else:
            raise QParseError("expected a generator, found %r" % (val or "end"), pos)
        while self.peek()[1] == "^":
            self.next()
            k = self.parse_int()
            if k < 0:
                raise QParseError("negative powers are not defined here", pos)
            acc = self._unit_power_base()
            for _ in range(k):
                acc = acc * out
            out = acc
        return out

    def _unit_power_base(self) -> AlgebraElement:
        if isinstance(self.model, FreeModel):
            return AlgebraElement.from_word(self.model, ())
        out = AlgebraElement.zero(self.model)
        for w in self.model.unit_words():
            out = out + AlgebraElement.from_word(self.model, w)
        return out

    def _parse_path_factor(self, kind, val, pos) -> AlgebraElement:
        if not isinstance(self.model, PathModel):
            raise QParseError("path generator %r outside a path algebra" % val, pos)
        quiver = self.model.quiver
        self.expect("(")
        comps = [self.parse_int()]
        while self.peek()[1] == ",":
            self.next()
            comps.append(self.parse_int())
        if len(comps) != quiver.t:
            raise QParseError(
                "vertex needs %d components, got %d" % (quiver.t, len(comps)), pos
            )
        if val == "e":
            self.expect(")")
            return AlgebraElement.from_word(self.model, Path(quiver.vertex(comps)))
        self.expect(";")
        idx = self.parse_int()
        if not 1 <= idx <= quiver.t:
            raise QParseError("arrow index %d out of 1..%d" % (idx, quiver.t), pos)
        self.expect(")")
        starred = kind == "astar"
        if starred and not self.model.with_starred:
            raise QParseError("starred arrows are not part of this algebra", pos)
        arrow = quiver.arrow(quiver.vertex(comps), idx, starred)
        return AlgebraElement.from_word(self.model, Path(arrow.target, (arrow,)))

    def _parse_letter(self, val, pos) -> AlgebraElement:
        if not isinstance(self.model, FreeModel):
            raise QParseError("generator %r outside the free algebra" % val, pos)
        m = re.fullmatch(r"([A-Za-z]+)_(\d+)", val)
        if m is None:
            raise QParseError("unknown generator %r" % val, pos)
        fam_name, idx = m.group(1), int(m.group(2))
        families = {v: k for k, v in _FAMILY_NAMES.items()}
        if fam_name not in families:
            raise QParseError("unknown generator family %r" % fam_name, pos)
        if not 1 <= idx <= self.model.t:
            raise QParseError("generator index %d out of 1..%d" % (idx, self.model.t), pos)
        code = self.model.code(families[fam_name], idx)
        if code not in self.model.letters:
            raise QParseError("generator %r is not in this algebra" % val, pos)
        return AlgebraElement.from_word(self.model, (code,))


def parse_element(text: str, model) -> AlgebraElement:
    """Parse the canonical element grammar over the given word model."""
    parser = _Parser(text, model)
    return parser.parse_element()


def _coeff_text(c: CycNumber) -> tuple[str, str]:
    """(sign, body) with the sign split off for rationals; '' body means 1."""
    if c.is_rational():
        r = c.as_rational()
        sign = "-" if r < 0 else "+"
        mag = abs(r)
        return sign, "" if mag == 1 else str(mag)
    return "+", "(%s)" % c


def format_element(elem: AlgebraElement) -> str:
    """Canonical rendering: terms ascending in the monomial order."""
    if elem.is_zero():
        return "0"
    parts = []
    for word, coeff in elem.sorted_terms():
        sign, body = _coeff_text(coeff)
        wtext = elem.model.render_word(word)
        if body:
            text = "%s*%s" % (body, wtext)
        else:
            text = wtext
        parts.append((sign, text))
    first_sign, first_text = parts[0]
    out = ("-" if first_sign == "-" else "") + first_text
    for sign, text in parts[1:]:
        out += " %s %s" % (sign, text)
    return out
