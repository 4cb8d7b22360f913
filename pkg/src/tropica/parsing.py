"""Text syntax for polynomials.

Complex Laurent polynomials are sums of terms ``c*z^a*w^b`` where ``c`` is a
rational, decimal or complex number (``2``, ``3/2``, ``-0.5``, ``2i``,
``(1+2i)``); exponents are integers and may be negative.  Tropical
polynomials are ``max(...)`` of affine forms such as ``1/2 + 2x - y``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .amoeba.poly import ComplexLaurentPolynomial
from .trop_core import TropicalPolynomial

NUMBER = re.compile(r"\d+(?:\.\d*)?(?:[eE][+-]?\d+)?(?:/\d+)?|\.\d+(?:[eE][+-]?\d+)?")


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}: {text[:pos]}>>>{text[pos:]}")


@dataclass
class _Scanner:
    text: str
    pos: int = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def eat(self, ch: str) -> bool:
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def expect(self, ch: str):
        if not self.eat(ch):
            self.fail(f"expected {ch!r}")

    def number(self) -> str | None:
        self.skip()
        m = NUMBER.match(self.text, self.pos)
        if not m:
            return None
        self.pos = m.end()
        return m.group()

    def integer(self) -> int:
        neg = False
        paren = self.eat("(")
        if self.eat("-"):
            neg = True
        elif self.eat("+"):
            pass
        self.skip()
        m = re.compile(r"\d+").match(self.text, self.pos)
        if not m:
            self.fail("expected an integer exponent")
        self.pos = m.end()
        if paren:
            self.expect(")")
        return -int(m.group()) if neg else int(m.group())

    def fail(self, msg: str):
        raise ParseError(msg, self.text, self.pos)

    def done(self) -> bool:
        return self.peek() == ""


def _num(s: str) -> Fraction:
    return Fraction(s)


# complex grammar

def _complex_atom(sc: _Scanner) -> complex | None:
    """A number, an imaginary number, ``i``, or a parenthesised complex sum."""
    if sc.eat("("):
        val = _complex_sum(sc)
        sc.expect(")")
        return val
    s = sc.number()
    if s is not None:
        v = complex(float(_num(s)))
        if sc.peek() == "i":
            sc.pos += 1
            return v * 1j
        return v
    if sc.peek() == "i":
        sc.pos += 1
        return 1j
    return None


def _complex_sum(sc: _Scanner) -> complex:
    total = 0j
    sign = -1 if sc.eat("-") else 1
    if sign == 1:
        sc.eat("+")
    while True:
        a = _complex_atom(sc)
        if a is None:
            sc.fail("expected a number")
        total += sign * a
        if sc.eat("+"):
            sign = 1
        elif sc.eat("-"):
            sign = -1
        else:
            return total


def _complex_term(sc: _Scanner) -> tuple[tuple[int, int], complex]:
    coef = 1 + 0j
    exp = [0, 0]
    while True:
        ch = sc.peek()
        if ch in ("z", "w"):
            sc.pos += 1
            k = sc.integer() if sc.eat("^") else 1
            exp[0 if ch == "z" else 1] += k
        else:
            a = _complex_atom(sc)
            if a is None:
                sc.fail("expected a coefficient, z or w")
            coef *= a
        if not sc.eat("*"):
            # juxtaposition such as "2z" or "3 w^2" is allowed
            if sc.peek() in ("z", "w", "("):
                continue
            break
    return (exp[0], exp[1]), coef


def parse_complex(text: str) -> ComplexLaurentPolynomial:
    sc = _Scanner(text)
    terms: dict[tuple[int, int], complex] = {}
    sign = -1 if sc.eat("-") else 1
    if sign == 1:
        sc.eat("+")
    while True:
        e, c = _complex_term(sc)
        terms[e] = terms.get(e, 0) + sign * c
        if sc.eat("+"):
            sign = 1
        elif sc.eat("-"):
            sign = -1
        elif sc.done():
            break
        else:
            sc.fail("unexpected character")
    terms = {e: c for e, c in terms.items() if c != 0}
    if not terms:
        raise ParseError("zero polynomial", text, len(text))
    return ComplexLaurentPolynomial(terms)


# tropical grammar

VARS = {"x": 0, "y": 1}


def _affine(sc: _Scanner) -> tuple[tuple[int, int], Fraction]:
    exp = [0, 0]
    const = Fraction(0)
    sign = -1 if sc.eat("-") else 1
    if sign == 1:
        sc.eat("+")
    while True:
        start = sc.pos
        s = sc.number()
        val = _num(s) if s is not None else Fraction(1)
        sc.eat("*")
        ch = sc.peek()
        if ch in VARS:
            sc.pos += 1
            if val.denominator != 1:
                sc.pos = start
                sc.fail("exponents must be integers")
            exp[VARS[ch]] += sign * int(val)
        elif s is None:
            sc.fail("expected a number, x or y")
        else:
            const += sign * val
        if sc.eat("+"):
            sign = 1
        elif sc.eat("-"):
            sign = -1
        else:
            break
    return (exp[0], exp[1]), const


def parse_tropical(text: str) -> TropicalPolynomial:
    sc = _Scanner(text)
    sc.skip()
    if not text[sc.pos : sc.pos + 3] == "max":
        sc.fail("expected max(")
    sc.pos += 3
    sc.expect("(")
    terms: dict[tuple[int, int], Fraction] = {}
    while True:
        e, c = _affine(sc)
        terms[e] = max(terms[e], c) if e in terms else c
        if sc.eat(","):
            continue
        sc.expect(")")
        break
    if not sc.done():
        sc.fail("trailing input")
    return TropicalPolynomial(terms, dim=2)


def parse_polynomial(text: str) -> ComplexLaurentPolynomial | TropicalPolynomial:
    if text.strip().startswith("max"):
        return parse_tropical(text)
    return parse_complex(text)


def _fmt_real(x: float) -> str:
    return repr(float(x))


def format_complex(p: ComplexLaurentPolynomial) -> str:
    parts = []
    for (j, k), c in p.terms:
        if c.imag == 0:
            coef = f"({_fmt_real(c.real)})"
        else:
            sign = "+" if c.imag >= 0 else "-"
            coef = f"({_fmt_real(c.real)}{sign}{_fmt_real(abs(c.imag))}i)"
        parts.append(f"{coef}*z^{j}*w^{k}")
    return " + ".join(parts)


def format_tropical(F: TropicalPolynomial) -> str:
    parts = []
    for e, c in F.terms:
        s = str(c)
        s += "".join(f" {'-' if a < 0 else '+'} {abs(a)}*{v}" for a, v in zip(e, ("x", "y")) if a)
        parts.append(s)
    return "max(" + ", ".join(parts) + ")"


def format_polynomial(p) -> str:
    return format_tropical(p) if isinstance(p, TropicalPolynomial) else format_complex(p)
