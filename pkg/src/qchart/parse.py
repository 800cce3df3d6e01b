"""Text notation for disc elements.

Grammar (whitespace is ignored)::

    expr   := term (("+" | "-") term)*
    term   := unary ("*" unary)*
    unary  := "-" unary | power
    power  := atom ("^" INTEGER)?
    atom   := NUMBER | NAME | "(" expr ")"
            | "delta" "(" "q" "," INTEGER ")"
            | "eta" "(" INTEGER "," INTEGER ")"
            | "star" "(" expr ")"

``NAME`` is one of ``s``, ``sstar``, ``z``, ``zstar``, ``y``, ``one``.
``delta(q,n)`` is the projector onto the eigenvalue ``q**n`` of ``y`` and
``eta(n,k)`` the orthonormal basis element.  Products are reduced to normal
form as they are parsed.
"""
from __future__ import annotations

import re

from . import algebra
from .algebra import DiscElement
from .params import ChartParams

__all__ = ["ParseError", "parse_element"]

_TOKEN = re.compile(r"\s*(?:(\d+\.\d*(?:[eE][-+]?\d+)?|\.\d+(?:[eE][-+]?\d+)?|\d+(?:[eE][-+]?\d+)?)|([A-Za-z_]\w*)|(.))")

_NAMES = {"s": "s", "sstar": "s*", "z": "z", "zstar": "z*", "y": "y", "one": "1"}


class ParseError(ValueError):
    pass


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # pragma: no cover - the pattern always matches one char
            raise ParseError(f"cannot read input at position {pos}")
        num, name, sym = m.groups()
        if num is not None:
            tokens.append(("num", num))
        elif name is not None:
            tokens.append(("name", name))
        elif sym is not None and sym.strip():
            if sym not in "+-*^(),":
                raise ParseError(f"unexpected character {sym!r} at position {m.start(3)}")
            tokens.append(("sym", sym))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str, params: ChartParams, length: int):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.params = params
        self.length = length

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else ("end", "")

    def take(self, kind: str | None = None, value: str | None = None) -> str:
        tok = self.peek()
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind
            got = tok[1] or "end of input"
            raise ParseError(f"expected {want!r}, got {got!r}")
        self.pos += 1
        return tok[1]

    def integer(self) -> int:
        sign = -1 if self.peek() == ("sym", "-") else 1
        if sign < 0:
            self.pos += 1
        if self.peek()[0] != "num":
            raise ParseError(f"expected an integer, got {self.peek()[1] or 'end of input'!r}")
        text = self.take("num")
        if not text.isdigit():
            raise ParseError(f"expected an integer, got {text!r}")
        return sign * int(text)

    def parse(self) -> DiscElement:
        if not self.tokens:
            raise ParseError("empty expression")
        out = self.expr()
        if self.pos != len(self.tokens):
            raise ParseError(f"unexpected {self.peek()[1]!r} after a complete expression")
        return out

    def expr(self) -> DiscElement:
        out = self.term()
        while self.peek() in (("sym", "+"), ("sym", "-")):
            op = self.take()
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self) -> DiscElement:
        out = self.unary()
        while self.peek() == ("sym", "*"):
            self.take()
            out = algebra.normal_form_product(out, self.unary(), self.params)
        return out

    def unary(self) -> DiscElement:
        if self.peek() == ("sym", "-"):
            self.take()
            return self.unary().scale(-1)
        return self.power()

    def power(self) -> DiscElement:
        base = self.atom()
        if self.peek() != ("sym", "^"):
            return base
        self.take()
        exp = self.integer()
        if exp < 0:
            raise ParseError("negative powers are not defined for bounded elements")
        out = algebra.encode_generator("1", self.params, length=self.length)
        for _ in range(exp):
            out = algebra.normal_form_product(out, base, self.params)
        return out

    def atom(self) -> DiscElement:
        kind, text = self.peek()
        p, length = self.params, self.length
        if kind == "num":
            self.take()
            return DiscElement.scalar(float(text), length, p.field)
        if (kind, text) == ("sym", "("):
            self.take()
            out = self.expr()
            self.take("sym", ")")
            return out
        if kind != "name":
            raise ParseError(f"unexpected {text or 'end of input'!r}")
        self.take()
        if text in _NAMES:
            return algebra.encode_generator(_NAMES[text], p, length=length)
        if text == "delta":
            self.take("sym", "(")
            self.take("name", "q")
            self.take("sym", ",")
            n = self.integer()
            self.take("sym", ")")
            if n < 0:
                raise ParseError("delta(q, n) needs n >= 0")
            return algebra.encode_generator("delta", p, index=n, length=length)
        if text == "eta":
            self.take("sym", "(")
            n = self.integer()
            self.take("sym", ",")
            k = self.integer()
            self.take("sym", ")")
            if n < 0:
                raise ParseError("eta(n, k) needs n >= 0")
            return algebra.eta_element((n, k), p, length)
        if text == "star":
            self.take("sym", "(")
            out = self.expr()
            self.take("sym", ")")
            return algebra.star(out)
        raise ParseError(f"unknown name {text!r}")


def parse_element(text: str, params: ChartParams, length: int | None = None) -> DiscElement:
    """Parse ``text`` into a normal-form element with ``length`` samples per band.

    Raises :class:`ParseError` on malformed input and ``ValueError`` when a
    product runs out of samples.
    """
    length = params.m_max if length is None else length
    return _Parser(text, params, length).parse()
