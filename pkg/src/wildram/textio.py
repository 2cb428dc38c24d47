"""Textual grammar for residue elements and series.

Polynomials print like ``3*u1^2*u2 + 1`` and series like
``u1*t^-2 + (u1+u2)*t^-1 + O(t^5)``.  Perfected elements carry their
p-power root as a fractional exponent: ``(u1_0^2 + u1_1)^(1/2)``.
Printing followed by parsing is the identity.
"""

from __future__ import annotations

import re

from .errors import WildramError
from .fields import FieldConfig, ResidueElement, pth_root
from .series import EXACT_PREC, LocalElement, constant_series, monomial, zero_series


class ParseError(WildramError):
    pass


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise ParseError(f"unexpected character at {text[pos:]!r}")
        if m.group("int") is not None:
            tokens.append(("int", m.group("int")))
        elif m.group("name") is not None:
            tokens.append(("name", m.group("name")))
        else:
            tokens.append(("op", m.group("op")))
        pos = m.end()
    return tokens


class _Parser:
    """Recursive-descent parser, evaluated directly against a value model."""

    def __init__(self, tokens, model):
        self.tokens = tokens
        self.pos = 0
        self.model = model

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None:
            raise ParseError("unexpected end of input")
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind}, got {tok[1]!r}")
        if value is not None and tok[1] != value:
            raise ParseError(f"expected {value!r}, got {tok[1]!r}")
        self.pos += 1
        return tok

    def parse(self):
        value = self.expr()
        if self.peek()[0] is not None:
            raise ParseError(f"trailing input from {self.peek()[1]!r}")
        return value

    def expr(self):
        kind, val = self.peek()
        negate = False
        if (kind, val) == ("op", "-"):
            self.take()
            negate = True
        elif (kind, val) == ("op", "+"):
            self.take()
        acc = self.term()
        if negate:
            acc = self.model.neg(acc)
        while True:
            kind, val = self.peek()
            if (kind, val) == ("op", "+"):
                self.take()
                acc = self.model.add(acc, self.term())
            elif (kind, val) == ("op", "-"):
                self.take()
                acc = self.model.sub(acc, self.term())
            else:
                return acc

    def term(self):
        acc = self.factor()
        while True:
            kind, val = self.peek()
            if (kind, val) == ("op", "*"):
                self.take()
                acc = self.model.mul(acc, self.factor())
            elif (kind, val) == ("op", "/"):
                self.take()
                acc = self.model.div(acc, self.factor())
            else:
                return acc

    def factor(self):
        base = self.atom()
        kind, val = self.peek()
        if (kind, val) != ("op", "^"):
            return base
        self.take()
        kind, val = self.peek()
        if (kind, val) == ("op", "("):
            # fractional exponent (1/q) with q a power of p
            self.take()
            one = self.take("int")
            if one[1] != "1":
                raise ParseError("only exponents of the form (1/q) are supported")
            self.take("op", "/")
            q = int(self.take("int")[1])
            self.take("op", ")")
            return self.model.pow_frac(base, q)
        negate = False
        if (kind, val) == ("op", "-"):
            self.take()
            negate = True
        e = int(self.take("int")[1])
        return self.model.pow_int(base, -e if negate else e)

    def atom(self):
        kind, val = self.peek()
        if (kind, val) == ("op", "("):
            self.take()
            inner = self.expr()
            self.take("op", ")")
            return inner
        if kind == "int":
            self.take()
            return self.model.const(int(val))
        if kind == "name":
            self.take()
            if val == "O" and self.peek() == ("op", "("):
                self.take()
                self.take("name", "t")
                self.take("op", "^")
                neg = False
                if self.peek() == ("op", "-"):
                    self.take()
                    neg = True
                n = int(self.take("int")[1])
                self.take("op", ")")
                return self.model.order_term(-n if neg else n)
            return self.model.var(val)
        raise ParseError(f"unexpected token {val!r}")


class _ResidueModel:
    def __init__(self, cfg: FieldConfig):
        self.cfg = cfg

    def const(self, c):
        return self.cfg.constant(c)

    def var(self, name):
        return self.cfg.variable(name)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        return a / b

    def pow_int(self, a, e):
        return a**e

    def pow_frac(self, a, q):
        p = self.cfg.p
        m = 0
        while q > 1 and q % p == 0:
            q //= p
            m += 1
        if q != 1:
            raise ParseError("fractional exponent denominator must be a power of p")
        for _ in range(m):
            a = pth_root(a)
        return a

    def order_term(self, n):
        raise ParseError("O(...) terms are not allowed in residue elements")


class _SeriesModel:
    def __init__(self, cfg: FieldConfig):
        self.cfg = cfg
        self.residue = _ResidueModel(cfg)

    def const(self, c):
        return constant_series(self.cfg, self.cfg.constant(c))

    def var(self, name):
        if name == "t":
            return monomial(self.cfg, self.cfg.one(), 1)
        return constant_series(self.cfg, self.cfg.variable(name))

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        return a * b.inverse()

    def pow_int(self, a, e):
        return a**e

    def pow_frac(self, a, q):
        if set(a.coeffs) not in ({0}, set()) or not a.is_exact():
            raise ParseError("fractional exponents apply to residue coefficients only")
        c = self.residue.pow_frac(a.coefficient(0), q)
        return constant_series(self.cfg, c)

    def order_term(self, n):
        return zero_series(self.cfg, n)


def parse_residue(text: str, cfg: FieldConfig) -> ResidueElement:
    return _Parser(_tokenize(text), _ResidueModel(cfg)).parse()


def parse_series(text: str, cfg: FieldConfig) -> LocalElement:
    return _Parser(_tokenize(text), _SeriesModel(cfg)).parse()


# printing ------------------------------------------------------------------

def _poly_to_str(poly, names) -> str:
    if not poly:
        return "0"
    parts = []
    for monom, coeff in poly.terms():
        c = int(coeff) % poly.ring.domain.mod
        factors = []
        vars_ = [
            (name if e == 1 else f"{name}^{e}")
            for name, e in zip(names, monom)
            if e
        ]
        if c != 1 or not vars_:
            factors.append(str(c))
        factors.extend(vars_)
        parts.append("*".join(factors))
    return " + ".join(parts)


def _is_atomic_poly(poly) -> bool:
    """Safe to follow a '/' without parentheses: one term, one factor."""
    terms = list(poly.terms())
    if len(terms) != 1:
        return False
    monom, coeff = terms[0]
    nvars = sum(1 for e in monom if e)
    c = int(coeff) % poly.ring.domain.mod
    return (nvars == 0) or (nvars == 1 and c == 1)


def residue_to_str(x: ResidueElement) -> str:
    if x.is_zero():
        return "0"
    names = x.cfg.variables
    num_s = _poly_to_str(x.num, names)
    if x.den == x.cfg.ring.one:
        body = num_s
    else:
        if len(list(x.num.terms())) > 1:
            num_s = f"({num_s})"
        den_s = _poly_to_str(x.den, names)
        if not _is_atomic_poly(x.den):
            den_s = f"({den_s})"
        body = f"{num_s}/{den_s}"
    if x.scale > 0:
        q = x.cfg.p**x.scale
        return f"({body})^(1/{q})"
    return body


def _coeff_factor_str(c: ResidueElement) -> str:
    """Print c so that appending '*t^j' parses back correctly."""
    s = residue_to_str(c)
    if c.scale > 0 or c.den != c.cfg.ring.one:
        return s  # already ends in a factor-safe form
    if len(list(c.num.terms())) > 1:
        return f"({s})"
    return s


def series_to_str(f: LocalElement) -> str:
    parts = []
    for j in sorted(f.coeffs):
        c = f.coeffs[j]
        if j == 0:
            parts.append(residue_to_str(c))
            continue
        t_str = "t" if j == 1 else f"t^{j}"
        if c.is_one():
            parts.append(t_str)
        else:
            parts.append(f"{_coeff_factor_str(c)}*{t_str}")
    if not f.is_exact():
        parts.append(f"O(t^{f.prec})")
    if not parts:
        return "0"
    return " + ".join(parts)
