"""Finite-length co-Witt vectors over truncated Laurent series.

A WittRep stores components in slots -i for 0 <= i < length, slot 0 being
the last coordinate of the underlying length-s Witt vector and slot
-(s-1) the first.  Under this indexing the group of length-s vectors
embeds into sequences (..., 0, a_{-s+1}, ..., a_0), deeper slots carry
weight p^i in the level filtration, and padding the deep end with zeros
is compatible with the group law.

The group law itself is evaluated from the universal addition polynomials,
computed once per (p, s) over the integers by the ghost-component
recursion and reduced mod p at evaluation time.

Convention for the semilinear operators (fixed here and used everywhere):
F raises each component to the p-th power in place, and V moves the
content of slot -(i+1) to slot -i, discarding slot 0; then F o V = V o F
is multiplication by p.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping

from sympy import ZZ
from sympy.polys.rings import ring as _sympy_ring

from .errors import PrecisionExhausted
from .fields import FieldConfig
from .series import EXACT_PREC, LocalElement, zero_series

MAX_WITT_LENGTH = 3


def _ghost(vec, n: int, p: int):
    acc = vec[0] ** (p**n)
    for i in range(1, n + 1):
        acc = acc + vec[i] ** (p ** (n - i)) * (p**i)
    return acc


@dataclass(frozen=True)
class WittPolynomials:
    """Universal addition and negation polynomials for W_s, over ZZ."""

    p: int
    length: int
    add_polys: tuple
    neg_polys: tuple
    # coefficient form used by the evaluator: per level, a list of
    # (x-exponents, y-exponents, coefficient mod p)
    add_terms: tuple
    neg_terms: tuple


def _mod_p_terms(poly, p: int, nx: int):
    out = []
    for monom, coeff in poly.terms():
        c = int(coeff) % p
        if c:
            out.append((monom[:nx], monom[nx:], c))
    return tuple(out)


@lru_cache(maxsize=None)
def build_structure_polynomials(p: int, s: int) -> WittPolynomials:
    """Ghost-component recursion for the Witt addition law.

    w_n(S_0,...,S_n) = w_n(X) + w_n(Y) over ZZ, with w_n(Z) =
    sum_{i<=n} p^i Z_i^(p^(n-i)); the division by p^n at each level is
    exact, which we assert rather than assume.
    """
    if s < 1:
        raise ValueError("length must be >= 1")
    names = [f"X{i}" for i in range(s)] + [f"Y{i}" for i in range(s)]
    R = _sympy_ring(names, ZZ)[0]
    xs, ys = R.gens[:s], R.gens[s:]

    add_polys = []
    for n in range(s):
        rhs = _ghost(xs, n, p) + _ghost(ys, n, p)
        for i in range(n):
            rhs = rhs - add_polys[i] ** (p ** (n - i)) * (p**i)
        S_n = rhs.quo_ground(p**n)
        if S_n * (p**n) != rhs:
            raise ArithmeticError("ghost recursion division not exact")
        add_polys.append(S_n)

    neg_polys = []
    for n in range(s):
        rhs = -_ghost(xs, n, p)
        for i in range(n):
            rhs = rhs - neg_polys[i] ** (p ** (n - i)) * (p**i)
        N_n = rhs.quo_ground(p**n)
        if N_n * (p**n) != rhs:
            raise ArithmeticError("ghost recursion division not exact")
        neg_polys.append(N_n)

    return WittPolynomials(
        p=p,
        length=s,
        add_polys=tuple(add_polys),
        neg_polys=tuple(neg_polys),
        add_terms=tuple(_mod_p_terms(q, p, s) for q in add_polys),
        neg_terms=tuple(_mod_p_terms(q, p, s) for q in neg_polys),
    )


class WittRep:
    """Finite co-Witt vector: slot -i -> series, absent slots are zero."""

    __slots__ = ("cfg", "components", "length")

    def __init__(self, cfg: FieldConfig, components: Mapping[int, LocalElement], length: int):
        if length < 1 or length > MAX_WITT_LENGTH:
            raise ValueError(f"witt length must be in 1..{MAX_WITT_LENGTH}")
        comps = {}
        for idx, val in components.items():
            if idx > 0 or idx <= -length:
                raise ValueError(f"slot {idx} outside length bound {length}")
            if val.coeffs or not val.is_exact():
                comps[int(idx)] = val
        object.__setattr__(self, "cfg", cfg)
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "length", length)

    def __setattr__(self, *a):
        raise AttributeError("WittRep is immutable")

    def component(self, idx: int) -> LocalElement | None:
        """Stored series at a slot; None means exactly zero."""
        return self.components.get(idx)

    def is_zero(self) -> bool:
        return not self.components

    def __eq__(self, other):
        if not isinstance(other, WittRep):
            return NotImplemented
        return self.cfg == other.cfg and self.components == other.components

    def __repr__(self):
        return f"WittRep({self.to_strings()})"

    def truncate(self, prec: int) -> "WittRep":
        return WittRep(
            self.cfg,
            {i: c.truncate(prec) for i, c in self.components.items()},
            self.length,
        )

    def min_prec(self) -> int:
        if not self.components:
            return EXACT_PREC
        return min(c.prec for c in self.components.values())

    def to_strings(self) -> list[str]:
        """Series strings, most negative slot first; exact zeros print '0'."""
        from .textio import series_to_str

        out = []
        for i in range(self.length - 1, -1, -1):
            c = self.components.get(-i)
            out.append("0" if c is None else series_to_str(c))
        return out

    @classmethod
    def from_strings(cls, cfg: FieldConfig, strings, prec: int | None = None) -> "WittRep":
        from .textio import parse_series

        length = len(strings)
        comps = {}
        for pos, text in enumerate(strings):
            idx = -(length - 1 - pos)
            f = parse_series(text, cfg)
            if prec is not None:
                f = f.truncate(prec)
            if f.coeffs or not f.is_exact():
                comps[idx] = f
        return cls(cfg, comps, length)


def _standard_vector(rep: WittRep, s: int):
    """Slot -i as standard Witt coordinate x_{s-1-i} (None = exact zero)."""
    return [rep.components.get(-(s - 1 - j)) for j in range(s)]


def _eval_terms(terms, xs, ys, cfg: FieldConfig):
    """Evaluate one structure polynomial (mod p) on series arguments.

    Terms touching an exactly-zero argument vanish and impose no precision
    cap, so they are skipped rather than materialised.
    """
    acc = None
    cache: dict[tuple[int, int, int], LocalElement] = {}

    def power(side: int, j: int, e: int) -> LocalElement | None:
        base = xs[j] if side == 0 else ys[j]
        if base is None:
            return None
        key = (side, j, e)
        if key not in cache:
            cache[key] = base**e
        return cache[key]

    for ex, ey, c in terms:
        factors = []
        dead = False
        for j, e in enumerate(ex):
            if e:
                f = power(0, j, e)
                if f is None:
                    dead = True
                    break
                factors.append(f)
        if not dead:
            for j, e in enumerate(ey):
                if e:
                    f = power(1, j, e)
                    if f is None:
                        dead = True
                        break
                    factors.append(f)
        if dead:
            continue
        if not factors:
            raise ArithmeticError("structure polynomial has a constant term")
        term = factors[0]
        for f in factors[1:]:
            term = term * f
        if c != 1:
            term = term.scalar_mul(cfg.constant(c))
        acc = term if acc is None else acc + term
    return acc


def witt_add(a: WittRep, b: WittRep) -> WittRep:
    if a.cfg != b.cfg:
        raise ValueError("witt vectors live over different fields")
    s = max(a.length, b.length)
    polys = build_structure_polynomials(a.cfg.p, s)
    xs = _standard_vector(a, s)
    ys = _standard_vector(b, s)
    out = {}
    for j in range(s):
        val = _eval_terms(polys.add_terms[j], xs, ys, a.cfg)
        if val is not None:
            out[-(s - 1 - j)] = val
    return WittRep(a.cfg, out, s)


def witt_neg(a: WittRep) -> WittRep:
    s = a.length
    polys = build_structure_polynomials(a.cfg.p, s)
    xs = _standard_vector(a, s)
    ys = [None] * s
    out = {}
    for j in range(s):
        val = _eval_terms(polys.neg_terms[j], xs, ys, a.cfg)
        if val is not None:
            out[-(s - 1 - j)] = val
    return WittRep(a.cfg, out, s)


def witt_sub(a: WittRep, b: WittRep) -> WittRep:
    return witt_add(a, witt_neg(b))


def frobenius(a: WittRep) -> WittRep:
    return WittRep(
        a.cfg, {i: c.frobenius() for i, c in a.components.items()}, a.length
    )


def verschiebung(a: WittRep) -> WittRep:
    """Shift slot -(i+1) into slot -i; the slot-0 content is dropped."""
    out = {}
    for i, c in a.components.items():
        if i <= -1:
            out[i + 1] = c
    return WittRep(a.cfg, out, a.length)


def apply_F_minus_1(w: WittRep) -> WittRep:
    return witt_sub(frobenius(w), w)


def witt_zero(cfg: FieldConfig, length: int = 1) -> WittRep:
    return WittRep(cfg, {}, length)


def single_slot(cfg: FieldConfig, idx: int, value: LocalElement, length: int) -> WittRep:
    return WittRep(cfg, {idx: value}, length)


def witt_smul(n: int, a: WittRep) -> WittRep:
    """n.a by repeated addition (test oracle for F o V = p)."""
    acc = witt_zero(a.cfg, a.length)
    for _ in range(n):
        acc = witt_add(acc, a)
    return acc
