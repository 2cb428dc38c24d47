"""Truncated Laurent series over a residue field.

A LocalElement is a finite map exponent -> nonzero coefficient plus a
precision bound N: the element is known modulo t^N, and *every* nonzero
coefficient below N is stored.  Exactly representable elements carry the
large sentinel precision EXACT_PREC.  Precision propagates pessimistically
and is never widened silently; anything that cannot certify a coefficient
it needs raises PrecisionExhausted.
"""

from __future__ import annotations

from typing import Mapping

from .errors import (
    InvalidBindingValuation,
    PrecisionExhausted,
    ZeroInverse,
)
from .fields import FieldConfig, ResidueElement

# precision of exactly known elements; large enough that no computation at
# desk scale ever approaches it
EXACT_PREC = 1 << 30
# shifts of exact elements stay above this, so it is the exactness test
EXACT_THRESHOLD = EXACT_PREC >> 1


class LocalElement:
    """Element of k((t)) (or of K^g) known modulo t^prec."""

    __slots__ = ("cfg", "coeffs", "prec")

    def __init__(self, cfg: FieldConfig, coeffs: Mapping[int, ResidueElement], prec: int):
        prec = min(int(prec), EXACT_PREC)
        clean = {}
        for j, c in coeffs.items():
            if j >= prec or c.is_zero():
                continue
            clean[int(j)] = c
        object.__setattr__(self, "cfg", cfg)
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "prec", prec)

    def __setattr__(self, *a):
        raise AttributeError("LocalElement is immutable")

    # inspection -----------------------------------------------------------

    def valuation(self):
        """Least exponent of a nonzero coefficient, or None if none is
        visible (the element is then >= t^prec, possibly exactly zero)."""
        return min(self.coeffs) if self.coeffs else None

    def val_or_prec(self) -> int:
        v = self.valuation()
        return self.prec if v is None else v

    def is_exact(self) -> bool:
        return self.prec >= EXACT_THRESHOLD

    def coefficient(self, j: int) -> ResidueElement:
        if j >= self.prec:
            raise PrecisionExhausted(
                f"coefficient of t^{j} requested but element only known mod t^{self.prec}"
            )
        return self.coeffs.get(j, self.cfg.zero())

    def leading(self):
        """(valuation, leading coefficient); None for a zero-so-far element."""
        v = self.valuation()
        if v is None:
            return None
        return v, self.coeffs[v]

    def __eq__(self, other):
        if not isinstance(other, LocalElement):
            return NotImplemented
        if self.cfg != other.cfg or self.coeffs != other.coeffs:
            return False
        # exact elements are equal regardless of sentinel-precision noise
        if self.is_exact() and other.is_exact():
            return True
        return self.prec == other.prec

    def __repr__(self):
        from .textio import series_to_str

        return f"LocalElement({series_to_str(self)})"

    # arithmetic -----------------------------------------------------------

    def _check(self, other: "LocalElement"):
        if self.cfg != other.cfg:
            raise ValueError("series live over different field configs")

    def __add__(self, other: "LocalElement") -> "LocalElement":
        self._check(other)
        prec = min(self.prec, other.prec)
        out = dict(self.coeffs)
        for j, c in other.coeffs.items():
            if j in out:
                out[j] = out[j] + c
            else:
                out[j] = c
        return LocalElement(self.cfg, out, prec)

    def __neg__(self) -> "LocalElement":
        return LocalElement(self.cfg, {j: -c for j, c in self.coeffs.items()}, self.prec)

    def __sub__(self, other: "LocalElement") -> "LocalElement":
        return self + (-other)

    def __mul__(self, other: "LocalElement") -> "LocalElement":
        self._check(other)
        prec = min(
            self.val_or_prec() + other.prec,
            other.val_or_prec() + self.prec,
        )
        out: dict[int, ResidueElement] = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                e = i + j
                if e >= prec:
                    continue
                ab = a * b
                if e in out:
                    out[e] = out[e] + ab
                else:
                    out[e] = ab
        return LocalElement(self.cfg, out, prec)

    def scalar_mul(self, c: ResidueElement) -> "LocalElement":
        if c.is_zero():
            # an exact zero factor annihilates even the unknown tail
            return LocalElement(self.cfg, {}, EXACT_PREC)
        return LocalElement(self.cfg, {j: a * c for j, a in self.coeffs.items()}, self.prec)

    def shift(self, k: int) -> "LocalElement":
        """Multiplication by t^k."""
        return LocalElement(
            self.cfg, {j + k: c for j, c in self.coeffs.items()}, self.prec + k
        )

    def truncate(self, prec: int) -> "LocalElement":
        if prec >= self.prec:
            return self
        return LocalElement(self.cfg, self.coeffs, prec)

    def inverse(self) -> "LocalElement":
        lead = self.leading()
        if lead is None:
            raise ZeroInverse(
                f"cannot invert a series with no nonzero coefficient below t^{self.prec}"
            )
        v, c0 = lead
        if self.is_exact():
            if len(self.coeffs) == 1:
                return LocalElement(self.cfg, {-v: c0.inverse()}, EXACT_PREC)
            raise PrecisionExhausted(
                "inverse of an exact multi-term series is an infinite series; "
                "truncate to the precision you need first"
            )
        relprec = self.prec - v
        if relprec <= 0:
            raise PrecisionExhausted("no certified coefficients available for inversion")
        c0inv = c0.inverse()
        # invert the unit part coefficient by coefficient
        unit = {j - v: c for j, c in self.coeffs.items()}
        inv: dict[int, ResidueElement] = {0: c0inv}
        for n in range(1, relprec):
            acc = None
            for k, uk in unit.items():
                if 0 < k <= n and (n - k) in inv:
                    term = uk * inv[n - k]
                    acc = term if acc is None else acc + term
            if acc is not None and not acc.is_zero():
                inv[n] = -(c0inv * acc)
        return LocalElement(self.cfg, {j - v: c for j, c in inv.items()}, relprec - v)

    def __pow__(self, k: int) -> "LocalElement":
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return constant_series(self.cfg, self.cfg.one(), EXACT_PREC)
        result = None
        base = self
        while k:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def frobenius(self) -> "LocalElement":
        """The p-th power, computed exactly (char p kills cross terms)."""
        p = self.cfg.p
        return LocalElement(
            self.cfg, {j * p: c.frobenius() for j, c in self.coeffs.items()}, self.prec * p
        )

    def stretch_t(self, e: int) -> "LocalElement":
        """Substitution t -> t^e for a positive integer e."""
        if e < 1:
            raise InvalidBindingValuation("t must map to a series of valuation >= 1")
        return LocalElement(self.cfg, {j * e: c for j, c in self.coeffs.items()}, self.prec * e)

    def map_coefficients(self, fn) -> "LocalElement":
        return LocalElement(self.cfg, {j: fn(c) for j, c in self.coeffs.items()}, self.prec)


# constructors ------------------------------------------------------------

def zero_series(cfg: FieldConfig, prec: int = EXACT_PREC) -> LocalElement:
    return LocalElement(cfg, {}, prec)


def constant_series(cfg: FieldConfig, c: ResidueElement, prec: int = EXACT_PREC) -> LocalElement:
    return LocalElement(cfg, {0: c}, prec)


def monomial(cfg: FieldConfig, c: ResidueElement, exp: int, prec: int = EXACT_PREC) -> LocalElement:
    return LocalElement(cfg, {exp: c}, prec)


def from_terms(cfg: FieldConfig, terms: Mapping[int, ResidueElement], prec: int = EXACT_PREC) -> LocalElement:
    return LocalElement(cfg, terms, prec)


# spec-facing operation names ----------------------------------------------

def series_add(f: LocalElement, g: LocalElement) -> LocalElement:
    return f + g


def series_mul(f: LocalElement, g: LocalElement) -> LocalElement:
    return f * g


def series_invert(f: LocalElement) -> LocalElement:
    return f.inverse()


def valuation(f: LocalElement):
    return f.valuation()


# substitution -------------------------------------------------------------

def _evaluate_fraction(coeff: ResidueElement, values: dict[str, LocalElement],
                       target: FieldConfig) -> LocalElement:
    """Evaluate a residue-field fraction at series arguments."""
    num = _evaluate_poly(coeff.num, coeff.cfg, values, target)
    if coeff.den == coeff.cfg.ring.one:
        return num
    den = _evaluate_poly(coeff.den, coeff.cfg, values, target)
    return num * den.inverse()


def _evaluate_poly(poly, cfg: FieldConfig, values: dict[str, LocalElement],
                   target: FieldConfig) -> LocalElement:
    names = cfg.variables
    power_cache: dict[tuple[str, int], LocalElement] = {}

    def power(name: str, e: int) -> LocalElement:
        key = (name, e)
        if key not in power_cache:
            power_cache[key] = values[name] ** e
        return power_cache[key]

    acc = None
    for monom, c in poly.terms():
        term = constant_series(target, target.constant(int(c)))
        for name, e in zip(names, monom):
            if e:
                term = term * power(name, e)
        acc = term if acc is None else acc + term
    if acc is None:
        acc = zero_series(target)
    return acc


def substitute(f: LocalElement, bindings: Mapping[str, LocalElement],
               target: FieldConfig | None = None) -> LocalElement:
    """Exact substitution of series for residue variables and/or t.

    Residue-variable bindings must have valuation >= 0 and a t binding
    valuation >= 1 (checked).  Unbound residue variables must exist in the
    target field and map to themselves.  Precision propagates from both
    the bindings and the truncation tail of f itself.
    """
    src = f.cfg
    t_binding = bindings.get("t")
    residue_bindings = {k: v for k, v in bindings.items() if k != "t"}
    if target is None:
        target = t_binding.cfg if t_binding is not None else (
            next(iter(residue_bindings.values())).cfg if residue_bindings else src
        )

    for name, g in residue_bindings.items():
        if name not in src.variables:
            raise InvalidBindingValuation(f"{name!r} is not a variable of the source field")
        v = g.valuation()
        if v is not None and v < 0:
            raise InvalidBindingValuation(f"binding for {name!r} has valuation {v} < 0")
        if v is None and g.prec < 0:
            raise InvalidBindingValuation(f"binding for {name!r} cannot be certified integral")
    if t_binding is not None:
        vt = t_binding.valuation()
        if vt is None or vt < 1:
            raise InvalidBindingValuation("binding for t must have valuation >= 1")
    else:
        vt = 1

    if residue_bindings and any(c.scale != 0 for c in f.coeffs.values()):
        raise InvalidBindingValuation(
            "residue-variable substitution requires scale-0 coefficients"
        )

    values = dict(residue_bindings)
    for name in src.variables:
        if name not in values:
            # identity embedding: the name must exist in the target field
            values[name] = constant_series(target, target.variable(name))

    # tail of f beyond its precision contributes from exponent prec*vt on
    acc = zero_series(target, f.prec * vt)
    t_pows: dict[int, LocalElement] = {}

    def t_power(j: int) -> LocalElement:
        if j not in t_pows:
            t_pows[j] = t_binding ** j
        return t_pows[j]

    for j in sorted(f.coeffs):
        cval = _evaluate_fraction(f.coeffs[j], values, target)
        if t_binding is None:
            term = cval.shift(j)
        else:
            term = cval * t_power(j)
        acc = acc + term
    return acc
