"""Exact arithmetic in residue fields.

Two kinds of residue field are supported: the imperfect rational function
field k = F_p(u_1, ..., u_r), and perfections of such fields.  An element
is a canonical fraction of sparse multivariate polynomials over GF(p)
together with a *scale* m >= 0: the value of (num/den, m) is the fraction
evaluated at v -> v^(p^-m) for every variable v.  Scale 0 is forced on
unperfected fields; minimality of the scale is part of the canonical form,
which makes equality a structural comparison.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from sympy import GF
from sympy.polys.rings import PolyRing, ring as _sympy_ring

from .errors import (
    DivisionByZero,
    NotAPthPower,
    UnknownVariable,
    ZeroDenominator,
)

_PRIMES_CACHE: dict[int, bool] = {}


def is_prime(n: int) -> bool:
    if n not in _PRIMES_CACHE:
        _PRIMES_CACHE[n] = n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))
    return _PRIMES_CACHE[n]


@lru_cache(maxsize=None)
def _build_ring(p: int, names: tuple[str, ...]) -> PolyRing:
    result = _sympy_ring(list(names), GF(p))
    return result[0]


@dataclass(frozen=True)
class FieldConfig:
    """A residue field: the prime, its variables, and perfectedness.

    For k = F_p(u_1,...,u_r) use ``basis_vars`` (they form a p-basis).  For
    a perfection the variables go in ``perfection_vars`` and ``perfected``
    is set; such a field has no p-basis and trivial differentials.
    """

    p: int
    basis_vars: tuple[str, ...] = ()
    perfection_vars: tuple[str, ...] = ()
    perfected: bool = False

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        names = self.variables
        if len(set(names)) != len(names):
            raise ValueError("variable names must be distinct")
        if self.basis_vars and self.perfection_vars:
            raise ValueError("a field has either a p-basis or perfection variables")
        if self.perfected and self.basis_vars:
            raise ValueError("perfected fields carry perfection_vars, not basis_vars")
        if not self.perfected and self.perfection_vars:
            raise ValueError("perfection_vars require perfected=True")

    @property
    def variables(self) -> tuple[str, ...]:
        return self.basis_vars + self.perfection_vars

    @property
    def ring(self) -> PolyRing:
        return _build_ring(self.p, self.variables)

    def gen(self, name: str):
        try:
            idx = self.variables.index(name)
        except ValueError:
            raise UnknownVariable(f"{name!r} is not a variable of {self}") from None
        return self.ring.gens[idx]

    # element constructors ------------------------------------------------

    def zero(self) -> "ResidueElement":
        return ResidueElement(self, self.ring.zero, self.ring.one, 0, _raw=True)

    def one(self) -> "ResidueElement":
        return ResidueElement(self, self.ring.one, self.ring.one, 0, _raw=True)

    def constant(self, c: int) -> "ResidueElement":
        return self.from_poly(self.ring.ground_new(c % self.p))

    def variable(self, name: str) -> "ResidueElement":
        return self.from_poly(self.gen(name))

    def from_poly(self, num, den=None, scale: int = 0) -> "ResidueElement":
        return rf_normalize(self, num, den if den is not None else self.ring.one, scale)


def _stretch(poly, k: int):
    """Substitute v -> v^k for every variable (coefficients untouched)."""
    if k == 1 or poly.is_ground:
        return poly
    ring_ = poly.ring
    return ring_.from_dict({tuple(e * k for e in m): c for m, c in poly.terms()})


def _shrinkable(poly, p: int) -> bool:
    return all(e % p == 0 for m in poly.monoms() for e in m)


def _shrink(poly, p: int):
    ring_ = poly.ring
    return ring_.from_dict({tuple(e // p for e in m): c for m, c in poly.terms()})


class ResidueElement:
    """Canonical fraction (num/den, scale) over a :class:`FieldConfig`.

    Canonical means gcd(num, den) = 1, the lex-leading coefficient of den
    is 1, zero is (0, 1, 0), and the scale is minimal (some exponent of
    num or den is prime to p whenever scale > 0).  Instances are immutable.
    """

    __slots__ = ("cfg", "num", "den", "scale")

    def __init__(self, cfg: FieldConfig, num, den, scale: int, _raw: bool = False):
        if not _raw:
            raise TypeError("use rf_normalize / FieldConfig constructors")
        object.__setattr__(self, "cfg", cfg)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "scale", scale)

    def __setattr__(self, *a):
        raise AttributeError("ResidueElement is immutable")

    # predicates -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.num

    def is_one(self) -> bool:
        return self.scale == 0 and self.num == self.cfg.ring.one and self.den == self.cfg.ring.one

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = self.cfg.constant(other)
        if not isinstance(other, ResidueElement):
            return NotImplemented
        return (
            self.cfg == other.cfg
            and self.scale == other.scale
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.scale, self.num, self.den))

    # arithmetic -----------------------------------------------------------

    def _common_scale(self, other: "ResidueElement"):
        s = max(self.scale, other.scale)
        p = self.cfg.p
        a_n, a_d = _stretch(self.num, p ** (s - self.scale)), _stretch(self.den, p ** (s - self.scale))
        b_n, b_d = _stretch(other.num, p ** (s - other.scale)), _stretch(other.den, p ** (s - other.scale))
        return a_n, a_d, b_n, b_d, s

    def _check_cfg(self, other: "ResidueElement"):
        if self.cfg != other.cfg:
            raise ValueError("operands live over different field configs")

    def __add__(self, other: "ResidueElement") -> "ResidueElement":
        self._check_cfg(other)
        an, ad, bn, bd, s = self._common_scale(other)
        return rf_normalize(self.cfg, an * bd + bn * ad, ad * bd, s)

    def __sub__(self, other: "ResidueElement") -> "ResidueElement":
        self._check_cfg(other)
        an, ad, bn, bd, s = self._common_scale(other)
        return rf_normalize(self.cfg, an * bd - bn * ad, ad * bd, s)

    def __neg__(self) -> "ResidueElement":
        return rf_normalize(self.cfg, -self.num, self.den, self.scale)

    def __mul__(self, other: "ResidueElement") -> "ResidueElement":
        self._check_cfg(other)
        an, ad, bn, bd, s = self._common_scale(other)
        return rf_normalize(self.cfg, an * bn, ad * bd, s)

    def __truediv__(self, other: "ResidueElement") -> "ResidueElement":
        self._check_cfg(other)
        if other.is_zero():
            raise DivisionByZero("division by zero residue element")
        an, ad, bn, bd, s = self._common_scale(other)
        return rf_normalize(self.cfg, an * bd, ad * bn, s)

    def inverse(self) -> "ResidueElement":
        return self.cfg.one() / self

    def __pow__(self, k: int) -> "ResidueElement":
        if k < 0:
            return self.inverse() ** (-k)
        result = self.cfg.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def frobenius(self) -> "ResidueElement":
        """The p-th power.  On a scaled element this just lowers the scale."""
        if self.scale > 0:
            return rf_normalize(self.cfg, self.num, self.den, self.scale - 1)
        p = self.cfg.p
        return rf_normalize(self.cfg, _stretch(self.num, p), _stretch(self.den, p), 0)

    def __repr__(self):
        from .textio import residue_to_str

        return f"ResidueElement({residue_to_str(self)})"


def rf_normalize(cfg: FieldConfig, num, den, scale: int = 0) -> ResidueElement:
    """Bring a raw fraction to canonical form.

    Raises ZeroDenominator on den = 0.  The canonical form is what makes
    structural equality decide field equality, so every constructor and
    every arithmetic result funnels through here.
    """
    if not den:
        raise ZeroDenominator("denominator is zero")
    if scale < 0:
        raise ValueError("scale must be non-negative")
    if scale > 0 and not cfg.perfected:
        raise ValueError("scaled elements require a perfected field")
    ring_ = cfg.ring
    if not num:
        return ResidueElement(cfg, ring_.zero, ring_.one, 0, _raw=True)
    if den != ring_.one:
        g = num.gcd(den)
        if not g.is_ground or g.LC != ring_.domain.one:
            num = num.quo(g)
            den = den.quo(g)
        lc = den.LC
        if lc != ring_.domain.one:
            inv = lc ** (-1)
            num = num.mul_ground(inv)
            den = den.mul_ground(inv)
    else:
        lc = den.LC
    p = cfg.p
    while scale > 0 and _shrinkable(num, p) and _shrinkable(den, p):
        num = _shrink(num, p)
        den = _shrink(den, p)
        scale -= 1
    return ResidueElement(cfg, num, den, scale, _raw=True)


def is_pth_power(f: ResidueElement) -> bool:
    """Whether f lies in the subfield of p-th powers.

    Over F_p a polynomial is a p-th power iff every exponent is divisible
    by p (Frobenius is additive and fixes the prime field), and a reduced
    fraction is one iff numerator and denominator both are.  Perfected
    fields are closed under p-th roots, so everything qualifies.
    """
    if f.cfg.perfected:
        return True
    if f.is_zero():
        return True
    p = f.cfg.p
    return _shrinkable(f.num, p) and _shrinkable(f.den, p)


def pth_root(f: ResidueElement) -> ResidueElement:
    """An element r with r^p = f.

    In a perfected field a failed exponent division is realised by a scale
    increment; in k itself non-p-th-powers have no root.
    """
    cfg = f.cfg
    if f.is_zero():
        return cfg.zero()
    p = cfg.p
    if _shrinkable(f.num, p) and _shrinkable(f.den, p):
        return rf_normalize(cfg, _shrink(f.num, p), _shrink(f.den, p), f.scale)
    if cfg.perfected:
        return rf_normalize(cfg, f.num, f.den, f.scale + 1)
    raise NotAPthPower(f"{f!r} is not a p-th power in the base field")


def partial_derivative(f: ResidueElement, var: str) -> ResidueElement:
    """d/du_var by the quotient rule.  Only p-basis variables qualify."""
    cfg = f.cfg
    if cfg.perfected or var not in cfg.basis_vars:
        raise UnknownVariable(f"{var!r} is not a p-basis variable of {cfg}")
    g = cfg.gen(var)
    dnum = f.num.diff(g)
    dden = f.den.diff(g)
    return rf_normalize(cfg, dnum * f.den - f.num * dden, f.den * f.den, 0)


# spec-facing aliases for the binary field operations --------------------

def rf_add(a: ResidueElement, b: ResidueElement) -> ResidueElement:
    return a + b


def rf_sub(a: ResidueElement, b: ResidueElement) -> ResidueElement:
    return a - b


def rf_mul(a: ResidueElement, b: ResidueElement) -> ResidueElement:
    return a * b


def rf_div(a: ResidueElement, b: ResidueElement) -> ResidueElement:
    return a / b
