"""Homogeneous polynomials over finite fields.

Monomials are exponent tuples.  Within a degree they are ordered by graded
reverse lexicographic order with ``X0 > X1 > ... > XN``.
"""
from __future__ import annotations

import re
from functools import lru_cache
from typing import Iterable, Mapping

from .errors import CtxMismatch, InvalidInput, NotPPower
from .fields import FieldCtx, FieldElement

Monomial = tuple[int, ...]


def grevlex_key(m: Monomial) -> tuple:
    """Sort key; larger key means larger monomial (for equal degree)."""
    return (sum(m),) + tuple(-e for e in reversed(m))


@lru_cache(maxsize=None)
def monomials(nvars: int, degree: int) -> tuple[Monomial, ...]:
    """All monomials of ``degree`` in ``nvars`` variables, descending grevlex."""
    if degree < 0:
        return ()
    out: list[Monomial] = []

    def rec(prefix: list[int], left: int, slots: int):
        if slots == 1:
            out.append(tuple(prefix + [left]))
            return
        for e in range(left, -1, -1):
            rec(prefix + [e], left - e, slots - 1)

    rec([], degree, nvars)
    out.sort(key=grevlex_key, reverse=True)
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(nvars: int, degree: int) -> dict[Monomial, int]:
    return {m: i for i, m in enumerate(monomials(nvars, degree))}


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(b: Monomial, a: Monomial) -> Monomial:
    return tuple(y - x for x, y in zip(a, b))


def prime_power_exponent(q: int, p: int) -> int:
    """e with q == p**e, else NotPPower."""
    if q < 1:
        raise NotPPower(f"{q} is not a power of {p}")
    e = 0
    while q % p == 0:
        q //= p
        e += 1
    if q != 1:
        raise NotPPower(f"not a power of {p}")
    return e


class HomogeneousPoly:
    """A homogeneous form; ``terms`` maps monomials to encoded field ints."""

    __slots__ = ("ctx", "nvars", "degree", "terms")

    def __init__(self, ctx: FieldCtx, nvars: int, degree: int, terms: Mapping[Monomial, int] | None = None):
        self.ctx = ctx
        self.nvars = nvars
        self.degree = degree
        clean: dict[Monomial, int] = {}
        for mono, c in (terms or {}).items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != nvars or sum(mono) != degree or min(mono) < 0:
                raise InvalidInput(f"monomial {mono} does not have degree {degree} in {nvars} variables")
            c = int(c)
            if c:
                clean[mono] = c
        self.terms = clean

    # --- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, ctx: FieldCtx, nvars: int, degree: int) -> "HomogeneousPoly":
        return cls(ctx, nvars, degree)

    @classmethod
    def one(cls, ctx: FieldCtx, nvars: int) -> "HomogeneousPoly":
        return cls(ctx, nvars, 0, {(0,) * nvars: 1})

    @classmethod
    def variable(cls, ctx: FieldCtx, nvars: int, i: int) -> "HomogeneousPoly":
        e = [0] * nvars
        e[i] = 1
        return cls(ctx, nvars, 1, {tuple(e): 1})

    @classmethod
    def monomial(cls, ctx: FieldCtx, mono: Monomial, coeff: int = 1) -> "HomogeneousPoly":
        return cls(ctx, len(mono), sum(mono), {tuple(mono): coeff})

    # --- basic protocol ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, mono: Monomial) -> FieldElement:
        return FieldElement(self.ctx, self.terms.get(tuple(mono), 0))

    def leading_monomial(self) -> Monomial:
        return max(self.terms, key=grevlex_key)

    def __eq__(self, other):
        if not isinstance(other, HomogeneousPoly):
            return NotImplemented
        if self.ctx != other.ctx or self.nvars != other.nvars:
            return False
        if self.is_zero() and other.is_zero():
            return True
        return self.degree == other.degree and self.terms == other.terms

    def __hash__(self):
        return hash((self.ctx, self.nvars, self.degree, frozenset(self.terms.items())))

    def _check(self, other: "HomogeneousPoly"):
        if self.ctx != other.ctx:
            raise CtxMismatch(f"{self.ctx!r} vs {other.ctx!r}")
        if self.nvars != other.nvars:
            raise InvalidInput("polynomials live in different rings")

    # --- arithmetic --------------------------------------------------------

    def __add__(self, other: "HomogeneousPoly") -> "HomogeneousPoly":
        self._check(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.degree != other.degree:
            raise InvalidInput("sum of forms of different degrees is not homogeneous")
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = self.ctx.add(out.get(m, 0), c)
        return HomogeneousPoly(self.ctx, self.nvars, self.degree, out)

    def __neg__(self) -> "HomogeneousPoly":
        return HomogeneousPoly(self.ctx, self.nvars, self.degree, {m: self.ctx.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other: "HomogeneousPoly") -> "HomogeneousPoly":
        return self + (-other)

    def scale(self, c: int | FieldElement) -> "HomogeneousPoly":
        if isinstance(c, FieldElement):
            if c.ctx != self.ctx:
                raise CtxMismatch(f"{self.ctx!r} vs {c.ctx!r}")
            c = c.value
        else:
            c = self.ctx.encode(c)
        return HomogeneousPoly(self.ctx, self.nvars, self.degree, {m: self.ctx.mul(v, c) for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, FieldElement)):
            return self.scale(other)
        self._check(other)
        out: dict[Monomial, int] = {}
        ctx = self.ctx
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = mono_mul(ma, mb)
                out[m] = ctx.add(out.get(m, 0), ctx.mul(ca, cb))
        return HomogeneousPoly(ctx, self.nvars, self.degree + other.degree, out)

    __rmul__ = __mul__

    def mul_monomial(self, mono: Monomial) -> "HomogeneousPoly":
        return HomogeneousPoly(self.ctx, self.nvars, self.degree + sum(mono),
                               {mono_mul(m, mono): c for m, c in self.terms.items()})

    def __pow__(self, n: int) -> "HomogeneousPoly":
        result = HomogeneousPoly.one(self.ctx, self.nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def frobenius_power(self, q: int) -> "HomogeneousPoly":
        """f**q computed termwise (valid because q is a power of the characteristic)."""
        prime_power_exponent(q, self.ctx.p)
        ctx = self.ctx
        return HomogeneousPoly(ctx, self.nvars, self.degree * q,
                               {tuple(e * q for e in m): ctx.pow(c, q) for m, c in self.terms.items()})

    def derivative(self, i: int) -> "HomogeneousPoly":
        out: dict[Monomial, int] = {}
        ctx = self.ctx
        for m, c in self.terms.items():
            if m[i]:
                e = list(m)
                e[i] -= 1
                out[tuple(e)] = ctx.add(out.get(tuple(e), 0), ctx.mul(c, ctx.encode(m[i])))
        return HomogeneousPoly(ctx, self.nvars, max(self.degree - 1, 0), out)

    def substitute_linear(self, images: list["HomogeneousPoly"]) -> "HomogeneousPoly":
        """Replace X_i by the linear form images[i]."""
        result = HomogeneousPoly.zero(self.ctx, images[0].nvars, self.degree)
        for m, c in self.terms.items():
            term = HomogeneousPoly(self.ctx, images[0].nvars, 0, {(0,) * images[0].nvars: c})
            for i, e in enumerate(m):
                if e:
                    term = term * images[i] ** e
            result = result + term
        return result

    def evaluate(self, point: list[int]) -> int:
        """Value at a point given by encoded field ints."""
        ctx = self.ctx
        total = 0
        for m, c in self.terms.items():
            v = c
            for x, e in zip(point, m):
                if e:
                    v = ctx.mul(v, ctx.pow(x, e))
            total = ctx.add(total, v)
        return total

    # --- text --------------------------------------------------------------

    def to_json(self) -> list[dict]:
        return [{"exps": list(m), "coeff": self.ctx.decode(c)}
                for m, c in sorted(self.terms.items(), key=lambda t: grevlex_key(t[0]), reverse=True)]

    def to_text(self, names: list[str] | None = None) -> str:
        names = names or [f"X{i}" for i in range(self.nvars)]
        if self.is_zero():
            return "0"
        parts = []
        for m, c in sorted(self.terms.items(), key=lambda t: grevlex_key(t[0]), reverse=True):
            factors = []
            if self.ctx.k == 1:
                if c != 1 or not any(m):
                    factors.append(str(c))
            elif c != 1 or not any(m):
                factors.append("[" + ",".join(map(str, self.ctx.decode(c))) + "]")
            for name, e in zip(names, m):
                if e == 1:
                    factors.append(name)
                elif e:
                    factors.append(f"{name}^{e}")
            parts.append("*".join(factors))
        return " + ".join(parts)

    def __repr__(self):
        return f"HomogeneousPoly({self.to_text()!r}, {self.ctx!r})"


def multiply(f: HomogeneousPoly, g: HomogeneousPoly) -> HomogeneousPoly:
    return f * g


def frobenius_power(f: HomogeneousPoly, q: int) -> HomogeneousPoly:
    return f.frobenius_power(q)


_TERM_SPLIT = re.compile(r"\s*([+-])\s*")
_FACTOR = re.compile(r"^([A-Za-z_][A-Za-z_0-9]*|\d+)(?:\^(\d+))?$")


def parse_poly(text: str, ctx: FieldCtx, nvars: int,
               symbols: Mapping[str, Iterable[int] | int] | None = None,
               names: list[str] | None = None) -> HomogeneousPoly:
    """Parse ``"X0^3 + X1^3 + X2^3 + l*X0*X1*X2"``.

    ``symbols`` maps coefficient names to coefficient arrays of field
    elements; ``names`` overrides the default variable names ``X0..XN``.
    Single-letter aliases ``X, Y, Z, W, V`` are accepted when ``names`` is
    not given and ``nvars <= 5``.
    """
    names = list(names) if names else [f"X{i}" for i in range(nvars)]
    var_index = {n: i for i, n in enumerate(names)}
    if len(names) != nvars:
        raise InvalidInput("number of variable names does not match nvars")
    aliases = "XYZWV"
    for i in range(min(nvars, len(aliases))):
        var_index.setdefault(aliases[i], i)
    symbols = {k: ctx.encode(v) for k, v in (symbols or {}).items()}

    text = text.strip()
    if not text:
        raise InvalidInput("empty polynomial")
    if text[0] not in "+-":
        text = "+" + text
    pieces = _TERM_SPLIT.split(text)[1:]
    terms: dict[Monomial, int] = {}
    degree = None
    for sign, body in zip(pieces[0::2], pieces[1::2]):
        coeff = 1
        exps = [0] * nvars
        for factor in body.split("*"):
            factor = factor.strip()
            match = _FACTOR.match(factor)
            if not match:
                raise InvalidInput(f"cannot parse factor {factor!r}")
            atom, power = match.group(1), int(match.group(2) or 1)
            if atom.isdigit():
                coeff = ctx.mul(coeff, ctx.pow(ctx.encode(int(atom)), power))
            elif atom in var_index:
                exps[var_index[atom]] += power
            elif atom in symbols:
                coeff = ctx.mul(coeff, ctx.pow(symbols[atom], power))
            else:
                raise InvalidInput(f"unknown symbol {atom!r}")
        if sign == "-":
            coeff = ctx.neg(coeff)
        mono = tuple(exps)
        if degree is None:
            degree = sum(mono)
        elif sum(mono) != degree:
            raise InvalidInput(f"polynomial {text!r} is not homogeneous")
        terms[mono] = ctx.add(terms.get(mono, 0), coeff)
    return HomogeneousPoly(ctx, nvars, degree, terms)


def poly_from_json(obj, ctx: FieldCtx, nvars: int, symbols=None) -> HomogeneousPoly:
    """Accept either the text form or the term-list form."""
    if isinstance(obj, str):
        return parse_poly(obj, ctx, nvars, symbols)
    if not isinstance(obj, list) or not obj:
        raise InvalidInput(f"bad polynomial {obj!r}")
    terms: dict[Monomial, int] = {}
    degree = None
    for t in obj:
        try:
            mono = tuple(int(e) for e in t["exps"])
            c = ctx.encode(t["coeff"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"bad term {t!r}") from exc
        if degree is None:
            degree = sum(mono)
        terms[mono] = ctx.add(terms.get(mono, 0), c)
    return HomogeneousPoly(ctx, nvars, degree, terms)
