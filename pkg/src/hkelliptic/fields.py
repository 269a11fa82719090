"""Finite fields F_p and F_{p^k}.

Elements are encoded as plain integers ``sum(c_i * p**i)`` so that matrices
over any of these fields can live in numpy ``int64`` arrays.  The
:class:`FieldCtx` carries both scalar operations on encoded integers and
vectorized operations on arrays of them; :class:`FieldElement` is the
user-facing scalar wrapper.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import CtxMismatch, DegreeTooLarge, DivisionByZero, InvalidInput, NotPrime

MAX_EXTENSION_DEGREE = 8


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# --- dense polynomials over F_p, coefficient lists low-to-high -------------

def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = _poly_trim(list(a))
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _poly_trim(a)
    return a


def _is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Brute-force check: no monic factor of degree <= k/2."""
    k = len(modulus) - 1
    if k <= 1:
        return k == 1
    for d in range(1, k // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _poly_mod(modulus, list(low) + [1], p):
                return False
    return True


def _monic_candidates(p: int, k: int):
    """Monic degree-k polynomials ordered by their integer encoding."""
    for code in range(p**k):
        low = [(code // p**i) % p for i in range(k)]
        yield tuple(low) + (1,)


@dataclass(frozen=True)
class FieldCtx:
    """The field F_p[t]/(modulus) of order p**k."""

    p: int
    k: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise NotPrime(f"{self.p} is not prime")
        if not 1 <= self.k <= MAX_EXTENSION_DEGREE:
            raise DegreeTooLarge(f"extension degree {self.k} outside 1..{MAX_EXTENSION_DEGREE}")
        if len(self.modulus) != self.k + 1 or self.modulus[-1] != 1:
            raise InvalidInput("modulus must be monic of degree k")
        if any(not 0 <= c < self.p for c in self.modulus):
            raise InvalidInput("modulus coefficients must lie in [0, p)")
        if self.k > 1 and not _is_irreducible(self.modulus, self.p):
            raise InvalidInput(f"modulus {self.modulus} is reducible over F_{self.p}")

    @property
    def order(self) -> int:
        return self.p**self.k

    @property
    def is_prime_field(self) -> bool:
        return self.k == 1

    def __repr__(self) -> str:
        if self.k == 1:
            return f"F_{self.p}"
        return f"F_{self.order}[mod {list(self.modulus)}]"

    def to_json(self) -> dict:
        return {"p": self.p, "k": self.k}

    # --- encoding ----------------------------------------------------------

    def encode(self, coeffs: Iterable[int] | int) -> int:
        if isinstance(coeffs, (int, np.integer)):
            return int(coeffs) % self.p
        coeffs = list(coeffs)
        if len(coeffs) > self.k:
            coeffs = _poly_mod(coeffs, self.modulus, self.p)
        return sum((int(c) % self.p) * self.p**i for i, c in enumerate(coeffs))

    def decode(self, a: int) -> list[int]:
        return [(a // self.p**i) % self.p for i in range(self.k)]

    def element(self, value: Iterable[int] | int) -> "FieldElement":
        return FieldElement(self, self.encode(value))

    def gen(self) -> "FieldElement":
        """The class of t (equal to 0 in a prime field)."""
        return FieldElement(self, self.p % self.order if self.k > 1 else 0)

    def elements(self) -> list["FieldElement"]:
        return [FieldElement(self, a) for a in range(self.order)]

    # --- scalar arithmetic on encoded ints ---------------------------------

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        out, place = 0, 1
        for _ in range(self.k):
            out += ((a % self.p + b % self.p) % self.p) * place
            a //= self.p
            b //= self.p
            place *= self.p
        return out

    def neg(self, a: int) -> int:
        if self.k == 1:
            return -a % self.p
        if self.p == 2:
            return a
        return self.encode([-c for c in self.decode(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        da, db = self.decode(a), self.decode(b)
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        return self.encode(_poly_mod([c % self.p for c in prod], self.modulus, self.p))

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            return self.pow(self.inv(a), -n)
        result, base = 1, a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero(f"inverse of zero in {self!r}")
        if self.k == 1:
            return pow(a, self.p - 2, self.p)
        return self.pow(a, self.order - 2)

    # --- vectorized arithmetic on int64 arrays -----------------------------

    @cached_property
    def _tables(self) -> tuple[np.ndarray, np.ndarray]:
        """(exp, log) tables for a primitive element of the extension field."""
        n = self.order
        factors = _prime_factors(n - 1)
        for g in range(2, n):
            if all(self.pow(g, (n - 1) // r) != 1 for r in factors):
                break
        else:  # n == 2 never reaches here since k > 1
            g = 1
        exp = np.zeros(n - 1, dtype=np.int64)
        log = np.zeros(n, dtype=np.int64)
        x = 1
        for i in range(n - 1):
            exp[i] = x
            log[x] = i
            x = self.mul(x, g)
        return exp, log

    def vadd(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        p = self.p
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        place = 1
        for _ in range(self.k):
            out += ((a % p + b % p) % p) * place
            a = a // p
            b = b // p
            place *= p
        return out

    def vneg(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.k == 1:
            return (-a) % self.p
        if self.p == 2:
            return a.copy()
        p = self.p
        out = np.zeros_like(a)
        place = 1
        for _ in range(self.k):
            out += ((-(a % p)) % p) * place
            a = a // p
            place *= p
        return out

    def vsub(self, a, b):
        if self.k == 1:
            return (np.asarray(a, dtype=np.int64) - np.asarray(b, dtype=np.int64)) % self.p
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b):
        """Elementwise product with numpy broadcasting."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.k == 1:
            return (a * b) % self.p
        exp, log = self._tables
        out = exp[(log[a] + log[b]) % (self.order - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def vpow(self, a, n: int):
        a = np.asarray(a, dtype=np.int64)
        if self.k == 1:
            out = np.ones_like(a)
            base = a % self.p
            while n:
                if n & 1:
                    out = out * base % self.p
                base = base * base % self.p
                n >>= 1
            return out
        exp, log = self._tables
        out = exp[(log[a] * n) % (self.order - 1)]
        return np.where(a == 0, 0 if n else 1, out)

    def matmul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.k == 1:
            # entries < p, so each product < p^2; chunk the inner dimension
            # to stay clear of int64 overflow for large p
            limit = max(1, (2**62) // max(1, (self.p - 1) ** 2))
            if a.shape[1] <= limit:
                return (a @ b) % self.p
            out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
            for s in range(0, a.shape[1], limit):
                out = (out + a[:, s:s + limit] @ b[s:s + limit]) % self.p
            return out
        out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
        for j in range(a.shape[1]):
            out = self.vadd(out, self.vmul(a[:, j:j + 1], b[j:j + 1, :]))
        return out


@lru_cache(maxsize=None)
def make_extension(p: int, k: int = 1) -> FieldCtx:
    """F_{p^k} with the smallest monic irreducible modulus (by integer encoding)."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if not 1 <= k <= MAX_EXTENSION_DEGREE:
        raise DegreeTooLarge(f"extension degree {k} outside 1..{MAX_EXTENSION_DEGREE}")
    if k == 1:
        return FieldCtx(p, 1, (0, 1))
    for cand in _monic_candidates(p, k):
        if _is_irreducible(cand, p):
            return FieldCtx(p, k, cand)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


def field_from_json(obj: dict) -> FieldCtx:
    try:
        p = int(obj["p"])
        k = int(obj.get("k", 1))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"bad field spec {obj!r}") from exc
    if "modulus" in obj:
        return FieldCtx(p, k, tuple(int(c) for c in obj["modulus"]))
    return make_extension(p, k)


class FieldElement:
    __slots__ = ("ctx", "value")

    def __init__(self, ctx: FieldCtx, value: int):
        self.ctx = ctx
        self.value = int(value)

    @property
    def coeffs(self) -> list[int]:
        return self.ctx.decode(self.value)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.ctx != self.ctx:
                raise CtxMismatch(f"{self.ctx!r} vs {other.ctx!r}")
            return other.value
        if isinstance(other, int):
            return self.ctx.encode(other)
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.ctx, self.ctx.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.ctx, self.ctx.sub(self.value, b))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.ctx, self.ctx.mul(self.value, b))

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(self.ctx, self.ctx.neg(self.value))

    def inv(self) -> "FieldElement":
        return FieldElement(self.ctx, self.ctx.inv(self.value))

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.ctx, self.ctx.mul(self.value, self.ctx.inv(b)))

    def __pow__(self, n: int):
        return FieldElement(self.ctx, self.ctx.pow(self.value, n))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.ctx == other.ctx and self.value == other.value
        if isinstance(other, int):
            return self.value == self.ctx.encode(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx, self.value))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        if self.ctx.k == 1:
            return f"{self.value} (mod {self.ctx.p})"
        return f"{self.coeffs} in {self.ctx!r}"


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def neg(a: FieldElement) -> FieldElement:
    return -a


def inv(a: FieldElement) -> FieldElement:
    return a.inv()
