"""Closed-form Hilbert-Kunz functions over elliptic curves, in exact rationals.

Every evaluator returns ``(e_hk, phi(q), gamma(q))``.  The h^1 correction
terms that appear when q*nu is integral are never guessed; they come from an
:class:`H1Policy`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .errors import DecompositionInconsistent, H1Unresolved, InvalidInput, NonIntegralLength
from .polynomials import prime_power_exponent

Triple = tuple[Fraction, Fraction, Fraction]


@dataclass(frozen=True)
class SummandData:
    """An indecomposable summand of the syzygy bundle Syz(f_1..f_n)(0)."""

    rank: int
    degree: int

    def __post_init__(self):
        if self.rank < 1:
            raise InvalidInput("summand rank must be >= 1")

    def nu(self, delta: int) -> Fraction:
        return Fraction(-self.degree, self.rank * delta)

    @property
    def slope(self) -> Fraction:
        return Fraction(self.degree, self.rank)


def pers(q: int, s: SummandData, delta: int) -> Fraction:
    """ceil(q nu) - q nu for nu = -deg/(rk delta)."""
    if delta < 1:
        raise InvalidInput("curve degree must be >= 1")
    den = s.rank * delta
    return Fraction((q * s.degree) % den, den)


# --- h^1 policies -------------------------------------------------------------

class H1Policy:
    """Supplies sum_j h^1(S_j^q(ceil(q nu_j))) for the summands with integral q nu_j."""

    def h1_total(self, q: int, delta: int, summands: Sequence[SummandData]) -> int:
        raise NotImplementedError


@dataclass(frozen=True)
class AutoZero(H1Policy):
    """h^1 = 0 where q nu_j is not integral; refuse to guess otherwise."""

    def h1_total(self, q, delta, summands):
        bad = [s for s in summands if (q * s.nu(delta)).denominator == 1]
        if bad:
            raise H1Unresolved(
                f"q={q}: q*nu is integral for summand(s) {[(s.rank, s.degree) for s in bad]}; "
                "an h^1 value must be supplied")
        return 0


@dataclass(frozen=True)
class Constant(H1Policy):
    """Fixed per-summand h^1 values, used wherever q nu_j is integral.

    ``by_q`` overrides the values for particular q (pre-periodic part).
    """

    values: tuple[int, ...]
    by_q: tuple[tuple[int, tuple[int, ...]], ...] = ()

    def __post_init__(self):
        if any(v < 0 for v in self.values) or any(v < 0 for _, vs in self.by_q for v in vs):
            raise InvalidInput("h^1 values must be non-negative")

    def h1_total(self, q, delta, summands):
        values = dict(self.by_q).get(q, self.values)
        if len(values) != len(summands):
            raise InvalidInput("one h^1 value per summand is required")
        return sum(v for v, s in zip(values, summands) if (q * s.nu(delta)).denominator == 1)


@dataclass
class OracleBacked(H1Policy):
    """Reads h^1 off the brute-force oracle.

    ``h1_of(q, m)`` must return h^1(Syz(f_1^q..f_n^q)(m)) for the whole
    bundle.  Summands sharing an integral q*nu are handled together; summands
    of larger nu contribute -deg(S_k^q(m)) to h^1 there and are subtracted.
    """

    h1_of: Callable[[int, int], int]
    cache: dict = field(default_factory=dict)

    def h1_total(self, q, delta, summands):
        total = 0
        seen = set()
        for s in summands:
            qnu = q * s.nu(delta)
            if qnu.denominator != 1 or qnu in seen:
                continue
            seen.add(qnu)
            m = int(qnu)
            if m < 0:
                raise H1Unresolved(f"negative twist {m} needed for the h^1 term")
            key = (q, m)
            if key not in self.cache:
                self.cache[key] = self.h1_of(q, m)
            whole = self.cache[key]
            # summands with smaller nu have positive degree at m, so h^1 = 0
            others = sum(-(q * o.degree + m * o.rank * delta)
                         for o in summands if q * o.nu(delta) > qnu)
            total += whole - others
        return total


# --- evaluators -----------------------------------------------------------------

def check_decomposition(delta: int, d_list: Sequence[int], summands: Sequence[SummandData]) -> None:
    if delta < 1:
        raise DecompositionInconsistent("curve degree must be >= 1")
    if not summands:
        raise DecompositionInconsistent("empty decomposition")
    n = len(d_list)
    if sum(s.rank for s in summands) != n - 1:
        raise DecompositionInconsistent(f"ranks sum to {sum(s.rank for s in summands)}, expected {n - 1}")
    if sum(s.degree for s in summands) != -delta * sum(d_list):
        raise DecompositionInconsistent(
            f"degrees sum to {sum(s.degree for s in summands)}, expected {-delta * sum(d_list)}")


def _finish(e_hk: Fraction, gamma: Fraction, q: int) -> Triple:
    phi = e_hk * q * q + gamma
    if phi.denominator != 1:
        raise NonIntegralLength(f"phi({q}) = {phi} is not an integer; inputs are inconsistent")
    return e_hk, phi, gamma


def ehk_general(delta: int, d_list: Sequence[int], summands: Sequence[SummandData]) -> Fraction:
    sq = sum(Fraction(s.degree**2, s.rank) for s in summands)
    return (sq - delta * delta * sum(d * d for d in d_list)) / (2 * delta)


def hk_general(delta: int, d_list: Sequence[int], summands: Sequence[SummandData],
               policy: H1Policy, q: int) -> Triple:
    """Hilbert-Kunz function from the decomposition of Syz(f_1..f_n)."""
    check_decomposition(delta, d_list, summands)
    if q < 1:
        raise InvalidInput("q must be a positive prime power")
    e_hk = ehk_general(delta, d_list, summands)
    gamma = Fraction(0)
    for s in summands:
        t = pers(q, s, delta)
        gamma += Fraction(s.rank * delta, 2) * t * (1 - t)
    gamma += policy.h1_total(q, delta, summands)
    gamma -= len(d_list) - 1
    return _finish(e_hk, gamma, q)


def hk_semistable(delta: int, d_list: Sequence[int], policy: H1Policy, q: int) -> Triple:
    """Single semistable summand of rank n-1 and degree -delta * sum(d)."""
    n = len(d_list)
    if n < 2:
        raise DecompositionInconsistent("need at least two generators")
    total = sum(d_list)
    e_hk = Fraction(delta, 2) * (Fraction(total * total, n - 1) - sum(d * d for d in d_list))
    t = Fraction((-q * total) % (n - 1), n - 1)
    gamma = Fraction((n - 1) * delta, 2) * t * (1 - t)
    gamma += policy.h1_total(q, delta, [SummandData(n - 1, -delta * total)])
    gamma -= n - 1
    return _finish(e_hk, gamma, q)


def is_p_power(n: int, p: int) -> bool:
    try:
        return prime_power_exponent(n, p) >= 1
    except InvalidInput:
        return False


def hk_complete_embedding(N: int, q: int, p: int, h1_value: int | H1Policy | None = None) -> Triple:
    """Maximal ideal of an elliptic curve embedded in P^N by a complete linear system."""
    if N < 2:
        raise InvalidInput("N must be >= 2")
    prime_power_exponent(q, p)
    delta = N + 1
    e_hk = Fraction((N + 1) ** 2, 2 * N)
    if q == 1:
        return e_hk, Fraction(1), 1 - e_hk
    r = (-q) % N
    gamma = Fraction(N + 1, 2) * r * (1 - Fraction(r, N)) - N
    if r == 0:
        # q (N+1)/N integral: only possible when N is a power of p
        if h1_value is None:
            raise H1Unresolved(f"N={N} divides q={q}: supply h^1(Omega(q(N+1)/N))")
        if isinstance(h1_value, H1Policy):
            gamma += h1_value.h1_total(q, delta, [SummandData(N, -delta * delta)])
        else:
            if h1_value < 0:
                raise InvalidInput("h^1 must be non-negative")
            gamma += h1_value
    return _finish(e_hk, gamma, q)


@dataclass(frozen=True)
class SplittingCase:
    """Splitting type of Omega_{P^3}|C: 'i' (rank 3), 'ii' (2+1) or 'iii' (1+1+1)."""

    case: str
    summands: tuple[SummandData, ...]

    def __post_init__(self):
        ranks = sorted((s.rank for s in self.summands), reverse=True)
        expected = {"i": [3], "ii": [2, 1], "iii": [1, 1, 1]}.get(self.case)
        if expected is None:
            raise InvalidInput(f"unknown splitting case {self.case!r}")
        if ranks != expected:
            raise DecompositionInconsistent(f"case {self.case} needs ranks {expected}, got {ranks}")

    @classmethod
    def indecomposable(cls, delta: int) -> "SplittingCase":
        return cls("i", (SummandData(3, -4 * delta),))


def hk_space_curve(delta: int, case: SplittingCase, q: int, p: int, policy: H1Policy | None = None) -> Triple:
    """Ideal (X_0..X_3) of an elliptic curve of degree delta in P^3."""
    prime_power_exponent(q, p)
    policy = policy or AutoZero()
    summands = case.summands
    if sum(s.degree for s in summands) != -4 * delta:
        raise DecompositionInconsistent(f"Omega|C must have degree {-4 * delta}")
    if case.case == "i":
        e_hk = Fraction(2 * delta, 3)
        r = (-q) % 3
        if r:
            gamma = Fraction(delta, 3) - 3
        else:
            gamma = Fraction(policy.h1_total(q, delta, summands)) - 3
        return _finish(e_hk, gamma, q)
    e_hk = (sum(Fraction(s.degree**2, s.rank) for s in summands) - 4 * delta * delta) / (2 * delta)
    gamma = Fraction(0)
    for s in summands:
        t = pers(q, s, delta)
        gamma += Fraction(s.rank * delta, 2) * t * (1 - t)
    gamma += policy.h1_total(q, delta, summands) - 3
    return _finish(e_hk, gamma, q)


@dataclass(frozen=True)
class BoundCheck:
    e_hk: Fraction
    bound: Fraction
    equality: bool
    equal_slopes: bool

    @property
    def holds(self) -> bool:
        """e_hk >= 2 delta/3, with equality exactly for equal slopes."""
        return self.e_hk >= self.bound and self.equality == self.equal_slopes


def ehk_lower_bound_check(delta: int, summands: Sequence[SummandData]) -> BoundCheck:
    """Compare e_HK of a rank-3, degree -4 delta splitting with 2 delta/3."""
    if sum(s.rank for s in summands) != 3 or sum(s.degree for s in summands) != -4 * delta:
        raise DecompositionInconsistent("need rank 3 and total degree -4*delta")
    e_hk = ehk_general(delta, [1, 1, 1, 1], summands)
    bound = Fraction(2 * delta, 3)
    slopes = {s.slope for s in summands}
    return BoundCheck(e_hk, bound, e_hk == bound, len(slopes) == 1)


def gamma_cycle(gamma_of: Callable[[int], Fraction], p: int, e_max: int = 12) -> tuple[int, int] | None:
    """(start e, period) of gamma(p^e) over 1 <= e <= e_max, if a cycle shows."""
    from .oracle import detect_cycle
    seq = [gamma_of(p**e) for e in range(1, e_max + 1)]
    cyc = detect_cycle(seq, min_repeats=2)
    return (cyc[0] + 1, cyc[1]) if cyc else None



@dataclass
class HKClosedForm:
    """A closed form phi(q) = e_hk q^2 + gamma(q) with its producing rule."""

    e_hk: Fraction
    gamma_fn: Callable[[int], Fraction]
    provenance: str

    def phi(self, q: int) -> Fraction:
        return self.e_hk * q * q + self.gamma_fn(q)
