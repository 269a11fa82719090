"""Brute-force Hilbert-Kunz data: colengths of Frobenius powers and syzygy dimensions."""
from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InvalidInput, NoMultiplicity, StopBoundExceeded
from .graded import GradedMap, GradedQuotientPresentation
from .polynomials import HomogeneousPoly, prime_power_exponent

log = logging.getLogger(__name__)


@dataclass
class FrobeniusQuery:
    pres: GradedQuotientPresentation
    ideal: list[HomogeneousPoly]
    q: int

    def __post_init__(self):
        if not self.ideal:
            raise InvalidInput("empty ideal")
        for f in self.ideal:
            if f.degree < 1 or f.is_zero():
                raise InvalidInput("ideal generators must be nonzero forms of positive degree")
            if f.ctx != self.pres.field or f.nvars != self.pres.num_vars:
                raise InvalidInput("ideal generator does not live in the presentation's ring")
        prime_power_exponent(self.q, self.pres.field.p)
        self._powers = None

    @property
    def degrees(self) -> list[int]:
        return [f.degree for f in self.ideal]

    @property
    def n(self) -> int:
        return len(self.ideal)

    @property
    def frobenius_generators(self) -> list[HomogeneousPoly]:
        if self._powers is None:
            self._powers = [f.frobenius_power(self.q) for f in self.ideal]
        return self._powers

    @property
    def stop_bound(self) -> int:
        return self.q * sum(self.degrees) + self.pres.num_vars + 1

    def with_q(self, q: int) -> "FrobeniusQuery":
        return FrobeniusQuery(self.pres, self.ideal, q)

    def graded_map(self, m: int) -> GradedMap:
        return GradedMap(self.pres, self.frobenius_generators, m)


@dataclass
class ColengthProfile:
    q: int
    per_degree: list[tuple[int, int]]
    total: int
    stop_degree: int
    dims: list[tuple[int, int]] = field(default_factory=list)  # (dim R_m, dim I^[q]_m)

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "total": self.total,
            "per_degree": [list(t) for t in self.per_degree],
            "stop_degree": self.stop_degree,
            "dim_R": [d for d, _ in self.dims],
            "dim_I": [i for _, i in self.dims],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ColengthProfile":
        dims = list(zip(obj.get("dim_R", []), obj.get("dim_I", [])))
        return cls(obj["q"], [tuple(t) for t in obj["per_degree"]], obj["total"], obj["stop_degree"],
                   [tuple(d) for d in dims])

    def to_csv(self, header: bool = True) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if header:
            w.writerow(["q", "m", "dim_Rm", "dim_Iq_m", "colength"])
        for (m, c), (dr, di) in zip(self.per_degree, self.dims):
            w.writerow([self.q, m, dr, di, c])
        return buf.getvalue()


@dataclass(frozen=True)
class SyzygyDims:
    q: int
    m: int
    h0: int
    h1: int
    degree_of_bundle: int
    rank: int


def colength(query: FrobeniusQuery, confirm_zeros: int = 0) -> ColengthProfile:
    """length(R/I^[q]) summed degree by degree until the first zero.

    Zero colength is absorbing because R is generated in degree 1.
    ``confirm_zeros`` additionally checks that many further degrees.
    """
    pres = query.pres
    per_degree = []
    dims = []
    total = 0
    m = 0
    while True:
        if m > query.stop_bound:
            raise StopBoundExceeded(f"colength still positive at degree {m} for q={query.q}")
        gmap = query.graded_map(m)
        dim_r = pres.dim(m)
        rk = gmap.image_rank()
        c = dim_r - rk
        per_degree.append((m, c))
        dims.append((dim_r, rk))
        total += c
        if c == 0:
            break
        m += 1
    for extra in range(1, confirm_zeros + 1):
        gmap = query.graded_map(m + extra)
        if pres.dim(m + extra) != gmap.image_rank():
            raise StopBoundExceeded(f"colength reappeared at degree {m + extra}")
    log.debug("q=%d total=%d stop=%d", query.q, total, m)
    return ColengthProfile(query.q, per_degree, total, m, dims)


def syzygy_dims(query: FrobeniusQuery, m: int) -> SyzygyDims:
    """h^0 and h^1 of Syz(f_1^q, ..., f_n^q)(m) on the curve.

    h^0 is the kernel of the multiplication map; h^1 follows from
    Riemann-Roch on a genus-1 curve (chi = degree).
    """
    if m < 0:
        raise InvalidInput("degree must be non-negative")
    delta = query.pres.expected_delta
    if delta is None:
        raise InvalidInput("syzygy dimensions need the curve degree")
    h0 = query.graded_map(m).kernel_dim()
    n = query.n
    deg = delta * (m * (n - 1) - query.q * sum(query.degrees))
    return SyzygyDims(query.q, m, h0, h0 - deg, deg, n - 1)


def exact_sequence_defect(query: FrobeniusQuery, m: int) -> int:
    """dim R_m - sum dim R_{m-q d_i} + h0 - colength_m; always 0."""
    pres = query.pres
    gmap = query.graded_map(m)
    col = pres.dim(m) - gmap.image_rank()
    srcs = sum(pres.dim(m - query.q * d) for d in query.degrees)
    return pres.dim(m) - srcs + gmap.kernel_dim() - col


@dataclass
class GammaSeries:
    p: int
    e_hk: Fraction
    fitted: bool
    values: list[tuple[int, int, Fraction]]       # (q, phi(q), gamma(q))
    cycle: tuple[int, int] | None                   # (first e of the cycle, period)

    def to_json(self) -> dict:
        from .reports import rational_json
        return {
            "p": self.p,
            "e_hk": rational_json(self.e_hk),
            "fitted": self.fitted,
            "values": [{"q": q, "phi": phi, "gamma": rational_json(g)} for q, phi, g in self.values],
            "cycle": list(self.cycle) if self.cycle else None,
        }


def detect_cycle(seq: list, min_repeats: int = 1) -> tuple[int, int] | None:
    """Smallest (start, period) with seq[i] == seq[i+period] for all i >= start.

    Requires at least ``min_repeats`` full repetitions inside the window.
    """
    n = len(seq)
    for start in range(n):
        for period in range(1, n - start):
            if n - start < period * (min_repeats + 1):
                break
            if all(seq[i] == seq[i + period] for i in range(start, n - period)):
                return start, period
    return None


def gamma_series(query: FrobeniusQuery, e_values: list[int], e_hk: Fraction | None = None,
                 profiles: dict[int, ColengthProfile] | None = None) -> GammaSeries:
    """gamma(q) = phi(q) - e_HK q^2 over q = p^e.

    Without ``e_hk`` the multiplicity is fitted from the last two exponents,
    which needs at least three points (the first may be pre-periodic).
    """
    p = query.pres.field.p
    e_values = sorted(set(e_values))
    if e_hk is None and len(e_values) < 3:
        raise NoMultiplicity("fitting the multiplicity needs at least three exponents")
    if len(e_values) < 2:
        raise NoMultiplicity("need at least two exponents")
    phis = []
    for e in e_values:
        q = p**e
        prof = (profiles or {}).get(q) or colength(query.with_q(q))
        phis.append((q, prof.total))
    fitted = e_hk is None
    if fitted:
        (qa, fa), (qb, fb) = phis[-2], phis[-1]
        e_hk = Fraction(fb - fa, qb * qb - qa * qa)
    values = [(q, phi, phi - e_hk * q * q) for q, phi in phis]
    # e = 0 is always special (phi(1) = length R/I), so cycles are sought from e >= 1
    tail = [g for (q, _, g), e in zip(values, e_values) if e >= 1]
    offset = next((i for i, e in enumerate(e_values) if e >= 1), len(e_values))
    cyc = detect_cycle(tail)
    cycle = (e_values[offset + cyc[0]], cyc[1]) if cyc else None
    return GammaSeries(p, Fraction(e_hk), fitted, values, cycle)
