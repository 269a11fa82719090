"""Which decompositions can be a restricted twisted cotangent bundle Omega_{P^r}(1)|C.

Bundles are described symbolically by their indecomposable summands: rank,
degree and, where it matters, an iso-class label.  Nothing is constructed.

Condition (iv) (an extension 0 -> L^{r-1} -> F -> M -> 0 with deg L = -2,
deg M <= -2) is reduced to two patterns.  Ext^1(M, L) = H^1(L M^-1) vanishes
unless M = L, so the extension splits, or else M = L and the non-split
extensions are L^{r-2} + (F_2 (x) L).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable

from .errors import DecompositionInconsistent, InvalidInput, RankTooSmall, UnorderedSlopes
from .formulas import SplittingCase, SummandData

GENERIC = "Generic"
LINE = "Line"
ATIYAH = "AtiyahTwist"


@dataclass(frozen=True)
class SummandDescriptor:
    """An indecomposable bundle.

    kind is ``Generic`` (no iso data), ``Line`` (a line bundle with iso label)
    or ``AtiyahTwist`` (F_r (x) L_label, F_r the indecomposable degree-0
    bundle with a section).
    """

    rank: int
    degree: int
    kind: str = GENERIC
    label: str | None = None

    def __post_init__(self):
        if self.rank < 1:
            raise InvalidInput("rank must be >= 1")
        if self.kind not in (GENERIC, LINE, ATIYAH):
            raise InvalidInput(f"unknown kind {self.kind!r}")
        if self.kind == LINE and self.rank != 1:
            raise InvalidInput("Line summands have rank 1")
        if self.kind in (LINE, ATIYAH) and not self.label:
            raise InvalidInput(f"{self.kind} needs a label")
        if self.kind == ATIYAH and self.degree % self.rank:
            raise InvalidInput("AtiyahTwist needs degree divisible by rank")

    @property
    def slope(self) -> Fraction:
        return Fraction(self.degree, self.rank)

    @property
    def base_degree(self) -> int | None:
        """Degree of the twisting line bundle L_label."""
        if self.kind == LINE:
            return self.degree
        if self.kind == ATIYAH:
            return self.degree // self.rank
        return None

    @property
    def is_line(self) -> bool:
        return self.rank == 1

    def to_json(self) -> dict:
        kind = GENERIC if self.kind == GENERIC else {self.kind: self.label}
        return {"rank": self.rank, "degree": self.degree, "kind": kind}

    @classmethod
    def from_json(cls, obj: dict) -> "SummandDescriptor":
        try:
            rank, degree = int(obj["rank"]), int(obj["degree"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"bad summand {obj!r}") from exc
        kind = obj.get("kind", GENERIC)
        if isinstance(kind, dict):
            if len(kind) != 1:
                raise InvalidInput(f"bad kind {kind!r}")
            (k, label), = kind.items()
            return cls(rank, degree, k, str(label))
        if kind != GENERIC:
            raise InvalidInput(f"bad kind {kind!r}")
        return cls(rank, degree)


def slope(s: SummandDescriptor) -> Fraction:
    return s.slope


def is_stable(s: SummandDescriptor) -> bool:
    """Indecomposable bundles on an elliptic curve are stable iff gcd(r, d) = 1."""
    if s.rank == 1:
        return True
    if s.kind == ATIYAH:
        return False
    return gcd(s.rank, s.degree) == 1


@dataclass(frozen=True)
class DecompositionData:
    summands: tuple[SummandDescriptor, ...]

    def __post_init__(self):
        if not self.summands:
            raise InvalidInput("empty decomposition")
        degs: dict[str, int] = {}
        for s in self.summands:
            if s.label is None:
                continue
            d = s.base_degree
            if degs.setdefault(s.label, d) != d:
                raise InvalidInput(f"label {s.label!r} used for line bundles of different degrees")

    @classmethod
    def of(cls, summands: Iterable[SummandDescriptor]) -> "DecompositionData":
        return cls(tuple(summands))

    @classmethod
    def sorted_of(cls, summands: Iterable[SummandDescriptor]) -> "DecompositionData":
        return cls(tuple(sorted(summands, key=lambda s: s.slope, reverse=True)))

    @property
    def rank(self) -> int:
        return sum(s.rank for s in self.summands)

    @property
    def degree(self) -> int:
        return sum(s.degree for s in self.summands)

    def to_json(self) -> dict:
        return {"summands": [s.to_json() for s in self.summands]}

    @classmethod
    def from_json(cls, obj: dict) -> "DecompositionData":
        try:
            items = obj["summands"]
        except (KeyError, TypeError) as exc:
            raise InvalidInput("decomposition needs a 'summands' list") from exc
        return cls(tuple(SummandDescriptor.from_json(s) for s in items))


YES = "Yes"
NO = "No"
INDETERMINATE = "Indeterminate"


@dataclass(frozen=True)
class Verdict:
    status: str
    condition: str | None = None
    reason: str = ""

    def to_json(self) -> dict:
        return {"verdict": self.status, "condition": self.condition, "reason": self.reason}


# tri-state pattern results
_MATCH, _NO_MATCH, _UNKNOWN = "match", "no", "unknown"


def _line_group(lines: list[SummandDescriptor], count: int, degree: int) -> str:
    """Do ``lines`` consist of ``count`` copies of one line bundle of ``degree``?"""
    if len(lines) != count or any(s.degree != degree for s in lines):
        return _NO_MATCH
    if count <= 1:
        return _MATCH
    if all(s.kind == LINE for s in lines):
        return _MATCH if len({s.label for s in lines}) == 1 else _NO_MATCH
    return _UNKNOWN


def _condition_ii(dd: DecompositionData, r: int) -> str:
    if len(dd.summands) != 2:
        return _NO_MATCH
    a, b = dd.summands
    for big, small in ((a, b), (b, a)):
        if small.rank == 1 and big.rank == r - 1 and big.degree == -r and is_stable(big):
            return _MATCH
    return _NO_MATCH


def _condition_iii(dd: DecompositionData, r: int) -> str:
    big = [s for s in dd.summands if s.rank > 1]
    lines = [s for s in dd.summands if s.rank == 1]
    if len(big) != 1:
        return _NO_MATCH
    f1 = big[0]
    r2 = r - f1.rank
    if not 0 < r2 <= r - 2 or f1.degree != r2 - r - 1 or not is_stable(f1):
        return _NO_MATCH
    return _line_group(lines, r2, -2)


def _condition_iv(dd: DecompositionData, r: int) -> str:
    summands = list(dd.summands)
    lines = [s for s in summands if s.rank == 1]
    results = []
    # split: L^{r-1} + M with deg M <= -2
    if len(lines) == r:
        for i, m in enumerate(lines):
            if m.degree > -2:
                continue
            results.append(_line_group(lines[:i] + lines[i + 1:], r - 1, -2))
    # non-split: L^{r-2} + F_2 (x) L
    big = [s for s in summands if s.rank > 1]
    if len(big) == 1 and big[0].rank == 2 and big[0].degree == -4 and len(lines) == r - 2:
        twist = big[0]
        group = _line_group(lines, r - 2, -2) if r > 2 else _MATCH
        if twist.kind == ATIYAH:
            if group == _MATCH and lines and all(s.kind == LINE for s in lines):
                results.append(_MATCH if lines[0].label == twist.label else _NO_MATCH)
            elif group == _NO_MATCH:
                results.append(_NO_MATCH)
            else:
                results.append(_UNKNOWN)
        elif twist.kind == GENERIC:
            # an indecomposable of rank 2, degree -4 is F_2 (x) L' for an unknown L'
            results.append(_NO_MATCH if group == _NO_MATCH else _UNKNOWN)
    if _MATCH in results:
        return _MATCH
    if _UNKNOWN in results:
        return _UNKNOWN
    return _NO_MATCH


def _check_input(dd: DecompositionData) -> int:
    r = dd.rank
    if r < 3:
        raise RankTooSmall(f"rank {r} < 3")
    slopes = [s.slope for s in dd.summands]
    if any(a < b for a, b in zip(slopes, slopes[1:])):
        raise UnorderedSlopes("summands must be listed by non-increasing slope")
    return r


def is_restricted_cotangent(dd: DecompositionData) -> Verdict:
    r = _check_input(dd)
    top = dd.summands[0].slope
    if not top < -1:
        return Verdict(NO, "i", f"largest slope {top} is not < -1")
    checks = (
        ("ii", _condition_ii(dd, r), f"stable rank-{r - 1} summand of degree {-r} plus a line bundle"),
        ("iii", _condition_iii(dd, r), "stable F_1 of degree r2-r-1 plus r2 copies of a degree -2 line bundle"),
        ("iv", _condition_iv(dd, r), "extension of a line bundle of degree <= -2 by L^(r-1), deg L = -2"),
    )
    for name, outcome, why in checks:
        if outcome == _MATCH:
            return Verdict(NO, name, why)
    missing = [name for name, outcome, _ in checks if outcome == _UNKNOWN]
    if missing:
        return Verdict(INDETERMINATE, ",".join(missing),
                       "iso-class data needed to decide condition(s) " + ", ".join(missing))
    return Verdict(YES)


# --- rank 3 case list ---------------------------------------------------------

@dataclass(frozen=True)
class Rank3Case:
    pattern: tuple[int, ...]
    rule: str


def rank3_table() -> list[Rank3Case]:
    return [
        Rank3Case((3,), "indecomposable: accept iff deg F <= -4"),
        Rank3Case((2, 1), "F_1 + L: accept iff deg F_1 <= -4 and deg L <= -2; "
                          "when both are equalities also Hom(F_1, L) = 0, i.e. F_1 is not F_2 (x) L"),
        Rank3Case((1, 1, 1), "L_1 + L_2 + L_3: accept iff all deg <= -2 and no two degree -2 summands are isomorphic"),
    ]


def rank3_verdict(dd: DecompositionData) -> str:
    """Case-list predicate for rank 3, independent of the general theorem."""
    if dd.rank != 3:
        raise InvalidInput("rank3_verdict needs rank 3")
    ranks = sorted((s.rank for s in dd.summands), reverse=True)
    if ranks == [3]:
        return YES if dd.summands[0].degree <= -4 else NO
    if ranks == [2, 1]:
        f1 = next(s for s in dd.summands if s.rank == 2)
        line = next(s for s in dd.summands if s.rank == 1)
        if not (f1.degree <= -4 and line.degree <= -2):
            return NO
        if f1.degree == -4 and line.degree == -2:
            # Hom(F_2 (x) L', L) != 0 iff L' = L
            if f1.kind == ATIYAH and line.kind == LINE:
                return NO if f1.label == line.label else YES
            return INDETERMINATE
        return YES
    lines = dd.summands
    if any(s.degree > -2 for s in lines):
        return NO
    minus2 = [s for s in lines if s.degree == -2]
    if len(minus2) < 2:
        return YES
    labelled = [s.label for s in minus2 if s.kind == LINE]
    if len(set(labelled)) < len(labelled):
        return NO
    return YES if len(labelled) == len(minus2) else INDETERMINATE


def rank3_sweep(degree_range: range = range(-8, 0), labels: str = "abc") -> list[DecompositionData]:
    """Every valid rank-3 descriptor with summand degrees in ``degree_range``."""
    rank2_options = []
    for d in degree_range:
        rank2_options.append(SummandDescriptor(2, d))
        if d % 2 == 0:
            rank2_options.extend(SummandDescriptor(2, d, ATIYAH, l) for l in labels)
    line_options = []
    for d in degree_range:
        line_options.append(SummandDescriptor(1, d))
        line_options.extend(SummandDescriptor(1, d, LINE, l) for l in labels)

    out = []
    for d in degree_range:
        out.append(DecompositionData.of([SummandDescriptor(3, d)]))
    for big, line in itertools.product(rank2_options, line_options):
        try:
            out.append(DecompositionData.sorted_of([big, line]))
        except InvalidInput:
            continue
    seen = set()
    for trio in itertools.combinations_with_replacement(line_options, 3):
        try:
            dd = DecompositionData.sorted_of(trio)
        except InvalidInput:
            continue
        key = tuple(sorted((s.degree, s.kind, s.label or "") for s in dd.summands))
        if key not in seen:
            seen.add(key)
            out.append(dd)
    return out


# --- splitting case for the space-curve formula -------------------------------

def twist(dd: DecompositionData, delta: int, k: int) -> DecompositionData:
    """Tensor every summand by O(k) on a curve of degree delta."""
    out = []
    for s in dd.summands:
        # iso relations between summands survive a common twist, so labels carry over
        out.append(SummandDescriptor(s.rank, s.degree + k * s.rank * delta, s.kind, s.label))
    return DecompositionData(tuple(out))


def feed_formula(dd: DecompositionData, delta: int) -> SplittingCase:
    """Map a splitting of Omega_{P^3}|C (rank 3, degree -4 delta) to its formula case."""
    if dd.rank != 3 or dd.degree != -4 * delta:
        raise DecompositionInconsistent(f"need rank 3 and degree {-4 * delta}, got {dd.rank}, {dd.degree}")
    ranks = sorted((s.rank for s in dd.summands), reverse=True)
    case = {(3,): "i", (2, 1): "ii", (1, 1, 1): "iii"}[tuple(ranks)]
    ordered = sorted(dd.summands, key=lambda s: -s.rank)
    return SplittingCase(case, tuple(SummandData(s.rank, s.degree) for s in ordered))

