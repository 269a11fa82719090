"""Graded pieces of R = S/a and multiplication maps between them.

Per-degree echelon forms of a_m (spanned by generator multiples) give the
standard monomials and a Groebner basis truncated at a low degree.  Normal
forms in high degree are computed by division by that basis, which is the
only way the degrees reached by Frobenius powers stay affordable.
"""
from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field

import numpy as np

from .errors import BoundExceeded, CtxMismatch, HilbertMismatch, InvalidInput
from .fields import FieldCtx
from .linalg import rank, row_reduce
from .polynomials import (
    HomogeneousPoly,
    Monomial,
    mono_div,
    mono_divides,
    mono_mul,
    monomial_index,
    monomials,
)

# columns above which dense echelon work is refused
MAX_ECHELON_COLUMNS = 3000


def combine(ctx: FieldCtx, coeffs: list[int], rows: np.ndarray) -> np.ndarray:
    """sum_i coeffs[i] * rows[i]."""
    c = np.asarray(coeffs, dtype=np.int64)
    return ctx.matmul(c[None, :], rows)[0]


def _poly_rows(polys: list[HomogeneousPoly], m: int, nvars: int) -> np.ndarray:
    """Coefficient rows of {g * mu : deg mu = m - deg g} in S_m coordinates."""
    index = monomial_index(nvars, m)
    rows = []
    for g in polys:
        if g.is_zero() or g.degree > m:
            continue
        for mu in monomials(nvars, m - g.degree):
            row = np.zeros(len(index), dtype=np.int64)
            for mono, c in g.terms.items():
                row[index[mono_mul(mono, mu)]] = c
            rows.append(row)
    if not rows:
        return np.zeros((0, len(index)), dtype=np.int64)
    return np.array(rows)


@dataclass(frozen=True)
class GBElement:
    lead: Monomial
    tail: tuple[tuple[Monomial, int], ...]   # monic: poly = lead + sum(c * mono)


class GradedQuotientPresentation:
    """R = k[X_0..X_N]/a for a homogeneous ideal a."""

    def __init__(self, field: FieldCtx, num_vars: int, ideal_gens: list[HomogeneousPoly],
                 expected_delta: int | None = None, gb_degree_cap: int = 10):
        for g in ideal_gens:
            if g.ctx != field:
                raise CtxMismatch("ideal generator over a different field")
            if g.nvars != num_vars:
                raise InvalidInput("ideal generator in a different number of variables")
            if g.is_zero():
                raise InvalidInput("zero ideal generator")
        self.field = field
        self.num_vars = num_vars
        self.ideal_gens = list(ideal_gens)
        self.expected_delta = expected_delta
        self.gb_degree_cap = gb_degree_cap
        self._lock = threading.RLock()
        self._echelon: dict[int, tuple[np.ndarray, list[int]]] = {}
        self._std: dict[int, tuple[Monomial, ...]] = {}
        self._std_index: dict[int, dict[Monomial, int]] = {}
        self._gb: list[GBElement] | None = None

    @property
    def ctx(self) -> FieldCtx:
        return self.field

    def __repr__(self):
        return (f"GradedQuotientPresentation({self.field!r}, vars={self.num_vars}, "
                f"gens={len(self.ideal_gens)}, delta={self.expected_delta})")

    # --- per-degree echelon -------------------------------------------------

    def ideal_echelon(self, m: int) -> tuple[np.ndarray, list[int]]:
        """Reduced echelon basis of a_m; pivots index ``monomials(N+1, m)``."""
        with self._lock:
            if m not in self._echelon:
                ncols = len(monomials(self.num_vars, m))
                if ncols > MAX_ECHELON_COLUMNS:
                    raise BoundExceeded(f"S_{m} has {ncols} monomials; too large for direct echelon")
                rows = _poly_rows(self.ideal_gens, m, self.num_vars)
                self._echelon[m] = row_reduce(self.field, rows) if len(rows) else (rows, [])
            return self._echelon[m]

    def echelon_dim(self, m: int) -> int:
        """dim R_m computed straight from the echelon form of a_m."""
        return len(monomials(self.num_vars, m)) - len(self.ideal_echelon(m)[1])

    # --- truncated Groebner basis --------------------------------------------

    def groebner(self) -> list[GBElement]:
        with self._lock:
            if self._gb is None:
                self._gb = self._build_groebner()
            return self._gb

    def _count_standard(self, leads: list[Monomial], m: int) -> int:
        return sum(1 for u in monomials(self.num_vars, m)
                   if not any(mono_divides(l, u) for l in leads))

    def _build_groebner(self) -> list[GBElement]:
        gb: list[GBElement] = []
        top = max(g.degree for g in self.ideal_gens) if self.ideal_gens else 0
        m = 1
        while True:
            if m > self.gb_degree_cap:
                raise BoundExceeded("Groebner basis not complete within the degree cap")
            rows, pivots = self.ideal_echelon(m)
            mons = monomials(self.num_vars, m)
            leads = [g.lead for g in gb]
            for row, c in zip(rows, pivots):
                lead = mons[c]
                if any(mono_divides(l, lead) for l in leads):
                    continue
                tail = tuple((mons[j], int(row[j])) for j in np.flatnonzero(row) if j != c)
                gb.append(GBElement(lead, tail))
            if m >= top:
                leads = [g.lead for g in gb]
                if all(self._count_standard(leads, mm) == self.echelon_dim(mm) for mm in (m + 1, m + 2)):
                    return gb
            m += 1

    # --- standard monomials ---------------------------------------------------

    def graded_piece(self, m: int) -> tuple[Monomial, ...]:
        """Standard-monomial basis of R_m."""
        if m < 0:
            return ()
        with self._lock:
            if m not in self._std:
                leads = [g.lead for g in self.groebner()]
                std = tuple(u for u in monomials(self.num_vars, m)
                            if not any(mono_divides(l, u) for l in leads))
                expected = self.expected_dim(m)
                if expected is not None and len(std) != expected:
                    raise HilbertMismatch(f"dim R_{m} = {len(std)}, expected {expected}")
                self._std[m] = std
                self._std_index[m] = {u: i for i, u in enumerate(std)}
            return self._std[m]

    def expected_dim(self, m: int) -> int | None:
        if m < 0:
            return 0
        if m == 0:
            return 1
        if self.expected_delta is None:
            return None
        return self.expected_delta * m

    def dim(self, m: int) -> int:
        return len(self.graded_piece(m))

    def standard_index(self, m: int) -> dict[Monomial, int]:
        self.graded_piece(m)
        return self._std_index[m]

    def verify_hilbert(self, bound: int) -> list[tuple[int, int]]:
        """Check dim R_m (from direct echelon) against the basis and delta*m."""
        out = []
        for m in range(bound + 1):
            direct = self.echelon_dim(m)
            std = self.dim(m)
            if direct != std:
                raise HilbertMismatch(f"degree {m}: echelon gives {direct}, standard basis {std}")
            out.append((m, direct))
        return out

    # --- normal forms ---------------------------------------------------------

    def reduce_monomials(self, targets: list[Monomial], m: int) -> dict[Monomial, np.ndarray]:
        """Normal forms (coordinates in R_m) of degree-m monomials."""
        std_idx = self.standard_index(m)
        dim = len(std_idx)
        gb = self.groebner()
        ctx = self.field
        memo: dict[Monomial, np.ndarray] = {}
        chosen: dict[Monomial, tuple[list[Monomial], list[int]]] = {}
        for t in targets:
            if t in memo:
                continue
            stack = [t]
            while stack:
                u = stack[-1]
                if u in memo:
                    stack.pop()
                    continue
                j = std_idx.get(u)
                if j is not None:
                    v = np.zeros(dim, dtype=np.int64)
                    v[j] = 1
                    memo[u] = v
                    stack.pop()
                    continue
                if u not in chosen:
                    for g in gb:
                        if mono_divides(g.lead, u):
                            break
                    else:  # pragma: no cover - every non-standard monomial has a reducer
                        raise AssertionError(f"no reducer for {u}")
                    shift = mono_div(u, g.lead)
                    chosen[u] = ([mono_mul(v, shift) for v, _ in g.tail], [ctx.neg(c) for _, c in g.tail])
                monos, coeffs = chosen[u]
                missing = [w for w in monos if w not in memo]
                if missing:
                    stack.extend(missing)
                    continue
                if monos:
                    memo[u] = combine(ctx, coeffs, np.array([memo[w] for w in monos]))
                else:
                    memo[u] = np.zeros(dim, dtype=np.int64)
                del chosen[u]
                stack.pop()
        return memo

    def normal_form(self, f: HomogeneousPoly) -> np.ndarray:
        if f.ctx != self.field:
            raise CtxMismatch("polynomial over a different field")
        m = f.degree
        if f.is_zero():
            return np.zeros(self.dim(m), dtype=np.int64)
        monos = list(f.terms)
        nf = self.reduce_monomials(monos, m)
        return combine(self.field, [f.terms[u] for u in monos], np.array([nf[u] for u in monos]))

    # --- multiplication maps --------------------------------------------------

    def multiplication_matrix(self, multipliers: list[HomogeneousPoly], m: int) -> tuple[np.ndarray, list[int]]:
        """Rows NF(f_i * s) for s in the standard basis of R_{m - deg f_i}.

        Returns the matrix and the list of per-source block sizes.
        """
        blocks = []
        targets: list[Monomial] = []
        plan = []
        for f in multipliers:
            src = self.graded_piece(m - f.degree) if m >= f.degree else ()
            blocks.append(len(src))
            for s in src:
                row_terms = [(mono_mul(u, s), c) for u, c in f.terms.items()]
                plan.append(row_terms)
                targets.extend(w for w, _ in row_terms)
        dim = self.dim(m)
        if not plan:
            return np.zeros((0, dim), dtype=np.int64), blocks
        nf = self.reduce_monomials(targets, m)
        mat = np.zeros((len(plan), dim), dtype=np.int64)
        for r, row_terms in enumerate(plan):
            if len(row_terms) == 1 and row_terms[0][1] == 1:
                mat[r] = nf[row_terms[0][0]]
            else:
                mat[r] = combine(self.field, [c for _, c in row_terms], np.array([nf[w] for w, _ in row_terms]))
        return mat, blocks


def graded_piece(pres: GradedQuotientPresentation, m: int) -> tuple[Monomial, ...]:
    return pres.graded_piece(m)


def normal_form(pres: GradedQuotientPresentation, f: HomogeneousPoly) -> np.ndarray:
    return pres.normal_form(f)


@dataclass
class GradedMap:
    """The map (+)_i R_{m - deg f_i} -> R_m, (g_i) -> sum g_i f_i."""

    pres: GradedQuotientPresentation
    multipliers: list[HomogeneousPoly]
    target_degree: int
    _matrix: np.ndarray | None = field(default=None, repr=False)
    _blocks: list[int] | None = field(default=None, repr=False)
    _rank: int | None = field(default=None, repr=False)

    @property
    def matrix(self) -> np.ndarray:
        if self._matrix is None:
            self._matrix, self._blocks = self.pres.multiplication_matrix(self.multipliers, self.target_degree)
        return self._matrix

    @property
    def source_dims(self) -> list[int]:
        self.matrix
        return list(self._blocks)

    @property
    def source_dim(self) -> int:
        return sum(self.source_dims)

    @property
    def target_dim(self) -> int:
        return self.pres.dim(self.target_degree)

    def image_rank(self) -> int:
        if self._rank is None:
            self._rank = rank(self.pres.field, self.matrix)
        return self._rank

    def kernel_dim(self) -> int:
        return self.source_dim - self.image_rank()


def image_rank(gmap: GradedMap) -> int:
    return gmap.image_rank()


def kernel_dim(gmap: GradedMap) -> int:
    return gmap.kernel_dim()


# --- smoothness --------------------------------------------------------------

def _det(mat: list[list[HomogeneousPoly]]) -> HomogeneousPoly:
    n = len(mat)
    if n == 1:
        return mat[0][0]
    total = None
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in mat[1:]]
        term = mat[0][j] * _det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total


def jacobian_ideal(gens: list[HomogeneousPoly]) -> list[HomogeneousPoly]:
    """gens together with the c x c minors of their Jacobian, c = N - 1."""
    nvars = gens[0].nvars
    c = nvars - 2
    jac = [[g.derivative(i) for i in range(nvars)] for g in gens]
    minors = []
    for rows in itertools.combinations(range(len(gens)), c):
        for cols in itertools.combinations(range(nvars), c):
            d = _det([[jac[r][k] for k in cols] for r in rows])
            if not d.is_zero():
                minors.append(d)
    return list(gens) + minors


def _projective_points(ctx: FieldCtx, nvars: int):
    """Normalized representatives of P^N over the field of ctx."""
    q = ctx.order
    for lead in range(nvars):
        for tail in itertools.product(range(q), repeat=nvars - lead - 1):
            yield [0] * lead + [1] + list(tail)


def find_rational_zero(polys: list[HomogeneousPoly], max_points: int = 50000) -> list[int] | None:
    """A common zero over the coefficient field, if the search space is small."""
    ctx, nvars = polys[0].ctx, polys[0].nvars
    total = sum(ctx.order**i for i in range(nvars))
    if total > max_points:
        return None
    for pt in _projective_points(ctx, nvars):
        if all(f.evaluate(pt) == 0 for f in polys):
            return pt
    return None


def saturation_degree(polys: list[HomogeneousPoly]) -> int:
    """Degree past which (polys)_m = S_m whenever V(polys) is empty.

    A zero-dimensional-free ideal generated in degrees <= D contains a
    regular sequence of N+1 forms of degree D (after extending scalars), whose
    quotient vanishes above (N+1)(D-1).
    """
    nvars = polys[0].nvars
    top = max(f.degree for f in polys)
    return nvars * (top - 1) + 1


def is_projectively_smooth(gens: list[HomogeneousPoly]) -> bool:
    """True iff V(gens) in P^N has no point where the Jacobian drops rank."""
    if not gens:
        raise InvalidInput("need at least one generator")
    ctx, nvars = gens[0].ctx, gens[0].nvars
    ideal = jacobian_ideal(gens)
    if find_rational_zero(ideal) is not None:
        return False
    bound = saturation_degree(ideal)
    basis = np.zeros((0, 0), dtype=np.int64)
    prev_mons: tuple[Monomial, ...] = ()
    for m in range(1, bound + 1):
        mons = monomials(nvars, m)
        if len(mons) > MAX_ECHELON_COLUMNS:
            raise BoundExceeded(f"smoothness test needs S_{m} with {len(mons)} monomials")
        index = monomial_index(nvars, m)
        # J_m = span(x_j * J_{m-1}) + new generators of degree m
        rows = [r for r in _poly_rows([f for f in ideal if f.degree == m], m, nvars)]
        for row in basis:
            for j in range(nvars):
                shifted = np.zeros(len(mons), dtype=np.int64)
                for c in np.flatnonzero(row):
                    e = list(prev_mons[c])
                    e[j] += 1
                    shifted[index[tuple(e)]] = row[c]
                rows.append(shifted)
        if rows:
            basis, _ = row_reduce(ctx, np.array(rows), reduced=False)
        else:
            basis = np.zeros((0, len(mons)), dtype=np.int64)
        prev_mons = mons
        if len(basis) == len(mons):
            return True
    return False
