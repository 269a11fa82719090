"""Serialization helpers, the cross-validation report and the routines behind the CLI."""
from __future__ import annotations

import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from .classifier import DecompositionData
from .curves import CurveSpec
from .errors import InvalidInput
from .formulas import (
    AutoZero,
    check_decomposition,
    ehk_general,
    Constant,
    H1Policy,
    HKClosedForm,
    OracleBacked,
    SplittingCase,
    SummandData,
    hk_complete_embedding,
    hk_general,
    hk_semistable,
    hk_space_curve,
)
from .oracle import ColengthProfile, FrobeniusQuery, colength, detect_cycle, syzygy_dims
from .polynomials import HomogeneousPoly, poly_from_json, prime_power_exponent


def rational_json(x: Fraction | int) -> dict:
    x = Fraction(x)
    return {"num": str(x.numerator), "den": str(x.denominator)}


def rational_from_json(obj: dict) -> Fraction:
    try:
        return Fraction(int(obj["num"]), int(obj["den"]))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise InvalidInput(f"bad rational {obj!r}") from exc


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def read_json(ref: str) -> Any:
    """A path to a JSON file, or an inline JSON object."""
    text = ref.strip()
    if text.startswith("{") or text.startswith("["):
        src = text
    else:
        try:
            src = Path(ref).read_text()
        except OSError as exc:
            raise InvalidInput(f"cannot read {ref!r}: {exc}") from exc
    try:
        return json.loads(src)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"invalid JSON in {ref!r}: {exc}") from exc


def parse_q_list(text: str) -> list[int]:
    try:
        qs = [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise InvalidInput(f"bad q list {text!r}") from exc
    if not qs:
        raise InvalidInput("empty q list")
    return qs


def worker_count(n_tasks: int) -> int:
    try:
        cap = int(os.environ.get("HK_THREADS", "1"))
    except ValueError:
        cap = 1
    return max(1, min(cap, n_tasks))


# --- ideals --------------------------------------------------------------------

@dataclass
class IdealSpec:
    """Ideal generators plus whatever decomposition data the formula route needs."""

    gens: list[HomogeneousPoly]
    description: str
    summands: list[SummandData] | None = None
    semistable: bool = False
    maximal: bool = False

    @property
    def degrees(self) -> list[int]:
        return [g.degree for g in self.gens]


def load_ideal(ref: str, curve: CurveSpec) -> IdealSpec:
    if ref == "maximal":
        return IdealSpec(curve.maximal_ideal(), "maximal", maximal=True)
    obj = read_json(ref)
    if isinstance(obj, list):
        obj = {"gens": obj}
    try:
        gens = [poly_from_json(g, curve.field, curve.num_vars, obj.get("symbols")) for g in obj["gens"]]
    except (KeyError, TypeError) as exc:
        raise InvalidInput("ideal file needs a 'gens' list") from exc
    summands = [summand_from_json(s) for s in obj["summands"]] if obj.get("summands") else None
    desc = obj.get("name") or " , ".join(g.to_text() for g in gens)
    return IdealSpec(gens, desc, summands, bool(obj.get("semistable", False)))


def summand_from_json(obj) -> SummandData:
    if isinstance(obj, (list, tuple)) and len(obj) == 2:
        return SummandData(int(obj[0]), int(obj[1]))
    if isinstance(obj, dict):
        return SummandData(int(obj["rank"]), int(obj["degree"]))
    raise InvalidInput(f"bad summand {obj!r}")


# --- oracle ----------------------------------------------------------------------

def run_oracle(curve: CurveSpec, ideal: IdealSpec, qs: list[int]) -> list[ColengthProfile]:
    for q in qs:
        prime_power_exponent(q, curve.p)
    base = FrobeniusQuery(curve.presentation, ideal.gens, qs[0])
    queries = [base.with_q(q) for q in qs]
    workers = worker_count(len(queries))
    if workers == 1:
        return [colength(qr) for qr in queries]
    with ThreadPoolExecutor(workers) as pool:
        return list(pool.map(colength, queries))


# --- formulas --------------------------------------------------------------------

def policy_from_json(obj, n_summands: int) -> H1Policy:
    """None -> AutoZero; int or list -> Constant; {"values", "by_q"} -> Constant."""
    if obj is None:
        return AutoZero()
    if isinstance(obj, int):
        return Constant((obj,) * n_summands)
    if isinstance(obj, list):
        return Constant(tuple(int(v) for v in obj))
    if isinstance(obj, dict):
        values = obj.get("values", 0)
        values = tuple(values) if isinstance(values, list) else (int(values),) * n_summands
        by_q = []
        for q, vs in (obj.get("by_q") or {}).items():
            vs = tuple(vs) if isinstance(vs, list) else (int(vs),) * n_summands
            by_q.append((int(q), vs))
        return Constant(values, tuple(sorted(by_q)))
    raise InvalidInput(f"bad h1 specification {obj!r}")


THEOREMS = ("general", "semistable", "complete", "space-curve")


def _semistable_ehk(delta: int, d_list: list[int]) -> Fraction:
    n, total = len(d_list), sum(d_list)
    return Fraction(delta, 2) * (Fraction(total * total, n - 1) - sum(d * d for d in d_list))


def closed_form(theorem: str, params: dict) -> HKClosedForm:
    """Bind formula parameters; the result evaluates phi and gamma for any q."""
    try:
        if theorem == "general":
            delta = int(params["delta"])
            d = [int(x) for x in params["d"]]
            summands = [summand_from_json(s) for s in params["summands"]]
            check_decomposition(delta, d, summands)
            policy = policy_from_json(params.get("h1"), len(summands))
            return HKClosedForm(ehk_general(delta, d, summands),
                                lambda q: hk_general(delta, d, summands, policy, q)[2],
                                "decomposition of the syzygy bundle into indecomposables")
        if theorem == "semistable":
            delta = int(params["delta"])
            d = [int(x) for x in params["d"]]
            if len(d) < 2:
                raise InvalidInput("need at least two generators")
            policy = policy_from_json(params.get("h1"), 1)
            return HKClosedForm(_semistable_ehk(delta, d),
                                lambda q: hk_semistable(delta, d, policy, q)[2],
                                "semistable syzygy bundle")
        if theorem == "complete":
            N, p = int(params["N"]), int(params["p"])
            h1 = params.get("h1")
            policy = policy_from_json(h1, 1) if isinstance(h1, (dict, list)) else h1
            return HKClosedForm(Fraction((N + 1) ** 2, 2 * N),
                                lambda q: hk_complete_embedding(N, q, p, policy)[2],
                                "maximal ideal of a curve embedded by a complete linear system")
        if theorem == "space-curve":
            delta, p = int(params["delta"]), int(params["p"])
            case_name = str(params.get("case", "i"))
            if params.get("summands"):
                case = SplittingCase(case_name, tuple(summand_from_json(s) for s in params["summands"]))
            elif case_name == "i":
                case = SplittingCase.indecomposable(delta)
            else:
                raise InvalidInput(f"case {case_name} needs summands")
            policy = policy_from_json(params.get("h1"), len(case.summands))
            e_hk = ehk_general(delta, [1, 1, 1, 1], case.summands)
            return HKClosedForm(e_hk, lambda q: hk_space_curve(delta, case, q, p, policy)[2],
                                f"elliptic space curve, splitting case ({case_name})")
    except KeyError as exc:
        raise InvalidInput(f"missing parameter {exc}") from exc
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InvalidInput):
            raise
        raise InvalidInput(f"bad parameters: {exc}") from exc
    raise InvalidInput(f"unknown theorem {theorem!r}; choose from {', '.join(THEOREMS)}")


def evaluate_formula(theorem: str, params: dict, qs: list[int]) -> dict:
    form = closed_form(theorem, params)
    p = params.get("p")
    results = []
    for q in qs:
        if p is not None:
            prime_power_exponent(q, int(p))
        gamma = form.gamma_fn(q)
        phi = form.e_hk * q * q + gamma
        results.append({"q": q, "phi": int(phi), "gamma": rational_json(gamma)})
    return {
        "theorem": theorem,
        "provenance": form.provenance,
        "e_hk": rational_json(form.e_hk),
        "results": results,
    }


# --- cross-validation -------------------------------------------------------------

@dataclass
class QRow:
    q: int
    phi_oracle: int
    phi_formula: int
    gamma: Fraction
    profile: ColengthProfile

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "phi_oracle": self.phi_oracle,
            "phi_formula": self.phi_formula,
            "gamma": rational_json(self.gamma),
            "profile": self.profile.to_json(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "QRow":
        return cls(obj["q"], obj["phi_oracle"], obj["phi_formula"], rational_from_json(obj["gamma"]),
                   ColengthProfile.from_json(obj["profile"]))


@dataclass
class HKReport:
    curve: str
    curve_hash: str
    ideal: str
    provenance: str
    e_hk: Fraction
    rows: list[QRow]
    gamma_cycle: tuple[int, int] | None
    timing: float | None = None
    mismatches: list[int] = field(default_factory=list)

    @property
    def match(self) -> bool:
        return all(r.phi_oracle == r.phi_formula for r in self.rows)

    @property
    def verdict(self) -> str:
        return "Match" if self.match else "Mismatch"

    def to_json(self) -> dict:
        out = {
            "curve": self.curve,
            "curve_hash": self.curve_hash,
            "ideal": self.ideal,
            "provenance": self.provenance,
            "e_hk": rational_json(self.e_hk),
            "rows": [r.to_json() for r in self.rows],
            "gamma_cycle": list(self.gamma_cycle) if self.gamma_cycle else None,
            "verdict": self.verdict,
            "mismatch_q": [r.q for r in self.rows if r.phi_oracle != r.phi_formula],
        }
        if self.timing is not None:
            out["timing_s"] = round(self.timing, 3)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "HKReport":
        cyc = obj.get("gamma_cycle")
        return cls(obj["curve"], obj["curve_hash"], obj["ideal"], obj["provenance"],
                   rational_from_json(obj["e_hk"]), [QRow.from_json(r) for r in obj["rows"]],
                   tuple(cyc) if cyc else None, obj.get("timing_s"))


def formula_route(curve: CurveSpec, ideal: IdealSpec, policy: H1Policy) -> HKClosedForm:
    """The closed form that should reproduce the oracle for this curve and ideal."""
    delta, d = curve.delta, ideal.degrees
    if ideal.summands is not None:
        summands = ideal.summands
        check_decomposition(delta, d, summands)
        return HKClosedForm(ehk_general(delta, d, summands),
                            lambda q: hk_general(delta, d, summands, policy, q)[2],
                            "decomposition of the syzygy bundle into indecomposables")
    if ideal.semistable:
        return HKClosedForm(_semistable_ehk(delta, d), lambda q: hk_semistable(delta, d, policy, q)[2],
                            "semistable syzygy bundle")
    if ideal.maximal and curve.is_complete_embedding:
        N = curve.num_vars - 1
        return HKClosedForm(Fraction((N + 1) ** 2, 2 * N),
                            lambda q: hk_complete_embedding(N, q, curve.p, policy)[2],
                            "maximal ideal of a curve embedded by a complete linear system")
    raise InvalidInput("no formula route: give 'summands' or 'semistable' in the ideal file")


def verify(curve: CurveSpec, ideal: IdealSpec, e_max: int, timing: bool = False) -> HKReport:
    """Oracle for q = p^0..p^e_max against the formula with oracle-read h^1 terms."""
    start = time.perf_counter()
    base = FrobeniusQuery(curve.presentation, ideal.gens, 1)
    policy = OracleBacked(lambda q, m: syzygy_dims(base.with_q(q), m).h1)
    form = formula_route(curve, ideal, policy)
    qs = [curve.p**e for e in range(e_max + 1)]
    profiles = run_oracle(curve, ideal, qs)
    rows = []
    for q, prof in zip(qs, profiles):
        gamma = form.gamma_fn(q)
        phi = form.e_hk * q * q + gamma
        rows.append(QRow(q, prof.total, int(phi), Fraction(prof.total) - form.e_hk * q * q, prof))
    tail = [r.gamma for r in rows if r.q > 1]
    cyc = detect_cycle(tail)
    cycle = (cyc[0] + 1, cyc[1]) if cyc else None
    elapsed = time.perf_counter() - start if timing else None
    return HKReport(curve.name, curve.spec_hash(), ideal.description, form.provenance, form.e_hk,
                    rows, cycle, elapsed)


def classify_json(obj: dict) -> dict:
    from .classifier import is_restricted_cotangent
    dd = DecompositionData.from_json(obj)
    verdict = is_restricted_cotangent(dd)
    out = verdict.to_json()
    out["decomposition"] = dd.to_json()
    return out
