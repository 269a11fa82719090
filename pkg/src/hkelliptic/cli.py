"""``hk``: oracle runs, closed forms, cross-validation, classification, Hasse invariant."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .curves import curve_hasse_invariant, load_curve
from .errors import H1Unresolved, HilbertMismatch, HKError, InvalidInput, StopBoundExceeded
from .reports import (
    THEOREMS,
    classify_json,
    dumps,
    evaluate_formula,
    load_ideal,
    parse_q_list,
    read_json,
    run_oracle,
    verify,
)

EXIT_MISMATCH = 1
EXIT_INVALID = 2
EXIT_STOP_BOUND = 3
EXIT_HILBERT = 4
EXIT_H1 = 5


def _emit(text: str, out: str | None) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_oracle(args) -> int:
    curve = load_curve(args.curve)
    ideal = load_ideal(args.ideal, curve)
    profiles = run_oracle(curve, ideal, parse_q_list(args.q))
    if args.format == "csv":
        text = "".join(p.to_csv(header=(i == 0)) for i, p in enumerate(profiles))
    else:
        text = dumps({
            "curve": curve.name,
            "curve_hash": curve.spec_hash(),
            "ideal": ideal.description,
            "profiles": [p.to_json() for p in profiles],
        })
    _emit(text, args.out)
    return 0


def cmd_formula(args) -> int:
    params = read_json(args.params)
    if not isinstance(params, dict):
        raise InvalidInput("formula parameters must be a JSON object")
    result = evaluate_formula(args.theorem, params, parse_q_list(args.q))
    if args.format == "csv":
        lines = ["q,phi,gamma_num,gamma_den"]
        lines += [f"{r['q']},{r['phi']},{r['gamma']['num']},{r['gamma']['den']}" for r in result["results"]]
        text = "\n".join(lines)
    else:
        text = dumps(result)
    _emit(text, args.out)
    return 0


def cmd_verify(args) -> int:
    curve = load_curve(args.curve)
    ideal = load_ideal(args.ideal, curve)
    e_max = args.e_max
    if e_max is None:
        e_max = 3 if curve.p in (2, 3) else 2
    if e_max < 0:
        raise InvalidInput("--e-max must be >= 0")
    report = verify(curve, ideal, e_max, timing=args.timing)
    if args.format == "csv":
        lines = ["q,phi_oracle,phi_formula,gamma_num,gamma_den"]
        for r in report.rows:
            lines.append(f"{r.q},{r.phi_oracle},{r.phi_formula},{r.gamma.numerator},{r.gamma.denominator}")
        lines.append(f"# verdict {report.verdict}")
        text = "\n".join(lines)
    else:
        text = dumps(report.to_json())
    _emit(text, args.out)
    return 0 if report.match else EXIT_MISMATCH


def cmd_classify(args) -> int:
    _emit(dumps(classify_json(read_json(args.decomposition))), args.out)
    return 0


def cmd_hasse(args) -> int:
    curve = load_curve(args.curve)
    value = curve_hasse_invariant(curve)
    if args.format == "csv":
        text = f"curve,hasse\n{curve.name},{value}"
    else:
        text = dumps({"curve": curve.name, "hasse_invariant": value,
                      "type": "ordinary" if value else "supersingular"})
    _emit(text, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hk", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", help="write to this file instead of stdout")

    p = sub.add_parser("oracle", help="colength of Frobenius powers by linear algebra")
    p.add_argument("--curve", required=True, help="catalog name or curve JSON file")
    p.add_argument("--ideal", default="maximal", help="'maximal' or an ideal JSON file")
    p.add_argument("--q", required=True, help="comma-separated powers of p")
    common(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("formula", help="closed-form Hilbert-Kunz values")
    p.add_argument("--theorem", required=True, choices=THEOREMS)
    p.add_argument("--params", required=True, help="JSON file or inline JSON object")
    p.add_argument("--q", required=True, help="comma-separated q values")
    common(p)
    p.set_defaults(func=cmd_formula)

    p = sub.add_parser("verify", help="oracle against closed form for q = p^0..p^E")
    p.add_argument("--curve", required=True)
    p.add_argument("--ideal", default="maximal")
    p.add_argument("--e-max", type=int, default=None, help="default 2 for p >= 5, 3 for p = 2, 3")
    p.add_argument("--timing", action="store_true", help="include wall-clock time in the report")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("classify", help="restricted twisted cotangent bundle test")
    p.add_argument("--decomposition", required=True, help="JSON file or inline JSON object")
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("hasse", help="Hasse invariant of a plane cubic")
    p.add_argument("--curve", required=True)
    common(p)
    p.set_defaults(func=cmd_hasse)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except H1Unresolved as exc:
        print(f"error: unresolved h^1 term: {exc}", file=sys.stderr)
        return EXIT_H1
    except StopBoundExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STOP_BOUND
    except HilbertMismatch as exc:
        print(f"error: Hilbert function check failed: {exc}", file=sys.stderr)
        return EXIT_HILBERT
    except (InvalidInput, HKError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
