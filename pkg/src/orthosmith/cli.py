"""Command-line entry point: ``orthosmith <subcommand> ...``.

Payloads (JSON or CSV) go to stdout, human-readable summaries to stderr.
Exit codes: 0 success, 1 validation error, 2 size or domain error.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from decimal import Decimal, localcontext
from fractions import Fraction

from .core import (DimensionError, DomainError, ExactMatrix, OrthoSmithError, SizeError,
                   ValidationError, is_scaled_orthogonal, load_matrix, matrix_to_json,
                   scalar_to_json)
from .expectation import (expected_N, figure_series, limit_constants, non_monotone_witness,
                          partial_bound_sum)
from .ortho import RationalOrthogonalMatrix, enumerate_O2, enumerate_O3, level
from .probability import ENSEMBLES, prob_orthogonal, probability_of
from .smith import smith_normal_form
from .verify import (SampleConfig, exhaustive_prob, exhaustive_prob_gaussian, mc_prob,
                     sample_N)

EXIT_OK, EXIT_VALIDATION, EXIT_SIZE = 0, 1, 2
FIGURE_COLUMNS = ("level", "expectation_num", "expectation_den", "expectation_float")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def decimal_string(x: Fraction, digits: int = 20) -> str:
    with localcontext() as ctx:
        ctx.prec = digits
        d = Decimal(x.numerator) / Decimal(x.denominator)
    return format(d.normalize(), "f") if d else "0"


def rational_json(x) -> dict:
    x = Fraction(x)
    return {"num": str(x.numerator), "den": str(x.denominator), "decimal": decimal_string(x)}


def _emit(payload, out):
    out.write(json.dumps(payload) + "\n")


def _say(msg: str):
    print(msg, file=sys.stderr)


def _resolve_threads(args) -> int | None:
    env = os.environ.get("ORTHOSMITH_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValidationError(f"ORTHOSMITH_THREADS: expected integer, got {env!r}") from None
    return args.threads


def _integral_form(M: ExactMatrix, file_ring: str, modulus: int | None):
    """``(G, modulus, level)`` for a matrix file: rational files are scaled by their level."""
    if file_ring == "Q":
        ell = level(M)
        G = M.map(lambda x: int(x * ell))
        return G, modulus if modulus is not None else ell * ell, ell
    if modulus is None:
        raise ValidationError("--modulus: required when the matrix file holds an integral matrix")
    return M, modulus, None


# ---------------------------------------------------------------------------
# subcommands


def cmd_snf(args, out):
    M, file_ring = load_matrix(args.matrix)
    if file_ring == "Q":
        ell = level(M)
        M = M.map(lambda x: int(x * ell))
        _say(f"rational input scaled by its level {ell}")
    ring = args.ring or ("Zi" if file_ring == "Zi" else "Z")
    s = smith_normal_form(M, ring=ring)
    _emit({
        "ring": ring,
        "d": [scalar_to_json(x, ring) for x in s.d],
        "D_ideal": [scalar_to_json(x, ring) for x in s.D_ideal],
        "U": matrix_to_json(s.U, ring)["entries"],
        "V": matrix_to_json(s.V, ring)["entries"],
    }, out)
    _say("d = (" + ", ".join(str(x) for x in s.d) + ")")


def cmd_prob(args, out):
    M, file_ring = load_matrix(args.matrix)
    ring = args.ring or ("Zi" if file_ring == "Zi" else "Z")
    ensemble = args.ensemble
    G, m, ell = _integral_form(M, file_ring, args.modulus)
    orthogonal = ell is not None and is_scaled_orthogonal(G, ell)
    if orthogonal and ensemble == "symmetric" and m == ell * ell:
        report = prob_orthogonal(RationalOrthogonalMatrix(G, ell), ring=ring)
    else:
        report = probability_of(G, m, ring=ring, ensemble=ensemble)
    payload = {
        "value": rational_json(report.value),
        "ring": "Zi" if ensemble == "hermitian" else ring,
        "ensemble": ensemble,
        "modulus": m,
        "factors": [{"i": i, "j": j, "num": str(a), "den": str(b)} for i, j, a, b in report.factors],
    }
    if ell is not None:
        payload["level"] = ell
        payload["orthogonal"] = orthogonal
    _emit(payload, out)
    _say(f"P = {report.value}")
    for i, j, a, b in report.factors:
        _say(f"  ({i},{j})  {a}/{b}")


def _cmd_enum(enumerate_fn, args, out):
    if args.level < 1:
        raise DomainError(f"--level must be >= 1, got {args.level}")
    mats = enumerate_fn(args.level)
    for R in mats:
        _emit(matrix_to_json(R.Q, "Q"), out)
    _say(f"{len(mats)} matrices of level {args.level}")


def cmd_enum_o2(args, out):
    _cmd_enum(enumerate_O2, args, out)


def cmd_enum_o3(args, out):
    _cmd_enum(enumerate_O3, args, out)


def cmd_expect(args, out):
    e = expected_N(args.n, args.level)
    _emit({"n": args.n, "level": args.level, "expectation": rational_json(e)}, out)
    _say(f"E[N_{args.n}({args.level})] = {e}")


def cmd_bounds(args, out):
    bound2, bound3 = limit_constants()
    payload = {"bound2": bound2, "bound3": bound3}
    if args.max is not None:
        payload["partial_sums"] = {
            str(n): rational_json(partial_bound_sum(n, args.max)) for n in (2, 3)}
        payload["L"] = args.max
    _emit(payload, out)
    _say(f"12G/pi^2 - 1 = {bound2:.10f}\n105 zeta(3)/pi^4 - 1 = {bound3:.10f}")


def write_figure_csv(rows, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(FIGURE_COLUMNS)
    for r in rows:
        w.writerow([r.level, r.expectation.numerator, r.expectation.denominator,
                    repr(r.expectation_float)])


def cmd_figure(args, out):
    rows = figure_series(args.n, args.max)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            write_figure_csv(rows, fh)
    else:
        write_figure_csv(rows, out)
    witness = non_monotone_witness(rows)
    _say(f"{len(rows)} rows with nonzero expectation")
    if witness:
        a, b = witness
        _say(f"non-monotone: E[N_{args.n}({a.level})] = {a.expectation} < "
             f"E[N_{args.n}({b.level})] = {b.expectation}")


def cmd_verify_exhaustive(args, out):
    M, file_ring = load_matrix(args.matrix)
    G, m, ell = _integral_form(M, file_ring, args.modulus)
    ring = args.ring or ("Zi" if file_ring == "Zi" else "Z")
    ensemble = args.ensemble
    if ensemble == "hermitian" or ring == "Zi":
        if ensemble == "asymmetric":
            raise ValidationError("--ensemble: asymmetric oracle is available over Z only")
        oracle = exhaustive_prob_gaussian(G, m, ensemble)
        formula = probability_of(G, m, ring="Zi", ensemble=ensemble).value
    else:
        oracle = exhaustive_prob(G, m, ensemble)
        formula = probability_of(G, m, ring="Z", ensemble=ensemble).value
    _emit({"oracle": rational_json(oracle), "formula": rational_json(formula),
           "agree": oracle == formula, "modulus": m, "ensemble": ensemble}, out)
    _say(f"exhaustive {oracle}  formula {formula}  {'agree' if oracle == formula else 'DISAGREE'}")


def cmd_verify_mc(args, out):
    M, file_ring = load_matrix(args.matrix)
    if file_ring == "Zi":
        raise ValidationError("ring: Monte Carlo needs a rational orthogonal matrix")
    Q = RationalOrthogonalMatrix.from_rational(M)
    ring = args.ring or "Z"
    cfg = SampleConfig(args.seed, args.samples, args.k)
    est = mc_prob(Q, cfg, ring=ring, threads=_resolve_threads(args))
    exact = prob_orthogonal(Q, ring=ring).value
    z = (est.mean - float(exact)) / est.stderr if est.stderr else 0.0
    _emit({"mean": est.mean, "stderr": est.stderr, "samples": est.samples,
           "k": est.entry_bound, "exact": rational_json(exact), "z": z}, out)
    _say(f"mean {est.mean:.6g} +- {est.stderr:.2g}  exact {exact}  z = {z:.2f}")


def cmd_verify_sample_n(args, out):
    m = args.level * args.level
    k = args.k if args.k is not None else 1000 * m
    cfg = SampleConfig(args.seed, args.samples, k)
    res = sample_N(args.n, args.level, cfg, threads=_resolve_threads(args))
    payload = {"n": args.n, "level": args.level, "mean": res.mean, "stderr": res.stderr,
               "all_divisible": res.all_divisible, "divisor": res.divisor,
               "samples": res.samples, "k": res.entry_bound}
    if args.level >= 2:
        payload["expected"] = rational_json(expected_N(args.n, args.level))
    _emit(payload, out)
    _say(f"mean {res.mean:.6g} +- {res.stderr:.2g}; all counts divisible by "
         f"{res.divisor}: {res.all_divisible}")


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="orthosmith", description=__doc__.splitlines()[0])
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads for sampling (ORTHOSMITH_THREADS overrides)")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("snf", help="Smith normal form of a matrix file")
    s.add_argument("--matrix", required=True)
    s.add_argument("--ring", choices=("Z", "Zi"))
    s.set_defaults(func=cmd_snf)

    s = sub.add_parser("prob", help="exact conjugation probability")
    s.add_argument("--matrix", required=True)
    s.add_argument("--ring", choices=("Z", "Zi"))
    s.add_argument("--ensemble", choices=ENSEMBLES, default="symmetric")
    s.add_argument("--modulus", type=int)
    s.set_defaults(func=cmd_prob)

    for name, fn in (("enum-o2", cmd_enum_o2), ("enum-o3", cmd_enum_o3)):
        s = sub.add_parser(name, help=f"list O_{name[-1]}(level, Q) as JSON lines")
        s.add_argument("--level", type=int, required=True)
        s.set_defaults(func=fn)

    s = sub.add_parser("expect", help="E[N_n(level)]")
    s.add_argument("--n", type=int, choices=(2, 3), required=True)
    s.add_argument("--level", type=int, required=True)
    s.set_defaults(func=cmd_expect)

    s = sub.add_parser("bounds", help="limiting probability bounds")
    s.add_argument("--max", type=int, help="also report partial sums up to this level")
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("figure", help="CSV of E[N_n(level)] for the figure")
    s.add_argument("--n", type=int, choices=(2, 3), required=True)
    s.add_argument("--max", type=int, required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_figure)

    v = sub.add_parser("verify", help="brute-force and Monte Carlo checks")
    vsub = v.add_subparsers(dest="verify_command", parser_class=_Parser)
    vsub.required = True

    s = vsub.add_parser("exhaustive")
    s.add_argument("--matrix", required=True)
    s.add_argument("--modulus", type=int)
    s.add_argument("--ensemble", choices=ENSEMBLES, default="symmetric")
    s.add_argument("--ring", choices=("Z", "Zi"))
    s.set_defaults(func=cmd_verify_exhaustive)

    s = vsub.add_parser("mc")
    s.add_argument("--matrix", required=True)
    s.add_argument("--samples", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--ring", choices=("Z", "Zi"))
    s.set_defaults(func=cmd_verify_mc)

    s = vsub.add_parser("sample-n")
    s.add_argument("--n", type=int, choices=(2, 3), required=True)
    s.add_argument("--level", type=int, required=True)
    s.add_argument("--samples", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--k", type=int, help="entry bound (default 1000 * level^2)")
    s.set_defaults(func=cmd_verify_sample_n)
    return p


def run(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.func(args, out)
    except _UsageError as exc:
        _say(str(exc))
        return EXIT_VALIDATION
    except (SizeError, DomainError) as exc:
        _say(f"error: {exc}")
        return EXIT_SIZE
    except (ValidationError, DimensionError, OrthoSmithError) as exc:
        _say(f"error: {exc}")
        return EXIT_VALIDATION
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
