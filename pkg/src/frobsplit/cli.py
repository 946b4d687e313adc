"""Batch command-line front end.

Every subcommand resolves its full parameter set, runs one computation, and
emits a machine-readable report (JSON by default, CSV on request) with the
resolved command echoed so any run can be replayed.  Exact rationals are
serialized as {"num": ..., "den": ...} decimal strings; the only floating
point numbers in payloads are simulation z-scores.

Exit codes: 0 success, 2 usage error, 3 enumeration budget exceeded,
4 domain rejection (diagnostics in the payload).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction

from . import __version__
from .density import (
    GaloisModel,
    chebotarev_simulate,
    cm_subfield_fraction,
    density_product,
    goursat_verify,
    random_generator_tuples,
)
from .finfield import CompositeModulus, Overflow
from .groups import BudgetExceeded, GroupDescriptor, build_anisotropic_torus, torus_census
from .intpoly import DegreeNotDivisible, NotMonic, ZeroPolynomial, poly_from_string
from .weil import (
    BadAuxPrime,
    CMSignature,
    InconsistentSignature,
    NonIntegralDual,
    OddDegree,
    RootBoundViolation,
    SymmetryViolation,
    ZeroConstantTerm,
    analyze,
    non_special,
    weil_validate,
)

SCHEMA = "frobsplit/1"

_DOMAIN_ERRORS = (
    CompositeModulus,
    Overflow,
    NotMonic,
    OddDegree,
    SymmetryViolation,
    RootBoundViolation,
    ZeroConstantTerm,
    NonIntegralDual,
    BadAuxPrime,
    InconsistentSignature,
    ZeroPolynomial,
    DegreeNotDivisible,
    ValueError,
)


def _frac(x: Fraction) -> dict:
    return {"num": str(x.numerator), "den": str(x.denominator)}


def _ints(csv_text: str):
    return [int(tok.strip()) for tok in csv_text.split(",") if tok.strip()]


def _pairs(text: str):
    out = []
    for tok in text.split(","):
        a, sep, b = tok.strip().partition(":")
        if not sep or not a or not b:
            raise ValueError(f"signature pair {tok!r} is not of the form a:b")
        out.append((int(a), int(b)))
    return tuple(out)


def _serialize_matrix(elt):
    return [[list(x.coeffs) for x in row] for row in elt.matrix]


def parse(argv) -> argparse.Namespace:
    """Parse tokens into a command; argparse exits 2 on usage errors."""
    top = argparse.ArgumentParser(prog="frobsplit", description=__doc__)
    top.add_argument("--version", action="version", version=__version__)
    subs = top.add_subparsers(dest="subcommand", required=True)

    def common(p, *, seed_required=False):
        p.add_argument("--format", choices=["json", "csv"], default="json")
        p.add_argument("--output", help="write the report to this path instead of stdout")
        if seed_required:
            p.add_argument("--seed", type=int, required=True)

    def group_flags(p):
        p.add_argument("--family", choices=["A", "C"], required=True)
        p.add_argument("--r", type=int, required=True)

    p = subs.add_parser("torus", help="anisotropic torus census at one prime")
    group_flags(p)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--m", type=int, default=1)
    common(p)

    p = subs.add_parser("density", help="exact per-prime fractions and product")
    group_flags(p)
    p.add_argument("--ells", required=True)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--squeeze", choices=["der", "full"], default="full")
    common(p)

    p = subs.add_parser("cm-fraction", help="proper-subfield unit fraction")
    p.add_argument("--degree", type=int, required=True, help="the even extension degree")
    p.add_argument("--ell", type=int)
    p.add_argument("--ells")
    common(p)

    p = subs.add_parser("simulate", help="seeded Bernoulli consistency check")
    group_flags(p)
    p.add_argument("--ells", required=True)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--squeeze", choices=["der", "full"], default="full")
    p.add_argument("--samples", type=int, required=True)
    common(p, seed_required=True)

    p = subs.add_parser("goursat", help="product-surjectivity verifier")
    group_flags(p)
    p.add_argument("--ells", required=True)
    p.add_argument("--samples", type=int, default=2, help="generator tuples to draw")
    common(p, seed_required=True)

    p = subs.add_parser("weil", help="Frobenius polynomial splitting report")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--poly", required=True, help="ascending comma-separated coefficients")
    p.add_argument("--ells", help="auxiliary primes for certificates")
    common(p)

    p = subs.add_parser("nonspecial", help="CM signature checklist")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--sig", required=True, help="pairs a:b, comma separated")
    common(p)

    return top.parse_args(argv)


def _echo(ns: argparse.Namespace) -> dict:
    skip = {"format", "output"}
    return {k: v for k, v in sorted(vars(ns).items()) if k not in skip and v is not None}


def _run_torus(ns):
    desc = GroupDescriptor(ns.family, ns.r, ns.ell)
    census = torus_census(desc, ns.m)
    torus = build_anisotropic_torus(desc)
    return {
        "torus_order": str(census.torus_order),
        "regular_count": str(census.regular_count),
        "regular_count_base": str(census.regular_count_base),
        "b_estimate": _frac(census.b_estimate),
        "subgroup_orders": {k: str(v) for k, v in sorted(census.subgroup_orders.items())},
        "normalizer_order": None if census.normalizer_order is None else str(census.normalizer_order),
        "weyl_order": None if census.weyl_order is None else str(census.weyl_order),
        "weyl_stable_primes": census.weyl_stable_primes,
        "exceptional_field": census.exceptional_field,
        "generators": [_serialize_matrix(g) for g in torus.generators],
        "generator_similitudes": [g.similitude for g in torus.generators],
    }


def _run_density(ns):
    model = GaloisModel.uniform(ns.family, ns.r, _ints(ns.ells), ns.m, ns.squeeze)
    rep = density_product(model)
    return {
        "per_ell": [
            {"ell": ell, "fraction": _frac(f), "exceptional_field": flag}
            for ell, f, flag in rep.per_ell
        ],
        "product": _frac(rep.product),
        "bound": _frac(rep.bound),
        "complement": _frac(rep.complement),
        "residue_degree_one_bound": _frac(rep.residue_degree_one_bound),
        "m": rep.m,
        "squeeze": ns.squeeze,
    }


def _run_cm_fraction(ns):
    ells = []
    if ns.ell is not None:
        ells.append(ns.ell)
    if ns.ells:
        ells.extend(_ints(ns.ells))
    if not ells:
        raise ValueError("cm-fraction needs --ell or --ells")
    per = [(ell, cm_subfield_fraction(ns.degree, ell)) for ell in ells]
    product = Fraction(1)
    for _, f in per:
        product *= f
    return {
        "degree": ns.degree,
        "per_ell": [{"ell": ell, "fraction": _frac(f)} for ell, f in per],
        "product": _frac(product),
        "bound": _frac(max(f for _, f in per) ** len(per)),
    }


def _run_simulate(ns):
    model = GaloisModel.uniform(ns.family, ns.r, _ints(ns.ells), ns.m, ns.squeeze)
    res = chebotarev_simulate(model, ns.samples, ns.seed)
    return {
        "samples": res.samples,
        "hits": res.hits,
        "empirical": _frac(res.empirical),
        "expected": _frac(res.expected),
        "z_score": res.z_score,
        "seed": res.seed,
        "streams": res.streams,
        "stream_layout": [list(t) for t in res.stream_layout],
    }


def _run_goursat(ns):
    import random as _random

    factors = [GroupDescriptor(ns.family, ns.r, ell) for ell in _ints(ns.ells)]
    rng = _random.Random(ns.seed)
    gens = random_generator_tuples(factors, rng, count=ns.samples)
    rep = goursat_verify(factors, gens)
    return {
        "factor_orders": [str(o) for o in rep.factor_orders],
        "projections_surjective": list(rep.projections_surjective),
        "closure_order": str(rep.closure_order),
        "product_order": str(rep.product_order),
        "full_product": rep.full_product,
        "in_hypothesis": rep.in_hypothesis,
        "note": rep.note,
        "generator_tuples": ns.samples,
    }


def _default_aux_primes(q: int):
    return [ell for ell in (2, 3, 5, 7, 11, 13) if q % ell != 0][:5]


def _run_weil(ns):
    f = poly_from_string(ns.poly)
    w = weil_validate(f, ns.q)
    aux = _ints(ns.ells) if ns.ells else _default_aux_primes(ns.q)
    rep = analyze(w, aux_primes=aux)
    return {
        "q": ns.q,
        "poly": str(f),
        "degree": f.degree,
        "ordinary": rep.ordinary,
        "prime_field": rep.prime_field,
        "d": rep.d,
        "root": str(rep.root),
        "factors": [
            {
                "poly": str(c.poly),
                "multiplicity": c.multiplicity,
                "e": c.e,
                "d_y": c.d_y,
                "resolved_by": c.resolved_by,
                "candidates": [list(t) for t in c.candidates],
            }
            for c in rep.factors
        ],
        "dual_pairs": [list(t) for t in rep.dual_pairs],
        "self_dual": list(rep.self_dual),
        "certificates": [
            {"ell": rec.ell, "status": rec.status.value, "detail": rec.detail}
            for rec in rep.certificates
        ],
        "conclusion": rep.conclusion.value,
        "isogeny_shape": rep.isogeny_shape,
        "endomorphism_note": rep.endomorphism_note,
        "aux_primes": aux,
    }


def _run_nonspecial(ns):
    sig = CMSignature(ns.r, _pairs(ns.sig))
    conds = non_special(sig)
    return {
        "r": ns.r,
        "pairs": [list(p) for p in sig.pairs],
        "satisfied": list(conds),
        "certified": bool(conds),
    }


_RUNNERS = {
    "torus": _run_torus,
    "density": _run_density,
    "cm-fraction": _run_cm_fraction,
    "simulate": _run_simulate,
    "goursat": _run_goursat,
    "weil": _run_weil,
    "nonspecial": _run_nonspecial,
}


def execute(ns: argparse.Namespace):
    """(report dict, exit status); never a bare crash on a valid parse."""
    started = time.perf_counter()
    report = {
        "schema": SCHEMA,
        "version": __version__,
        "command": _echo(ns),
    }
    try:
        report["result"] = _RUNNERS[ns.subcommand](ns)
        status = 0
    except BudgetExceeded as exc:
        report["error"] = {"type": "BudgetExceeded", "message": str(exc)}
        status = 3
    except _DOMAIN_ERRORS as exc:
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        status = 4
    report["timing_ms"] = round((time.perf_counter() - started) * 1000.0, 3)
    return report, status


def flatten(payload, prefix=""):
    """Dotted-path (key, value) rows shared by the CSV rendering."""
    rows = []
    if isinstance(payload, dict):
        for k, v in payload.items():
            rows.extend(flatten(v, f"{prefix}{k}."))
    elif isinstance(payload, (list, tuple)):
        for i, v in enumerate(payload):
            rows.extend(flatten(v, f"{prefix}{i}."))
    else:
        rows.append((prefix[:-1], "" if payload is None else str(payload)))
    return rows


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["field", "value"])
    for key, value in flatten(report):
        writer.writerow([key, value])
    return buf.getvalue()


def main(argv=None) -> int:
    ns = parse(sys.argv[1:] if argv is None else argv)
    report, status = execute(ns)
    text = render(report, ns.format)
    if ns.output:
        with open(ns.output, "w") as fh:
            fh.write(text + ("\n" if not text.endswith("\n") else ""))
    else:
        sys.stdout.write(text + ("\n" if not text.endswith("\n") else ""))
    return status


if __name__ == "__main__":
    raise SystemExit(main())
