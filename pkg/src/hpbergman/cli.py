"""Batch front end: classify pairs, verify identities, run the numerical checks.

Every subcommand reads one JSON document (file path or stdin), writes a JSON
report to stdout and a short summary to stderr.  Exit codes:

    0  all verdicts passed
    2  malformed input or violated precondition
    3  internal consistency failure
    4  a residual exceeded its tolerance
    5  divergence
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

import numpy as np

from . import __version__
from .classify import classify_all, comp_adjoint, composition_pair
from .core import (
    Constant,
    MoebiusMap,
    SymbolPair,
    check_ell,
    complex_from_json,
    complex_to_json,
    kernel,
    make_rng,
    map_from_json,
    map_to_json,
    pair_from_json,
    pair_to_json,
    sample_points,
    span_from_json,
    span_to_json,
)
from .errors import Divergent, IdentityMap, InternalConsistencyError, PreconditionViolation, ToleranceNotMet
from .kernelspace import bergman_norm, bergman_norm_squared, inner_product, kernel_eval, relative_residual
from .lebesgue import kernel_preimage, laplace_closed, laplace_numeric, lebesgue_norm, lebesgue_norm_numeric
from .maps import denjoy_wolff, self_map_check
from .operators import adjoint, apply, conjugate, conjugation_from_json
from .quadrature import QuadratureConfig, quad_inner_product, quad_norm_squared, verify_identity

EXACT_TOL = 1e-12
QUAD_TOL = 1e-6

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL, EXIT_TOLERANCE, EXIT_DIVERGENT = 0, 2, 3, 4, 5

TAGS = ("hermitian", "unitary", "c_selfadjoint", "adjoint_formula", "reproducing", "laplace_isometry")

LAPLACE_NOTE = (
    "transform taken as int_0^inf h(t) exp(-z t) dt; the exp(i z t) form lives on the "
    "upper half-plane and does not reproduce the kernel preimage"
)


class VerificationFailed(Exception):
    pass


def parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def _seed(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def _clean(obj):
    """Make obj JSON-safe: complex -> [re, im], non-finite floats -> null."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return [_clean(float(obj.real)), _clean(float(obj.imag))]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def _verdict(name: str, residual: float, tolerance: float) -> dict:
    return {"name": name, "residual": float(residual), "tolerance": tolerance, "passed": bool(residual <= tolerance)}


# --------------------------------------------------------------------------
# subcommands; each returns (inputs, body) where body holds verdicts etc.


def cmd_classify(doc: dict, args, cfg) -> dict:
    s = pair_from_json(doc)
    out = classify_all(s, args.seed)
    g = s.canonical().g
    dw = None
    if out["self_map"]["is_self_map"] and isinstance(g, MoebiusMap):
        try:
            r = denjoy_wolff(g, 1.0)
            dw = {"point": complex_to_json(r.point), "iterations": r.iterations}
        except (Divergent, PreconditionViolation, IdentityMap) as exc:
            dw = {"point": None, "reason": str(exc)}
    out["denjoy_wolff"] = dw
    return {"inputs": {"pair": pair_to_json(s)}, "result": out, "verdicts": []}


def _kernel_identity(ell, points, build, cfg, quad: bool):
    """Run lhs/rhs builders over kernel points; exact and quadrature residuals."""
    exact, quadres, rows = 0.0, 0.0, []
    for z in points:
        for label, lhs, rhs in build(kernel(ell, z)):
            if quad:
                rep = verify_identity(lhs, rhs, cfg)
                e, q = rep.exact_residual, rep.quad_residual
            else:
                e, q = relative_residual(lhs, rhs), None
            exact = max(exact, e)
            if q is not None:
                quadres = max(quadres, q)
            rows.append({"z": complex_to_json(z), "identity": label, "exact": e, "quad": q})
    verdicts = [_verdict("exact", exact, EXACT_TOL)]
    if quad:
        verdicts.append(_verdict("quadrature", quadres, QUAD_TOL))
    return rows, verdicts


def cmd_verify(doc: dict, args, cfg) -> dict:
    tag = doc.get("identity")
    if tag not in TAGS:
        raise ValueError(f"identity tag must be one of {TAGS}, got {tag!r}")
    rng = make_rng(args.seed)
    n = args.samples
    inputs: dict = {"identity": tag, "samples": n}
    quad = not args.no_quad

    if tag in ("hermitian", "unitary", "c_selfadjoint"):
        s = pair_from_json(doc["pair"])
        inputs["pair"] = pair_to_json(s)
        if tag == "hermitian":
            build = lambda k: [("W*K = WK", adjoint(s, k), apply(s, k))]  # noqa: E731
        elif tag == "unitary":
            build = lambda k: [("WW*K = K", apply(s, adjoint(s, k)), k),  # noqa: E731
                               ("W*WK = K", adjoint(s, apply(s, k)), k)]
        else:
            if "conjugation" not in doc:
                raise ValueError("c_selfadjoint needs a conjugation")
            spec = conjugation_from_json(doc["conjugation"])
            inputs["conjugation"] = spec.to_json()
            build = lambda k: [("CW*CK = WK", conjugate(spec, adjoint(s, conjugate(spec, k))), apply(s, k))]  # noqa: E731
        rows, verdicts = _kernel_identity(s.ell, sample_points(rng, n), build, cfg, quad)
        return {"inputs": inputs, "rows": rows, "verdicts": verdicts}

    ell = check_ell(doc.get("ell", 0))
    inputs["ell"] = ell

    if tag == "adjoint_formula":
        mu = float(doc["mu"])
        w0 = complex_from_json(doc["w0"])
        inputs.update(mu=mu, w0=complex_to_json(w0))
        scalar, gstar = comp_adjoint(ell, mu, w0, args.seed)
        s = composition_pair(ell, mu, w0)
        star = SymbolPair(ell, Constant(scalar), gstar)
        # W* K_w from the kernel rule against mu^-(l+2) C_{g*} K_w applied pointwise
        build = lambda k: [("C_g* K = mu^-m C_g* K", adjoint(s, k), apply(star, k))]  # noqa: E731
        rows, verdicts = _kernel_identity(ell, sample_points(rng, n), build, cfg, quad)
        pairing = 0.0
        pts = sample_points(rng, 2 * n)
        for z, w in zip(pts[:n], pts[n:]):
            kz, kw = kernel(ell, z), kernel(ell, w)
            lhs = inner_product(apply(s, kz), kw)
            rhs = inner_product(kz, apply(star, kw))
            pairing = max(pairing, abs(lhs - rhs) / max(abs(lhs), abs(rhs)))
        verdicts.insert(1, _verdict("pairing", pairing, EXACT_TOL))
        return {"inputs": inputs, "adjoint": {"scalar": scalar, "g_star": map_to_json(gstar)},
                "rows": rows, "verdicts": verdicts}

    if tag == "reproducing":
        pts = sample_points(rng, 2 * n)
        rows, exact, qmax = [], 0.0, 0.0
        for z, w in zip(pts[:n], pts[n:]):
            want = kernel_eval(ell, z, w)
            got = inner_product(kernel(ell, z), kernel(ell, w))
            e = abs(got - want) / abs(want)
            row = {"z": complex_to_json(z), "w": complex_to_json(w), "exact": e, "quad": None}
            if quad:
                q = quad_inner_product(ell, kernel(ell, z), kernel(ell, w), cfg, reference=abs(want))
                row["quad"] = abs(q.value - want) / abs(want)
                qmax = max(qmax, row["quad"])
            exact = max(exact, e)
            rows.append(row)
        verdicts = [_verdict("exact", exact, EXACT_TOL)]
        if quad:
            verdicts.append(_verdict("quadrature", qmax, QUAD_TOL))
        return {"inputs": inputs, "rows": rows, "verdicts": verdicts}

    # laplace_isometry
    rows, exact, qmax = [], 0.0, 0.0
    for z in sample_points(rng, n):
        k = kernel(ell, z)
        nb = bergman_norm(k)
        em = kernel_preimage(ell, z)
        e = abs(lebesgue_norm(em) - nb) / nb
        row = {"z": complex_to_json(z), "exact": e, "quad": None}
        if quad:
            val, _ = lebesgue_norm_numeric(em, cfg)
            row["quad"] = abs(val - nb) / nb
            qmax = max(qmax, row["quad"])
        exact = max(exact, e)
        rows.append(row)
    verdicts = [_verdict("exact", exact, EXACT_TOL)]
    if quad:
        verdicts.append(_verdict("quadrature", qmax, QUAD_TOL))
    return {"inputs": inputs, "rows": rows, "verdicts": verdicts, "notes": [LAPLACE_NOTE]}


def cmd_denjoy_wolff(doc: dict, args, cfg) -> dict:
    g = map_from_json(doc["g"])
    start = args.start if args.start is not None else complex_from_json(doc.get("start", 1.0))
    tol = float(doc.get("tol", 1e-10))
    max_iter = int(doc.get("max_iter", 10_000))
    r = denjoy_wolff(g, start, tol=tol, max_iter=max_iter, trace=args.trace)
    body = {
        "inputs": {"g": map_to_json(g), "start": complex_to_json(start), "tol": tol, "max_iter": max_iter},
        "result": {"point": complex_to_json(r.point), "iterations": r.iterations,
                   "fixed_point": complex_to_json(r.fixed_point),
                   "self_map_branch": self_map_check(g).branch},
        "verdicts": [_verdict("distance to fixed point", abs(r.point - r.fixed_point), 10 * tol * max(1.0, abs(r.fixed_point)))],
    }
    if args.trace:
        body["trace"] = [complex_to_json(w) for w in r.trace]
    return body


def cmd_quad(doc: dict, args, cfg) -> dict:
    h = span_from_json(doc)
    inputs = {"h": span_to_json(h)}
    if "other" in doc:
        other = span_from_json({"ell": h.ell, **doc["other"]})
        inputs["other"] = span_to_json(other)
        exact = inner_product(h, other)
        q = quad_inner_product(h.ell, h, other, cfg, reference=bergman_norm(h) * bergman_norm(other))
        quantity = "inner product"
    else:
        exact = bergman_norm_squared(h)
        q = quad_norm_squared(h.ell, h, cfg)
        quantity = "norm squared"
    scale = max(abs(exact), cfg.abs_floor)
    tol = max(100 * cfg.rel_tol * scale, 2 * q.error)
    return {
        "inputs": inputs,
        "result": {"quantity": quantity, "value": complex(q.value), "error_estimate": q.error,
                   "closed_form": complex(exact), "radius": q.radius, "panels": q.panels,
                   "subdivisions": q.subdivisions},
        "verdicts": [_verdict("quadrature vs closed form", abs(q.value - exact), tol)],
    }


def cmd_laplace(doc: dict, args, cfg) -> dict:
    z = args.z if args.z is not None else complex_from_json(doc["z"])
    ell = check_ell(args.ell if args.ell is not None else doc.get("ell", 0))
    k = kernel(ell, z)
    em = kernel_preimage(ell, z)
    nb = bergman_norm(k)
    iso = abs(lebesgue_norm(em) - nb) / nb
    num, num_err = lebesgue_norm_numeric(em, cfg)
    rng = make_rng(args.seed)
    closed, numeric = 0.0, 0.0
    for x in sample_points(rng, args.samples):
        want = kernel_eval(ell, z, x)
        closed = max(closed, abs(laplace_closed(em, x) - want) / abs(want))
        val, _ = laplace_numeric(em, x, cfg)
        numeric = max(numeric, abs(val - want) / abs(want))
    return {
        "inputs": {"z": complex_to_json(z), "ell": ell},
        "result": {"bergman_norm": nb, "lebesgue_norm": lebesgue_norm(em), "lebesgue_norm_numeric": num,
                   "numeric_error_estimate": num_err, "preimage": em.to_json()},
        "verdicts": [
            _verdict("isometry (closed form)", iso, EXACT_TOL),
            _verdict("isometry (numeric)", abs(num - nb) / nb, QUAD_TOL),
            _verdict("transform of preimage (closed form)", closed, EXACT_TOL),
            _verdict("transform of preimage (numeric)", numeric, QUAD_TOL),
        ],
        "notes": [LAPLACE_NOTE],
    }


COMMANDS = {
    "classify": cmd_classify,
    "verify": cmd_verify,
    "denjoy-wolff": cmd_denjoy_wolff,
    "quad": cmd_quad,
    "laplace": cmd_laplace,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", nargs="?", default=None, help="JSON input file ('-' or omitted: stdin)")
    common.add_argument("--seed", type=_seed, default=0)
    common.add_argument("--rel-tol", type=float, default=None, help="quadrature relative tolerance")
    common.add_argument("-n", "--samples", type=int, default=20)
    common.add_argument("--trace", action="store_true")
    common.add_argument("--config", default=None, help="JSON file with a quadrature config block")

    p = argparse.ArgumentParser(prog="hpbergman", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("classify", parents=[common])
    v = sub.add_parser("verify", parents=[common])
    v.add_argument("--no-quad", action="store_true", help="skip the quadrature route")
    d = sub.add_parser("denjoy-wolff", parents=[common])
    d.add_argument("--start", type=parse_complex, default=None)
    sub.add_parser("quad", parents=[common])
    la = sub.add_parser("laplace", parents=[common])
    la.add_argument("--z", type=parse_complex, default=None)
    la.add_argument("--ell", type=int, default=None)
    return p


def _load_config(args) -> QuadratureConfig:
    block = {}
    if args.config:
        with open(args.config) as fh:
            raw = json.load(fh)
        block = raw.get("quadrature", raw)
    cfg = QuadratureConfig.from_json(block)
    if args.rel_tol is not None:
        cfg = QuadratureConfig(args.rel_tol, cfg.abs_floor, cfg.max_subdivisions, cfg.truncation_growth)
    return cfg


def _read_input(args) -> dict:
    if args.command == "laplace" and args.z is not None:
        return {}
    if args.input in (None, "-"):
        text = sys.stdin.read()
    else:
        with open(args.input) as fh:
            text = fh.read()
    doc = json.loads(text)
    if not isinstance(doc, dict):
        raise ValueError("input must be a JSON object")
    return doc


def run(argv: list[str]) -> tuple[int, dict]:
    """Execute one invocation; return (exit code, report)."""
    args = build_parser().parse_args(argv)
    report: dict = {"command": ["hpbergman", *argv], "version": __version__, "subcommand": args.command}
    t0 = time.perf_counter()
    code = EXIT_OK
    try:
        if args.samples < 1:
            raise ValueError("--samples must be positive")
        cfg = _load_config(args)
        report["config"] = {"seed": args.seed, "samples": args.samples, "trace": args.trace,
                            "quadrature": cfg.to_json()}
        doc = _read_input(args)
        body = COMMANDS[args.command](doc, args, cfg)
        report.update(body)
        if not all(v["passed"] for v in body.get("verdicts", [])):
            raise VerificationFailed("residual above tolerance")
    except VerificationFailed as exc:
        code, report["error"] = EXIT_TOLERANCE, {"type": "ToleranceExceeded", "message": str(exc)}
    except ToleranceNotMet as exc:
        code, report["error"] = EXIT_TOLERANCE, {"type": type(exc).__name__, "message": str(exc)}
    except Divergent as exc:
        code, report["error"] = EXIT_DIVERGENT, {"type": type(exc).__name__, "message": str(exc)}
    except (InternalConsistencyError, ArithmeticError) as exc:
        code, report["error"] = EXIT_INTERNAL, {"type": type(exc).__name__, "message": str(exc)}
    except (ValueError, KeyError, TypeError, OSError) as exc:
        code, report["error"] = EXIT_INPUT, {"type": type(exc).__name__, "message": str(exc)}
    report["status"] = {0: "ok", 2: "malformed input", 3: "internal consistency", 4: "tolerance exceeded",
                        5: "divergent"}[code]
    report["exit_code"] = code
    report["timing"] = {"seconds": time.perf_counter() - t0}
    return code, report


def _summary(report: dict) -> str:
    lines = [f"hpbergman {report['subcommand']}: {report['status']}"]
    for v in report.get("verdicts", []):
        mark = "ok  " if v["passed"] else "FAIL"
        lines.append(f"  {mark} {v['name']}: {v['residual']:.3e} (tol {v['tolerance']:.1e})")
    res = report.get("result")
    if report["subcommand"] == "classify" and res:
        fams = [r["family"] for r in res.get("reports", [])]
        lines.append(f"  families: {', '.join(fams) or 'none'}")
        if "obstruction" in res:
            lines.append(f"  obstruction: {res['obstruction']}")
    if "error" in report:
        lines.append(f"  {report['error']['type']}: {report['error']['message']}")
    return "\n".join(lines)


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    code, report = run(argv)
    sys.stdout.write(json.dumps(_clean(report), sort_keys=True, indent=2) + "\n")
    sys.stderr.write(_summary(report) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
