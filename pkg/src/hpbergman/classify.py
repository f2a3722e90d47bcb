"""Family membership, parameter recovery and structural verdicts.

Each classifier matches the canonical pair against a parametric family,
rebuilds (f, g) from the recovered parameters, and only then certifies the
defining operator identity on kernels at random points.  The half-plane
condition on g is always decided by maps.self_map_check; the printed family
inequalities are evaluated alongside and disagreements are reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    EPS_P,
    Constant,
    ConstantMap,
    KernelSpan,
    MoebiusMap,
    ReciprocalPower,
    SymbolPair,
    close,
    complex_to_json,
    ipow,
    is_real,
    kernel,
    make_rng,
    normalize_moebius,
    sample_points,
    special_form,
)
from .errors import IdentityMap, InternalConsistencyError, PreconditionViolation
from .kernelspace import inner_product, relative_residual
from .maps import fixed_points, self_map_check
from .operators import (
    Ca,
    ConjugationSpec,
    Cstar,
    UCstarU,
    adjoint,
    apply,
    bounded_check,
    conjugate,
    is_kernel_compatible,
    transport_pair,
    u_scale,
    UNKNOWN,
)

# an operator identity counts as certified below this relative residual
CERT_TOL = 1e-8
# recovered parameters must reproduce f and g to this relative accuracy
PROBE_TOL = 1e-10
CERT_POINTS = 20


@dataclass(frozen=True)
class ClassificationReport:
    family: str | None
    parameters: dict = field(default_factory=dict)
    bounded: bool = False
    boundary_flags: tuple[str, ...] = ()
    discrepancies: tuple[str, ...] = ()
    residual: float | None = None
    conjugation: ConjugationSpec | None = None

    def __bool__(self):
        return self.family is not None

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "parameters": {k: _jsonable(v) for k, v in self.parameters.items()},
            "bounded": self.bounded,
            "boundary_flags": list(self.boundary_flags),
            "discrepancies": list(self.discrepancies),
            "residual": self.residual,
            "conjugation": None if self.conjugation is None else self.conjugation.to_json(),
        }


def _jsonable(v):
    if isinstance(v, complex):
        return complex_to_json(v)
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


NONE = ClassificationReport(None)


def _probe_points(seed: int, n: int = CERT_POINTS) -> list[complex]:
    return sample_points(make_rng(seed), n, re=(0.3, 3.0), im=(-2.0, 2.0))


# --------------------------------------------------------------------------
# operator identities on kernels


def hermitian_residual(s: SymbolPair, points) -> float:
    """max_z ||W* K_z - W K_z|| / scale."""
    return max(relative_residual(adjoint(s, kernel(s.ell, z)), apply(s, kernel(s.ell, z))) for z in points)


def unitary_residual(s: SymbolPair, points) -> float:
    worst = 0.0
    for z in points:
        k = kernel(s.ell, z)
        worst = max(
            worst,
            relative_residual(apply(s, adjoint(s, k)), k),
            relative_residual(adjoint(s, apply(s, k)), k),
        )
    return worst


def conjugation_residual(s: SymbolPair, spec: ConjugationSpec, points) -> float:
    """max_z ||C W* C K_z - W K_z|| / scale."""
    worst = 0.0
    for z in points:
        k = kernel(s.ell, z)
        lhs = conjugate(spec, adjoint(s, conjugate(spec, k)))
        worst = max(worst, relative_residual(lhs, apply(s, k)))
    return worst


# --------------------------------------------------------------------------
# shared matching steps


def _reproduces(s: SymbolPair, f_rec, g_rec, seed: int) -> bool:
    pts = np.array(_probe_points(seed + 1, 10))
    f0, f1 = s.f_at(pts), f_rec.evaluate(pts, s.ell)
    g0, g1 = s.g_at(pts), g_rec(pts)
    ok_f = np.abs(f0 - f1) <= PROBE_TOL * np.maximum(np.abs(f0), 1e-300)
    ok_g = np.abs(g0 - g1) <= PROBE_TOL * np.maximum(np.abs(g0), 1.0)
    return bool(ok_f.all() and ok_g.all())


def _prepare(s: SymbolPair):
    """Canonical pair and self-map verdict, or None when g is not admissible."""
    c = s.canonical()
    verdict = self_map_check(c.g)
    if not verdict:
        return None, verdict
    return c, verdict


def _zero_report(s: SymbolPair) -> ClassificationReport:
    return ClassificationReport("Zero", {}, True, (), (), 0.0)


def _finish(
    s: SymbolPair,
    family: str,
    params: dict,
    f_rec,
    g_rec,
    residual_fn,
    seed: int,
    verdict,
    discrepancies=(),
    conjugation=None,
) -> ClassificationReport:
    if not _reproduces(s, f_rec, g_rec, seed):
        raise InternalConsistencyError(f"recovered {family} parameters {params} do not reproduce the pair")
    res = residual_fn(_probe_points(seed))
    if not res <= CERT_TOL:
        return ClassificationReport(None, params, False, verdict.flags, tuple(discrepancies) + (
            f"{family} matched algebraically but the operator identity has residual {res:.3e}",), res)
    bounded = bounded_check(s) != UNKNOWN
    return ClassificationReport(family, params, bounded, verdict.flags, tuple(discrepancies), res, conjugation)


def _affine_parts(g: MoebiusMap) -> tuple[complex, complex]:
    return g.a / g.d, g.b / g.d


def _is_zero(f) -> bool:
    return isinstance(f, Constant) and f.is_zero


def _pole_ok(f, g: MoebiusMap) -> bool:
    """f = k/(z + d)^(l+2) where d is the canonical denominator constant of g."""
    return isinstance(f, ReciprocalPower) and close(f.kappa, g.d)


def _tol(*xs) -> float:
    return EPS_P * max([1.0] + [abs(x) for x in xs])


# --------------------------------------------------------------------------
# hermitian


def printed_hermitian_condition(alpha: float, beta: complex) -> bool:
    return (beta.real < 0 < alpha <= beta.real**2 / 2) or (alpha < 0 and abs(beta.real) <= _tol(beta))


def classify_hermitian(s: SymbolPair, seed: int = 0) -> ClassificationReport:
    c, verdict = _prepare(s)
    if c is None:
        return NONE
    if _is_zero(c.f):
        return _zero_report(s)
    f, g, m = c.f, c.g, s.ell + 2
    residual = lambda pts: hermitian_residual(c, pts)

    if isinstance(g, ConstantMap):
        mu = g.value
        if isinstance(f, ReciprocalPower) and close(f.kappa, mu.conjugate()) and is_real(f.c):
            eps = f.c.real
            return _finish(s, "HermitianI", {"mu": mu, "epsilon": eps},
                           ReciprocalPower(eps, 1, mu.conjugate()), ConstantMap(mu), residual, seed, verdict)
        return NONE
    if g.c == 0:
        u, v = _affine_parts(g)
        if isinstance(f, Constant) and close(u, 1) and is_real(v) and v.real >= -_tol(v) and is_real(f.c):
            gamma, lam = v.real, f.c.real
            return _finish(s, "HermitianII", {"gamma": gamma, "lambda": lam},
                           Constant(lam), MoebiusMap.affine(1, gamma), residual, seed, verdict)
        return NONE
    p, q, u = special_form(g)
    if not (_pole_ok(f, g) and is_real(q) and close(u, p.conjugate())):
        return NONE
    alpha = 2 / q.real
    beta = p * alpha
    delta = f.c * ipow(alpha, m)
    if not is_real(delta):
        return NONE
    delta = delta.real
    disc = []
    if not printed_hermitian_condition(alpha, beta):
        disc.append(
            "condition-discrepancy: g is a self-map but the printed bound on (alpha, Re beta) excludes "
            f"alpha={alpha:.6g}, Re beta={beta.real:.6g}"
        )
    g_rec = MoebiusMap(-alpha * beta, abs(beta) ** 2 - 2 * alpha, alpha * alpha, -alpha * beta.conjugate())
    f_rec = ReciprocalPower(delta, alpha, -beta.conjugate())
    return _finish(s, "HermitianIII", {"alpha": alpha, "beta": beta, "delta": delta},
                   f_rec, g_rec, residual, seed, verdict, disc)


# --------------------------------------------------------------------------
# unitary


def classify_unitary(s: SymbolPair, seed: int = 0) -> ClassificationReport:
    c, verdict = _prepare(s)
    if c is None or _is_zero(c.f):
        return NONE
    f, g, m = c.f, c.g, s.ell + 2
    residual = lambda pts: unitary_residual(c, pts)
    if isinstance(g, ConstantMap):
        return NONE
    if g.c == 0:
        u, v = _affine_parts(g)
        if not isinstance(f, Constant):
            return NONE
        C = f.c
        lam = abs(C) ** (2 / m)
        if close(u, lam) and abs(v.real) <= _tol(v):
            delta = v.imag
            return _finish(s, "UnitaryI", {"C": C, "delta": delta},
                           Constant(C), MoebiusMap.affine(lam, 1j * delta), residual, seed, verdict)
        return NONE
    p, q, u = special_form(g)
    if not (_pole_ok(f, g) and abs(p.real) <= _tol(p) and abs(u.real) <= _tol(u)):
        return NONE
    beta = f.c
    r = abs(beta) ** (2 / m)
    if not close(q, -r):
        return NONE
    theta, alpha = -p.imag, u.imag
    g_rec = MoebiusMap(1j * theta, theta * alpha + r, 1, -1j * alpha)
    f_rec = ReciprocalPower(beta, 1, -1j * alpha)
    return _finish(s, "UnitaryII", {"beta": beta, "alpha": alpha, "theta": theta},
                   f_rec, g_rec, residual, seed, verdict)


# --------------------------------------------------------------------------
# C_a


def printed_Ca_condition(alpha: complex, beta: complex) -> bool:
    r, ia = beta / alpha, 1 / alpha
    t = _tol(r, ia)
    first = abs(r.real) <= t and abs(ia.imag) <= t and ia.real < 0
    second = r.real < 0 and r.real**2 >= ia.real + abs(ia) - t
    return first or second


def classify_Ca(s: SymbolPair, a: float, seed: int = 0) -> ClassificationReport:
    a = float(a)
    spec = Ca(a)
    c, verdict = _prepare(s)
    if c is None:
        return NONE
    if _is_zero(c.f):
        return ClassificationReport("Zero", {"a": a}, True, (), (), 0.0, spec)
    f, g, m = c.f, c.g, s.ell + 2
    residual = lambda pts: conjugation_residual(c, spec, pts)
    if isinstance(g, ConstantMap):
        mu = g.value
        if isinstance(f, ReciprocalPower) and close(f.kappa, mu - 1j * a):
            return _finish(s, "CaI", {"a": a, "mu": mu, "delta": f.c},
                           ReciprocalPower(f.c, 1, mu - 1j * a), ConstantMap(mu), residual, seed, verdict,
                           conjugation=spec)
        return NONE
    if g.c == 0:
        u, v = _affine_parts(g)
        if isinstance(f, Constant) and close(u, 1):
            return _finish(s, "CaII", {"a": a, "gamma": v, "lambda": f.c},
                           Constant(f.c), MoebiusMap.affine(1, v), residual, seed, verdict, conjugation=spec)
        return NONE
    p, q, u = special_form(g)
    if not (_pole_ok(f, g) and close(u - p, 1j * a, EPS_P)):
        return NONE
    alpha = 2 / q
    beta = p * alpha
    delta = f.c * ipow(alpha, m)
    disc = []
    if not printed_Ca_condition(alpha, beta):
        disc.append("condition-discrepancy: g is a self-map but the printed (alpha, beta) condition fails")
    g_rec = MoebiusMap(-beta * alpha, -beta * (-1j * a * alpha - beta) - 2 * alpha, alpha * alpha,
                       alpha * (-1j * a * alpha - beta))
    f_rec = ReciprocalPower(delta, alpha, -1j * a * alpha - beta)
    return _finish(s, "CaIII", {"a": a, "alpha": alpha, "beta": beta, "delta": delta},
                   f_rec, g_rec, residual, seed, verdict, disc, conjugation=spec)


EVERY_A = "every"


def Ca_parameters(s: SymbolPair) -> list | str:
    """Values of a for which the pair can be C_a-selfadjoint (EVERY_A when any a works)."""
    c = s.canonical()
    f, g = c.f, c.g
    if _is_zero(f):
        return EVERY_A
    if isinstance(g, ConstantMap):
        if isinstance(f, ReciprocalPower):
            d = g.value - f.kappa
            if abs(d.real) <= _tol(g.value, f.kappa):
                return [d.imag]
        return []
    if g.c == 0:
        u, _ = _affine_parts(g)
        return EVERY_A if isinstance(f, Constant) and close(u, 1) else []
    p, q, u = special_form(g)
    d = u - p
    if abs(d.real) <= _tol(u, p):
        return [d.imag]
    return []


# --------------------------------------------------------------------------
# C_star and U C_star U*


def printed_Cstar_condition(delta: complex, kappa: complex) -> bool:
    t = _tol(delta, kappa)
    dk = delta * kappa
    first = abs(delta.real) <= t and abs(dk.imag) <= t and dk.real < 1 and kappa.real >= -t
    second = False
    if delta.real > t:
        w = dk - 1
        second = kappa.real - (w.real + abs(w)) / (2 * delta.real) >= -t
    return first or second


def classify_Cstar(s: SymbolPair, seed: int = 0) -> ClassificationReport:
    spec = Cstar()
    c, verdict = _prepare(s)
    if c is None:
        return NONE
    if _is_zero(c.f):
        return ClassificationReport("Zero", {}, True, (), (), 0.0, spec)
    f, g, m = c.f, c.g, s.ell + 2
    residual = lambda pts: conjugation_residual(c, spec, pts)
    if isinstance(g, ConstantMap):
        alpha = g.value
        if isinstance(f, ReciprocalPower) and close(f.kappa, 1 / alpha):
            beta = f.c * ipow(alpha, m)
            return _finish(s, "CstarI", {"alpha": alpha, "beta": beta},
                           ReciprocalPower(beta, alpha, 1), ConstantMap(alpha), residual, seed, verdict,
                           conjugation=spec)
        return NONE
    if g.c == 0:
        u, v = _affine_parts(g)
        if isinstance(f, Constant) and abs(v) <= _tol(u, v) and is_real(u) and u.real > 0:
            lam = u.real
            return _finish(s, "CstarII", {"lambda": lam, "theta": f.c},
                           Constant(f.c), MoebiusMap.affine(lam, 0), residual, seed, verdict, conjugation=spec)
        return NONE
    if not (_pole_ok(f, g) and close(g.b, 1)):
        return NONE
    delta, kappa, r = g.a, g.d, f.c
    disc = []
    if not printed_Cstar_condition(delta, kappa):
        disc.append("condition-discrepancy: g is a self-map but the printed (delta, kappa) condition fails")
    return _finish(s, "CstarIII", {"delta": delta, "kappa": kappa, "r": r},
                   ReciprocalPower(r, 1, kappa), MoebiusMap(delta, 1, 1, kappa), residual, seed, verdict, disc,
                   conjugation=spec)


def classify_UCstarU(s: SymbolPair, b: complex, c: float, seed: int = 0) -> ClassificationReport:
    b, c = complex(b), float(c)
    spec = UCstarU(b, c)
    hat = transport_pair(s, b, c)
    inner = classify_Cstar(hat, seed)
    if not inner:
        return NONE
    if inner.family == "Zero":
        return ClassificationReport("Zero", {"b": b, "c": c}, True, (), (), 0.0, spec)
    res = conjugation_residual(s.canonical(), spec, _probe_points(seed))
    params = {"b": b, "c": c, **inner.parameters}
    if not res <= CERT_TOL:
        raise InternalConsistencyError(
            f"transported pair is C_star-selfadjoint but the original fails U C_star U* (residual {res:.3e})"
        )
    disc = list(inner.discrepancies)
    sc = u_scale(s.ell, b)
    if inner.family == "CstarII" and abs(c) > 0 and abs(sc - 1) > EPS_P:
        disc.append(
            "form-discrepancy: translation is -i c/s (s = |b|^(2/(l+2))), the printed form uses -i c"
        )
    family = "UCstarU" + inner.family[len("Cstar"):]
    return ClassificationReport(family, params, inner.bounded, inner.boundary_flags, tuple(disc),
                                max(res, inner.residual or 0.0), spec)


# --------------------------------------------------------------------------
# symmetries and obstructions


@dataclass(frozen=True)
class Symmetry:
    conjugation: ConjugationSpec
    source: str
    residual: float
    for_every_a: bool = False

    def to_json(self) -> dict:
        return {
            "conjugation": self.conjugation.to_json(),
            "source": self.source,
            "residual": self.residual,
            "for_every_a": self.for_every_a,
        }


def _affine_mu_w0(g) -> tuple[float, complex] | None:
    """(mu, w0) when g = mu w + w0 with mu > 0 real, else None."""
    if isinstance(g, ConstantMap) or g.c != 0:
        return None
    u, v = _affine_parts(g)
    if not (is_real(u) and u.real > 0):
        return None
    return u.real, v


def find_symmetry(s: SymbolPair, seed: int = 0) -> list[Symmetry]:
    """Conjugations C with C W* C = W supplied by the covering theorems."""
    if not self_map_check(s.canonical().g) or not is_kernel_compatible(s):
        return []
    c = s.canonical()
    m = s.ell + 2
    pts = _probe_points(seed)
    cands: list[tuple[ConjugationSpec, str, bool]] = []

    her = classify_hermitian(s, seed)
    if her.family == "HermitianI":
        cands.append((Ca(2 * her.parameters["mu"].imag), "hermitian I", False))
    elif her.family == "HermitianIII":
        p = her.parameters
        cands.append((Ca(-2 * p["beta"].imag / p["alpha"]), "hermitian III", False))

    uni = classify_unitary(s, seed)
    if uni.family == "UnitaryI":
        lam = abs(uni.parameters["C"]) ** (2 / m)
        if abs(lam - 1) > EPS_P:
            cands.append((UCstarU(1, uni.parameters["delta"] / (lam - 1)), "unitary I", False))
        else:
            cands.append((Ca(0), "unitary I (g a translation)", True))
    elif uni.family == "UnitaryII":
        cands.append((Ca(uni.parameters["alpha"] + uni.parameters["theta"]), "unitary II", False))

    ca = Ca_parameters(s)
    if ca == EVERY_A:
        cands.append((Ca(0), "C_a case II (translation)", True))
    else:
        cands.extend((Ca(a), "C_a parameter match", False) for a in ca)

    aff = _affine_mu_w0(c.g)
    if aff is not None and isinstance(c.f, Constant):
        mu, w0 = aff
        if abs(w0) <= _tol(w0, mu):
            cands.append((Cstar(), "composition g = mu w", False))
        elif abs(w0.real) <= _tol(w0) and abs(mu - 1) > EPS_P:
            cands.append((UCstarU(1, w0.imag / (mu - 1)), "composition g = mu w + i r", False))

    cs = classify_Cstar(s, seed)
    if cs:
        cands.append((Cstar(), "C_star family", False))

    out: list[Symmetry] = []
    seen = set()
    for spec, source, every in cands:
        key = ("every",) if every else spec
        if key in seen:
            continue
        if every:
            specs = [Ca(a) for a in (0.0, 1.0, -2.5)]
        else:
            specs = [spec]
        res = max(conjugation_residual(c, sp, pts) for sp in specs)
        if res <= CERT_TOL:
            seen.add(key)
            out.append(Symmetry(spec, source, res, every))
    return out


NOT_COMPLEX_SYMMETRIC = "NotComplexSymmetric"
NO_OBSTRUCTION = "NoObstruction"


def symmetry_obstruction(g, via_adjoint: bool = False) -> str:
    """NotComplexSymmetric when C_g has an interior fixed point.

    With via_adjoint the fixed points of the adjoint symbol g* are used too;
    C_g is complex symmetric exactly when its adjoint is.
    """
    aff = _affine_mu_w0(g)
    if aff is None or aff[1].real < -_tol(aff[1]):
        raise PreconditionViolation(f"{g} does not induce a bounded composition operator of the form mu w + w0")
    mu, w0 = aff
    maps = [MoebiusMap.affine(mu, w0)]
    if via_adjoint:
        maps.append(MoebiusMap.affine(1 / mu, w0.conjugate() / mu))
    for h in maps:
        try:
            if fixed_points(h).interior:
                return NOT_COMPLEX_SYMMETRIC
        except IdentityMap:
            return NO_OBSTRUCTION
    return NO_OBSTRUCTION


# --------------------------------------------------------------------------
# composition operators C_g with g = mu w + w0


@dataclass(frozen=True)
class CompOpProperties:
    normal: bool
    selfadjoint: bool
    unitary: bool
    isometric: bool

    def to_json(self) -> dict:
        return {"normal": self.normal, "selfadjoint": self.selfadjoint,
                "unitary": self.unitary, "isometric": self.isometric}


def _check_affine(mu, w0):
    mu = float(mu)
    w0 = complex(w0)
    if not mu > 0 or w0.real < -_tol(w0):
        raise PreconditionViolation(f"g = {mu} w + {w0} does not induce a bounded composition operator")
    return mu, w0


def comp_op_properties(ell: int, mu: float, w0: complex) -> CompOpProperties:
    mu, w0 = _check_affine(mu, w0)
    one = abs(mu - 1) <= EPS_P
    axis = abs(w0.real) <= _tol(w0)
    real = abs(w0.imag) <= _tol(w0)
    return CompOpProperties(normal=one or axis, selfadjoint=one and real, unitary=one and axis,
                            isometric=one and axis)


def composition_pair(ell: int, mu: float, w0: complex) -> SymbolPair:
    return SymbolPair(ell, Constant(1), MoebiusMap.affine(mu, w0))


def comp_op_direct(ell: int, mu: float, w0: complex, points, tol: float = 1e-9) -> CompOpProperties:
    """The same four properties decided by kernel computations alone."""
    s = composition_pair(ell, mu, w0)
    normal = selfadj = co_iso = iso = True
    for z in points:
        k = kernel(ell, z)
        wk, sk = apply(s, k), adjoint(s, k)
        wsk, swk = apply(s, sk), adjoint(s, wk)
        normal &= relative_residual(wsk, swk) <= tol
        selfadj &= relative_residual(wk, sk) <= tol
        iso &= relative_residual(swk, k) <= tol
        co_iso &= relative_residual(wsk, k) <= tol
    return CompOpProperties(normal=normal, selfadjoint=selfadj, unitary=iso and co_iso, isometric=iso)


def comp_adjoint(ell: int, mu: float, w0: complex, seed: int = 0) -> tuple[float, MoebiusMap]:
    """(mu^-(l+2), g*) with C_g* = mu^-(l+2) C_{g*}, g*(w) = (w + conj(w0))/mu."""
    mu, w0 = _check_affine(mu, w0)
    scalar = mu ** -(ell + 2)
    gstar = normalize_moebius(MoebiusMap.affine(1 / mu, w0.conjugate() / mu))
    s = composition_pair(ell, mu, w0)
    t = SymbolPair(ell, Constant(scalar), gstar)
    rng = make_rng(seed)
    zs = sample_points(rng, 10)
    ws = sample_points(rng, 10)
    for z, w in zip(zs, ws):
        lhs = inner_product(apply(s, kernel(ell, z)), kernel(ell, w))
        rhs = inner_product(kernel(ell, z), apply(t, kernel(ell, w)))
        if abs(lhs - rhs) > 1e-12 * max(abs(lhs), abs(rhs)):
            raise InternalConsistencyError(f"adjoint pairing fails at z={z}, w={w}: {lhs} vs {rhs}")
    return scalar, gstar


# --------------------------------------------------------------------------
# everything at once


def classify_all(s: SymbolPair, seed: int = 0) -> dict:
    out: dict = {}
    verdict = self_map_check(s.canonical().g)
    out["self_map"] = {"is_self_map": verdict.is_self_map, "branch": verdict.branch,
                       "witness": None if verdict.witness is None else complex_to_json(verdict.witness),
                       "flags": list(verdict.flags)}
    out["kernel_compatible"] = is_kernel_compatible(s) if verdict else False
    out["bounded"] = bounded_check(s) if verdict else UNKNOWN
    if not verdict or not out["kernel_compatible"]:
        out["reports"] = []
        out["symmetries"] = []
        return out
    reports = [classify_hermitian(s, seed), classify_unitary(s, seed), classify_Cstar(s, seed)]
    ca = Ca_parameters(s)
    for a in ([0.0] if ca == EVERY_A else ca):
        reports.append(classify_Ca(s, a, seed))
    out["reports"] = [r.to_json() for r in reports if r]
    out["symmetries"] = [sym.to_json() for sym in find_symmetry(s, seed)]
    g = s.canonical().g
    aff = _affine_mu_w0(g)
    if aff is not None and aff[1].real >= -_tol(aff[1]):
        out["obstruction"] = symmetry_obstruction(g)
        try:
            fp = fixed_points(g)
            out["interior_fixed_points"] = [complex_to_json(z) for z in fp.interior]
        except IdentityMap:
            out["interior_fixed_points"] = "all"
    return out
