"""Weighted composition operators, adjoints and conjugations on kernel spans.

For a canonical pair the image of a kernel is again a scalar multiple of a
kernel:

    f(z) K_w(g(z)) = k (a + c conj(w))^-(l+2) K_{w'}(z),
    w' = conj((b + d conj(w)) / (a + c conj(w)))

when g = (az+b)/(cz+d) and f = k/(cz+d)^(l+2).  Constant g = mu with
f = k/(z+kappa)^(l+2) sends K_w to k (mu + conj(w))^-(l+2) K_{conj(kappa)}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

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
    complex_from_json,
    complex_to_json,
    ipow,
    kernel,
    make_map,
    make_rng,
    sample_points,
)
from .errors import ImageOutsideHalfPlane, InternalConsistencyError, NotKernelCompatible, WeightMismatch
from .kernelspace import span_eval_array
from .maps import self_map_check

# pointwise certification of kernel images
CERT_POINTS = 10
CERT_TOL = 1e-12


# --------------------------------------------------------------------------
# conjugations


@dataclass(frozen=True)
class Ca:
    """h(z) -> conj(h(conj(z) + i a))."""

    a: float

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))

    def to_json(self):
        return {"kind": "Ca", "a": self.a}


@dataclass(frozen=True)
class Cstar:
    """h(z) -> z^-(l+2) conj(h(1/conj(z)))."""

    def to_json(self):
        return {"kind": "Cstar"}


@dataclass(frozen=True)
class UCstarU:
    """U_{b,c} Cstar U*_{b,c} with U_{b,c} h(z) = b h(|b|^(2/(l+2)) z + i c)."""

    b: complex
    c: float

    def __post_init__(self):
        object.__setattr__(self, "b", complex(self.b))
        object.__setattr__(self, "c", float(self.c))
        if self.b == 0:
            raise ValueError("UCstarU needs b != 0")

    def to_json(self):
        return {"kind": "UCstarU", "b": complex_to_json(self.b), "c": self.c}


ConjugationSpec = Union[Ca, Cstar, UCstarU]


def conjugation_from_json(obj: dict) -> ConjugationSpec:
    kind = obj.get("kind")
    if kind == "Ca":
        return Ca(float(obj["a"]))
    if kind == "Cstar":
        return Cstar()
    if kind == "UCstarU":
        return UCstarU(complex_from_json(obj["b"]), float(obj["c"]))
    raise ValueError(f"unknown conjugation kind {kind!r}")


def u_scale(ell: int, b: complex) -> float:
    """|b|^(2/(l+2)); its (l+2)-th power is |b|^2."""
    return abs(b) ** (2.0 / (ell + 2))


def u_apply(b: complex, c: float, h: KernelSpan) -> KernelSpan:
    """U_{b,c} on a span: K_w -> (1/conj(b)) K_{(w - i c)/s}."""
    s = u_scale(h.ell, b)
    return KernelSpan(h.ell, tuple((x / b.conjugate(), (w - 1j * c) / s) for x, w in h.terms))


def u_adjoint_apply(b: complex, c: float, h: KernelSpan) -> KernelSpan:
    """U*_{b,c} on a span: K_w -> conj(b) K_{s w + i c}."""
    s = u_scale(h.ell, b)
    return KernelSpan(h.ell, tuple((x * b.conjugate(), s * w + 1j * c) for x, w in h.terms))


def conjugate(spec: ConjugationSpec, h: KernelSpan) -> KernelSpan:
    """Apply a conjugation (antilinear) to a span via its kernel rule."""
    m = h.ell + 2
    if isinstance(spec, Ca):
        return KernelSpan(h.ell, tuple((x.conjugate(), z.conjugate() + 1j * spec.a) for x, z in h.terms))
    if isinstance(spec, Cstar):
        return KernelSpan(h.ell, tuple((x.conjugate() / ipow(z, m), 1 / z.conjugate()) for x, z in h.terms))
    if isinstance(spec, UCstarU):
        return u_apply(spec.b, spec.c, conjugate(Cstar(), u_adjoint_apply(spec.b, spec.c, h)))
    raise TypeError(f"unknown conjugation {spec!r}")


def conjugate_pointwise(spec: ConjugationSpec, func, ell: int):
    """The conjugation applied to an arbitrary callable, from its definition."""
    m = ell + 2
    if isinstance(spec, Ca):
        return lambda z: np.conj(func(np.conj(z) + 1j * spec.a))
    if isinstance(spec, Cstar):
        return lambda z: np.conj(func(1 / np.conj(z))) / ipow(z, m)
    if isinstance(spec, UCstarU):
        s = u_scale(ell, spec.b)
        b, c = spec.b, spec.c

        def u_star(fn):
            return lambda z: fn((z - 1j * c) / s) / b

        def u(fn):
            return lambda z: b * fn(s * z + 1j * c)

        return u(conjugate_pointwise(Cstar(), u_star(func), ell))
    raise TypeError(f"unknown conjugation {spec!r}")


# --------------------------------------------------------------------------
# weighted composition operators


@dataclass(frozen=True)
class OperatorAction:
    result: KernelSpan
    scalar_log: tuple[complex, ...] = field(default=())


def _pole_matches(kappa: complex, target: complex) -> bool:
    return close(kappa, target, EPS_P)


def is_kernel_compatible(s: SymbolPair) -> bool:
    """True when W_{f,g} sends every kernel to a multiple of a kernel."""
    c = s.canonical()
    f, g = c.f, c.g
    if isinstance(f, Constant) and f.is_zero:
        return True
    if isinstance(g, ConstantMap):
        return isinstance(f, ReciprocalPower) and f.kappa.real > 0
    if g.c == 0:
        return isinstance(f, Constant)
    return isinstance(f, ReciprocalPower) and _pole_matches(f.kappa, g.d)


def _kernel_image(s: SymbolPair, w: complex) -> tuple[complex, complex]:
    """(lambda, w') with W K_w = lambda K_{w'} for a canonical compatible pair."""
    f, g, m = s.f, s.g, s.ell + 2
    if isinstance(g, ConstantMap):
        return f.c / ipow(g.value + w.conjugate(), m), f.kappa.conjugate()
    a, b, c, d = g.coefficients
    den = a + c * w.conjugate()
    k = f.c
    return k / ipow(den, m), ((b + d * w.conjugate()) / den).conjugate()


def _certify(s: SymbolPair, h: KernelSpan, image: KernelSpan, rng_seed: int = 12345):
    """Compare f * (h o g) with the computed image at fixed probe points."""
    probes = np.array(sample_points(make_rng(rng_seed), CERT_POINTS, re=(0.2, 5.0), im=(-5.0, 5.0)))
    with np.errstate(all="ignore"):
        direct = s.f_at(probes) * span_eval_array(h, np.asarray(s.g_at(probes), dtype=complex))
    got = span_eval_array(image, probes)
    scale = np.zeros(len(probes))
    n = 2**image.ell * (1 + image.ell)
    for x, z in image.terms:
        scale += np.abs(x * n / ipow(probes + z.conjugate(), image.ell + 2))
    scale = np.maximum(scale, np.abs(direct))
    err = np.abs(direct - got)
    bad = err > CERT_TOL * np.maximum(scale, 1e-300)
    if bad.any():
        i = int(np.argmax(bad))
        raise InternalConsistencyError(
            f"kernel image mismatch at {probes[i]}: direct {direct[i]}, span {got[i]}"
        )


def wco_apply(s: SymbolPair, h: KernelSpan, certify: bool = True) -> OperatorAction:
    """W_{f,g} h for a kernel-compatible pair."""
    if h.ell != s.ell:
        raise WeightMismatch(f"pair has weight {s.ell}, span has {h.ell}")
    if not is_kernel_compatible(s):
        raise NotKernelCompatible(f"{s} does not map kernels to kernels")
    c = s.canonical()
    if isinstance(c.f, Constant) and c.f.is_zero:
        return OperatorAction(KernelSpan(h.ell, ()), tuple(0j for _ in h.terms))
    terms, log = [], []
    for x, w in h.terms:
        lam, w2 = _kernel_image(c, w)
        if not w2.real > 0:
            raise ImageOutsideHalfPlane(f"kernel K_{w} maps to K_{w2} outside the half-plane")
        terms.append((x * lam, w2))
        log.append(lam)
    out = KernelSpan(h.ell, tuple(terms))
    if certify and h.terms:
        _certify(c, h, out)
    return OperatorAction(out, tuple(log))


def wco_adjoint_on_kernel(s: SymbolPair, z: complex, coeff: complex = 1.0) -> OperatorAction:
    """W* (coeff K_z) = coeff conj(f(z)) K_{g(z)}."""
    z = complex(z)
    gz = complex(s.g_at(z))
    if not gz.real > 0:
        raise ImageOutsideHalfPlane(f"g({z}) = {gz} is outside the half-plane")
    fz = complex(s.f_at(z)).conjugate()
    return OperatorAction(kernel(s.ell, gz, coeff * fz), (fz,))


def wco_adjoint(s: SymbolPair, h: KernelSpan) -> OperatorAction:
    """Linear extension of the kernel rule to spans."""
    if h.ell != s.ell:
        raise WeightMismatch(f"pair has weight {s.ell}, span has {h.ell}")
    terms, log = [], []
    for x, z in h.terms:
        act = wco_adjoint_on_kernel(s, z, x)
        terms.extend(act.result.terms)
        log.extend(act.scalar_log)
    return OperatorAction(KernelSpan(h.ell, tuple(terms)), tuple(log))


def apply(s: SymbolPair, h: KernelSpan) -> KernelSpan:
    return wco_apply(s, h).result


def adjoint(s: SymbolPair, h: KernelSpan) -> KernelSpan:
    return wco_adjoint(s, h).result


# --------------------------------------------------------------------------
# unitary transport of symbol pairs


def transport_pair(pair: SymbolPair, b: complex, c: float) -> SymbolPair:
    """The pair of U*_{b,c} W_{f,g} U_{b,c}: f((z-ic)/s), A g A^-1 with A(w) = s w + i c."""
    ell = pair.ell
    s = u_scale(ell, b)
    if isinstance(pair.f, Constant):
        f_hat = pair.f
    else:
        f = pair.f
        f_hat = ReciprocalPower(f.c * ipow(s, ell + 2), f.a, s * f.b - 1j * c * f.a)
    g = pair.g
    if isinstance(g, ConstantMap):
        g_hat = ConstantMap(s * g.value + 1j * c)
    else:
        A = MoebiusMap(s, 1j * c, 0, 1)
        A_inv = MoebiusMap(1, -1j * c, 0, s)
        g_hat = make_map(*A.compose(g.compose(A_inv)).coefficients)
    return SymbolPair(ell, f_hat, g_hat)


def inverse_transport(pair: SymbolPair, b: complex, c: float) -> SymbolPair:
    """Undo transport_pair: f_hat(s w + i c) and A^-1 g_hat A."""
    ell = pair.ell
    s = u_scale(ell, b)
    if isinstance(pair.f, Constant):
        f = pair.f
    else:
        fh = pair.f
        f = ReciprocalPower(fh.c, fh.a * s, fh.b + 1j * c * fh.a)
    gh = pair.g
    if isinstance(gh, ConstantMap):
        g = ConstantMap((gh.value - 1j * c) / s)
    else:
        A = MoebiusMap(s, 1j * c, 0, 1)
        A_inv = MoebiusMap(1, -1j * c, 0, s)
        g = make_map(*A_inv.compose(gh.compose(A)).coefficients)
    return SymbolPair(ell, f, g)


# --------------------------------------------------------------------------
# boundedness

BOUNDED_LEMMA = "BoundedByLemma"
BOUNDED_AFFINE = "BoundedByAffine"
BOUNDED_RANK_ONE = "BoundedRankOne"
ZERO_OPERATOR = "ZeroOperator"
UNKNOWN = "Unknown"


def bounded_check(s: SymbolPair) -> str:
    c = s.canonical()
    f, g = c.f, c.g
    if isinstance(f, Constant) and f.is_zero:
        return ZERO_OPERATOR
    if not self_map_check(g):
        return UNKNOWN
    if isinstance(g, ConstantMap):
        # W h = h(mu) f is rank one; bounded iff f lies in the space
        if isinstance(f, ReciprocalPower) and f.kappa.real > 0:
            return BOUNDED_RANK_ONE
        return UNKNOWN
    if g.c == 0:
        u, v = g.a / g.d, g.b / g.d
        if isinstance(f, Constant) and abs(u.imag) <= EPS_P * abs(u) and u.real > 0 and v.real >= -EPS_P * max(1, abs(v)):
            return BOUNDED_AFFINE
        return UNKNOWN
    if isinstance(f, ReciprocalPower) and _pole_matches(f.kappa, g.d):
        return BOUNDED_LEMMA
    return UNKNOWN


def is_bounded(s: SymbolPair) -> bool:
    return bounded_check(s) != UNKNOWN


def rank_one_norm(s: SymbolPair) -> float | None:
    """||W|| for constant g = mu and f = k/(z + kappa)^(l+2).

    W h = h(mu) f = <h, K_mu> k K_{conj(kappa)} / (2^l (1+l)), so the norm is
    |k| ||K_mu|| ||K_{conj(kappa)}|| / (2^l (1+l)).
    """
    from .kernelspace import kernel_norm_squared

    c = s.canonical()
    if not (isinstance(c.g, ConstantMap) and isinstance(c.f, ReciprocalPower)):
        return None
    if not (c.g.value.real > 0 and c.f.kappa.real > 0):
        return None
    nk = kernel_norm_squared(s.ell, c.g.value) * kernel_norm_squared(s.ell, c.f.kappa.conjugate())
    return abs(c.f.c) * math.sqrt(nk) / (2**s.ell * (1 + s.ell))
