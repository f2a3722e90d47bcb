"""The Laplace bridge to a weighted Lebesgue space on the positive half-line.

Functions are finite sums of t^(l+1) e^(-rate t) terms; the space carries
the weight Gamma(1+l) / (2^l t^(1+l)).  The transform is
L(h)(z) = int_0^inf h(t) e^(-z t) dt, under which

    (2^l / l!) t^(l+1) e^(-t conj(z))  ->  K_z.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field

import mpmath
import numpy as np
from scipy import special

from .core import (
    Constant,
    KernelSpan,
    MoebiusMap,
    SymbolPair,
    kernel,
    check_ell,
    complex_from_json,
    complex_to_json,
    half_plane_point,
    ipow,
    make_rng,
    sample_points,
)
from .errors import DomainViolation, PreconditionViolation, ToleranceNotMet
from .kernelspace import RESIDUAL_DPS
from .operators import wco_apply
from .quadrature import GAUSS, KRONROD, NODES, QuadratureConfig


@dataclass(frozen=True)
class ExponentialSum:
    """t -> sum_i coeff_i t^(l+1) exp(-rate_i t)."""

    ell: int
    terms: tuple[tuple[complex, complex], ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "ell", check_ell(self.ell))
        terms = tuple((complex(c), complex(r)) for c, r in self.terms)
        for _, r in terms:
            if not r.real > 0:
                raise DomainViolation(f"rate {r} must have positive real part")
        object.__setattr__(self, "terms", terms)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape, dtype=complex)
        for c, r in self.terms:
            out += c * t ** (self.ell + 1) * np.exp(-r * t)
        return out

    def __mul__(self, scalar):
        s = complex(scalar)
        return ExponentialSum(self.ell, tuple((s * c, r) for c, r in self.terms))

    __rmul__ = __mul__

    def __add__(self, other):
        if not isinstance(other, ExponentialSum):
            return NotImplemented
        return ExponentialSum(self.ell, self.terms + other.terms)

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def to_json(self) -> dict:
        return {"ell": self.ell, "terms": [{"coeff": complex_to_json(c), "rate": complex_to_json(r)}
                                           for c, r in self.terms]}

    @classmethod
    def from_json(cls, obj: dict) -> "ExponentialSum":
        return cls(int(obj["ell"]), tuple((complex_from_json(t["coeff"]), complex_from_json(t["rate"]))
                                          for t in obj.get("terms", [])))


def monomial(ell: int, coeff: complex, rate: complex) -> ExponentialSum:
    return ExponentialSum(ell, ((coeff, rate),))


def kernel_preimage(ell: int, z: complex, coeff: complex = 1.0) -> ExponentialSum:
    """Preimage of coeff * K_z: (2^l/l!) t^(l+1) exp(-t conj(z))."""
    ell = check_ell(ell)
    z = half_plane_point(z)
    return monomial(ell, coeff * 2**ell / math.factorial(ell), z.conjugate())


def span_preimage(h: KernelSpan) -> ExponentialSum:
    c0 = 2**h.ell / math.factorial(h.ell)
    return ExponentialSum(h.ell, tuple((c * c0, z.conjugate()) for c, z in h.terms))


def laplace_closed(em: ExponentialSum, z: complex) -> complex:
    """sum coeff (l+1)! / (rate + z)^(l+2)."""
    z = complex(z)
    total = 0j
    fact = math.factorial(em.ell + 1)
    for c, r in em.terms:
        if not (r + z).real > 0:
            raise DomainViolation(f"transform diverges: Re(rate + z) = {(r + z).real}")
        total += c * fact / ipow(r + z, em.ell + 2)
    return total


def _weight_constant(ell: int) -> float:
    return math.gamma(1 + ell) / 2**ell


def lebesgue_inner(e1: ExponentialSum, e2: ExponentialSum) -> complex:
    """Closed-form inner product from Gamma integrals."""
    if e1.ell != e2.ell:
        raise ValueError("weight index mismatch")
    ell = e1.ell
    k = math.gamma(1 + ell) * math.gamma(ell + 2) / 2**ell
    return sum(
        (c * d.conjugate() * k / ipow(r + s.conjugate(), ell + 2) for c, r in e1.terms for d, s in e2.terms),
        0j,
    )


def lebesgue_norm(em: ExponentialSum) -> float:
    v = lebesgue_inner(em, em).real
    return math.sqrt(max(v, 0.0))


def lebesgue_distance(e1: ExponentialSum, e2: ExponentialSum) -> float:
    """||e1 - e2|| at extended precision over the raw term lists."""
    ell = e1.ell
    terms = list(e1.terms) + [(-c, r) for c, r in e2.terms]
    with mpmath.workdps(RESIDUAL_DPS):
        k = mpmath.gamma(1 + ell) * mpmath.gamma(ell + 2) / 2**ell
        mt = [(mpmath.mpc(c), mpmath.mpc(r)) for c, r in terms]
        tot = mpmath.mpc(0)
        for c, r in mt:
            for d, s in mt:
                tot += c * mpmath.conj(d) * k / (r + mpmath.conj(s)) ** (ell + 2)
        return float(mpmath.sqrt(max(tot.real, 0)))


def relative_distance(e1: ExponentialSum, e2: ExponentialSum) -> float:
    scale = max(lebesgue_norm(e1), lebesgue_norm(e2))
    return 0.0 if scale == 0 else lebesgue_distance(e1, e2) / scale


# --------------------------------------------------------------------------
# numeric half-line integrals


def _gk_batch(fn, intervals: np.ndarray):
    a, b = intervals[:, 0], intervals[:, 1]
    c, h = (a + b) / 2, (b - a) / 2
    t = c[:, None] + h[:, None] * NODES[None, :]
    F = fn(t.reshape(-1)).reshape(t.shape)
    k = (F * KRONROD).sum(axis=1) * h
    g = (F * GAUSS).sum(axis=1) * h
    return k, np.abs(k - g)


def integrate_half_line(fn, tail, scale: float, cfg: QuadratureConfig | None = None) -> tuple[complex, float]:
    """int_0^inf fn with geometric truncation; tail(T) bounds int_T^inf |fn|."""
    cfg = cfg or QuadratureConfig()
    T = 4.0 / scale
    breaks = [0.0] + [T * 2.0**k for k in range(-12, 1)]
    counter = itertools.count()
    heap, vals, errs = [], {}, {}

    def add(iv):
        k, e = _gk_batch(fn, iv)
        for (lo, hi), kv, ev in zip(iv, k, e):
            i = next(counter)
            vals[i], errs[i] = complex(kv), float(ev)
            heapq.heappush(heap, (-float(ev), i, lo, hi))

    add(np.array(list(zip(breaks[:-1], breaks[1:]))))
    subdivisions = 0
    while True:
        val = sum(vals.values())
        tol = max(cfg.rel_tol * abs(val), cfg.abs_floor)
        err = math.fsum(errs.values())
        tb = tail(T)
        if err + tb <= tol:
            return val, err + tb
        if tb > 0.5 * tol:
            new = T * cfg.truncation_growth
            add(np.array([[T, new]]))
            T = new
            continue
        if subdivisions >= cfg.max_subdivisions:
            raise ToleranceNotMet(f"half-line integral error {err:.3e} above {tol:.3e}")
        _, i, lo, hi = heapq.heappop(heap)
        del vals[i], errs[i]
        mid = (lo + hi) / 2
        add(np.array([[lo, mid], [mid, hi]]))
        subdivisions += 1


def _upper_gamma(a: float, x: float) -> float:
    return special.gammaincc(a, x) * special.gamma(a)


def laplace_numeric(em: ExponentialSum, z: complex, cfg: QuadratureConfig | None = None) -> tuple[complex, float]:
    z = complex(z)
    ell = em.ell
    if not em.terms:
        return 0j, 0.0
    sig = min((r + z).real for _, r in em.terms)
    if not sig > 0:
        raise DomainViolation("transform diverges")
    amp = sum(abs(c) for c, _ in em.terms)

    def tail(T):
        return amp * _upper_gamma(ell + 2, sig * T) / sig ** (ell + 2)

    return integrate_half_line(lambda t: em(t) * np.exp(-z * t), tail, sig, cfg)


def lebesgue_norm_numeric(em: ExponentialSum, cfg: QuadratureConfig | None = None) -> tuple[float, float]:
    """sqrt(int |h|^2 Gamma(1+l)/(2^l t^(1+l)) dt) by quadrature, with error on the square."""
    ell = em.ell
    if not em.terms:
        return 0.0, 0.0
    sig = min(r.real for _, r in em.terms)
    amp = sum(abs(c) for c, _ in em.terms)
    w = _weight_constant(ell)

    def fn(t):
        v = em(t)
        return w * (v.real**2 + v.imag**2) / np.where(t > 0, t, 1.0) ** (ell + 1) + 0j

    def tail(T):
        return w * amp**2 * _upper_gamma(ell + 2, 2 * sig * T) / (2 * sig) ** (ell + 2)

    val, err = integrate_half_line(fn, tail, sig, cfg)
    return math.sqrt(max(val.real, 0.0)), err


# --------------------------------------------------------------------------
# conjugations and weighted composition on the Lebesgue side


def pullback_conjugation_Ca(ell: int, a: float, em: ExponentialSum) -> ExponentialSum:
    """L^-1 C_a L: coeff -> conj(coeff), rate -> conj(rate) - i a."""
    return ExponentialSum(ell, tuple((c.conjugate(), r.conjugate() - 1j * a) for c, r in em.terms))


def pullback_conjugation_Cstar(ell: int, em: ExponentialSum) -> ExponentialSum:
    """L^-1 C_star L on exponential sums: coeff -> conj(coeff) conj(rate)^-(l+2), rate -> 1/conj(rate)."""
    return ExponentialSum(
        ell, tuple((c.conjugate() / ipow(r.conjugate(), ell + 2), 1 / r.conjugate()) for c, r in em.terms)
    )


@dataclass(frozen=True)
class ExponentialWeight:
    """psi(t) = amplitude * exp(-rate t); rate may be purely imaginary."""

    amplitude: complex
    rate: complex

    def __call__(self, t):
        return self.amplitude * np.exp(-self.rate * np.asarray(t, dtype=float))


@dataclass(frozen=True)
class Scaling:
    """phi(t) = t / lam."""

    lam: float

    def __call__(self, t):
        return np.asarray(t, dtype=float) / self.lam


def apply_lebesgue_wco(psi: ExponentialWeight, phi: Scaling, em: ExponentialSum) -> ExponentialSum:
    """h -> psi * (h o phi) on exponential sums."""
    lam, ell = phi.lam, em.ell
    k = psi.amplitude / lam ** (ell + 1)
    return ExponentialSum(ell, tuple((k * c, r / lam + psi.rate) for c, r in em.terms))


@dataclass(frozen=True)
class PullbackResult:
    psi: ExponentialWeight
    phi: Scaling
    residual: float


def bergman_form_II(ell: int, theta: complex, lam: float, b: complex, c: float):
    """Translation d in g(w) = lam w + d for the composition pair with f = theta."""
    s = abs(b) ** (2.0 / (ell + 2))
    return 1j * c * (lam / s - 1)


def pullback_wco(
    ell: int, theta: complex, lam: float, b: complex, c: float, seed: int = 0, points: int = 10
) -> PullbackResult:
    """Lebesgue-side data (psi, phi) of W_{f,g} for f = theta, g = lam w + d.

    psi(t) = (theta/lam) exp(-t d/lam), phi(t) = t/lam, with
    d = i c (lam |b|^(-2/(l+2)) - 1).  Certified on kernel preimages at
    random points.
    """
    ell = check_ell(ell)
    lam = float(lam)
    b = complex(b)
    if not lam > 0 or b == 0:
        raise PreconditionViolation("need lam > 0 and b != 0")
    theta = complex(theta)
    d = bergman_form_II(ell, theta, lam, b, c)
    psi = ExponentialWeight(theta / lam, d / lam)
    phi = Scaling(lam)
    worst = 0.0
    pair = SymbolPair(ell, Constant(theta), MoebiusMap.affine(lam, d))
    for z in sample_points(make_rng(seed), points):
        got = apply_lebesgue_wco(psi, phi, kernel_preimage(ell, z))
        want = span_preimage(wco_apply(pair, kernel(ell, z)).result)
        worst = max(worst, relative_distance(got, want))
    return PullbackResult(psi, phi, worst)
