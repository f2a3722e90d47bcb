"""Independent numerical oracle for weighted area integrals over the half-plane.

<h1, h2> = (1/pi) iint x^l h1(x+iy) conj(h2(x+iy)) dx dy is integrated over
the square [0, rho] x [-rho, rho] with tensor Gauss-Kronrod (7/15) panels,
refined largest-error-first, while rho grows geometrically until an explicit
bound on the integral outside the square is below tolerance.

Tail bound: if |h_k(x)| <= A_k / (|x| - Z)^(l+2) for |x| > Z, then outside
the square (contained in |x| > rho)

    |tail| <= (A1 A2 B_l / pi) (rho/(rho-Z))^(l+1) (rho-Z)^-(l+2) / (l+2),

with B_l = int_{-pi/2}^{pi/2} cos^l = sqrt(pi) Gamma((l+1)/2) / Gamma(l/2+1).
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core import KernelSpan, SymbolPair, check_ell, kernel_constant, make_rng, sample_points
from .errors import DecayViolation, ToleranceNotMet, WeightMismatch
from .kernelspace import mp_norm, relative_residual, span_eval_array

# Kronrod 15-point abscissae (nonnegative half) and weights; Gauss 7-point
# weights live on the odd-indexed abscissae.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS = np.zeros(15)
GAUSS[1::2] = np.concatenate([_WG[:-1], _WG[::-1]])


@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-8
    abs_floor: float = 1e-14
    max_subdivisions: int = 10**4
    truncation_growth: float = 2.0

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if not self.truncation_growth > 1:
            raise ValueError("truncation_growth must exceed 1")
        if not self.abs_floor >= 0:
            raise ValueError("abs_floor must be nonnegative")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be positive")

    def to_json(self) -> dict:
        return {
            "rel_tol": self.rel_tol,
            "abs_floor": self.abs_floor,
            "max_subdivisions": self.max_subdivisions,
            "truncation_growth": self.truncation_growth,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "QuadratureConfig":
        return cls(**{k: obj[k] for k in ("rel_tol", "abs_floor", "max_subdivisions", "truncation_growth") if k in obj})


@dataclass(frozen=True)
class DecayingFunction:
    """A vectorized callable with a decay certificate.

    |func(x)| <= amplitude / (|x| - shift)^(l+2) must hold for
    |x| > max(shift, valid_from).  features are points whose mirror images
    -conj(p) are near singularities; they steer the initial panel grid.
    """

    func: Callable
    amplitude: float
    shift: float = 0.0
    features: tuple = ()
    valid_from: float = 0.0

    def __call__(self, x):
        return self.func(x)


@dataclass(frozen=True)
class QuadResult:
    value: complex
    error: float
    radius: float
    panels: int
    subdivisions: int


def _as_decaying(h, ell: int) -> DecayingFunction:
    if isinstance(h, DecayingFunction):
        return h
    if isinstance(h, KernelSpan):
        if h.ell != ell:
            raise WeightMismatch(f"span has weight {h.ell}, integral uses {ell}")
        amp = sum(abs(c) for c in h.coefficients) * kernel_constant(ell)
        shift = max((abs(z) for z in h.points), default=0.0)
        return DecayingFunction(lambda x, h=h: span_eval_array(h, x), amp, shift, tuple(h.points))
    raise DecayViolation("no decay certificate: wrap the callable in DecayingFunction")


def _beta_ell(ell: int) -> float:
    return math.sqrt(math.pi) * math.gamma((ell + 1) / 2) / math.gamma(ell / 2 + 1)


def tail_bound(ell: int, amplitude: float, shift: float, rho: float) -> float:
    if amplitude == 0:
        return 0.0
    if rho <= shift:
        return math.inf
    r = rho - shift
    return amplitude * _beta_ell(ell) / math.pi * (rho / r) ** (ell + 1) * r ** -(ell + 2) / (ell + 2)


def _probe_decay(h: DecayingFunction, ell: int, rho: float):
    r0 = max(rho, 2 * h.shift + 1, h.valid_from)
    radii = np.array([r0, 2 * r0, 8 * r0])
    angles = np.array([-1.5, -0.75, 0.0, 0.75, 1.5])
    pts = (radii[:, None] * np.exp(1j * angles[None, :])).ravel()
    bound = h.amplitude / (np.abs(pts) - h.shift) ** (ell + 2)
    vals = np.abs(np.asarray(h(pts), dtype=complex))
    if np.any(~np.isfinite(vals)) or np.any(vals > bound * (1 + 1e-9) + 1e-300):
        raise DecayViolation("function exceeds its declared decay bound")


def _geometric(lo: float, hi: float, step: float = 2.0) -> list[float]:
    out = []
    x = lo
    while x < hi:
        out.append(x)
        x *= step
    out.append(hi)
    return out


def _initial_breaks(features, rho: float) -> tuple[np.ndarray, np.ndarray]:
    feats = [complex(p) for p in features] or [1 + 0j]
    h = min(max(p.real, 1e-6) for p in feats)
    h = min(h, rho / 4)
    xs = [0.0] + _geometric(h / 2, rho)
    ys = {-rho, rho}
    for p in feats:
        y0 = min(max(p.imag, -rho), rho)
        ys.add(y0)
        for d in _geometric(h / 2, 2 * rho):
            for y in (y0 - d, y0 + d):
                if -rho < y < rho:
                    ys.add(y)
    ys = sorted(ys)
    pruned = [ys[0]]
    for y in ys[1:-1]:
        if y - pruned[-1] >= h / 4:
            pruned.append(y)
    pruned.append(ys[-1])
    return np.array(sorted(set(xs))), np.array(pruned)


def _panels_from_breaks(xs, ys) -> np.ndarray:
    X0, Y0 = np.meshgrid(xs[:-1], ys[:-1], indexing="ij")
    X1, Y1 = np.meshgrid(xs[1:], ys[1:], indexing="ij")
    return np.stack([X0.ravel(), X1.ravel(), Y0.ravel(), Y1.ravel()], axis=1)


def _eval_panels(integrand, panels: np.ndarray):
    """Kronrod values and |Kronrod - Gauss| errors for a batch of panels."""
    x0, x1, y0, y1 = panels.T
    cx, hx = (x0 + x1) / 2, (x1 - x0) / 2
    cy, hy = (y0 + y1) / 2, (y1 - y0) / 2
    X = cx[:, None] + hx[:, None] * NODES[None, :]
    Y = cy[:, None] + hy[:, None] * NODES[None, :]
    Z = X[:, :, None] + 1j * Y[:, None, :]
    F = integrand(Z.reshape(-1)).reshape(Z.shape)
    jac = hx * hy
    k = np.einsum("pij,i,j->p", F, KRONROD, KRONROD) * jac
    g = np.einsum("pij,i,j->p", F, GAUSS, GAUSS) * jac
    return k, np.abs(k - g)


def _split(panel) -> np.ndarray:
    x0, x1, y0, y1 = panel
    xm, ym = (x0 + x1) / 2, (y0 + y1) / 2
    return np.array([[x0, xm, y0, ym], [xm, x1, y0, ym], [x0, xm, ym, y1], [xm, x1, ym, y1]])


def integrate(
    integrand,
    ell: int,
    amplitude: float,
    shift: float,
    features,
    cfg: QuadratureConfig,
    reference: float = 0.0,
    abs_target: float | None = None,
    batch: int = 16,
) -> QuadResult:
    """Adaptive integral of integrand over the right half-plane."""
    if amplitude == 0:
        return QuadResult(0j, 0.0, 0.0, 0, 0)
    feats = list(features)
    rho = max(4.0 * (shift + 1.0), 8.0)
    xs, ys = _initial_breaks(feats, rho)
    counter = itertools.count()
    values: dict[int, complex] = {}
    errors: dict[int, float] = {}
    heap: list = []

    def add(panels):
        k, e = _eval_panels(integrand, panels)
        for p, kv, ev in zip(panels, k, e):
            i = next(counter)
            values[i] = complex(kv)
            errors[i] = float(ev)
            heapq.heappush(heap, (-float(ev), i, tuple(p)))

    add(_panels_from_breaks(xs, ys))
    subdivisions = 0
    err_total = sum(errors.values())

    def tolerance(val):
        if abs_target is not None:
            return abs_target
        return max(cfg.rel_tol * max(abs(val), reference), cfg.abs_floor)

    while True:
        # refine inside the current square
        while True:
            val = sum(values.values())
            err_total = math.fsum(errors.values())
            tol = tolerance(val)
            if err_total <= 0.5 * tol:
                break
            if subdivisions >= cfg.max_subdivisions:
                raise ToleranceNotMet(
                    f"error {err_total:.3e} above {0.5 * tol:.3e} after {subdivisions} subdivisions"
                )
            take = min(batch, len(heap), cfg.max_subdivisions - subdivisions)
            children = []
            for _ in range(take):
                _, i, p = heapq.heappop(heap)
                del values[i], errors[i]
                children.append(_split(p))
            subdivisions += take
            add(np.concatenate(children))
        tail = tail_bound(ell, amplitude, shift, rho)
        if err_total + tail <= tol:
            break
        # grow the square: three rectangles around the old one
        new = rho * cfg.truncation_growth
        gx = np.array(_geometric(rho, new, 1.5))
        gy = np.array(sorted(set([-new] + [-v for v in _geometric(rho, new, 1.5)] + list(ys) + _geometric(rho, new, 1.5))))
        gy = gy[(gy >= -new) & (gy <= new)]
        xs_old = xs[xs <= rho]
        top = np.array([y for y in gy if y >= rho])
        bottom = np.array([y for y in gy if y <= -rho])
        blocks = [
            _panels_from_breaks(xs_old, top),
            _panels_from_breaks(xs_old, bottom),
            _panels_from_breaks(gx, gy),
        ]
        add(np.concatenate([b for b in blocks if len(b)]))
        xs = np.concatenate([xs_old, gx[1:]])
        ys = gy
        rho = new
    val = complex(math.fsum(v.real for v in values.values()), math.fsum(v.imag for v in values.values()))
    return QuadResult(val, err_total + tail, rho, len(values), subdivisions)


def quad_inner_product(ell: int, h1, h2, cfg: QuadratureConfig | None = None, reference: float = 0.0) -> QuadResult:
    """(1/pi) iint x^l h1 conj(h2) over the half-plane, with certified error."""
    cfg = cfg or QuadratureConfig()
    ell = check_ell(ell)
    d1, d2 = _as_decaying(h1, ell), _as_decaying(h2, ell)
    amp = d1.amplitude * d2.amplitude
    if amp == 0:
        return QuadResult(0j, 0.0, 0.0, 0, 0)
    shift = max(d1.shift, d2.shift, d1.valid_from, d2.valid_from)
    rho0 = max(4.0 * (shift + 1.0), 8.0)
    for h, d in ((h1, d1), (h2, d2)):
        if not isinstance(h, KernelSpan):
            _probe_decay(d, ell, rho0)

    def integrand(z):
        return (z.real**ell / math.pi) * d1(z) * np.conj(d2(z))

    return integrate(integrand, ell, amp, shift, tuple(d1.features) + tuple(d2.features), cfg, reference)


def quad_norm_squared(ell: int, h, cfg: QuadratureConfig | None = None, abs_target: float | None = None) -> QuadResult:
    cfg = cfg or QuadratureConfig()
    d = _as_decaying(h, ell)
    if d.amplitude == 0:
        return QuadResult(0j, 0.0, 0.0, 0, 0)
    if not isinstance(h, KernelSpan):
        _probe_decay(d, ell, max(4.0 * (d.shift + 1.0), 8.0))

    def integrand(z):
        v = d(z)
        return (z.real**ell / math.pi) * (v.real**2 + v.imag**2) + 0j

    return integrate(integrand, ell, d.amplitude**2, max(d.shift, d.valid_from), d.features, cfg,
                     abs_target=abs_target)


@dataclass(frozen=True)
class IdentityReport:
    exact_residual: float
    quad_residual: float
    quad_error: float

    def to_json(self) -> dict:
        return {"exact_residual": self.exact_residual, "quad_residual": self.quad_residual,
                "quad_error": self.quad_error}


def verify_identity(lhs: KernelSpan, rhs: KernelSpan, cfg: QuadratureConfig | None = None) -> IdentityReport:
    """Exact and quadrature residuals of lhs = rhs, both relative to the larger side."""
    cfg = cfg or QuadratureConfig()
    if lhs.ell != rhs.ell:
        raise WeightMismatch(f"weight index {lhs.ell} vs {rhs.ell}")
    exact = relative_residual(lhs, rhs)
    ell = lhs.ell
    n_l = quad_norm_squared(ell, lhs, cfg).value.real
    n_r = quad_norm_squared(ell, rhs, cfg).value.real
    scale = max(n_l, n_r)
    if scale <= 0:
        return IdentityReport(exact, 0.0, 0.0)
    diff = lhs.concat(-rhs)
    q = quad_norm_squared(ell, diff, cfg, abs_target=1e-13 * scale)
    quad = math.sqrt(max(q.value.real, 0.0) + q.error) / math.sqrt(scale)
    return IdentityReport(exact, quad, q.error / scale)


def operator_norm_estimate(s: SymbolPair, samples: int = 50, cfg: QuadratureConfig | None = None, seed: int = 0) -> float:
    """max ||W h|| / ||h|| over random kernel spans (a lower bound on ||W||)."""
    from .operators import apply

    rng = make_rng(seed)
    best = 0.0
    for i in range(samples):
        n = 1 + i % 4
        pts = sample_points(rng, n, re=(0.2, 4.0), im=(-3.0, 3.0))
        coef = rng.normal(size=n) + 1j * rng.normal(size=n)
        h = KernelSpan(s.ell, tuple(zip(coef, pts)))
        nh = mp_norm(h)
        if nh == 0:
            continue
        best = max(best, mp_norm(apply(s, h)) / nh)
    return best
