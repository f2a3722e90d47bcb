"""Self-maps of the right half-plane: admissibility, fixed points, iteration."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    EPS_P,
    ConstantMap,
    Map,
    MoebiusMap,
    canonical_map,
    half_plane_point,
    normalize_moebius,
    special_form,
)
from .errors import (
    Divergent,
    DomainViolation,
    IdentityMap,
    InternalConsistencyError,
    PreconditionViolation,
)

AFFINE = "AffineBranch"
SPECIAL1 = "SpecialBranch1"
SPECIAL2 = "SpecialBranch2"
BOUNDARY = "Boundary"


@dataclass(frozen=True)
class SelfMapVerdict:
    is_self_map: bool
    branch: str | None
    witness: complex | None = None
    flags: tuple[str, ...] = ()

    def __bool__(self):
        return self.is_self_map


def _grid() -> np.ndarray:
    xs = np.logspace(-3, 3, 100)
    ys = np.logspace(-3, 3, 50)
    ys = np.concatenate([-ys[::-1], ys])
    return (xs[None, :] + 1j * ys[:, None]).ravel()


GRID = _grid()


def _real_part_tol(values) -> np.ndarray:
    return EPS_P * np.maximum(1.0, np.abs(values))


def grid_falsifier(g: Map, points: np.ndarray | None = None) -> complex | None:
    """First grid point whose image has real part below -eps (None if none)."""
    pts = GRID if points is None else np.asarray(points, dtype=complex)
    with np.errstate(all="ignore"):
        vals = g(pts)
    bad = ~np.isfinite(vals) | (vals.real < -_real_part_tol(vals))
    if not bad.any():
        return None
    # report the worst offender
    score = np.where(np.isfinite(vals), vals.real / np.maximum(1.0, np.abs(vals)), -np.inf)
    return complex(pts[int(np.argmin(score))])


def _witness_candidates(g: Map) -> np.ndarray:
    cands = [GRID]
    ys = np.concatenate([-np.logspace(-3, 8, 60), np.logspace(-3, 8, 60)])
    cands.append(1e-9 + 1j * ys)
    cands.append(1.0 + 1j * ys)
    if isinstance(g, MoebiusMap) and g.c != 0:
        p, q, u = special_form(g)
        # near the pole, approached so that -q/(z-u) points left
        direction = q / abs(q)
        eps = np.logspace(-12, 1, 40)
        cands.append(u + eps * direction)
        # boundary minimiser of Re g when the pole lies left of the axis
        if u.real < 0:
            h = -u.real
            w = (1 + abs(q) / q) / (2 * h)
            if abs(w) > 1e-300:
                z = u + 1 / w
                cands.append(z.imag * 1j + np.logspace(-12, 0, 40))
        cands.append(np.array([u.imag * 1j + 1e-9, 1e-9 + 0j, complex(max(u.real, 0) + 1e-9, u.imag)]))
    return np.concatenate(cands)


def find_witness(g: Map) -> complex | None:
    """A point of the half-plane where Re g <= eps, or None."""
    pts = _witness_candidates(g)
    pts = pts[pts.real > 0]
    with np.errstate(all="ignore"):
        vals = g(pts)
    ok = np.isfinite(vals)
    if not ok.any():
        return None
    pts, vals = pts[ok], vals[ok]
    score = vals.real / np.maximum(1.0, np.abs(vals))
    i = int(np.argmin(score))
    if vals[i].real <= EPS_P:
        return complex(pts[i])
    return None


def _band(*xs) -> float:
    return EPS_P * max([1.0] + [abs(x) for x in xs])


def _affine_verdict(u: complex, v: complex) -> SelfMapVerdict:
    tol = _band(u, v)
    flags = []
    if abs(u) <= tol:
        # constant map z -> v
        if v.real > tol:
            return SelfMapVerdict(True, AFFINE)
        return SelfMapVerdict(False, AFFINE)
    if abs(u.imag) > tol or u.real <= 0:
        return SelfMapVerdict(False, AFFINE)
    if v.real < -tol:
        return SelfMapVerdict(False, AFFINE)
    if abs(v.real) <= tol and v.real != 0:
        flags.append("Re v within tolerance band of 0")
    return SelfMapVerdict(True, AFFINE, flags=tuple(flags))


def _special_verdict(p: complex, q: complex, u: complex) -> SelfMapVerdict:
    tol = _band(p, q, u)
    p1, q1, u1 = p.real, q.real, u.real
    if abs(p1) <= tol:
        if abs(q.imag) <= tol and q1 < -tol and u1 <= tol:
            flags = ()
            if abs(u1) <= tol and u1 != 0:
                flags = ("Re u within tolerance band of 0",)
            return SelfMapVerdict(True, SPECIAL1, flags=flags)
        if p1 >= 0:
            return SelfMapVerdict(False, SPECIAL1)
    if p1 < 0:
        bound = (q1 + abs(q)) / (2 * p1)
        btol = EPS_P * max(1.0, abs(u1), abs(bound))
        if u1 <= bound + btol:
            flags = ()
            if abs(u1 - bound) <= btol:
                flags = ("Re u at the branch-2 bound",)
            return SelfMapVerdict(True, SPECIAL2, flags=flags)
        return SelfMapVerdict(False, SPECIAL2)
    return SelfMapVerdict(False, SPECIAL1)


def self_map_check(m: Map, cross_check: bool = True) -> SelfMapVerdict:
    """Decide whether m maps the right half-plane into itself.

    Closed-form branches decide; the grid falsifier audits a positive verdict
    and a witness is searched for a negative one.  Disagreement raises
    InternalConsistencyError.
    """
    g = canonical_map(m)
    if isinstance(g, ConstantMap):
        verdict = _affine_verdict(0j, g.value)
    elif g.c == 0:
        verdict = _affine_verdict(g.a / g.d, g.b / g.d)
    else:
        verdict = _special_verdict(*special_form(g))

    if verdict.is_self_map:
        if cross_check:
            bad = grid_falsifier(g)
            if bad is not None:
                raise InternalConsistencyError(
                    f"predicate accepts {g} but Re g({bad}) = {g(bad).real:.3e} < 0"
                )
        if verdict.flags:
            return SelfMapVerdict(True, verdict.branch, None, verdict.flags + (BOUNDARY,))
        return verdict
    witness = find_witness(g)
    if witness is None:
        raise InternalConsistencyError(f"predicate rejects {g} but no witness with Re g <= eps was found")
    return SelfMapVerdict(False, verdict.branch, witness, verdict.flags)


# --------------------------------------------------------------------------
# fixed points


@dataclass(frozen=True)
class FixedPointReport:
    interior: tuple[complex, ...]
    boundary_or_exterior: tuple[complex, ...]


def _is_identity(g: MoebiusMap) -> bool:
    tol = _band(*g.coefficients)
    return abs(g.b) <= tol and abs(g.c) <= tol and abs(g.a - g.d) <= tol


def fixed_points(m: Map) -> FixedPointReport:
    """Solve c w^2 + (d - a) w - b = 0 and sort roots by location."""
    if isinstance(m, ConstantMap):
        roots = [m.value]
    else:
        g = normalize_moebius(m)
        if _is_identity(g):
            raise IdentityMap("every point is fixed by the identity")
        a, b, c, d = g.coefficients
        if c == 0:
            roots = [] if a == d else [b / (d - a)]
        else:
            B = d - a
            disc = cmath.sqrt(B * B + 4 * c * b)
            # stable pair: avoid subtracting nearly equal numbers
            s = B + disc if abs(B + disc) >= abs(B - disc) else B - disc
            if s == 0:
                roots = [0j]
            else:
                r1 = -s / (2 * c)
                r2 = (2 * b) / s
                roots = [r1] if abs(r1 - r2) <= _band(r1, r2) else [r1, r2]
    interior = tuple(r for r in roots if r.real > EPS_P * max(1.0, abs(r)))
    other = tuple(r for r in roots if r not in interior)
    return FixedPointReport(interior, other)


# --------------------------------------------------------------------------
# Cayley transform


def cayley(z: complex) -> complex:
    """Unit disk -> right half-plane, z -> (1 - z)/(1 + z)."""
    z = complex(z)
    if not abs(z) < 1:
        raise DomainViolation(f"{z} is not in the open unit disk")
    return (1 - z) / (1 + z)


def cayley_inv(w: complex) -> complex:
    w = half_plane_point(w)
    return (1 - w) / (1 + w)


def disk_conjugate(m: Map):
    """cayley_inv o m o cayley as a callable on the disk."""
    return lambda z: (1 - m((1 - z) / (1 + z))) / (1 + m((1 - z) / (1 + z)))


# --------------------------------------------------------------------------
# Denjoy-Wolff iteration


@dataclass(frozen=True)
class DenjoyWolffResult:
    point: complex
    iterations: int
    fixed_point: complex
    trace: tuple[complex, ...] = field(default=())


def denjoy_wolff(
    m: Map,
    start: complex,
    tol: float = 1e-10,
    max_iter: int = 10_000,
    trace: bool = False,
) -> DenjoyWolffResult:
    """Iterate m from start until successive iterates differ by at most tol."""
    start = half_plane_point(start)
    if isinstance(m, MoebiusMap) and _is_identity(normalize_moebius(m)):
        raise PreconditionViolation("the identity map has no attracting point")
    if not self_map_check(m):
        raise PreconditionViolation(f"{m} is not a self-map of the half-plane")
    report = fixed_points(m)
    w = start
    path = [w] if trace else []
    for n in range(1, max_iter + 1):
        nxt = complex(m(w))
        if trace:
            path.append(nxt)
        if not (math.isfinite(nxt.real) and math.isfinite(nxt.imag)):
            break
        if abs(nxt - w) <= tol:
            for alpha in report.interior:
                if abs(nxt - alpha) <= 10 * tol * max(1.0, abs(alpha)):
                    return DenjoyWolffResult(nxt, n, alpha, tuple(path))
            raise Divergent(f"iterates settled at {nxt}, which is not an interior fixed point")
        w = nxt
    if not report.interior:
        raise Divergent(f"{m} has no interior fixed point; iterates escape to the boundary")
    raise Divergent(f"no convergence within {max_iter} iterations (last iterate {w})")
