"""Exact Hilbert-space algebra on finite spans of reproducing kernels.

K_z(x) = 2^l (1+l) / (x + conj(z))^(l+2).  Everything here follows from the
closed form and <K_z, K_w> = K_z(w); no integration happens in this module.
"""

from __future__ import annotations

import math

import mpmath
import numpy as np

from .core import KernelSpan, check_ell, half_plane_point, ipow, kernel_constant
from .errors import NumericalInconsistency, WeightMismatch

# digits used for residual norms; double-precision inputs are exact in mp
RESIDUAL_DPS = 40


def kernel_eval(ell: int, z: complex, x: complex) -> complex:
    """K_z(x) for points of the right half-plane."""
    ell = check_ell(ell)
    z = half_plane_point(z)
    x = half_plane_point(x)
    return _kernel(ell, z, x)


def _kernel(ell: int, z: complex, x: complex) -> complex:
    return kernel_constant(ell) / ipow(x + z.conjugate(), ell + 2)


def _csum(values) -> complex:
    values = list(values)
    return complex(math.fsum(v.real for v in values), math.fsum(v.imag for v in values))


def span_eval(h: KernelSpan, x: complex) -> complex:
    x = half_plane_point(x)
    return _csum(c * _kernel(h.ell, z, x) for c, z in h.terms)


def span_eval_array(h: KernelSpan, x: np.ndarray) -> np.ndarray:
    """Vectorized span evaluation; no domain check on x."""
    out = np.zeros(np.shape(x), dtype=complex)
    n = kernel_constant(h.ell)
    for c, z in h.terms:
        out += (c * n) / ipow(x + z.conjugate(), h.ell + 2)
    return out


def _same_weight(h1: KernelSpan, h2: KernelSpan):
    if h1.ell != h2.ell:
        raise WeightMismatch(f"weight index {h1.ell} vs {h2.ell}")


def inner_product(h1: KernelSpan, h2: KernelSpan) -> complex:
    """<h1, h2> = sum_ij c_i conj(d_j) K_{z_i}(w_j).

    The terms are summed with fsum on real and imaginary parts separately so
    that swapping the arguments gives the exact conjugate.
    """
    _same_weight(h1, h2)
    ell = h1.ell
    return _csum(c * d.conjugate() * _kernel(ell, z, w) for c, z in h1.terms for d, w in h2.terms)


def gram_matrix(ell: int, points) -> np.ndarray:
    pts = [half_plane_point(z) for z in points]
    n = len(pts)
    g = np.empty((n, n), dtype=complex)
    for j, w in enumerate(pts):
        for i, z in enumerate(pts):
            # entry (j, i) = <K_{z_i}, K_{w_j}> = K_{z_i}(w_j)
            g[j, i] = _kernel(ell, z, w)
    return g


def bergman_norm_squared(h: KernelSpan) -> float:
    v = inner_product(h, h)
    # (sum |c_i| ||K_{z_i}||)^2 bounds every partial sum of the Gram form
    scale = sum(abs(c) * math.sqrt(kernel_norm_squared(h.ell, z)) for c, z in h.terms) ** 2
    if abs(v.imag) > 1e-14 * max(abs(v.real), 1e-300):
        raise NumericalInconsistency(f"<h,h> = {v} has a non-negligible imaginary part")
    # tiny negative values are cancellation debris from a near-zero span
    if v.real < -1e-12 * scale:
        raise NumericalInconsistency(f"<h,h> = {v.real} is negative")
    return max(v.real, 0.0)


def bergman_norm(h: KernelSpan) -> float:
    return math.sqrt(bergman_norm_squared(h))


# --------------------------------------------------------------------------
# high-precision residuals


def _mp_norm_squared(ell: int, terms) -> mpmath.mpf:
    n = kernel_constant(ell)
    m = ell + 2
    mterms = [(mpmath.mpc(c), mpmath.mpc(z)) for c, z in terms]
    total = mpmath.mpc(0)
    for c, z in mterms:
        for d, w in mterms:
            total += c * mpmath.conj(d) * n / (w + mpmath.conj(z)) ** m
    return total.real


def mp_norm(h: KernelSpan) -> float:
    with mpmath.workdps(RESIDUAL_DPS):
        return float(mpmath.sqrt(max(_mp_norm_squared(h.ell, h.terms), 0)))


def span_distance(h1: KernelSpan, h2: KernelSpan) -> float:
    """||h1 - h2|| evaluated at extended precision over the raw term lists.

    Double-precision Gram sums lose about half the digits when h1 and h2
    nearly coincide; the coefficients and points themselves are exact
    binary numbers, so the mp evaluation measures their true distance.
    """
    _same_weight(h1, h2)
    terms = list(h1.terms) + [(-c, z) for c, z in h2.terms]
    with mpmath.workdps(RESIDUAL_DPS):
        return float(mpmath.sqrt(max(_mp_norm_squared(h1.ell, terms), 0)))


def relative_residual(lhs: KernelSpan, rhs: KernelSpan) -> float:
    """||lhs - rhs|| / max(||lhs||, ||rhs||), and 0 when both vanish."""
    _same_weight(lhs, rhs)
    with mpmath.workdps(RESIDUAL_DPS):
        a = _mp_norm_squared(lhs.ell, lhs.terms)
        b = _mp_norm_squared(rhs.ell, rhs.terms)
        scale = mpmath.sqrt(max(a, b, 0))
        if scale == 0:
            return 0.0
        terms = list(lhs.terms) + [(-c, z) for c, z in rhs.terms]
        d = mpmath.sqrt(max(_mp_norm_squared(lhs.ell, terms), 0))
        return float(d / scale)


def kernel_norm_squared(ell: int, z: complex) -> float:
    """Closed form ||K_z||^2 = 2^l (1+l) / (2 Re z)^(l+2)."""
    z = half_plane_point(z)
    return kernel_constant(ell) / (2 * z.real) ** (ell + 2)
