"""Seeded parameter draws for every family and self-map branch.

Family draws come from the printed parameter regions, not from the self-map
predicate, so that tests of the predicate stay independent of the sampler.
"""

from __future__ import annotations

import math

import numpy as np

from .core import Constant, ConstantMap, MoebiusMap, ReciprocalPower, SymbolPair
from .operators import inverse_transport


def _u(rng, lo, hi) -> float:
    return float(rng.uniform(lo, hi))


def _point(rng) -> complex:
    return complex(math.exp(_u(rng, math.log(0.3), math.log(3.0))), _u(rng, -2, 2))


def _cplx(rng, lo=0.3, hi=3.0) -> complex:
    return complex(_u(rng, lo, hi) * np.exp(1j * _u(rng, -math.pi, math.pi)))


def _signed(rng, lo=0.3, hi=3.0) -> float:
    return _u(rng, lo, hi) * (1 if rng.uniform() < 0.5 else -1)


# --------------------------------------------------------------------------
# hermitian


def hermitian_I(rng, ell: int) -> tuple[SymbolPair, dict]:
    mu, eps = _point(rng), _signed(rng)
    return SymbolPair(ell, ReciprocalPower(eps, 1, mu.conjugate()), ConstantMap(mu)), {"mu": mu, "epsilon": eps}


def hermitian_II(rng, ell: int) -> tuple[SymbolPair, dict]:
    gamma, lam = _u(rng, 0, 3), _signed(rng)
    return SymbolPair(ell, Constant(lam), MoebiusMap.affine(1, gamma)), {"gamma": gamma, "lambda": lam}


def hermitian_III_pair(ell: int, alpha: float, beta: complex, delta: float) -> SymbolPair:
    """g = -beta/alpha - 2/(alpha w - conj(beta)), f = delta/(alpha w - conj(beta))^(l+2)."""
    g = MoebiusMap(-alpha * beta, abs(beta) ** 2 - 2 * alpha, alpha * alpha, -alpha * beta.conjugate())
    return SymbolPair(ell, ReciprocalPower(delta, alpha, -beta.conjugate()), g)


def hermitian_III(rng, ell: int, branch: str | None = None) -> tuple[SymbolPair, dict]:
    """Branch A: Re beta < 0 < alpha <= (Re beta)^2/2.  B: alpha < 0 = Re beta.

    Branch C (alpha < 0 < Re beta) is admissible but absent from the printed
    condition; it is only drawn when asked for explicitly.
    """
    branch = branch or ("A" if rng.uniform() < 0.5 else "B")
    im = _u(rng, -2, 2)
    if branch == "A":
        re = _u(rng, -3, -0.8)
        alpha = _u(rng, 0.1, 1.0) * re * re / 2
    elif branch == "B":
        re, alpha = 0.0, _u(rng, -3, -0.3)
    elif branch == "C":
        re, alpha = _u(rng, 0.3, 3), _u(rng, -3, -0.3)
    else:
        raise ValueError(branch)
    beta = complex(re, im)
    delta = _signed(rng)
    return hermitian_III_pair(ell, alpha, beta, delta), {"alpha": alpha, "beta": beta, "delta": delta, "branch": branch}


HERMITIAN = {"I": hermitian_I, "II": hermitian_II, "III": hermitian_III}


def hermitian_negative(rng, ell: int, case: str) -> SymbolPair:
    """A hermitian draw with exactly one condition broken (kernel compatibility kept)."""
    s, p = HERMITIAN[case](rng, ell)
    if case == "I":
        # epsilon no longer real
        return SymbolPair(ell, ReciprocalPower(p["epsilon"] + 1j, 1, p["mu"].conjugate()), s.g)
    if case == "II":
        if rng.uniform() < 0.5:
            return SymbolPair(ell, Constant(p["lambda"] + 1j), s.g)
        return SymbolPair(ell, s.f, MoebiusMap.affine(1, p["gamma"] + 1j))
    # delta no longer real
    return hermitian_III_pair(ell, p["alpha"], p["beta"], p["delta"] * (1 + 1j))


# --------------------------------------------------------------------------
# unitary


def unitary_I(rng, ell: int) -> tuple[SymbolPair, dict]:
    C, delta = _cplx(rng), _u(rng, -2, 2)
    lam = abs(C) ** (2 / (ell + 2))
    return SymbolPair(ell, Constant(C), MoebiusMap.affine(lam, 1j * delta)), {"C": C, "delta": delta}


def unitary_II(rng, ell: int) -> tuple[SymbolPair, dict]:
    beta, alpha, theta = _cplx(rng), _u(rng, -2, 2), _u(rng, -2, 2)
    r = abs(beta) ** (2 / (ell + 2))
    g = MoebiusMap(1j * theta, theta * alpha + r, 1, -1j * alpha)
    return SymbolPair(ell, ReciprocalPower(beta, 1, -1j * alpha), g), {"beta": beta, "alpha": alpha, "theta": theta}


UNITARY = {"I": unitary_I, "II": unitary_II}


# --------------------------------------------------------------------------
# C_a


def Ca_I(rng, ell: int, a: float) -> tuple[SymbolPair, dict]:
    mu, delta = _point(rng), _cplx(rng)
    return SymbolPair(ell, ReciprocalPower(delta, 1, mu - 1j * a), ConstantMap(mu)), {"mu": mu, "delta": delta}


def Ca_II(rng, ell: int, a: float) -> tuple[SymbolPair, dict]:
    gamma, lam = complex(_u(rng, 0, 3), _u(rng, -2, 2)), _cplx(rng)
    return SymbolPair(ell, Constant(lam), MoebiusMap.affine(1, gamma)), {"gamma": gamma, "lambda": lam}


def Ca_III_pair(ell: int, a: float, alpha: complex, beta: complex, delta: complex) -> SymbolPair:
    """g = -beta/alpha - 2/(alpha(w - ia) - beta), f = delta/(alpha(w - ia) - beta)^(l+2)."""
    e = -1j * a * alpha - beta
    g = MoebiusMap(-beta * alpha, -beta * e - 2 * alpha, alpha * alpha, alpha * e)
    return SymbolPair(ell, ReciprocalPower(delta, alpha, e), g)


def Ca_III(rng, ell: int, a: float) -> tuple[SymbolPair, dict]:
    if rng.uniform() < 0.3:
        # Re(beta/alpha) = Im(1/alpha) = 0, Re(1/alpha) < 0
        inv = -_u(rng, 0.2, 3)
        r = complex(0, _u(rng, -2, 2))
    else:
        # Re(beta/alpha) < 0, (Re(beta/alpha))^2 >= Re(1/alpha) + 1/|alpha|
        r = complex(_u(rng, -2.5, -0.5), _u(rng, -2, 2))
        phi = _u(rng, -math.pi, math.pi)
        rad = min(_u(rng, 0.2, 1.0) * r.real**2 / (1 + math.cos(phi)), 5.0)
        inv = rad * complex(math.cos(phi), math.sin(phi))
    alpha = 1 / inv
    beta = r * alpha
    delta = _cplx(rng)
    return Ca_III_pair(ell, a, alpha, beta, delta), {"alpha": alpha, "beta": beta, "delta": delta}


CA = {"I": Ca_I, "II": Ca_II, "III": Ca_III}


# --------------------------------------------------------------------------
# C_star and U C_star U*


def Cstar_I(rng, ell: int) -> tuple[SymbolPair, dict]:
    alpha, beta = _point(rng), _cplx(rng)
    return SymbolPair(ell, ReciprocalPower(beta, alpha, 1), ConstantMap(alpha)), {"alpha": alpha, "beta": beta}


def Cstar_II(rng, ell: int) -> tuple[SymbolPair, dict]:
    lam, theta = _u(rng, 0.3, 3), _cplx(rng)
    return SymbolPair(ell, Constant(theta), MoebiusMap.affine(lam, 0)), {"lambda": lam, "theta": theta}


def Cstar_III_pair(ell: int, delta: complex, kappa: complex, r: complex) -> SymbolPair:
    """g = delta + (1 - delta kappa)/(w + kappa), f = r/(w + kappa)^(l+2)."""
    return SymbolPair(ell, ReciprocalPower(r, 1, kappa), MoebiusMap(delta, 1, 1, kappa))


def Cstar_III(rng, ell: int) -> tuple[SymbolPair, dict]:
    u = rng.uniform()
    if u < 0.15:
        delta, kappa = 0j, _point(rng)
    elif u < 0.3:
        # delta in iR, delta kappa real and < 1, Re kappa >= 0
        t = _signed(rng, 0.3, 2)
        k2 = _u(rng, -2, 2)
        if -t * k2 >= 1:
            k2 = -k2
        delta, kappa = 1j * t, 1j * k2
    else:
        delta = complex(_u(rng, 0.3, 2), _u(rng, -2, 2))
        while True:
            kappa = complex(_u(rng, 0.3, 4), _u(rng, -2, 2))
            w = delta * kappa - 1
            if kappa.real >= (w.real + abs(w)) / (2 * delta.real):
                break
    r = _cplx(rng)
    return Cstar_III_pair(ell, delta, kappa, r), {"delta": delta, "kappa": kappa, "r": r}


CSTAR = {"I": Cstar_I, "II": Cstar_II, "III": Cstar_III}


def UCstarU_draw(rng, ell: int, case: str) -> tuple[SymbolPair, dict]:
    """Draw a C_star family pair and pull it back through U_{b,c}."""
    b = _cplx(rng, 0.5, 2.0)
    c = _u(rng, -2, 2)
    hat, params = CSTAR[case](rng, ell)
    return inverse_transport(hat, b, c), {"b": b, "c": c, **params}


# --------------------------------------------------------------------------
# self-map branches


def self_map_positive(rng, branch: str) -> MoebiusMap:
    if branch == "affine":
        v = complex(0.0 if rng.uniform() < 0.2 else _u(rng, 0, 3), _u(rng, -3, 3))
        return MoebiusMap.affine(_u(rng, 0.1, 10), v)
    if branch == "special1":
        p = 1j * _u(rng, -3, 3)
        q = -_u(rng, 0.1, 5)
        u = complex(0.0 if rng.uniform() < 0.2 else _u(rng, -3, 0), _u(rng, -3, 3))
        return MoebiusMap.from_special_form(p, q, u)
    if branch == "special2":
        p = complex(_u(rng, -3, -0.1), _u(rng, -3, 3))
        q = _cplx(rng, 0.1, 5)
        bound = (q.real + abs(q)) / (2 * p.real)
        u1 = bound if rng.uniform() < 0.2 else bound - _u(rng, 0, 2)
        return MoebiusMap.from_special_form(p, q, complex(u1, _u(rng, -3, 3)))
    raise ValueError(branch)


def self_map_negative(rng, branch: str) -> MoebiusMap:
    if branch == "affine":
        if rng.uniform() < 0.5:
            return MoebiusMap.affine(_u(rng, 0.1, 10) * np.exp(1j * _signed(rng, 0.05, 3)), complex(_u(rng, 0, 3), 0))
        return MoebiusMap.affine(_u(rng, 0.1, 10), complex(-_u(rng, 0.01, 3), _u(rng, -3, 3)))
    if branch == "special1":
        p = 1j * _u(rng, -3, 3)
        k = rng.uniform()
        if k < 1 / 3:
            q, u = _u(rng, 0.1, 5), complex(_u(rng, -3, 0), 0)
        elif k < 2 / 3:
            q, u = complex(-_u(rng, 0.1, 5), _signed(rng, 0.05, 3)), complex(_u(rng, -3, 0), 0)
        else:
            q, u = -_u(rng, 0.1, 5), complex(_u(rng, 0.01, 3), _u(rng, -3, 3))
        return MoebiusMap.from_special_form(p, q, u)
    if branch == "special2":
        q = _cplx(rng, 0.1, 5)
        if rng.uniform() < 0.5:
            p = complex(_u(rng, 0.01, 3), _u(rng, -3, 3))
            return MoebiusMap.from_special_form(p, q, complex(_u(rng, -3, 0), _u(rng, -3, 3)))
        p = complex(_u(rng, -3, -0.1), _u(rng, -3, 3))
        bound = (q.real + abs(q)) / (2 * p.real)
        return MoebiusMap.from_special_form(p, q, complex(bound + _u(rng, 0.05, 2), _u(rng, -3, 3)))
    raise ValueError(branch)
