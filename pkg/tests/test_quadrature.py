import numpy as np
import pytest
from scipy.integrate import trapezoid

from hpbergman.core import Constant, MoebiusMap, ReciprocalPower, ConstantMap, SymbolPair, kernel, make_rng, sample_points, zero_span
from hpbergman.errors import DecayViolation, ToleranceNotMet
from hpbergman.kernelspace import bergman_norm_squared, kernel_eval, kernel_norm_squared
from hpbergman.operators import adjoint, apply, rank_one_norm
from hpbergman.quadrature import (
    GAUSS,
    KRONROD,
    NODES,
    DecayingFunction,
    QuadratureConfig,
    operator_norm_estimate,
    quad_inner_product,
    quad_norm_squared,
    tail_bound,
    verify_identity,
)


def test_gauss_kronrod_rules_are_exact_on_polynomials():
    # 7-point Gauss: degree 13; 15-point Kronrod: degree 22
    for k in range(23):
        want = 0.0 if k % 2 else 2.0 / (k + 1)
        assert KRONROD @ NODES**k == pytest.approx(want, abs=1e-14)
        if k <= 13:
            assert GAUSS @ NODES**k == pytest.approx(want, abs=1e-14)
    assert (GAUSS[::2] == 0).all()


@pytest.mark.parametrize("ell", [0, 1, 3])
def test_tail_bound_is_a_bound(ell):
    # integrate |K_z|^2 x^l over rho < |x| < 4000 in polar form; the rest is negligible
    z, rho = 1 + 0.5j, 20.0
    amp = 2**ell * (1 + ell)
    r = np.linspace(rho, 4000, 20001)
    t = np.linspace(-np.pi / 2, np.pi / 2, 801)
    R, T = np.meshgrid(r, t, indexing="ij")
    X = R * np.exp(1j * T)
    f = np.abs(amp / (X + np.conj(z)) ** (ell + 2)) ** 2 * X.real**ell * R / np.pi
    inner = trapezoid(f, t, axis=1)
    actual = trapezoid(inner, r)
    bound = tail_bound(ell, amp**2, abs(z), rho)
    assert actual <= bound


def test_quad_examples():
    r = quad_norm_squared(0, kernel(0, 1))
    assert abs(r.value - 0.25) <= 1e-8 and r.error <= 1e-8
    r = quad_inner_product(0, kernel(0, 1), kernel(0, 2))
    assert abs(r.value - 1 / 9) <= 1e-8
    assert quad_inner_product(0, zero_span(0), kernel(0, 1)).value == 0


@pytest.mark.parametrize("ell", [0, 1, 2])
def test_quad_matches_closed_forms(ell):
    pts = sample_points(make_rng(ell), 8)
    for z, w in zip(pts[:4], pts[4:]):
        want = kernel_eval(ell, z, w)
        got = quad_inner_product(ell, kernel(ell, z), kernel(ell, w), reference=abs(want)).value
        assert abs(got - want) <= 1e-6 * abs(want)
        assert quad_norm_squared(ell, kernel(ell, z)).value == pytest.approx(kernel_norm_squared(ell, z), rel=1e-6)


def test_error_estimate_covers_actual_error():
    h = kernel(1, 0.4 + 1j, 2) + kernel(1, 2 - 1j, -1j)
    r = quad_norm_squared(1, h)
    assert abs(r.value - bergman_norm_squared(h)) <= r.error


def test_plain_callables_need_a_decay_certificate():
    with pytest.raises(DecayViolation):
        quad_norm_squared(0, lambda x: 1 / (x + 1) ** 2)
    bad = DecayingFunction(lambda x: 1 / (x + 1), amplitude=1.0, shift=1.0)
    with pytest.raises(DecayViolation):
        quad_norm_squared(0, bad)


def test_tolerance_not_met():
    cfg = QuadratureConfig(rel_tol=1e-15, abs_floor=0, max_subdivisions=16)
    with pytest.raises(ToleranceNotMet):
        quad_norm_squared(0, kernel(0, 0.05), cfg)


def test_config_validation_and_json():
    cfg = QuadratureConfig(rel_tol=1e-6, max_subdivisions=50)
    assert QuadratureConfig.from_json(cfg.to_json()) == cfg
    for bad in ({"rel_tol": 0}, {"truncation_growth": 1.0}, {"abs_floor": -1}, {"max_subdivisions": 0}):
        with pytest.raises(ValueError):
            QuadratureConfig(**bad)


def test_verify_identity_examples():
    rep = verify_identity(kernel(0, 1), kernel(0, 1))
    assert rep.exact_residual == 0 and rep.quad_residual <= 1e-6
    s = SymbolPair(0, Constant(3), MoebiusMap.affine(1, 1))
    k = kernel(0, 1 + 1j)
    rep = verify_identity(adjoint(s, k), apply(s, k))
    assert rep.exact_residual <= 1e-12 and rep.quad_residual <= 1e-6
    # W K_z vs K_z for a non-identity pair: the closed-form gap is seen by both routes
    rep = verify_identity(apply(s, k), k)
    assert rep.exact_residual > 0.5 and abs(rep.quad_residual - rep.exact_residual) <= 1e-6


def test_operator_norm_estimates():
    ident = SymbolPair(1, Constant(1), MoebiusMap(1, 0, 0, 1))
    assert operator_norm_estimate(ident, samples=8) == pytest.approx(1, abs=1e-12)
    uni = SymbolPair(0, Constant(2), MoebiusMap.affine(2, 0))
    assert operator_norm_estimate(uni, samples=20) == pytest.approx(1, abs=1e-10)
    her = SymbolPair(0, ReciprocalPower(1.5, 1, 1 - 1j), ConstantMap(1 + 1j))
    est = operator_norm_estimate(her, samples=40)
    assert 0 < est <= rank_one_norm(her) * (1 + 1e-12)
