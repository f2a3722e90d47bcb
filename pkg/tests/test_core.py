import cmath
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hpbergman.core import (
    Constant,
    ConstantMap,
    KernelSpan,
    MoebiusMap,
    ReciprocalPower,
    SymbolPair,
    ipow,
    kernel,
    make_map,
    make_rng,
    normalize_moebius,
    pair_from_json,
    pair_to_json,
    sample_points,
    span_from_json,
    span_to_json,
    special_form,
)
from hpbergman.errors import DegenerateMap, DomainViolation, WeightMismatch

finite = st.floats(-5, 5, allow_nan=False, allow_infinity=False)
cplx = st.builds(complex, finite, finite)


@pytest.mark.parametrize("n", [0, 1, 2, 3, 4, 7, -2])
def test_ipow_matches_repeated_product(n):
    z = 0.3 - 1.7j
    want = 1
    for _ in range(abs(n)):
        want *= z
    if n < 0:
        want = 1 / want
    assert abs(ipow(z, n) - want) <= 1e-14 * abs(want)


def test_ipow_on_negative_real_axis_has_no_branch_cut():
    # approaching -1 from above and below must give the same cube
    assert abs(ipow(-1 + 1e-300j, 3) - ipow(-1 - 1e-300j, 3)) < 1e-15
    with pytest.raises(TypeError):
        ipow(2.0, 1.5)


def test_ipow_arrays():
    x = np.array([1 + 1j, -2, 0.5j])
    assert np.allclose(ipow(x, 4), x**4)


def test_normalize_examples():
    assert normalize_moebius(MoebiusMap(2, 0, 0, 2)).coefficients == (1, 0, 0, 1)
    assert normalize_moebius(MoebiusMap(0, -1, -1, 0)).coefficients == (0, 1, 1, 0)
    with pytest.raises(DegenerateMap):
        normalize_moebius(MoebiusMap(1, 1, 0, 0))


@settings(max_examples=60, deadline=None)
@given(cplx, cplx, cplx, cplx, st.builds(complex, st.floats(0.1, 3), finite))
def test_normalize_preserves_the_map(a, b, c, d, z):
    m = MoebiusMap(a, b, c, d)
    scale = max(abs(x) for x in m.coefficients)
    if scale < 1e-3 or abs(m.det) < 1e-3 * scale * scale:
        return
    n = normalize_moebius(m)
    denom = c * z + d
    if abs(denom) < 1e-6 * scale:
        return
    assert abs(n(z) - m(z)) <= 1e-9 * max(1, abs(m(z)))
    pivot = next(x for x in (n.c, n.d, n.a, n.b) if x != 0)
    assert pivot == 1


def test_make_map_degenerate_is_constant():
    g = make_map(1, 1, 1, 1)
    assert isinstance(g, ConstantMap) and g.value == 1


def test_special_form_examples():
    assert special_form(MoebiusMap(0, 1, 1, 0)) == (0, -1, 0)
    assert special_form(MoebiusMap(1, 1, 0, 1)) is None
    p, q, u = special_form(MoebiusMap(0, 2, 1, 0))
    assert (p, q, u) == (0, -2, 0)
    m = MoebiusMap.from_special_form(0.5 - 1j, 2 + 1j, -0.3j)
    p, q, u = special_form(m)
    for z in (1, 2):
        assert cmath.isclose(-p - q / (z - u), m(z), rel_tol=1e-14)


def test_compose_and_inverse():
    f = MoebiusMap(2, 1j, 1, 3)
    g = MoebiusMap(1, 2, 0, 1)
    z = 0.7 + 0.2j
    assert cmath.isclose(f.compose(g)(z), f(g(z)), rel_tol=1e-14)
    assert cmath.isclose(f.inverse()(f(z)), z, rel_tol=1e-14)


def test_reciprocal_power_canonical():
    f = ReciprocalPower(3, 2, 4 + 2j)
    w = 1.3 - 0.4j
    for ell in (0, 1, 2):
        c = f.canonical(ell)
        assert c.a == 1 and c.kappa == 2 + 1j
        assert cmath.isclose(c.evaluate(w, ell), f.evaluate(w, ell), rel_tol=1e-14)
    assert isinstance(ReciprocalPower(2, 0, 2).canonical(0), Constant)
    assert ReciprocalPower(0, 1, 1).is_zero
    with pytest.raises(ValueError):
        ReciprocalPower(1, 0, 0)


def test_span_arithmetic():
    h = kernel(0, 1) * 2 - kernel(0, 1) * 2
    assert h.is_zero and len(h) == 0
    s = kernel(1, 1 + 1j) + kernel(1, 2, 1j) + kernel(1, 1 + 1j)
    assert len(s) == 2 and s.ell == 1
    assert dict((p, c) for c, p in s.terms)[1 + 1j] == 2
    with pytest.raises(WeightMismatch):
        kernel(0, 1) + kernel(1, 1)
    with pytest.raises(DomainViolation):
        kernel(0, -1j)
    with pytest.raises(ValueError):
        KernelSpan(-1, ())


def test_rng_is_reproducible():
    a = sample_points(make_rng(7), 5)
    b = sample_points(make_rng(7), 5)
    assert a == b
    assert all(0.3 <= z.real <= 3 and -2 <= z.imag <= 2 for z in a)


def test_json_round_trip():
    # maps come back in canonical form
    s = SymbolPair(2, ReciprocalPower(1j, 2, -1), MoebiusMap(1, 2j, 3, 4))
    assert pair_from_json(json.loads(json.dumps(pair_to_json(s)))) == SymbolPair(2, s.f, s.g.normalized())
    h = kernel(1, 1 + 2j, 3 - 1j) + kernel(1, 0.5)
    assert span_from_json(json.loads(json.dumps(span_to_json(h)))) == h
    c = SymbolPair(0, Constant(2), ConstantMap(1 + 1j))
    assert pair_from_json(pair_to_json(c)).g == ConstantMap(1 + 1j)
