import cmath

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hpbergman.core import KernelSpan, kernel, zero_span
from hpbergman.errors import WeightMismatch
from hpbergman.kernelspace import (
    bergman_norm,
    bergman_norm_squared,
    gram_matrix,
    inner_product,
    kernel_eval,
    kernel_norm_squared,
    mp_norm,
    relative_residual,
    span_distance,
    span_eval,
)

import numpy as np

points = st.builds(complex, st.floats(0.2, 4), st.floats(-3, 3))
coeffs = st.builds(complex, st.floats(-2, 2), st.floats(-2, 2))


def test_kernel_eval_examples():
    assert kernel_eval(0, 1, 1) == 0.25
    assert cmath.isclose(kernel_eval(1, 1 + 1j, 2 - 1j), 4 / (-9 - 46j), rel_tol=1e-15)
    z = 1.7 - 0.4j
    assert cmath.isclose(kernel_eval(0, z, z), 1 / (2 * z.real) ** 2, rel_tol=1e-15)


def test_kernel_eval_against_mpmath():
    z, x = 0.3 + 2.1j, 1.9 - 0.7j
    for ell in range(5):
        want = mpmath.mpf(2) ** ell * (1 + ell) / (mpmath.mpc(x) + mpmath.mpc(z).conjugate()) ** (ell + 2)
        assert abs(kernel_eval(ell, z, x) - complex(want)) <= 1e-15 * abs(complex(want))


def test_span_eval_examples():
    assert span_eval(kernel(0, 1), 1) == 0.25
    h = kernel(0, 1, 2).concat(kernel(0, 1, -2))
    assert span_eval(h, 0.3 + 1j) == 0
    g = kernel(0, 1) + kernel(0, 2, 1j)
    assert cmath.isclose(span_eval(g, 1), 0.25 + 1j / 9, rel_tol=1e-15)


def test_inner_product_examples():
    assert inner_product(kernel(0, 1), kernel(0, 1)) == 0.25
    assert cmath.isclose(inner_product(kernel(0, 1 + 1j), kernel(0, 1 + 1j)), 0.25, rel_tol=1e-15)
    assert inner_product(kernel(0, 1), zero_span(0)) == 0
    with pytest.raises(WeightMismatch):
        inner_product(kernel(0, 1), kernel(1, 1))


def test_norm_examples():
    assert cmath.isclose(bergman_norm_squared(kernel(2, 3)), 1 / 108, rel_tol=1e-15)
    assert kernel_norm_squared(2, 3 + 5j) == pytest.approx(1 / 108, rel=1e-15)
    assert bergman_norm(zero_span(0)) == 0
    assert bergman_norm(kernel(0, 1) - kernel(0, 1)) == 0
    assert mp_norm(kernel(0, 1).concat(kernel(0, 1, -1))) == 0


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(coeffs, points), min_size=1, max_size=4), points, st.integers(0, 3))
def test_reproducing_property(terms, w, ell):
    h = KernelSpan(ell, tuple(terms))
    got = inner_product(h, kernel(ell, w))
    want = span_eval(h, w)
    assert abs(got - want) <= 1e-12 * max(1e-300, sum(abs(c) * abs(kernel_eval(ell, z, w)) for c, z in terms))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(coeffs, points), min_size=1, max_size=4),
       st.lists(st.tuples(coeffs, points), min_size=1, max_size=4))
def test_inner_product_is_hermitian_and_sesquilinear(t1, t2):
    h1, h2 = KernelSpan(1, tuple(t1)), KernelSpan(1, tuple(t2))
    a = inner_product(h1, h2)
    b = inner_product(h2, h1)
    scale = bergman_norm(h1) * bergman_norm(h2) + 1e-300
    assert abs(a - b.conjugate()) <= 1e-12 * scale
    assert abs(inner_product(h1 * 2j, h2) - 2j * a) <= 1e-12 * scale
    assert abs(inner_product(h1, h2 * 2j) + 2j * a) <= 1e-12 * scale


def test_gram_matrix_is_positive_definite():
    g = gram_matrix(1, [0.5, 1 + 1j, 2 - 1j, 0.3 + 0.1j])
    assert np.allclose(g, g.conj().T)
    assert np.linalg.eigvalsh(g).min() > 0


def test_residuals():
    a = kernel(0, 1)
    b = kernel(0, 1 + 1e-7j)
    assert relative_residual(a, a) == 0
    d = span_distance(a, b)
    assert 0 < d < 1e-6
    assert relative_residual(a, 2 * a) == pytest.approx(0.5, rel=1e-12)
