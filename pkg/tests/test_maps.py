import cmath

import numpy as np
import pytest

from hpbergman import sampling
from hpbergman.core import ConstantMap, MoebiusMap, make_map, make_rng
from hpbergman.errors import Divergent, DomainViolation, IdentityMap, InternalConsistencyError, PreconditionViolation
from hpbergman import maps
from hpbergman.maps import (
    AFFINE,
    SPECIAL1,
    SPECIAL2,
    GRID,
    cayley,
    cayley_inv,
    denjoy_wolff,
    disk_conjugate,
    fixed_points,
    grid_falsifier,
    self_map_check,
)


def test_grid_shape():
    assert GRID.size == 10_000
    assert GRID.real.min() == pytest.approx(1e-3) and GRID.real.max() == pytest.approx(1e3)
    assert (GRID.imag != 0).all()


def test_self_map_examples():
    v = self_map_check(MoebiusMap(0, 1, 1, 0))
    assert v.is_self_map and v.branch == SPECIAL1
    assert self_map_check(make_map(0, 1, 0, 1)).is_self_map
    assert self_map_check(ConstantMap(1)).is_self_map
    bad = self_map_check(MoebiusMap.from_special_form(1j, 1, 0))
    assert not bad.is_self_map
    assert bad.witness is not None and bad.witness.real > 0
    g = MoebiusMap.from_special_form(1j, 1, 0)
    assert g(1).real == -1


def test_affine_branch():
    assert self_map_check(MoebiusMap.affine(2, 1 - 3j)).branch == AFFINE
    assert not self_map_check(MoebiusMap.affine(2, -0.1))
    assert not self_map_check(MoebiusMap.affine(1j, 1))
    assert not self_map_check(ConstantMap(-1 + 1j))
    # translation along the imaginary axis is an automorphism on the boundary of the region
    assert self_map_check(MoebiusMap.affine(1, 5j))


def test_special_branch_two():
    # p1 < 0 and u1 <= (q1 + |q|) / (2 p1)
    p, q = -1 + 0.5j, 1 + 1j
    bound = (q.real + abs(q)) / (2 * p.real)
    assert self_map_check(MoebiusMap.from_special_form(p, q, bound - 0.5)).branch == SPECIAL2
    assert not self_map_check(MoebiusMap.from_special_form(p, q, bound + 0.5))


def test_boundary_case_is_flagged():
    p, q = -1, 1 + 1j
    bound = (q.real + abs(q)) / (2 * p)
    v = self_map_check(MoebiusMap.from_special_form(p, q, bound))
    assert v.is_self_map and "Boundary" in v.flags


@pytest.mark.parametrize("branch", ["affine", "special1", "special2"])
def test_predicate_agrees_with_falsifier(branch):
    rng = make_rng(11)
    for _ in range(30):
        g = sampling.self_map_positive(rng, branch)
        assert self_map_check(g) and grid_falsifier(g) is None
        g = sampling.self_map_negative(rng, branch)
        v = self_map_check(g)
        assert not v and v.witness is not None
        assert g(v.witness).real <= 1e-10 * max(1, abs(g(v.witness)))


def test_disagreement_raises(monkeypatch):
    # a falsifier that always finds a counterexample must trip the cross-check
    monkeypatch.setattr(maps, "grid_falsifier", lambda g, points=None: 1 + 0j)
    with pytest.raises(InternalConsistencyError):
        self_map_check(MoebiusMap(0, 1, 1, 0))


def test_fixed_point_examples():
    r = fixed_points(MoebiusMap.affine(0.5, 1))
    assert np.allclose(r.interior, [2])
    r = fixed_points(MoebiusMap.affine(1, 1))
    assert len(r.interior) == 0 and len(r.boundary_or_exterior) == 0
    r = fixed_points(MoebiusMap(0, 1, 1, 0))
    assert np.allclose(r.interior, [1]) and np.allclose(r.boundary_or_exterior, [-1])
    with pytest.raises(IdentityMap):
        fixed_points(MoebiusMap(3, 0, 0, 3))


def test_cayley():
    assert cayley(0) == 1
    assert cayley_inv(1) == 0
    with pytest.raises(DomainViolation):
        cayley(1j)
    z = 0.3 - 0.4j
    assert cmath.isclose(cayley_inv(cayley(z)), z, abs_tol=1e-15)


def test_disk_conjugate_matches_pointwise():
    g = MoebiusMap.affine(0.5, 1)
    d = disk_conjugate(g)
    z = 0.2 + 0.1j
    assert cmath.isclose(d(z), cayley_inv(g(cayley(z))), rel_tol=1e-13)


def test_denjoy_wolff_examples():
    r = denjoy_wolff(MoebiusMap.affine(0.5, 1), 5 + 3j, tol=1e-10, trace=True)
    assert abs(r.point - 2) <= 1e-10 and r.iterations <= 40
    assert len(r.trace) == r.iterations + 1 and r.trace[0] == 5 + 3j
    with pytest.raises(PreconditionViolation):
        denjoy_wolff(MoebiusMap(1, 0, 0, 1), 1)
    with pytest.raises(Divergent):
        denjoy_wolff(MoebiusMap.affine(1, 1), 1)
    with pytest.raises(PreconditionViolation):
        denjoy_wolff(MoebiusMap.affine(1, -1), 1)
