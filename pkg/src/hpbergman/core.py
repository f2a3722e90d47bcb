"""Parameter and function representations shared by the whole package.

Points of the right half-plane are plain Python ``complex`` values that have
been checked by :func:`half_plane_point`.  Maps, weight symbols, symbol pairs
and kernel spans are frozen dataclasses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import DegenerateMap, DomainViolation, WeightMismatch

# Relative tolerance for equality/membership tests on parameters.
EPS_P = 1e-10
# Coefficients below NOISE * max|coefficient| are rounding debris and become 0.
NOISE = 1e-14
# Span terms with |coefficient| below DROP * max|coefficient| are discarded.
DROP = 1e-15


def ipow(base, n: int):
    """``base**n`` for integer ``n`` by binary exponentiation.

    Works for Python complex scalars and numpy arrays alike.  Never goes
    through log/exp, so there is no branch cut to worry about.
    """
    if not isinstance(n, (int, np.integer)):
        raise TypeError(f"exponent must be an integer, got {n!r}")
    n = int(n)
    if n < 0:
        return 1 / ipow(base, -n)
    result = None
    sq = base
    while n:
        if n & 1:
            result = sq if result is None else result * sq
        n >>= 1
        if n:
            sq = sq * sq
    if result is None:
        return base * 0 + 1
    return result


def check_ell(ell) -> int:
    if isinstance(ell, bool) or not isinstance(ell, (int, np.integer)) or ell < 0:
        raise ValueError(f"weight index must be a nonnegative integer, got {ell!r}")
    return int(ell)


def half_plane_point(z) -> complex:
    z = complex(z)
    if not (z.real > 0) or not math.isfinite(z.real) or not math.isfinite(z.imag):
        raise DomainViolation(f"{z} is not in the open right half-plane")
    return z


def close(x: complex, y: complex, tol: float = EPS_P) -> bool:
    return abs(x - y) <= tol * max(1.0, abs(x), abs(y))


def is_real(x: complex, tol: float = EPS_P) -> bool:
    return abs(complex(x).imag) <= tol * max(1.0, abs(x))


# --------------------------------------------------------------------------
# maps


@dataclass(frozen=True)
class MoebiusMap:
    """w -> (a w + b) / (c w + d)."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, complex(getattr(self, name)))

    def __call__(self, w):
        return (self.a * w + self.b) / (self.c * w + self.d)

    @property
    def coefficients(self) -> tuple[complex, complex, complex, complex]:
        return (self.a, self.b, self.c, self.d)

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    @property
    def is_affine(self) -> bool:
        return self.c == 0

    def compose(self, inner: "MoebiusMap") -> "MoebiusMap":
        """Return ``self ∘ inner``."""
        a, b, c, d = self.coefficients
        e, f, g, h = inner.coefficients
        return MoebiusMap(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def normalized(self) -> "MoebiusMap":
        return normalize_moebius(self)

    @classmethod
    def affine(cls, u: complex, v: complex) -> "MoebiusMap":
        return cls(u, v, 0, 1)

    @classmethod
    def from_special_form(cls, p: complex, q: complex, u: complex) -> "MoebiusMap":
        """The map z -> -p - q/(z - u)."""
        return cls(-p, p * u - q, 1, -u)


@dataclass(frozen=True)
class ConstantMap:
    """The constant self-map w -> value (a determinant-zero Moebius limit)."""

    value: complex

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))

    def __call__(self, w):
        return self.value + 0 * w


Map = Union[MoebiusMap, ConstantMap]


def normalize_moebius(m: MoebiusMap) -> MoebiusMap:
    """Canonical representative of ``m``.

    The first nonzero coefficient in the order (c, d, a, b) is scaled to 1.
    Coefficients at rounding-noise level relative to the largest one are set
    to exactly zero first.
    """
    coeffs = list(m.coefficients)
    scale = max(abs(x) for x in coeffs)
    if scale == 0 or not math.isfinite(scale):
        raise DegenerateMap(f"invalid coefficients {coeffs}")
    coeffs = [0j if abs(x) <= NOISE * scale else x for x in coeffs]
    a, b, c, d = coeffs
    if abs(a * d - b * c) <= EPS_P * scale * scale:
        raise DegenerateMap(f"determinant of {m} vanishes")
    pivot = next(x for x in (c, d, a, b) if x != 0)
    out = [x / pivot for x in coeffs]
    # the pivot itself becomes exactly 1
    idx = [2, 3, 0, 1][[c, d, a, b].index(pivot)]
    out[idx] = 1 + 0j
    return MoebiusMap(*out)


def make_map(a: complex, b: complex, c: complex, d: complex) -> Map:
    """Build a canonical map, falling back to :class:`ConstantMap` when the
    determinant vanishes."""
    try:
        return normalize_moebius(MoebiusMap(a, b, c, d))
    except DegenerateMap:
        a, b, c, d = (complex(x) for x in (a, b, c, d))
        if abs(c) >= abs(d) and c != 0:
            return ConstantMap(a / c)
        if d != 0:
            return ConstantMap(b / d)
        raise


def canonical_map(g: Map) -> Map:
    if isinstance(g, ConstantMap):
        return g
    return make_map(*g.coefficients)


def special_form(m: MoebiusMap) -> tuple[complex, complex, complex] | None:
    """Return (p, q, u) with m(z) = -p - q/(z - u), or None for affine maps."""
    m = normalize_moebius(m)
    if m.c == 0:
        return None
    a, b, c, d = m.coefficients
    p = -a / c
    u = -d / c
    q = (a * d - b * c) / (c * c)
    return p, q, u


# --------------------------------------------------------------------------
# weight symbols


@dataclass(frozen=True)
class Constant:
    """The constant weight w -> c."""

    c: complex

    def __post_init__(self):
        object.__setattr__(self, "c", complex(self.c))

    def evaluate(self, w, ell: int):
        return self.c + 0 * w

    def canonical(self, ell: int) -> "Constant":
        return self

    @property
    def is_zero(self) -> bool:
        return self.c == 0


@dataclass(frozen=True)
class ReciprocalPower:
    """The weight w -> c / (a w + b)^(ell+2)."""

    c: complex
    a: complex
    b: complex

    def __post_init__(self):
        for name in "cab":
            object.__setattr__(self, name, complex(getattr(self, name)))
        if self.a == 0 and self.b == 0:
            raise ValueError("ReciprocalPower needs (a, b) != (0, 0)")

    def evaluate(self, w, ell: int):
        return self.c / ipow(self.a * w + self.b, ell + 2)

    def canonical(self, ell: int) -> Union[Constant, "ReciprocalPower"]:
        """Rescale to a == 1, i.e. k/(w + kappa)^(ell+2); constant when a == 0."""
        m = ell + 2
        if self.c == 0:
            return Constant(0)
        if abs(self.a) <= NOISE * abs(self.b):
            return Constant(self.c / ipow(self.b, m))
        return ReciprocalPower(self.c / ipow(self.a, m), 1, self.b / self.a)

    @property
    def is_zero(self) -> bool:
        return self.c == 0

    @property
    def kappa(self) -> complex:
        """Pole offset: the weight is singular at w = -kappa (a must be 1)."""
        return self.b / self.a


WeightSymbol = Union[Constant, ReciprocalPower]


@dataclass(frozen=True)
class SymbolPair:
    """Weight index plus the symbols (f, g) of h -> f * (h o g)."""

    ell: int
    f: WeightSymbol
    g: Map

    def __post_init__(self):
        object.__setattr__(self, "ell", check_ell(self.ell))
        if not isinstance(self.g, (MoebiusMap, ConstantMap)):
            raise TypeError(f"g must be a MoebiusMap or ConstantMap, got {self.g!r}")

    def f_at(self, w):
        return self.f.evaluate(w, self.ell)

    def g_at(self, w):
        return self.g(w)

    def canonical(self) -> "SymbolPair":
        return SymbolPair(self.ell, self.f.canonical(self.ell), canonical_map(self.g))


# --------------------------------------------------------------------------
# kernel spans


def kernel_constant(ell: int) -> float:
    return float(2**ell * (1 + ell))


def _merge_terms(terms, tol: float = EPS_P):
    merged: list[list[complex]] = []
    for coeff, point in terms:
        for slot in merged:
            if abs(slot[1] - point) <= tol * max(abs(slot[1]), abs(point)):
                slot[0] += coeff
                break
        else:
            merged.append([coeff, point])
    if not merged:
        return ()
    biggest = max(abs(c) for c, _ in merged)
    return tuple((c, p) for c, p in merged if abs(c) > DROP * biggest and c != 0)


@dataclass(frozen=True)
class KernelSpan:
    """Finite combination sum_i c_i K_{z_i} in the weighted Bergman space."""

    ell: int
    terms: tuple[tuple[complex, complex], ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "ell", check_ell(self.ell))
        object.__setattr__(
            self,
            "terms",
            tuple((complex(c), half_plane_point(z)) for c, z in self.terms),
        )

    @property
    def coefficients(self) -> list[complex]:
        return [c for c, _ in self.terms]

    @property
    def points(self) -> list[complex]:
        return [z for _, z in self.terms]

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c, _ in self.terms)

    def __len__(self):
        return len(self.terms)

    def __call__(self, x):
        from .kernelspace import span_eval, span_eval_array

        if np.ndim(x):
            return span_eval_array(self, np.asarray(x, dtype=complex))
        return span_eval(self, x)

    def simplified(self) -> "KernelSpan":
        return KernelSpan(self.ell, _merge_terms(self.terms))

    def _check(self, other: "KernelSpan"):
        if not isinstance(other, KernelSpan):
            return NotImplemented
        if other.ell != self.ell:
            raise WeightMismatch(f"weight index {self.ell} vs {other.ell}")
        return None

    def concat(self, other: "KernelSpan") -> "KernelSpan":
        """Term list concatenation without any merging."""
        self._check(other)
        return KernelSpan(self.ell, self.terms + other.terms)

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return KernelSpan(self.ell, self.terms + other.terms).simplified()

    def __neg__(self):
        return KernelSpan(self.ell, tuple((-c, z) for c, z in self.terms))

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, KernelSpan):
            return NotImplemented
        s = complex(scalar)
        return KernelSpan(self.ell, tuple((s * c, z) for c, z in self.terms))

    __rmul__ = __mul__


def kernel(ell: int, z: complex, coeff: complex = 1.0) -> KernelSpan:
    """The span coeff * K_z."""
    return KernelSpan(ell, ((coeff, z),))


def zero_span(ell: int) -> KernelSpan:
    return KernelSpan(ell, ())


# --------------------------------------------------------------------------
# random numbers


def make_rng(seed: int = 0) -> np.random.Generator:
    """Counter-based generator, reproducible across platforms."""
    return np.random.Generator(np.random.Philox(int(seed) % 2**64))


def sample_points(rng: np.random.Generator, n: int, re=(0.3, 3.0), im=(-2.0, 2.0)) -> list[complex]:
    """Half-plane points with log-uniform real part and uniform imaginary part."""
    xs = np.exp(rng.uniform(math.log(re[0]), math.log(re[1]), n))
    ys = rng.uniform(im[0], im[1], n)
    return [complex(x, y) for x, y in zip(xs, ys)]


# --------------------------------------------------------------------------
# JSON


def complex_from_json(v) -> complex:
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    if (
        isinstance(v, (list, tuple))
        and len(v) == 2
        and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v)
    ):
        return complex(float(v[0]), float(v[1]))
    raise ValueError(f"expected a complex number as [re, im], got {v!r}")


def complex_to_json(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def map_from_json(obj: dict) -> Map:
    if "value" in obj:
        return ConstantMap(complex_from_json(obj["value"]))
    return make_map(*(complex_from_json(obj[k]) for k in "abcd"))


def map_to_json(g: Map) -> dict:
    if isinstance(g, ConstantMap):
        return {"a": [0.0, 0.0], "b": complex_to_json(g.value), "c": [0.0, 0.0], "d": [1.0, 0.0]}
    return {k: complex_to_json(v) for k, v in zip("abcd", g.coefficients)}


def symbol_from_json(obj: dict) -> WeightSymbol:
    kind = obj.get("kind")
    if kind == "const":
        return Constant(complex_from_json(obj["c"]))
    if kind == "recip":
        return ReciprocalPower(*(complex_from_json(obj[k]) for k in ("c", "a", "b")))
    raise ValueError(f"unknown weight symbol kind {kind!r}")


def symbol_to_json(f: WeightSymbol) -> dict:
    if isinstance(f, Constant):
        return {"kind": "const", "c": complex_to_json(f.c)}
    return {"kind": "recip", "c": complex_to_json(f.c), "a": complex_to_json(f.a), "b": complex_to_json(f.b)}


def pair_from_json(obj: dict) -> SymbolPair:
    return SymbolPair(check_ell(obj["ell"]), symbol_from_json(obj["f"]), map_from_json(obj["g"]))


def pair_to_json(s: SymbolPair) -> dict:
    return {"ell": s.ell, "f": symbol_to_json(s.f), "g": map_to_json(s.g)}


def span_from_json(obj: dict) -> KernelSpan:
    terms = tuple(
        (complex_from_json(t["coeff"]), complex_from_json(t["point"])) for t in obj.get("terms", [])
    )
    return KernelSpan(check_ell(obj["ell"]), terms)


def span_to_json(h: KernelSpan) -> dict:
    return {
        "ell": h.ell,
        "terms": [{"coeff": complex_to_json(c), "point": complex_to_json(z)} for c, z in h.terms],
    }
