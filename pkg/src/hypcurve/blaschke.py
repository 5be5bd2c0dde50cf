"""Disk automorphisms and finite Blaschke products."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NumericError
from .poly import UniPoly

POLE_EPS = 1e-12


def _check_disk(a, name="point"):
    if not abs(a) < 1:
        raise DomainError(f"{name} {a!r} must lie in the open unit disk")


@dataclass(frozen=True)
class MoebiusMap:
    """The involutive disk automorphism ``m_a(z) = (a - z) / (1 - conj(a) z)``."""

    alpha: complex

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        _check_disk(self.alpha, "alpha")

    def __call__(self, z):
        a = self.alpha
        return (a - np.asarray(z)) / (1 - np.conj(a) * np.asarray(z))

    def deriv(self, z):
        a = self.alpha
        return (abs(a) ** 2 - 1) / (1 - np.conj(a) * np.asarray(z)) ** 2


def moebius(alpha, z):
    """Evaluate ``m_alpha(z)``."""
    return MoebiusMap(alpha)(z)


@dataclass(frozen=True)
class BlaschkeProduct:
    """``unimodular * prod (z - a_i) / (1 - conj(a_i) z)``.

    Zeros are kept with repetition. A supplied front factor is renormalized
    to modulus one and rejected if it is more than 1e-8 away from the circle.
    """

    zeros: tuple = field(default=())
    unimodular: complex = 1.0

    def __post_init__(self):
        zs = tuple(complex(a) for a in np.atleast_1d(np.asarray(self.zeros, dtype=complex)))
        if not zs:
            raise DomainError("a Blaschke product needs at least one zero")
        for a in zs:
            _check_disk(a, "zero")
        u = complex(self.unimodular)
        if abs(abs(u) - 1) > 1e-8:
            raise DomainError(f"front factor {u!r} is not unimodular")
        object.__setattr__(self, "zeros", zs)
        object.__setattr__(self, "unimodular", u / abs(u))

    @property
    def degree(self):
        return len(self.zeros)

    def __call__(self, z):
        return evaluate(self, z)

    def num_den(self):
        return num_den(self)

    def to_json(self):
        u = self.unimodular
        return {"unimodular": [u.real, u.imag], "zeros": [[a.real, a.imag] for a in self.zeros]}

    @classmethod
    def from_json(cls, obj):
        re, im = obj.get("unimodular", [1.0, 0.0])
        return cls(tuple(complex(x, y) for x, y in obj["zeros"]), complex(re, im))


def evaluate(f: BlaschkeProduct, z):
    """Value of ``f`` at ``z`` (scalar or array)."""
    z = np.asarray(z, dtype=complex)
    out = np.full(z.shape, f.unimodular, dtype=complex)
    for a in f.zeros:
        den = 1 - np.conj(a) * z
        if np.any(np.abs(den) < POLE_EPS * np.maximum(1, np.abs(z))):
            raise NumericError(f"evaluation hits the pole 1/conj({a})")
        out = out * (z - a) / den
    return out[()]


def num_den(f: BlaschkeProduct):
    """``(unimodular * prod(z - a_i), prod(1 - conj(a_i) z))``."""
    num = UniPoly.from_roots(f.zeros, lead=f.unimodular)
    den = UniPoly([1.0])
    for a in f.zeros:
        den = den * UniPoly([1.0, -np.conj(a)])
    return num, den


def precompose_moebius(f: BlaschkeProduct, gamma: complex) -> BlaschkeProduct:
    """The Blaschke product ``f o m_gamma``.

    Its zeros are ``m_gamma(a_i)``; the front factor is fixed by matching the
    value at the origin (or at another regular point if that vanishes).
    """
    gamma = complex(gamma)
    _check_disk(gamma, "gamma")
    m = MoebiusMap(gamma)
    zeros = tuple(complex(m(a)) for a in f.zeros)
    base = BlaschkeProduct(zeros, 1.0)
    # pick a probe away from every zero so the ratio is well conditioned
    for probe in (0.0, 0.5, -0.5j, 0.37 + 0.21j):
        target = complex(evaluate(f, m(probe)))
        b = complex(evaluate(base, probe))
        if abs(b) > 1e-6:
            return BlaschkeProduct(zeros, target / b)
    raise NumericError("could not fix the front factor")


def derivative_at(f: BlaschkeProduct, z: complex) -> complex:
    """``f'(z)`` from the logarithmic derivative, with a product-rule fallback."""
    z = complex(z)
    value = complex(evaluate(f, z))
    near = [abs(z - a) < 1e-8 for a in f.zeros]
    if not any(near):
        s = sum(1 / (z - a) + np.conj(a) / (1 - np.conj(a) * z) for a in f.zeros)
        return value * s
    total = 0j
    factors = [(z - a) / (1 - np.conj(a) * z) for a in f.zeros]
    derivs = [MoebiusMap(a).deriv(z) * -1 for a in f.zeros]
    for k in range(len(factors)):
        term = f.unimodular * derivs[k]
        for i, fac in enumerate(factors):
            if i != k:
                term *= fac
        total += term
    return complex(total)


def hyperbolic_distance(a: complex, b: complex) -> float:
    """``artanh |m_a(b)|``, the Poincare distance normalized to curvature -4."""
    _check_disk(a, "a")
    _check_disk(b, "b")
    rho = abs(moebius(a, b))
    return float(np.arctanh(min(rho, 1.0)))


def pseudo_hyperbolic(a, b):
    return float(abs(moebius(a, b)))
