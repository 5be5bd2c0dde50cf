"""Codimension-one and codimension-two petals.

A petal is described algebraically by a connection (finitely many local
functionals whose common kernel is the algebra) and geometrically by a
holization, a map from the disk that identifies exactly the points the
connection ties together.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import bisect

from .blaschke import BlaschkeProduct, hyperbolic_distance, moebius
from .errors import DomainError, NumericError, PreconditionError, UnsupportedError
from .poly import UniPoly

# (2 - sqrt 2) / (3 (4 sqrt 2 - 5)): smallest |c| accepted by the z^4 construction
CUSP2_BOUND = (2 - math.sqrt(2)) / (3 * (4 * math.sqrt(2) - 5))
ISO_TOL = 1e-10


def _disk(*pts):
    for a in pts:
        if not abs(a) < 1:
            raise DomainError(f"point {a!r} must lie in the open unit disk")


def _distinct(*pts):
    for a, b in itertools.combinations(pts, 2):
        if abs(a - b) < 1e-12:
            raise DomainError(f"points {a!r} and {b!r} coincide")


# ---------------------------------------------------------------------------
# rational functions

class Rational:
    """Quotient ``num / den`` of univariate polynomials."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        self.num = num if isinstance(num, UniPoly) else UniPoly(num)
        self.den = UniPoly([1.0]) if den is None else (den if isinstance(den, UniPoly) else UniPoly(den))

    @classmethod
    def moebius(cls, alpha):
        """``m_alpha(z) = (alpha - z) / (1 - conj(alpha) z)``."""
        return cls(UniPoly([alpha, -1.0]), UniPoly([1.0, -np.conj(alpha)]))

    @classmethod
    def identity(cls):
        return cls(UniPoly([0.0, 1.0]))

    @classmethod
    def from_blaschke(cls, f: BlaschkeProduct):
        num, den = f.num_den()
        return cls(num, den)

    def __call__(self, z):
        return self.num(z) / self.den(z)

    def __mul__(self, other):
        if isinstance(other, Rational):
            return Rational(self.num * other.num, self.den * other.den)
        return Rational(self.num * other, self.den)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = Rational([1.0])
        for _ in range(k):
            out = out * self
        return out

    def taylor(self, z0, order):
        """Taylor coefficients ``c_0..c_order`` of the function at ``z0``."""
        a = np.zeros(order + 1, complex)
        b = np.zeros(order + 1, complex)
        ta, tb = self.num.taylor(z0), self.den.taylor(z0)
        a[: min(order + 1, ta.size)] = ta[: order + 1]
        b[: min(order + 1, tb.size)] = tb[: order + 1]
        if abs(b[0]) < 1e-14:
            raise DomainError(f"{z0!r} is a pole")
        c = np.zeros(order + 1, complex)
        for k in range(order + 1):
            c[k] = (a[k] - np.dot(b[1 : k + 1], c[:k][::-1])) / b[0]
        return c

    def derivative(self, z0, j):
        """Exact ``j``-th derivative at ``z0`` via series division."""
        return complex(self.taylor(z0, j)[j] * math.factorial(j))

    def to_json(self):
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, obj):
        return cls(UniPoly.from_json(obj["num"]), UniPoly.from_json(obj["den"]))


# ---------------------------------------------------------------------------
# connections

@dataclass(frozen=True)
class LocalFunctional:
    """``f -> sum a * f^(j)(point)`` over the ``(point, order, coeff)`` terms."""

    terms: tuple

    def __post_init__(self):
        terms = tuple((complex(p), int(j), complex(a)) for p, j, a in self.terms)
        if not any(a != 0 for _, _, a in terms):
            raise DomainError("a local functional needs a nonzero coefficient")
        _disk(*[p for p, _, _ in terms])
        object.__setattr__(self, "terms", terms)

    @property
    def max_order(self):
        return max(j for _, j, _ in self.terms)

    def __call__(self, fn):
        if isinstance(fn, Rational):
            return sum(a * fn.derivative(p, j) for p, j, a in self.terms)
        return sum(a * numeric_derivative(fn, p, j) for p, j, a in self.terms)

    @classmethod
    def point_difference(cls, a, b):
        return cls(((a, 0, 1.0), (b, 0, -1.0)))

    @classmethod
    def derivative_at(cls, a, j=1):
        return cls(((a, j, 1.0),))


@dataclass(frozen=True)
class Connection:
    functionals: tuple

    def __post_init__(self):
        object.__setattr__(self, "functionals", tuple(self.functionals))
        keys = sorted({(p, j) for L in self.functionals for p, j, _ in L.terms}, key=lambda k: (k[0].real, k[0].imag, k[1]))
        M = np.zeros((len(self.functionals), len(keys)), complex)
        for i, L in enumerate(self.functionals):
            for p, j, a in L.terms:
                M[i, keys.index((p, j))] += a
        if np.linalg.matrix_rank(M, tol=1e-12) != len(self.functionals):
            raise DomainError("connection functionals are linearly dependent")

    @property
    def support(self):
        pts = []
        for L in self.functionals:
            for p, _, _ in L.terms:
                if not any(abs(p - q) < 1e-14 for q in pts):
                    pts.append(p)
        return tuple(pts)

    @property
    def codimension(self):
        return len(self.functionals)

    def is_double_points(self):
        return all(
            len(L.terms) == 2 and all(j == 0 for _, j, _ in L.terms) and abs(sum(a for *_, a in L.terms)) < 1e-14
            for L in self.functionals
        )

    def double_point_pairs(self):
        return [(L.terms[0][0], L.terms[1][0]) for L in self.functionals]


def numeric_derivative(fn, z0, j, n=64):
    """``j``-th derivative of a black-box function analytic on the disk.

    Trapezoidal Cauchy integral on a circle of radius half the distance from
    ``z0`` to the unit circle; the aliasing error decays like ``2**-n``.
    """
    if j == 0:
        return complex(fn(z0))
    r = 0.5 * (1 - abs(z0))
    k = np.arange(n)
    zs = z0 + r * np.exp(2j * np.pi * k / n)
    fv = np.array([fn(z) for z in zs], dtype=complex)
    return complex(math.factorial(j) * np.mean(fv * np.exp(-2j * np.pi * j * k / n)) / r**j)


def verify_membership(fn, conn: Connection, tol: float = 1e-10):
    """True when every functional of ``conn`` annihilates ``fn`` to ``tol`` (scaled).

    Returns ``(ok, residuals)``.
    """
    residuals = []
    for L in conn.functionals:
        for p, _, _ in L.terms:
            if isinstance(fn, Rational) and abs(fn.den(p)) < 1e-14:
                raise DomainError(f"support point {p!r} is a pole")
        val = L(fn)
        scale = sum(abs(a) * abs(_deriv(fn, p, j)) for p, j, a in L.terms)
        residuals.append(abs(val) / max(scale, 1.0))
    return all(r <= tol for r in residuals), residuals


def _deriv(fn, p, j):
    return fn.derivative(p, j) if isinstance(fn, Rational) else numeric_derivative(fn, p, j)


# ---------------------------------------------------------------------------
# holizations

@dataclass(frozen=True)
class Holization:
    components: tuple
    identified: tuple = ()
    name: str = ""

    @property
    def ambient_dim(self):
        return len(self.components)

    def __call__(self, z):
        return np.array([c(z) for c in self.components])

    def jacobian(self, z):
        return np.array([c.derivative(z, 1) for c in self.components])

    def to_json(self):
        return [c.to_json() for c in self.components]

    @classmethod
    def from_json(cls, obj):
        return cls(tuple(Rational.from_json(c) for c in obj))


def sample_grid(n_r=20, n_theta=20, rmax=0.95):
    """Deterministic polar grid in the disk, 20 radii x 20 angles by default."""
    rs = np.linspace(rmax / n_r, rmax, n_r)
    th = 2 * np.pi * (np.arange(n_theta) + 0.37) / n_theta
    return (rs[:, None] * np.exp(1j * th)[None, :]).ravel()


def collisions(h: Holization, grid, tol=1e-6):
    """Pairs of grid indices whose images agree within ``tol``."""
    img = np.array([h(z) for z in grid])
    out = []
    for i in range(len(grid)):
        d = np.max(np.abs(img[i + 1 :] - img[i]), axis=1) if i + 1 < len(grid) else np.zeros(0)
        for j in np.flatnonzero(d < tol):
            out.append((i, i + 1 + j))
    return out


@dataclass(frozen=True)
class PetalSpec:
    kind: str
    params: dict
    connection: Connection = field(compare=False)

    @property
    def codimension(self):
        return self.connection.codimension

    def to_json(self):
        def enc(v):
            if isinstance(v, (complex, np.complexfloating)):
                return [v.real, v.imag]
            if isinstance(v, (list, tuple)):
                return [enc(x) for x in v]
            return v

        return {"kind": self.kind, "params": {k: enc(v) for k, v in self.params.items()}}


def cusp1(alpha) -> PetalSpec:
    _disk(alpha)
    return PetalSpec("cusp1", {"alpha": complex(alpha)}, Connection((LocalFunctional.derivative_at(alpha, 1),)))


def single_crossing(a1, a2) -> PetalSpec:
    _disk(a1, a2)
    _distinct(a1, a2)
    return PetalSpec("single_crossing", {"a1": complex(a1), "a2": complex(a2)},
                     Connection((LocalFunctional.point_difference(a1, a2),)))


def triple_point(a1, a2, a3) -> PetalSpec:
    _disk(a1, a2, a3)
    _distinct(a1, a2, a3)
    conn = Connection((LocalFunctional.point_difference(a1, a2), LocalFunctional.point_difference(a2, a3)))
    # three derivative vectors in C^2 are always dependent
    return PetalSpec("triple_point", {"a1": complex(a1), "a2": complex(a2), "a3": complex(a3), "min_ambient_dim": 3}, conn)


def cusp2(c) -> PetalSpec:
    """The algebra ``f'(0) = 0, f''(0) + c f'''(0) = 0``."""
    c = complex(c)
    conn = Connection((LocalFunctional.derivative_at(0, 1), LocalFunctional(((0, 2, 1.0), (0, 3, c)))))
    return PetalSpec("cusp2", {"c": c, "locally_planar": c != 0}, conn)


def two_crossings(a1, a2, b1, b2) -> PetalSpec:
    _disk(a1, a2, b1, b2)
    _distinct(a1, a2, b1, b2)
    conn = Connection((LocalFunctional.point_difference(a1, a2), LocalFunctional.point_difference(b1, b2)))
    return PetalSpec("two_crossings", {"a1": complex(a1), "a2": complex(a2), "b1": complex(b1), "b2": complex(b2)}, conn)


# classification-only codim-2 kinds: no explicit holization is constructed
OTHER_CODIM2_KINDS = {
    "two_cusps": {"locally_planar": True},
    "crossing_and_cusp": {"locally_planar": True},
    "crossing_with_cusp_at_crossing": {"locally_planar": False},
}


def neil_holization(alpha) -> Holization:
    """``(m_a^2, m_a^3)``, whose image lies on ``z^3 = w^2``."""
    _disk(alpha)
    m = Rational.moebius(alpha)
    return Holization((m**2, m**3), name="neil")


def single_crossing_holization(a1, a2) -> Holization:
    """``(m_a1 m_a2, z m_a1 m_a2)``, gluing ``a1`` to ``a2``."""
    _disk(a1, a2)
    _distinct(a1, a2)
    b = Rational.moebius(a1) * Rational.moebius(a2)
    return Holization((b, Rational.identity() * b), identified=((complex(a1), complex(a2)),), name="single_crossing")


def single_crossing_invariant(a1, a2) -> float:
    return hyperbolic_distance(a1, a2)


def single_crossing_isomorphic(p, q) -> bool:
    return abs(single_crossing_invariant(*p) - single_crossing_invariant(*q)) < ISO_TOL


def triple_point_embedding(a2, a3, ambient_dim=3) -> Holization:
    """``(f, z f, z^2 f)`` with ``f = z m_a2 m_a3``; glues ``0, a2, a3``.

    Three branches through one point need three independent tangent
    directions, so a planar version is refused.
    """
    if ambient_dim < 3:
        raise UnsupportedError("a triple point cannot be holized in fewer than three dimensions")
    _disk(a2, a3)
    _distinct(0, a2, a3)
    f = Rational.identity() * Rational.moebius(a2) * Rational.moebius(a3)
    z = Rational.identity()
    return Holization((f, z * f, z * z * f), identified=((0j, complex(a2), complex(a3)),), name="triple_point")


def triple_point_jacobian_closed_form(a2, a3):
    """Rows ``Dh(0), Dh(a2), Dh(a3)`` as closed-form expressions."""
    r2 = -a2 * moebius(a3, a2) / (1 - abs(a2) ** 2)
    r3 = -a3 * moebius(a2, a3) / (1 - abs(a3) ** 2)
    return np.array([
        [a2 * a3, 0, 0],
        [r2, r2 * a2, r2 * a2**2],
        [r3, r3 * a3, r3 * a3**2],
    ], dtype=complex)


def triple_point_isomorphic(alphas, betas, rtol=1e-8) -> bool:
    """Some relabeling of ``betas`` makes the ratio-of-kernels matrix rank one."""
    alphas = [complex(a) for a in alphas]
    _disk(*alphas, *betas)
    _distinct(*alphas)
    _distinct(*betas)
    a = np.array(alphas)
    for perm in itertools.permutations(betas):
        b = np.array(perm, dtype=complex)
        M = (1 - np.conj(b)[:, None] * b[None, :]) / (1 - np.conj(a)[:, None] * a[None, :])
        s = np.linalg.svd(M, compute_uv=False)
        if s[1] < rtol * s[0]:
            return True
    return False


def cusp2_c(alpha) -> complex:
    """The value ``c`` for which ``z^2 m_alpha`` lies in ``B^2_{0,c}``."""
    return alpha / (3 * (1 - abs(alpha) ** 2))


def cusp2_arc_point(phi):
    """Point of the circle ``|a - (1+i)| = 1`` at angle ``phi`` about its center."""
    return 1 + 1j + np.exp(1j * phi)


# the arc inside the disk runs between the two intersections with the unit circle
# (at 1 and i), i.e. angles pi..3pi/2 about the center; pi + pi/4 is nearest 0
_ARC_LO, _ARC_HI, _ARC_MID = math.pi, 1.5 * math.pi, 1.25 * math.pi


def cusp2_arc_min_modulus(samples=20001):
    """Smallest ``|c|`` over the admissible arc, by dense sampling plus refinement."""
    from scipy.optimize import minimize_scalar

    phis = np.linspace(_ARC_LO, _ARC_HI, samples)[1:-1]
    vals = np.abs(cusp2_c(cusp2_arc_point(phis)))
    k = int(np.argmin(vals))
    res = minimize_scalar(lambda p: abs(cusp2_c(cusp2_arc_point(p))),
                          bounds=(phis[max(k - 1, 0)], phis[min(k + 1, len(phis) - 1)]), method="bounded",
                          options={"xatol": 1e-12})
    return float(res.fun), complex(cusp2_arc_point(res.x))


def cusp2_holization(c_target_modulus: float):
    """Holization ``(z^4, z^2 m_alpha)`` of ``B^2_{0,c}`` with ``|c|`` prescribed.

    ``alpha`` is found by bisection along the first-quadrant half of the arc,
    where ``|c|`` increases monotonically from its minimum to infinity.

    Returns
    -------
    (Holization, complex)
        The map and the realized ``c``.
    """
    if c_target_modulus < CUSP2_BOUND - 1e-12:
        raise DomainError(f"|c| = {c_target_modulus} is below the bound {CUSP2_BOUND:.6f} (0.297...)")

    def gap(phi):
        return abs(cusp2_c(cusp2_arc_point(phi))) - c_target_modulus

    # from the point nearest the origin towards alpha = 1 the modulus grows to infinity
    lo, hi = _ARC_MID, _ARC_HI - 1e-9
    phi = lo if gap(lo) >= 0 else bisect(gap, lo, hi, xtol=1e-15, maxiter=200)
    alpha = complex(cusp2_arc_point(phi))
    z = Rational.identity()
    h = Holization((z**4, z * z * Rational.moebius(alpha)), identified=((1 + 0j, 1j),), name="cusp2")
    c = cusp2_c(alpha)
    if abs(abs(alpha - (1 + 1j)) - 1) > 1e-12:
        raise NumericError("arc point drifted off the circle")
    if abs(h.components[1](1) - h.components[1](1j)) > 1e-12:
        raise NumericError("g(1) and g(i) differ")
    ok, _ = verify_membership(h.components[0], cusp2(c).connection, 1e-10)
    ok2, _ = verify_membership(h.components[1], cusp2(c).connection, 1e-10)
    if not (ok and ok2):
        raise NumericError("components fail the cusp functionals")
    return h, c


def cusp2_pair(alpha):
    """The Blaschke pair ``(z^4, z^2 m_alpha)`` as ``BlaschkeProduct`` objects."""
    return BlaschkeProduct((0, 0, 0, 0)), BlaschkeProduct((0, 0, alpha), -1.0)


def cusp2_isomorphic(c1, c2) -> bool:
    return abs(abs(c1) - abs(c2)) < ISO_TOL


def two_crossing_value(a1, a2, b):
    return (a1 - b) * (a2 - b) / ((1 - np.conj(a1) * b) * (1 - np.conj(a2) * b))


def two_crossing_condition(a1, a2, b1, b2, tol=1e-10) -> bool:
    """Whether ``m_a1 m_a2`` takes equal values at ``b1`` and ``b2``."""
    _disk(a1, a2, b1, b2)
    _distinct(a1, a2, b1, b2)
    return abs(two_crossing_value(a1, a2, b1) - two_crossing_value(a1, a2, b2)) <= tol


def two_crossing_holization(a1, a2, b1, b2) -> Holization:
    """``(m_a1 m_a2, z m_a1 m_a2 m_b1 m_b2)``; requires the level condition."""
    if not two_crossing_condition(a1, a2, b1, b2):
        raise PreconditionError("m_a1 m_a2 must take the same value at b1 and b2")
    f = Rational.moebius(a1) * Rational.moebius(a2)
    g = Rational.identity() * f * Rational.moebius(b1) * Rational.moebius(b2)
    ident = ((complex(a1), complex(a2)), (complex(b1), complex(b2)))
    return Holization((f, g), identified=ident, name="two_crossings")


def two_crossing_pair(a1, a2, b1, b2):
    """Blaschke products of degrees 2 and 5 matching ``two_crossing_holization``."""
    return BlaschkeProduct((a1, a2)), BlaschkeProduct((0, a1, a2, b1, b2), -1.0)


def nodal_cubic_fixture() -> Holization:
    """``(sqrt2 (z - 2 z^3), 1 - 2 z^2)`` onto ``z^2 = w^2 (1 - w)``."""
    s = math.sqrt(2)
    h = Holization(
        (Rational([0, s, 0, -2 * s]), Rational([1, 0, -2])),
        identified=((1 / s + 0j, -1 / s + 0j),),
        name="nodal_cubic",
    )
    return h


def nodal_cubic_connection() -> Connection:
    s = 1 / math.sqrt(2)
    return Connection((LocalFunctional.point_difference(s, -s),))


def a3_fixture() -> Holization:
    """``(z q, z^2 q)`` with ``q = (z^2 - 1/4) / (1 - z^2/4)``."""
    q = Rational([-0.25, 0, 1], [1, 0, -0.25])
    z = Rational.identity()
    return Holization((z * q, z * z * q), identified=((0j, 0.5 + 0j, -0.5 + 0j),), name="A3")


def a3_connection() -> Connection:
    return Connection((
        LocalFunctional.point_difference(0, 0.5),
        LocalFunctional.point_difference(0.5, -0.5),
        LocalFunctional(((0, 1, 1.0), (0.5, 1, 15 / 64), (-0.5, 1, 15 / 64))),
    ))
