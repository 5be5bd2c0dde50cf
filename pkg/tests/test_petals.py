import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hypcurve.blaschke import moebius
from hypcurve.errors import DomainError, PreconditionError, UnsupportedError
from hypcurve.intersection import BlaschkePair, solve_pair
from hypcurve import petals as P

GRID = P.sample_grid()
seeds = st.integers(0, 2**32 - 1)


def disk(rng, k, rmax=0.8):
    return rmax * np.sqrt(rng.uniform(size=k)) * np.exp(2j * np.pi * rng.uniform(size=k))


def identified_indices(h, grid=GRID):
    """Indices of grid points involved in any collision."""
    return {i for pair in P.collisions(h, grid) for i in pair}


def with_points(pts):
    return np.concatenate([GRID, np.array(pts, dtype=complex)])


def bounded(h, grid=GRID, bound=1.5):
    return max(np.max(np.abs(c(grid))) for c in h.components) <= bound


# ---------------------------------------------------------------------------
# local functionals and membership

def test_functional_validation():
    with pytest.raises(DomainError):
        P.LocalFunctional(((0.1, 0, 0.0),))
    with pytest.raises(DomainError):
        P.LocalFunctional(((1.2, 0, 1.0),))


def test_connection_rejects_dependence():
    L = P.LocalFunctional.point_difference(0.1, 0.2)
    with pytest.raises(DomainError):
        P.Connection((L, P.LocalFunctional(((0.1, 0, 2.0), (0.2, 0, -2.0)))))


def test_connection_support():
    conn = P.triple_point(0, 0.5, -0.5).connection
    assert sorted(z.real for z in conn.support) == [-0.5, 0, 0.5]


def test_membership_constant_and_identity():
    one = P.Rational([3.0 + 1j])
    conn = P.two_crossings(0.1, 0.2, -0.3j, 0.4).connection
    assert P.verify_membership(one, conn)[0]
    assert not P.verify_membership(P.Rational.identity(), P.cusp1(0).connection)[0]


def test_membership_pole_at_support():
    f = P.Rational([1.0], [-0.5, 1.0])
    with pytest.raises(DomainError):
        P.verify_membership(f, P.single_crossing(0.5, 0).connection)


def test_membership_black_box_matches_exact():
    h = P.a3_fixture()
    conn = P.a3_connection()
    for comp in h.components:
        exact = P.verify_membership(comp, conn)
        approx = P.verify_membership(lambda z, c=comp: c(z), conn)
        assert exact[0] and approx[0]


def test_rational_taylor_against_finite_difference():
    f = P.Rational.moebius(0.3 + 0.2j) ** 3
    z0, h = 0.1 - 0.2j, 1e-4
    fd = (f(z0 + h) - 2 * f(z0) + f(z0 - h)) / h**2
    assert abs(f.derivative(z0, 2) - fd) < 1e-5


# ---------------------------------------------------------------------------
# cusp of order one

def test_neil_at_origin():
    h = P.neil_holization(0)
    np.testing.assert_allclose(h.components[0].num.coeffs, [0, 0, 1])
    # m_0(z) = -z, so the second coordinate is -z^3; same image set
    np.testing.assert_allclose(h.components[1].num.coeffs, [0, 0, 0, -1])


@pytest.mark.parametrize("alpha", [0, 0.5, -0.3 + 0.6j])
def test_neil_relation_and_singularity(alpha):
    h = P.neil_holization(alpha)
    z, w = h.components[0](GRID), h.components[1](GRID)
    assert np.max(np.abs(z**3 - w**2)) < 1e-12
    assert np.allclose(h.jacobian(alpha), 0, atol=1e-14)
    ring = 0.9 * np.exp(2j * np.pi * np.arange(64) / 64)
    assert min(np.max(np.abs(h.jacobian(t))) for t in ring) > 1e-3
    assert bounded(h)
    assert all(P.verify_membership(c, P.cusp1(alpha).connection)[0] for c in h.components)
    assert not identified_indices(h)


def test_neil_domain():
    with pytest.raises(DomainError):
        P.neil_holization(1.0)


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_all_cusps_isomorphic(seed):
    rng = np.random.default_rng(seed)
    alpha = complex(disk(rng, 1)[0])
    zs = disk(rng, 30, 0.95)
    h, h0 = P.neil_holization(alpha), P.neil_holization(0)
    for c, c0 in zip(h.components, h0.components):
        assert np.allclose(c(moebius(alpha, -zs)), c0(zs), atol=1e-10)
    z, w = h.components[0](moebius(alpha, zs)), h.components[1](moebius(alpha, zs))
    assert np.allclose(z, h0.components[0](zs), atol=1e-10)
    assert np.allclose(-w, h0.components[1](zs), atol=1e-10)


# ---------------------------------------------------------------------------
# single crossing

def test_single_crossing_basic():
    h = P.single_crossing_holization(0.3, -0.3)
    assert np.allclose(h(0.3), 0) and np.allclose(h(-0.3), 0)
    pts = with_points([0.3, -0.3])
    hits = P.collisions(h, pts)
    assert hits == [(len(pts) - 2, len(pts) - 1)]
    off = GRID[np.abs(h.components[0](GRID)) > 1e-8]
    assert np.allclose(h.components[1](off) / h.components[0](off), off)
    assert min(np.max(np.abs(h.jacobian(z))) for z in GRID) > 1e-6
    assert all(P.verify_membership(c, P.single_crossing(0.3, -0.3).connection)[0] for c in h.components)


def test_single_crossing_coincident():
    with pytest.raises(DomainError):
        P.single_crossing_holization(0.2, 0.2)


def test_single_crossing_isomorphism():
    r, g = 0.45, 0.2 - 0.5j
    assert P.single_crossing_isomorphic((0, r), (moebius(g, 0), moebius(g, r)))
    assert not P.single_crossing_isomorphic((0, 0.5), (0, 0.6))
    rot = np.exp(0.7j)
    assert P.single_crossing_isomorphic((0.2, 0.5), (0.2 * rot, 0.5 * rot))


# ---------------------------------------------------------------------------
# triple point

def test_triple_point_jacobian():
    h = P.triple_point_embedding(0.5, -0.5)
    assert h.ambient_dim == 3
    for z in (0, 0.5, -0.5):
        assert np.allclose(h(z), 0)
    M = P.triple_point_jacobian_closed_form(0.5, -0.5)
    numeric = np.array([h.jacobian(z) for z in (0, 0.5, -0.5)])
    np.testing.assert_allclose(numeric, M, atol=1e-13)
    assert M[0, 0] == 0.5 * -0.5 and M[0, 1] == 0 and M[0, 2] == 0
    assert abs(np.linalg.det(M)) > 1e-3
    pts = with_points([0, 0.5, -0.5])
    n = len(pts)
    assert set(P.collisions(h, pts)) == {(n - 3, n - 2), (n - 3, n - 1), (n - 2, n - 1)}
    assert all(P.verify_membership(c, P.triple_point(0, 0.5, -0.5).connection)[0] for c in h.components)


def test_triple_point_refuses_plane():
    with pytest.raises(UnsupportedError):
        P.triple_point_embedding(0.5, -0.5, ambient_dim=2)
    assert P.triple_point(0, 0.5, -0.5).params["min_ambient_dim"] == 3


def test_triple_point_coincident():
    with pytest.raises(DomainError):
        P.triple_point_embedding(0.5, 0.5)


def test_triple_point_isomorphism():
    a = (0, 0.3, 0.6)
    assert P.triple_point_isomorphic(a, a)
    assert not P.triple_point_isomorphic(a, (0, 0.3, 0.9))


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_triple_point_moebius_images(seed):
    rng = np.random.default_rng(seed)
    a = disk(rng, 3)
    g = complex(disk(rng, 1)[0])
    b = moebius(g, a)[rng.permutation(3)]
    assert P.triple_point_isomorphic(a, b)


# ---------------------------------------------------------------------------
# cusp of order two

def test_cusp2_bound_value():
    assert P.CUSP2_BOUND == pytest.approx(0.29726860414853, abs=1e-12)
    h, c = P.cusp2_holization(P.CUSP2_BOUND)
    assert abs(c) == pytest.approx(P.CUSP2_BOUND, abs=1e-10)


@pytest.mark.parametrize("cmod", [0.3, 0.5, 1.0, 4.0])
def test_cusp2_construction(cmod):
    h, c = P.cusp2_holization(cmod)
    alpha = complex(h.components[1].num.coeffs[2])
    assert abs(abs(alpha - (1 + 1j)) - 1) < 1e-12 and abs(alpha) < 1
    assert alpha.real > 0 and alpha.imag > 0
    assert abs(abs(c) - cmod) < 1e-10
    assert abs(c - alpha / (3 * (1 - abs(alpha) ** 2))) < 1e-12
    g = h.components[1]
    assert abs(g(1) - g(1j)) < 1e-12
    conn = P.cusp2(c).connection
    assert all(P.verify_membership(comp, conn)[0] for comp in h.components)
    assert bounded(h)


def test_cusp2_below_bound():
    with pytest.raises(DomainError, match="0.297"):
        P.cusp2_holization(0.2)


def test_cusp2_arc_minimum():
    val, alpha = P.cusp2_arc_min_modulus()
    assert val == pytest.approx(1 / 6, abs=1e-9)
    assert abs(alpha) == pytest.approx(math.sqrt(2) - 1, abs=1e-6)


def test_cusp2_pair_matches_holization():
    h, c = P.cusp2_holization(0.5)
    alpha = complex(h.components[1].num.coeffs[2])
    f, g = P.cusp2_pair(alpha)
    zs = GRID[:50]
    assert np.allclose(f(zs), h.components[0](zs)) and np.allclose(g(zs), h.components[1](zs))
    assert solve_pair(BlaschkePair(f, g)).codim == 2


def test_cusp2_isomorphism():
    assert P.cusp2_isomorphic(0.4, 0.4j)
    assert not P.cusp2_isomorphic(0.4, 0.41)


# ---------------------------------------------------------------------------
# two crossings

def test_two_crossing_condition():
    assert P.two_crossing_condition(0.5, -0.5, 1j / 3, -1j / 3)
    assert not P.two_crossing_condition(0.1 + 0.2j, -0.4, 0.3j, 0.6)
    assert not P.two_crossing_condition(0.5, -0.5, 1j / 3, -1j / 3 + 1e-3)
    with pytest.raises(DomainError):
        P.two_crossing_condition(0.5, 0.5, 0.1, 0.2)


def test_two_crossing_holization():
    args = (0.5, -0.5, 1j / 3, -1j / 3)
    h = P.two_crossing_holization(*args)
    assert np.allclose(h(0.5), 0) and np.allclose(h(-0.5), 0)
    assert np.allclose(h(1j / 3), h(-1j / 3), atol=1e-12)
    assert all(P.verify_membership(c, P.two_crossings(*args).connection)[0] for c in h.components)
    pts = with_points(args)
    n = len(pts)
    assert set(P.collisions(h, pts)) == {(n - 4, n - 3), (n - 2, n - 1)}
    assert bounded(h)
    rep = solve_pair(BlaschkePair(*P.two_crossing_pair(*args)))
    assert rep.codim == 2 and rep.r == 0


def test_two_crossing_precondition():
    with pytest.raises(PreconditionError):
        P.two_crossing_holization(0.1 + 0.2j, -0.4, 0.3j, 0.6)


# ---------------------------------------------------------------------------
# fixtures

def test_nodal_cubic():
    h = P.nodal_cubic_fixture()
    z, w = h.components[0](GRID[:100]), h.components[1](GRID[:100])
    assert np.max(np.abs(z**2 - w**2 * (1 - w))) < 1e-12
    s = 1 / math.sqrt(2)
    assert np.allclose(h(s), h(-s), atol=1e-15)
    pts = with_points([s, -s])
    n = len(pts)
    assert P.collisions(h, pts) == [(n - 2, n - 1)]
    assert min(np.max(np.abs(h.jacobian(t))) for t in GRID) > 1e-3
    assert all(P.verify_membership(c, P.nodal_cubic_connection())[0] for c in h.components)


def test_a3_fixture():
    h = P.a3_fixture()
    conn = P.a3_connection()
    for c in h.components:
        ok, res = P.verify_membership(c, conn, tol=1e-12)
        assert ok and max(res) < 1e-12
    first = h.components[0]
    assert all(abs(first(z)) < 1e-15 for z in (0, 0.5, -0.5))
    off = GRID[np.abs(first(GRID)) > 1e-8]
    assert np.allclose(h.components[1](off) / first(off), off)
    for c in h.components:
        rel = c.derivative(0, 1) + 15 / 64 * (c.derivative(0.5, 1) + c.derivative(-0.5, 1))
        assert abs(rel) < 1e-12


def test_holization_json_round_trip():
    h = P.two_crossing_holization(0.5, -0.5, 1j / 3, -1j / 3)
    again = P.Holization.from_json(h.to_json())
    assert np.allclose(again(0.2 + 0.1j), h(0.2 + 0.1j))


def test_petal_spec_kinds():
    assert P.cusp1(0.2).codimension == 1
    assert P.single_crossing(0.1, 0.2).codimension == 1
    for spec in (P.triple_point(0, 0.1, 0.2), P.cusp2(0.5), P.two_crossings(0.1, 0.2, 0.3, 0.4)):
        assert spec.codimension == 2
    assert P.cusp2(0.5).to_json()["kind"] == "cusp2"
    assert P.OTHER_CODIM2_KINDS["crossing_with_cusp_at_crossing"]["locally_planar"] is False
