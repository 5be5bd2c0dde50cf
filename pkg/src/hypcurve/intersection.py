"""Common level sets of a pair of Blaschke products.

For ``f`` of degree ``m`` the polynomial ``F(z, w)`` vanishes off the diagonal
exactly where ``f(z) = f(w)``; ``G`` plays the same role for ``g``. The
solutions of ``F = G = 0`` are found by eliminating ``w`` from a randomly
sheared copy of the system, then classified by region and counted.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .blaschke import BlaschkeProduct, evaluate
from .errors import (
    ConsistencyError,
    DomainError,
    NumericError,
    PreconditionError,
    TheoryViolationError,
)
from .poly import (
    BiPoly,
    UniPoly,
    homogenize,
    resultant_w_scaled,
    shear,
    sylvester,
    sylvester_pencil,
    sylvester_rank_deficient,
)

INFINITE = math.inf
BOUNDARY_TOL = 1e-7
PAIR_TOL = 1e-7
ORDER_GAP = 1e-8


@dataclass(frozen=True)
class BlaschkePair:
    f: BlaschkeProduct
    g: BlaschkeProduct

    def __post_init__(self):
        if self.f.degree < 2 or self.g.degree < 2:
            raise DomainError("both Blaschke products must have degree at least 2")

    @property
    def m(self):
        return self.f.degree

    @property
    def n(self):
        return self.g.degree

    def to_json(self):
        return {"f": self.f.to_json(), "g": self.g.to_json()}

    @classmethod
    def from_json(cls, obj):
        return cls(BlaschkeProduct.from_json(obj["f"]), BlaschkeProduct.from_json(obj["g"]))


@dataclass(frozen=True)
class IntersectionPoint:
    lam: complex
    mu: complex
    region: str
    multiplicity: int

    @property
    def on_diagonal(self):
        return abs(self.lam - self.mu) <= PAIR_TOL * (1 + abs(self.lam))

    def to_json(self):
        return {
            "lambda": [self.lam.real, self.lam.imag],
            "mu": [self.mu.real, self.mu.imag],
            "region": self.region,
            "multiplicity": self.multiplicity,
        }


@dataclass(frozen=True)
class IntersectionReport:
    points: tuple
    N: float
    r: int
    codim: object
    degenerate: bool
    m: int = 0
    n: int = 0
    shear: complex = field(default=0j, compare=False)

    def points_in(self, region):
        return [p for p in self.points if p.region == region]

    @property
    def affine_multiplicity(self):
        """Sum of multiplicities over all affine (ordered) solutions."""
        return sum(p.multiplicity for p in self.points)

    def to_json(self):
        codim = "infinite" if self.codim == INFINITE else self.codim
        return {
            "points": [p.to_json() for p in self.points],
            "N": self.N,
            "r": self.r,
            "codim": codim,
            "degenerate": self.degenerate,
        }


# --------------------------------------------------------------------------
# construction of F

def _divide_by_z_minus_w(N: np.ndarray):
    """Exact quotient of ``N(z, w)`` by ``z - w`` plus the remainder in ``w``."""
    k = N.shape[0] - 1
    width = N.shape[1] + k
    rows = [np.zeros(width, complex) for _ in range(k)]
    padded = np.zeros((k + 1, width), complex)
    padded[:, : N.shape[1]] = N
    carry = np.zeros(width, complex)
    for i in range(k, 0, -1):
        # q_{i-1} = n_i + w * q_i
        q = padded[i] + np.concatenate(([0], carry[:-1]))
        rows[i - 1] = q
        carry = q
    remainder = padded[0] + np.concatenate(([0], carry[:-1]))
    return np.array(rows), remainder


def build_F(f: BlaschkeProduct) -> BiPoly:
    """``(p(z) p~(w) - p(w) p~(z)) / (z - w)`` for ``f = p~ / p``.

    The front factor of ``f`` does not change the level sets and is omitted.
    """
    if f.degree < 2:
        raise DomainError("build_F needs degree at least 2")
    pt = UniPoly.from_roots(f.zeros).coeffs
    p = np.array([1.0 + 0j])
    for a in f.zeros:
        p = np.convolve(p, [1.0, -np.conj(a)])
    N = np.outer(p, pt) - np.outer(pt, p)
    Q, rem = _divide_by_z_minus_w(N)
    scale = max(np.max(np.abs(N)), 1.0)
    m = f.degree
    spill = np.abs(Q[:, m:]).max(initial=0.0)
    if max(np.max(np.abs(rem)), spill) > 1e-10 * scale:
        raise NumericError("division by z - w left a remainder")
    # F has degree at most m - 1 in each variable; drop round-off beyond that
    return BiPoly(Q[:m, :m])


# --------------------------------------------------------------------------
# numerical solve

def _scaled_residual(P: BiPoly, lam, mu):
    ab = np.abs(P.coeffs)
    s = np.polynomial.polynomial.polyval2d(np.maximum(1, np.abs(lam)), np.maximum(1, np.abs(mu)), ab)
    return np.abs(P(lam, mu)) / s


def newton_polish(F: BiPoly, G: BiPoly, lam, mu, maxiter=200):
    """Vectorized damped Newton iteration on ``F = G = 0``.

    A step is accepted only when it lowers the scaled residual; the best
    iterate per start is returned together with its residual.
    """
    lam = np.array(lam, dtype=complex, ndmin=1)
    mu = np.array(mu, dtype=complex, ndmin=1)
    Fz, Fw, Gz, Gw = F.dz(), F.dw(), G.dz(), G.dw()

    def res(l, u):
        return np.maximum(_scaled_residual(F, l, u), _scaled_residual(G, l, u))

    best = res(lam, mu)
    active = np.ones(lam.shape, bool)
    for _ in range(maxiter):
        if not active.any():
            break
        l, u = lam[active], mu[active]
        a, b, c, d = Fz(l, u), Fw(l, u), Gz(l, u), Gw(l, u)
        fv, gv = F(l, u), G(l, u)
        det = a * d - b * c
        with np.errstate(all="ignore"):
            dl = (d * fv - b * gv) / det
            du = (a * gv - c * fv) / det
            nl, nu = l - dl, u - du
            nr = res(nl, nu)
        ok = np.isfinite(nr) & (nr < best[active])
        step_small = np.abs(dl) + np.abs(du) <= 1e-16 * (1 + np.abs(l) + np.abs(u))
        idx = np.flatnonzero(active)
        lam[idx[ok]] = nl[ok]
        mu[idx[ok]] = nu[ok]
        best[idx[ok]] = nr[ok]
        active[idx[~ok | step_small | (nr == 0)]] = False
    return lam, mu, best


def _pencil_eigenvalues(Fs: BiPoly, Gs: BiPoly):
    S = sylvester_pencil(Fs, Gs)
    K = S.shape[0] - 1
    n = S.shape[1]
    s = max(np.max(np.abs(S)), 1e-300)
    S = S / s
    if K == 0:
        return np.zeros(0, complex)
    A = np.zeros((K * n, K * n), complex)
    B = np.eye(K * n, dtype=complex)
    for k in range(K - 1):
        A[k * n : (k + 1) * n, (k + 1) * n : (k + 2) * n] = np.eye(n)
    for k in range(K):
        A[(K - 1) * n :, k * n : (k + 1) * n] = -S[k]
    B[(K - 1) * n :, (K - 1) * n :] = S[K]
    ab = scipy.linalg.eigvals(A, B, homogeneous_eigvals=True)
    alpha, beta = ab[0], ab[1]
    finite = np.abs(beta) > 1e-13 * np.abs(alpha)
    z = alpha[finite] / beta[finite]
    return z[np.abs(z) < 1e8]


def _recover_w(Fs: BiPoly, Gs: BiPoly, z):
    a = np.polynomial.polynomial.polyroots(Fs.at_z(z).coeffs)
    b = np.polynomial.polynomial.polyroots(Gs.at_z(z).coeffs)
    if a.size == 0 or b.size == 0:
        return complex(a[0] if a.size else b[0] if b.size else 0)
    d = np.abs(a[:, None] - b[None, :])
    i, j = np.unravel_index(np.argmin(d), d.shape)
    return complex((a[i] + b[j]) / 2)


def _link(points, radius):
    groups = []
    for idx, p in enumerate(points):
        hit = [g for g in groups if any(_close(p, points[q], radius) for q in g)]
        merged = [idx]
        for g in hit:
            merged.extend(g)
            groups.remove(g)
        groups.append(merged)
    return groups


def _close(p, q, radius):
    return abs(p[0] - q[0]) + abs(p[1] - q[1]) <= radius * (1 + abs(p[0]) + abs(p[1]))


def _cluster_points(F, G, lam, mu, weights=None):
    """Group polished solutions; returns ``[(lam, mu, multiplicity)]``.

    Points within ``PAIR_TOL`` are merged outright. Wider groups are merged
    only when their centroid is itself a solution to round-off accuracy,
    which is how a multiple point looks after Newton stalls near it.
    """
    pts = list(zip(lam, mu))
    w = np.ones(len(pts), int) if weights is None else np.asarray(weights)
    groups = _link(pts, PAIR_TOL)
    for radius in (1e-6, 1e-5, 1e-4, 1e-3):
        cents = [(np.mean([pts[i][0] for i in g]), np.mean([pts[i][1] for i in g])) for g in groups]
        comps = _link(cents, radius)
        merged = []
        for comp in comps:
            if len(comp) == 1:
                merged.append(groups[comp[0]])
                continue
            members = [i for c in comp for i in groups[c]]
            cl = np.mean([pts[i][0] for i in members])
            cm = np.mean([pts[i][1] for i in members])
            cl, cm, r = newton_polish(F, G, [cl], [cm], maxiter=50)
            if r[0] <= 1e-12:
                merged.append(members)
            else:
                merged.extend(groups[c] for c in comp)
        groups = merged
    out = []
    for g in groups:
        # report the member with the smallest residual as the location
        gl = np.array([pts[i][0] for i in g])
        gm = np.array([pts[i][1] for i in g])
        r = np.maximum(_scaled_residual(F, gl, gm), _scaled_residual(G, gl, gm))
        k = int(np.argmin(r))
        out.append((complex(gl[k]), complex(gm[k]), int(sum(w[i] for i in g))))
    return out


def _region(lam, mu, band=BOUNDARY_TOL):
    def one(x):
        a = abs(x)
        if abs(a - 1) < band:
            return "T"
        return "D" if a < 1 else "E"

    a, b = one(lam), one(mu)
    if a != b:
        raise TheoryViolationError(
            f"solution ({lam}, {mu}) has coordinates in different regions {a}/{b}"
        )
    return a + b


def _solve_affine(F: BiPoly, G: BiPoly, t: complex, res_tol: float):
    Fs, Gs = shear(F, t), shear(G, t)
    zs = _pencil_eigenvalues(Fs, Gs)
    if zs.size == 0:
        return []
    ws = np.array([_recover_w(Fs, Gs, z) for z in zs])
    lam, mu, res = newton_polish(F, G, zs + t * ws, ws)
    # an eigenvalue whose polished point projects far away was a perturbed
    # infinite eigenvalue that Newton dragged onto some other solution
    drift = np.abs(lam - t * mu - zs)
    keep = (res <= res_tol) & (drift <= 1e-2 * (1 + np.abs(zs)))
    return _cluster_points(F, G, lam[keep], mu[keep])


def is_degenerate(F: BiPoly, G: BiPoly, rng=None) -> bool:
    """Common-factor test: tiny resultant and a singular Sylvester matrix at 3 random ``z``."""
    rng = np.random.default_rng(0) if rng is None else rng
    res, hadamard = resultant_w_scaled(F, G)
    small = res.is_zero or np.max(np.abs(res.coeffs)) < 1e-10 * hadamard
    if not small:
        return False
    zs = rng.uniform(-1, 1, 3) + 1j * rng.uniform(-1, 1, 3)
    return sylvester_rank_deficient(F, G, zs)


def _report(points, m, n, t, degenerate=False):
    if degenerate:
        return IntersectionReport((), INFINITE, 0, INFINITE, True, m, n, t)
    dd = sum(p.multiplicity for p in points if p.region == "DD")
    tt = sum(p.multiplicity for p in points if p.region == "TT")
    for p in points:
        if p.region == "TT" and p.on_diagonal:
            raise TheoryViolationError(f"diagonal solution {p.lam} on the torus")
    N = dd + tt / 2
    r = tt // 2 if tt % 2 == 0 else tt / 2
    codim = ((m - 1) * (n - 1) - r) / 2
    codim = int(codim) if float(codim).is_integer() else codim
    return IntersectionReport(tuple(points), N, r, codim, False, m, n, t)


def _sort_key(p):
    return (p.region, round(p.lam.real, 9), round(p.lam.imag, 9), round(p.mu.real, 9), round(p.mu.imag, 9))


def solve_pair(pair: BlaschkePair, tol: float = 1e-10, seed: int = 0, retries: int = 4) -> IntersectionReport:
    """All solutions of ``f(l) = f(u), g(l) = g(u)`` off the trivial diagonal.

    Parameters
    ----------
    pair : BlaschkePair
    tol : float
        Scaled residual a polished point must reach to count as a solution.
    seed : int
        Seed for the random shear; the same seed gives the same report.
    retries : int
        Number of fresh shears tried when the count disagrees with the
        expected ``(m-1)(n-1)``.
    """
    if tol <= 0:
        raise PreconditionError("tol must be positive")
    m, n = pair.m, pair.n
    F, G = build_F(pair.f), build_F(pair.g)
    rng = np.random.default_rng(seed)
    if is_degenerate(F, G, rng):
        return _report([], m, n, 0j, degenerate=True)
    expected = (m - 1) * (n - 1)
    last = None
    res_tol = max(tol, 1e-13)
    for attempt in range(retries + 1):
        t = complex(np.exp(2j * np.pi * rng.uniform()) * rng.uniform(0.5, 1.5))
        sols = _solve_affine(F, G, t, res_tol)
        try:
            points = [IntersectionPoint(l, u, _region(l, u), k) for l, u, k in sols]
        except TheoryViolationError as err:
            last = err
            res_tol = max(res_tol / 10, 1e-14)
            continue
        points.sort(key=_sort_key)
        report = _report(points, m, n, t)
        if abs(report.N - expected) <= 0.25:
            return report
        last = NumericError(f"count {report.N} differs from {expected}", best=report)
        res_tol = max(res_tol / 10, 1e-14)
    raise last


def reflection_closure_check(report: IntersectionReport, tol: float = 1e-7) -> bool:
    """Every solution with nonzero coordinates has its torus reflection in the report."""
    if report.degenerate:
        raise PreconditionError("reflection check needs a non-degenerate report")
    for p in report.points:
        if abs(p.lam) <= tol or abs(p.mu) <= tol:
            continue
        rl, rm = 1 / np.conj(p.lam), 1 / np.conj(p.mu)
        match = [
            q for q in report.points
            if abs(q.lam - rl) <= tol * (1 + abs(rl)) and abs(q.mu - rm) <= tol * (1 + abs(rm))
        ]
        if not match or match[0].multiplicity != p.multiplicity:
            return False
    return True


def swap_closure_check(report: IntersectionReport, tol: float = 1e-7) -> bool:
    """The solution set is invariant under ``(l, u) -> (u, l)`` with equal multiplicity."""
    for p in report.points:
        match = [
            q for q in report.points
            if abs(q.lam - p.mu) <= tol * (1 + abs(p.mu)) and abs(q.mu - p.lam) <= tol * (1 + abs(p.lam))
        ]
        if not match or match[0].multiplicity != p.multiplicity:
            return False
    return True


def codim_alg(pair: BlaschkePair, seed: int = 0):
    """Codimension of the algebra generated by ``f`` and ``g``, or ``INFINITE``."""
    report = solve_pair(pair, seed=seed)
    if report.degenerate:
        return INFINITE
    c = report.codim
    if not float(c).is_integer() or c < 0:
        raise ConsistencyError(f"codimension formula gave {c}; r = {report.r} is miscounted")
    return int(c)


def separation_pairs_on_torus(pair: BlaschkePair, seed: int = 0):
    """Unordered pairs of distinct torus points not separated by ``(f, g)``."""
    report = solve_pair(pair, seed=seed)
    if report.degenerate:
        return INFINITE
    return report.r


def leading_coefficient(f: BlaschkeProduct) -> complex:
    """Coefficient of ``z^{m-1} w^{m-1}`` in ``F``; equals ``-conj(f'(0) / u)``."""
    F = build_F(f)
    k = f.degree - 1
    if F.coeffs.shape[0] <= k or F.coeffs.shape[1] <= k:
        return 0j
    return complex(F.coeffs[k, k])


def _check_full_degree(f, F):
    lead = leading_coefficient(f)
    if abs(lead) <= 1e-10 * max(F.norm(), 1.0):
        raise PreconditionError(
            "F is not of full degree 2(m-1) (f'(0) = 0); precompose both maps with "
            "a Moebius map m_gamma at a non-critical point gamma first"
        )


def infinity_multiplicity(pair: BlaschkePair, seed: int = 0) -> float:
    """Intersection multiplicity of the projective closures at ``(0:1:0)``.

    Computed as ``(m-1)(n-1) + r0 + s/2`` where ``r0`` counts solutions
    ``(l, 0)`` with ``l`` in the punctured disk and ``s`` is the multiplicity at
    the origin.
    """
    F, G = build_F(pair.f), build_F(pair.g)
    _check_full_degree(pair.f, F)
    _check_full_degree(pair.g, G)
    report = solve_pair(pair, seed=seed)
    if report.degenerate:
        raise PreconditionError("the intersection is infinite")
    r0 = sum(p.multiplicity for p in report.points
             if abs(p.mu) <= PAIR_TOL and PAIR_TOL < abs(p.lam) < 1)
    s = sum(p.multiplicity for p in report.points if abs(p.mu) <= PAIR_TOL and abs(p.lam) <= PAIR_TOL)
    return (pair.m - 1) * (pair.n - 1) + r0 + s / 2


def projective_multiplicity_at_infinity(pair: BlaschkePair, point: str = "z", seed: int = 1) -> int:
    """Multiplicity of the homogenized curves at ``(0:1:0)`` (``point='z'``) or ``(0:0:1)``.

    Works directly on the homogeneous polynomials in the chart where the
    chosen coordinate is 1: after a random shear the multiplicity is the order
    of vanishing of the eliminant at the origin.
    """
    m, n = pair.m, pair.n
    Fh = homogenize(build_F(pair.f), 2 * (m - 1))
    Gh = homogenize(build_F(pair.g), 2 * (n - 1))
    A, B = Fh.chart(point), Gh.chart(point)
    rng = np.random.default_rng(seed)
    orders = []
    for _ in range(2):
        s = complex(np.exp(2j * np.pi * rng.uniform()))
        res, _ = resultant_w_scaled(shear(A, s), shear(B, s), radius=0.5, floor=False)
        # the Hadamard bound is far too pessimistic here; read the order off
        # the gap between round-off and the first genuine coefficient
        c = np.abs(res.coeffs) * 0.5 ** np.arange(res.coeffs.size)
        big = np.flatnonzero(c > ORDER_GAP * c.max()) if c.size and c.max() > 0 else []
        if len(big) == 0:
            raise PreconditionError("the intersection is infinite")
        orders.append(int(big[0]))
    if orders[0] != orders[1]:
        raise ConsistencyError(f"eliminant order unstable under shear: {orders}")
    return orders[0]


# --------------------------------------------------------------------------
# independent route: curve sampling + Newton, multiplicities by winding number

def _winding_count(Fs: BiPoly, Gs: BiPoly, z0: complex, rho: float, samples: int = 256) -> int:
    ts = z0 + rho * np.exp(2j * np.pi * np.arange(samples + 1) / samples)
    dets = []
    for z in ts:
        a = np.polynomial.polynomial.polyval(z, Fs.coeffs)
        b = np.polynomial.polynomial.polyval(z, Gs.coeffs)
        dets.append(np.linalg.det(sylvester(a, b)))
    phase = np.unwrap(np.angle(np.array(dets)))
    return int(round((phase[-1] - phase[0]) / (2 * np.pi)))


def solve_pair_grid(pair: BlaschkePair, seed: int = 7, radii=None, angles: int = 48, tol: float = 1e-10):
    """Second solver: seed Newton from points of the curve ``F = 0`` on a polar grid.

    Multiplicities come from the winding number of the Sylvester determinant
    of a differently sheared system around each solution's projection.
    Returns a list of ``(lam, mu, multiplicity)``.
    """
    F, G = build_F(pair.f), build_F(pair.g)
    radii = np.geomspace(1e-2, 1e2, 41) if radii is None else radii
    ls = (radii[:, None] * np.exp(2j * np.pi * (np.arange(angles) + 0.5) / angles)[None, :]).ravel()
    seeds_l, seeds_m = [], []
    for l in ls:
        c = F.at_z(l).coeffs
        if c.size < 2:
            continue
        for u in np.polynomial.polynomial.polyroots(c):
            seeds_l.append(l)
            seeds_m.append(u)
    lam, mu, res = newton_polish(F, G, seeds_l, seeds_m, maxiter=80)
    keep = res <= tol
    lam, mu = lam[keep], mu[keep]
    # collapse duplicates before the expensive multiplicity step
    groups = _link(list(zip(lam, mu)), 1e-6)
    pts = []
    for g in groups:
        gl, gm = lam[g], mu[g]
        r = np.maximum(_scaled_residual(F, gl, gm), _scaled_residual(G, gl, gm))
        k = int(np.argmin(r))
        pts.append((complex(gl[k]), complex(gm[k])))
    rng = np.random.default_rng(seed)
    t = complex(np.exp(2j * np.pi * rng.uniform()))
    Fs, Gs = shear(F, t), shear(G, t)
    proj = np.array([l - t * u for l, u in pts])
    out = []
    for i, (l, u) in enumerate(pts):
        others = np.delete(proj, i)
        gap = np.min(np.abs(others - proj[i])) if others.size else 1.0
        rho = min(0.3 * gap, 0.1 * (1 + abs(proj[i])))
        out.append((l, u, _winding_count(Fs, Gs, proj[i], rho)))
    return out
