"""Univariate and bivariate complex polynomials.

Coefficients are stored in ascending order. ``BiPoly.coeffs[i, j]`` is the
coefficient of ``z**i * w**j``.
"""
from __future__ import annotations

from math import comb

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import DegenerateInputError, NumericError, PreconditionError

EPS = np.finfo(float).eps


def _frozen(a):
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


class UniPoly:
    """Complex polynomial in one variable, coefficients ascending."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.atleast_1d(np.asarray(coeffs, dtype=complex))
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else c[:0]
        object.__setattr__(self, "coeffs", _frozen(c))

    def __setattr__(self, name, value):
        raise AttributeError("UniPoly is immutable")

    @classmethod
    def from_roots(cls, roots, lead=1.0):
        return cls(lead * npoly.polyfromroots(np.asarray(roots, dtype=complex)))

    @property
    def is_zero(self):
        return self.coeffs.size == 0

    @property
    def degree(self):
        # the zero polynomial reports degree 0; callers branch on is_zero
        return max(self.coeffs.size - 1, 0)

    @property
    def lead(self):
        return self.coeffs[-1] if self.coeffs.size else 0j

    def __call__(self, z):
        if self.is_zero:
            return np.zeros_like(np.asarray(z, dtype=complex))
        return npoly.polyval(z, self.coeffs)

    def __add__(self, other):
        other = _as_uni(other)
        return UniPoly(npoly.polyadd(self._padded(), other._padded()))

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(-self.coeffs)

    def __sub__(self, other):
        return self + (-_as_uni(other))

    def __rsub__(self, other):
        return _as_uni(other) - self

    def __mul__(self, other):
        if np.isscalar(other):
            return UniPoly(self.coeffs * other)
        other = _as_uni(other)
        if self.is_zero or other.is_zero:
            return UniPoly([])
        return UniPoly(npoly.polymul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, UniPoly):
            return NotImplemented
        return np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash(self.coeffs.tobytes())

    def __repr__(self):
        return f"UniPoly({self.coeffs.tolist()})"

    def _padded(self):
        return self.coeffs if self.coeffs.size else np.zeros(1, complex)

    def deriv(self, k=1):
        if self.coeffs.size <= k:
            return UniPoly([])
        return UniPoly(npoly.polyder(self.coeffs, k))

    def scale(self, z):
        """Sum of |a_i| |z|^i, the natural size of ``p(z)`` for error bounds."""
        return npoly.polyval(np.abs(z), np.abs(self.coeffs))

    def taylor(self, z0):
        """Coefficients of ``p(z0 + h)`` in powers of ``h``."""
        n = self.coeffs.size
        out = np.zeros(n, complex)
        for k in range(n):
            out[k] = sum(comb(i, k) * self.coeffs[i] * z0 ** (i - k) for i in range(k, n))
        return out

    def to_json(self):
        return {"coeffs": [[c.real, c.imag] for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj):
        return cls([complex(re, im) for re, im in obj["coeffs"]])


def _as_uni(x):
    if isinstance(x, UniPoly):
        return x
    return UniPoly([x])


def roots(p: UniPoly, tol: float = 1e-10, maxiter: int = 50):
    """Roots of ``p`` with multiplicities.

    Companion-matrix eigenvalues are polished by Newton's method. Roots closer
    than the cluster radius are merged, and looser clusters are merged when
    their centroid passes a multiple-root test at ``tol``.

    Returns
    -------
    list of (complex, int)
        Distinct roots with multiplicity, sorted by (real, imag).
    """
    if p.is_zero:
        raise DegenerateInputError("zero polynomial has no finite root set")
    if p.degree < 1:
        raise DegenerateInputError("constant polynomial has no roots")
    c = p.coeffs / np.max(np.abs(p.coeffs))
    q = UniPoly(c)
    nzero = int(np.flatnonzero(c)[0])
    rest = c[nzero:]
    est = npoly.polyroots(rest) if rest.size > 1 else np.zeros(0, complex)

    # cluster the raw eigenvalues: the mean of a perturbed multiple root is
    # far more accurate than any single member, and polishing would spoil it
    radius = max(1e-7, 1e3 * EPS * np.max(np.abs(c)))
    groups = _link(list(est), lambda a, b: abs(a - b) <= radius * (1 + abs(a)))
    groups = _merge_loose(q, groups, tol)

    out = [(0j, nzero)] if nzero else []
    for g in groups:
        z = _newton_polish(q, complex(np.mean(g)), maxiter, len(g))
        if nzero and abs(z) <= radius:
            out[0] = (0j, out[0][1] + len(g))
            continue
        out.append((complex(z), len(g)))
    for z, mult in out:
        r = abs(q(z))
        if r > tol * max(q.scale(z), 1.0) * max(1, mult):
            raise NumericError(f"root {z} did not converge (residual {r:.3e})", best=z)
    return sorted(out, key=lambda t: (round(t[0].real, 12), round(t[0].imag, 12)))


def _newton_polish(q, z, maxiter, mult=1):
    dq = q.deriv()
    best, fbest = z, abs(q(z))
    for _ in range(maxiter):
        d = dq(z)
        if d == 0:
            break
        z_new = z - mult * q(z) / d
        f_new = abs(q(z_new))
        if not np.isfinite(f_new) or f_new >= fbest:
            break
        z, best, fbest = z_new, z_new, f_new
        if fbest <= 4 * EPS * q.scale(z):
            break
    return best


def _link(items, close):
    """Single-linkage grouping of ``items`` under the predicate ``close``."""
    groups = []
    for it in items:
        hit = [g for g in groups if any(close(it, x) for x in g)]
        merged = [it]
        for g in hit:
            merged.extend(g)
            groups.remove(g)
        groups.append(merged)
    return groups


def _merge_loose(q, groups, tol):
    # widen the linkage radius step by step; a component is merged only when
    # its centroid passes the multiple-root test for its full size
    for radius in (1e-6, 1e-5, 1e-4, 1e-3, 1e-2):
        cents = [complex(np.mean(g)) for g in groups]
        comps = _link(list(range(len(groups))), lambda i, j: abs(cents[i] - cents[j]) <= radius * (1 + abs(cents[i])))
        merged = []
        for comp in comps:
            members = [z for i in comp for z in groups[i]]
            if len(comp) > 1 and _is_multiple_root(q, complex(np.mean(members)), len(members), tol):
                merged.append(members)
            else:
                merged.extend(groups[i] for i in comp)
        groups = merged
    return groups


def _is_multiple_root(q, z, k, tol):
    tol = min(tol, 1e3 * EPS)
    t = q.taylor(z)
    sizes = UniPoly(np.abs(q.coeffs)).taylor(abs(z)).real
    return all(abs(t[j]) <= tol * max(sizes[j], 1e-300) for j in range(min(k, t.size)))


class BiPoly:
    """Complex polynomial in (z, w); ``coeffs[i, j]`` multiplies ``z**i w**j``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.asarray(coeffs, dtype=complex)
        if c.ndim != 2:
            c = np.atleast_2d(c)
        rows = np.flatnonzero(np.any(c != 0, axis=1))
        cols = np.flatnonzero(np.any(c != 0, axis=0))
        if rows.size == 0:
            c = np.zeros((0, 0), complex)
        else:
            c = c[: rows[-1] + 1, : cols[-1] + 1]
        object.__setattr__(self, "coeffs", _frozen(c))

    def __setattr__(self, name, value):
        raise AttributeError("BiPoly is immutable")

    @property
    def is_zero(self):
        return self.coeffs.size == 0

    @property
    def zdeg(self):
        return max(self.coeffs.shape[0] - 1, 0)

    @property
    def wdeg(self):
        return max(self.coeffs.shape[1] - 1, 0)

    @property
    def total_degree(self):
        if self.is_zero:
            return 0
        i, j = np.nonzero(self.coeffs)
        return int(np.max(i + j))

    def __call__(self, z, w):
        if self.is_zero:
            return np.zeros(np.broadcast(z, w).shape, complex)[()]
        z, w = np.broadcast_arrays(np.asarray(z, complex), np.asarray(w, complex))
        return npoly.polyval2d(z, w, self.coeffs)

    def __repr__(self):
        return f"BiPoly({self.coeffs.tolist()})"

    def __eq__(self, other):
        if not isinstance(other, BiPoly):
            return NotImplemented
        return self.coeffs.shape == other.coeffs.shape and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash(self.coeffs.tobytes())

    def _pad(self, shape):
        out = np.zeros(shape, complex)
        out[: self.coeffs.shape[0], : self.coeffs.shape[1]] = self.coeffs
        return out

    def __add__(self, other):
        shape = tuple(max(a, b) for a, b in zip(self.coeffs.shape, other.coeffs.shape))
        return BiPoly(self._pad(shape) + other._pad(shape))

    def __neg__(self):
        return BiPoly(-self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if np.isscalar(other):
            return BiPoly(self.coeffs * other)
        if self.is_zero or other.is_zero:
            return BiPoly(np.zeros((0, 0)))
        a, b = self.coeffs, other.coeffs
        out = np.zeros((a.shape[0] + b.shape[0] - 1, a.shape[1] + b.shape[1] - 1), complex)
        for i, j in zip(*np.nonzero(a)):
            out[i : i + b.shape[0], j : j + b.shape[1]] += a[i, j] * b
        return BiPoly(out)

    __rmul__ = __mul__

    @classmethod
    def from_uni(cls, p: UniPoly, var="z"):
        c = p.coeffs.reshape(-1, 1) if var == "z" else p.coeffs.reshape(1, -1)
        return cls(c)

    def dz(self):
        if self.coeffs.shape[0] <= 1:
            return BiPoly(np.zeros((0, 0)))
        return BiPoly(npoly.polyder(self.coeffs, axis=0))

    def dw(self):
        if self.coeffs.shape[1] <= 1:
            return BiPoly(np.zeros((0, 0)))
        return BiPoly(npoly.polyder(self.coeffs, axis=1))

    def w_coeffs(self):
        """Coefficients in ``w`` as univariate polynomials in ``z``."""
        return [UniPoly(self.coeffs[:, j]) for j in range(self.coeffs.shape[1])]

    def at_z(self, z0):
        """The univariate polynomial ``w -> F(z0, w)``."""
        if self.is_zero:
            return UniPoly([])
        return UniPoly(npoly.polyval(z0, self.coeffs))

    def swap(self):
        return BiPoly(self.coeffs.T)

    def norm(self):
        return float(np.max(np.abs(self.coeffs))) if self.coeffs.size else 0.0

    def to_json(self):
        return {"coeffs": [[[c.real, c.imag] for c in row] for row in self.coeffs]}

    @classmethod
    def from_json(cls, obj):
        rows = obj["coeffs"]
        return cls(np.array([[complex(re, im) for re, im in row] for row in rows], dtype=complex).reshape(len(rows), -1))


class HomoPoly3:
    """Homogeneous polynomial in (t, z, w) stored as ``{(a, b, c): coeff}``."""

    __slots__ = ("coeffs", "total_degree")

    def __init__(self, coeffs, total_degree):
        clean = {}
        for key, val in coeffs.items():
            if sum(key) != total_degree:
                raise ValueError(f"monomial {key} is not of degree {total_degree}")
            if val != 0:
                clean[tuple(int(k) for k in key)] = complex(val)
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "total_degree", int(total_degree))

    def __setattr__(self, name, value):
        raise AttributeError("HomoPoly3 is immutable")

    def __call__(self, t, z, w):
        return sum(c * t**a * z**b * w**e for (a, b, e), c in self.coeffs.items())

    def __repr__(self):
        return f"HomoPoly3({self.coeffs}, {self.total_degree})"

    def chart(self, var):
        """Dehomogenize by setting ``var`` (``'t'``, ``'z'`` or ``'w'``) to 1.

        The two remaining variables keep their (t, z, w) order as the
        (first, second) variables of the returned ``BiPoly``.
        """
        drop = "tzw".index(var)
        keep = [k for k in range(3) if k != drop]
        d = self.total_degree
        out = np.zeros((d + 1, d + 1), complex)
        for key, c in self.coeffs.items():
            out[key[keep[0]], key[keep[1]]] += c
        return BiPoly(out)


def homogenize(F: BiPoly, target_degree: int) -> HomoPoly3:
    """Pad every monomial of ``F`` with powers of ``t`` up to ``target_degree``."""
    if target_degree < F.total_degree:
        raise PreconditionError(
            f"target degree {target_degree} is below total degree {F.total_degree}"
        )
    terms = {}
    for i, j in zip(*np.nonzero(F.coeffs)):
        terms[(target_degree - i - j, int(i), int(j))] = F.coeffs[i, j]
    return HomoPoly3(terms, target_degree)


def reflect(F: BiPoly) -> BiPoly:
    """Torus reflection ``z^k w^l conj(F(1/conj z, 1/conj w))``."""
    if F.is_zero:
        raise DegenerateInputError("cannot reflect the zero polynomial")
    return BiPoly(np.conj(F.coeffs[::-1, ::-1]))


def shear(F: BiPoly, t: complex) -> BiPoly:
    """Return ``F(z + t w, w)``."""
    if F.is_zero:
        return F
    d = F.zdeg + F.wdeg
    out = np.zeros((F.zdeg + 1, d + 1), complex)
    for i, j in zip(*np.nonzero(F.coeffs)):
        c = F.coeffs[i, j]
        for k in range(i + 1):
            out[k, i - k + j] += c * comb(i, k) * t ** (i - k)
    return BiPoly(out)


def sylvester(a, b):
    """Sylvester matrix of two coefficient vectors given in ascending order."""
    a = np.asarray(a, complex)[::-1]
    b = np.asarray(b, complex)[::-1]
    da, db = a.size - 1, b.size - 1
    n = da + db
    S = np.zeros((n, n), dtype=np.result_type(a, b))
    for i in range(db):
        S[i, i : i + da + 1] = a
    for i in range(da):
        S[db + i, i : i + db + 1] = b
    return S


def _w_coeff_matrix(F: BiPoly, z):
    """Rows are ``F(z_k, w)`` coefficient vectors (ascending in w)."""
    return np.stack([npoly.polyval(z, F.coeffs[:, j]) for j in range(F.coeffs.shape[1])], axis=-1)


def resultant_w(F: BiPoly, G: BiPoly, radius: float = 1.0) -> UniPoly:
    """Resultant of ``F`` and ``G`` with respect to ``w`` as a polynomial in ``z``.

    The Sylvester determinant is sampled at roots of unity on the circle
    ``|z| = radius`` and interpolated by FFT. Coefficients below the
    round-off floor of the Hadamard bound are set to zero, so a common
    factor yields exactly the zero polynomial.
    """
    return resultant_w_scaled(F, G, radius)[0]


def resultant_w_scaled(F: BiPoly, G: BiPoly, radius: float = 1.0, floor: bool = True):
    """``resultant_w`` together with the Hadamard bound of the sampled determinants.

    With ``floor=False`` the raw interpolated coefficients are kept.
    """
    if F.is_zero or G.is_zero:
        return UniPoly([]), 0.0
    dF, dG = F.wdeg, G.wdeg
    if dF == 0 and dG == 0:
        raise DegenerateInputError("both polynomials are constant in w")
    D = F.zdeg * dG + G.zdeg * dF
    n = D + 1
    nodes = radius * np.exp(-2j * np.pi * np.arange(n) / n)
    A = _w_coeff_matrix(F, nodes)
    B = _w_coeff_matrix(G, nodes)
    vals = np.empty(n, complex)
    hadamard = 0.0
    for k in range(n):
        S = sylvester(A[k], B[k])
        vals[k] = np.linalg.det(S)
        hadamard = max(hadamard, float(np.prod(np.linalg.norm(S, axis=1))))
    c = np.fft.ifft(vals) / radius ** np.arange(n)
    if floor:
        c[np.abs(c) <= 1e-13 * hadamard / radius ** np.arange(n)] = 0
    return UniPoly(c), hadamard


def sylvester_rank_deficient(F: BiPoly, G: BiPoly, zs, rtol: float = 1e-10) -> bool:
    """True when the w-Sylvester matrix is numerically singular at every ``z`` in ``zs``."""
    for z in zs:
        S = sylvester(_w_coeff_matrix(F, np.array([z]))[0], _w_coeff_matrix(G, np.array([z]))[0])
        s = np.linalg.svd(S, compute_uv=False)
        if s[-1] > rtol * s[0]:
            return False
    return True


def sylvester_pencil(F: BiPoly, G: BiPoly):
    """Matrix coefficients ``S_k`` with ``Sylvester_w(F, G)(z) = sum_k S_k z^k``."""
    K = max(F.zdeg, G.zdeg)
    n = F.wdeg + G.wdeg
    out = np.zeros((K + 1, n, n), complex)
    for k in range(K + 1):
        a = F.coeffs[k] if k < F.coeffs.shape[0] else np.zeros(F.wdeg + 1)
        b = G.coeffs[k] if k < G.coeffs.shape[0] else np.zeros(G.wdeg + 1)
        out[k] = sylvester(a, b)
    return out
