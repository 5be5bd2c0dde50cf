"""Finite-dimensional operator checks on the Neil parabola ``z^2 = w^2`` variety.

Covers the spectral-set criterion for pairs with ``T1^2 = T2^2``, the
numerical-radius reformulation of ``sup ||A + e^{it} B|| <= 1``, the
Wold-type splitting of commuting unitaries, and the Herglotz measures that
describe extreme points.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import null_space, sqrtm
from scipy.optimize import minimize_scalar

from .errors import DomainError, PreconditionError, TheoryViolationError, UnsupportedError

GRID = 721
MARGINAL = 1e-6
REGULARIZERS = (1e-4, 1e-6, 1e-8)


def _scale(*mats):
    return max(1.0, *(np.linalg.norm(M, 2) for M in mats))


@dataclass(frozen=True)
class OperatorPair:
    T1: np.ndarray
    T2: np.ndarray

    def __post_init__(self):
        T1 = np.atleast_2d(np.asarray(self.T1, dtype=complex))
        T2 = np.atleast_2d(np.asarray(self.T2, dtype=complex))
        if T1.shape != T2.shape or T1.shape[0] != T1.shape[1]:
            raise DomainError("T1 and T2 must be square of equal size")
        object.__setattr__(self, "T1", T1)
        object.__setattr__(self, "T2", T2)

    @property
    def dim(self):
        return self.T1.shape[0]

    def relation_residuals(self):
        """Scaled ``||[T1, T2]||`` and ``||T1^2 - T2^2||``."""
        s = _scale(self.T1, self.T2) ** 2
        comm = np.linalg.norm(self.T1 @ self.T2 - self.T2 @ self.T1, 2) / s
        var = np.linalg.norm(self.T1 @ self.T1 - self.T2 @ self.T2, 2) / s
        return float(comm), float(var)

    def on_variety(self, tol=1e-10):
        return all(r <= tol for r in self.relation_residuals())

    def to_json(self):
        return {"T1": matrix_to_json(self.T1), "T2": matrix_to_json(self.T2)}

    @classmethod
    def from_json(cls, obj):
        return cls(matrix_from_json(obj["T1"]), matrix_from_json(obj["T2"]))


def matrix_to_json(M):
    return [[[float(x.real), float(x.imag)] for x in row] for row in np.asarray(M, dtype=complex)]


def matrix_from_json(obj):
    return np.array([[complex(x[0], x[1]) if isinstance(x, (list, tuple)) else complex(x) for x in row] for row in obj])


def _grid_max(func, grid):
    """Maximize a 2*pi-periodic function: grid sweep then bounded refinement."""
    ts = 2 * np.pi * np.arange(grid) / grid
    vals = np.array([func(t) for t in ts])
    k = int(np.argmax(vals))
    h = 2 * np.pi / grid
    res = minimize_scalar(lambda t: -func(t), bounds=(ts[k] - h, ts[k] + h), method="bounded",
                          options={"xatol": 1e-12})
    return max(float(vals[k]), float(-res.fun))


def pencil_sup_norm(A, B, grid=GRID):
    """``sup_t ||A + e^{it} B||`` in the operator 2-norm."""
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    return _grid_max(lambda t: np.linalg.norm(A + np.exp(1j * t) * B, 2), grid)


def spectral_set_test(T: OperatorPair, grid=GRID, tol=1e-9):
    """Whether the variety is a spectral set for ``T``.

    Returns
    -------
    (bool, float, bool)
        Verdict ``sup <= 2 + tol``, the supremum of
        ``||T1 + T2 + e^{it}(T1 - T2)||``, and a flag for suprema within
        1e-6 of the threshold.
    """
    if not T.on_variety():
        raise PreconditionError("T must commute and satisfy T1^2 = T2^2")
    sup = pencil_sup_norm(T.T1 + T.T2, T.T1 - T.T2, grid)
    return sup <= 2 + tol, sup, abs(sup - 2) <= MARGINAL


def numerical_radius(M, grid=GRID):
    """``max_phi lambda_max((e^{i phi} M + e^{-i phi} M^*) / 2)``."""
    M = np.atleast_2d(np.asarray(M, dtype=complex))

    def rot(phi):
        R = np.exp(1j * phi) * M
        return np.linalg.eigvalsh(0.5 * (R + R.conj().T))[-1]

    return _grid_max(rot, grid)


def _inv_sqrt(R):
    w, V = np.linalg.eigh(R)
    return (V / np.sqrt(w)) @ V.conj().T


def lemma_equivalence(A, B, grid=GRID, tol=1e-9):
    """Both sides of the numerical-radius reformulation of ``sup ||A + e^{it} B|| <= 1``.

    Returns
    -------
    (bool, bool)
        ``lhs``: the pencil supremum is at most ``1 + tol``.
        ``rhs``: the numerical radius of ``R^{-1/2} A^* B R^{-1/2}`` is at most
        ``1/2 + tol``, where ``R = I - A^* A - B^* B``. A singular ``R`` is
        regularized by ``R + eps I`` for decreasing ``eps`` and the radii are
        extrapolated linearly in ``eps`` to zero.

    Raises
    ------
    DomainError
        ``R`` has an eigenvalue below ``-tol``.
    """
    A = np.atleast_2d(np.asarray(A, dtype=complex))
    B = np.atleast_2d(np.asarray(B, dtype=complex))
    lhs = pencil_sup_norm(A, B, grid) <= 1 + tol
    R = np.eye(A.shape[0]) - A.conj().T @ A - B.conj().T @ B
    R = 0.5 * (R + R.conj().T)
    lo = np.linalg.eigvalsh(R)[0]
    if lo < -tol:
        raise DomainError(f"I - A*A - B*B has eigenvalue {lo:.3e} < 0")
    C = A.conj().T @ B
    if lo > 1e-6:
        S = _inv_sqrt(R)
        return lhs, numerical_radius(S @ C @ S, grid) <= 0.5 + tol
    eps = np.array(REGULARIZERS)
    w = np.array([numerical_radius(_inv_sqrt(R + e * np.eye(len(R))) @ C @ _inv_sqrt(R + e * np.eye(len(R))), grid)
                  for e in eps])
    # the last two levels give a linear extrapolant to eps = 0
    w0 = w[-1] - (w[-2] - w[-1]) * eps[-1] / (eps[-2] - eps[-1])
    return lhs, bool(min(w0, w[-1]) <= 0.5 + tol)


# ---------------------------------------------------------------------------
# Wold-type decomposition

@dataclass(frozen=True)
class WoldDecomposition:
    basis_Mplus: np.ndarray
    basis_Mminus: np.ndarray
    basis_K: np.ndarray
    Wplus: np.ndarray
    Wminus: np.ndarray
    Eplus: np.ndarray
    Eminus: np.ndarray
    orthogonality: float
    reconstruction: float

    @property
    def dims(self):
        return self.basis_Mplus.shape[1], self.basis_Mminus.shape[1], self.basis_K.shape[1]

    def to_json(self):
        p, m, k = self.dims
        return {
            "dim_Mplus": p,
            "dim_Mminus": m,
            "dim_K": k,
            "orthogonality_residual": self.orthogonality,
            "reconstruction_residual": self.reconstruction,
        }


def _range_basis(M, rtol=1e-9):
    U, s, _ = np.linalg.svd(M)
    scale = max(1.0, s[0] if s.size else 0.0)
    return U[:, : int(np.sum(s > rtol * scale))]


def _blocks(T: OperatorPair):
    Qp = _range_basis(T.T1 + T.T2)
    Qm = _range_basis(T.T1 - T.T2)
    d = T.dim
    span = np.hstack([Qp, Qm])
    Qk = null_space(span.conj().T) if span.shape[1] else np.eye(d, dtype=complex)
    if Qk.shape[1] == 0:
        Qk = np.zeros((d, 0), dtype=complex)
    Q = np.hstack([Qp, Qm, Qk])
    return Qp, Qm, Qk, Q


def wold_decompose(T: OperatorPair, tol=1e-9) -> WoldDecomposition:
    """Split commuting unitaries with ``T1^2 = T2^2`` into ``M+ (+) M- (+) K``.

    ``M+`` is the range of ``T1 + T2`` and ``M-`` that of ``T1 - T2``; on
    ``M+`` both operators act as ``W+`` and on ``M-`` as ``+-W-``.
    """
    d = T.dim
    I = np.eye(d)
    for X in (T.T1, T.T2):
        if np.linalg.norm(X.conj().T @ X - I, 2) > tol:
            raise UnsupportedError("only unitary pairs are decomposed; use wold_defect_report")
    if not T.on_variety():
        raise PreconditionError("T must commute and satisfy T1^2 = T2^2")
    Qp, Qm, Qk, Q = _blocks(T)
    orth = float(np.max(np.abs(Qp.conj().T @ Qm))) if Qp.size and Qm.size else 0.0
    if orth > 1e-10:
        raise TheoryViolationError(f"ranges of T1 + T2 and T1 - T2 overlap ({orth:.2e})")
    p, m = Qp.shape[1], Qm.shape[1]
    Wp = Qp.conj().T @ T.T1 @ Qp
    Wm = Qm.conj().T @ T.T1 @ Qm
    Ep = Qp.conj().T @ T.T1 @ Qk
    Em = Qm.conj().T @ T.T1 @ Qk
    rec = _reconstruction_residual(T, Q, Wp, Wm, Ep, Em, p, m)
    if rec > tol:
        raise TheoryViolationError(f"block reconstruction residual {rec:.2e}")
    return WoldDecomposition(Qp, Qm, Qk, Wp, Wm, Ep, Em, orth, rec)


def _block_model(Wp, Wm, Ep, Em, p, m, k, sign):
    d = p + m + k
    M = np.zeros((d, d), dtype=complex)
    M[:p, :p] = Wp
    M[p : p + m, p : p + m] = sign * Wm
    M[:p, p + m :] = Ep
    M[p : p + m, p + m :] = sign * Em
    return M


def _reconstruction_residual(T, Q, Wp, Wm, Ep, Em, p, m):
    k = Q.shape[1] - p - m
    r1 = np.linalg.norm(Q @ _block_model(Wp, Wm, Ep, Em, p, m, k, 1) @ Q.conj().T - T.T1, 2)
    r2 = np.linalg.norm(Q @ _block_model(Wp, Wm, Ep, Em, p, m, k, -1) @ Q.conj().T - T.T2, 2)
    return float(max(r1, r2))


def wold_defect_report(T: OperatorPair) -> dict:
    """Residuals of every block identity for arbitrary (e.g. truncated shift) data.

    No verdict is given: finite matrices with ``K != 0`` cannot be isometric.
    """
    Qp, Qm, Qk, Q = _blocks(T)
    p, m, k = Qp.shape[1], Qm.shape[1], Qk.shape[1]
    Wp = Qp.conj().T @ T.T1 @ Qp
    Wm = Qm.conj().T @ T.T1 @ Qm
    Ep = Qp.conj().T @ T.T1 @ Qk
    Em = Qm.conj().T @ T.T1 @ Qk
    B1 = Q.conj().T @ T.T1 @ Q
    B2 = Q.conj().T @ T.T2 @ Q

    def nrm(X):
        return float(np.linalg.norm(X, 2)) if X.size else 0.0

    return {
        "dim_Mplus": p,
        "dim_Mminus": m,
        "dim_K": k,
        "orthogonality": nrm(Qp.conj().T @ Qm),
        "third_row": max(nrm(B1[p + m :, :]), nrm(B2[p + m :, :])),
        "off_diagonal": max(nrm(B1[:p, p : p + m]), nrm(B1[p : p + m, :p]),
                            nrm(B2[:p, p : p + m]), nrm(B2[p : p + m, :p])),
        "E_gram": nrm(Ep.conj().T @ Ep + Em.conj().T @ Em - np.eye(k)),
        "W_plus_E_plus": nrm(Wp.conj().T @ Ep),
        "W_minus_E_minus": nrm(Wm.conj().T @ Em),
        "reconstruction": _reconstruction_residual(T, Q, Wp, Wm, Ep, Em, p, m),
    }


# ---------------------------------------------------------------------------
# Herglotz measures for the extreme points

@dataclass(frozen=True)
class HerglotzMeasure:
    atoms: tuple
    masses: tuple

    def __post_init__(self):
        atoms = tuple(float(np.mod(t, 2 * np.pi)) for t in self.atoms)
        masses = tuple(float(m) for m in self.masses)
        if len(atoms) != len(masses) or not all(m > 0 for m in masses):
            raise DomainError("masses must be positive, one per atom")
        if abs(sum(masses) - 1) > 1e-12:
            raise DomainError("masses must sum to one")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "masses", masses)

    def first_moment(self):
        """``int e^{-it} d mu``."""
        return complex(np.dot(self.masses, np.exp(-1j * np.array(self.atoms))))

    def herglotz(self, z):
        """``int (e^{it} + z) / (e^{it} - z) d mu``."""
        e = np.exp(1j * np.array(self.atoms))
        return complex(np.dot(self.masses, (e + z) / (e - z)))

    def to_json(self):
        return {"atoms": list(self.atoms), "masses": list(self.masses)}


def herglotz_masses(atoms) -> HerglotzMeasure:
    """Probability measure on the given atoms with vanishing first moment.

    Three atoms need the origin strictly inside their triangle; two atoms
    must be antipodal and get mass one half each.
    """
    th = np.asarray(atoms, dtype=float)
    if th.size == 2:
        if abs(np.exp(1j * th[0]) + np.exp(1j * th[1])) > 1e-12:
            raise DomainError("two atoms must be diametrically opposite")
        return HerglotzMeasure(tuple(th), (0.5, 0.5))
    if th.size != 3:
        raise DomainError("expected two or three atoms")
    M = np.vstack([np.ones(3), np.cos(th), np.sin(th)])
    if abs(np.linalg.det(M)) < 1e-12:
        raise DomainError("atoms are collinear or repeated")
    masses = np.linalg.solve(M, np.array([1.0, 0.0, 0.0]))
    # masses are the barycentric coordinates of the origin
    if not np.all(masses > 0):
        raise DomainError("the origin is not strictly inside the triangle of atoms")
    masses = masses / masses.sum()
    return HerglotzMeasure(tuple(th), tuple(masses))


def herglotz_residual(mu: HerglotzMeasure) -> float:
    th = np.array(mu.atoms)
    m = np.array(mu.masses)
    return float(max(abs(m.sum() - 1), abs(np.dot(m, np.cos(th))), abs(np.dot(m, np.sin(th)))))


def min_inner_zero_check(alphas, betas, tol=1e-10) -> bool:
    """Whether the zero moduli of the two coordinate functions have equal products."""
    alphas = np.atleast_1d(np.asarray(alphas, dtype=complex))
    betas = np.atleast_1d(np.asarray(betas, dtype=complex))
    if alphas.size == 0 or betas.size == 0:
        raise DomainError("zero lists must be nonempty")
    if np.any(np.abs(np.concatenate([alphas, betas])) < 1e-15):
        raise DomainError("zeros at the origin are excluded")
    return abs(np.prod(np.abs(alphas)) - np.prod(np.abs(betas))) <= tol


def real_part_extension_check(u_plus, u_minus, quad_points=GRID, tol=1e-8) -> bool:
    """Equal normalized boundary means of ``u`` on the two circles."""
    t = 2 * np.pi * np.arange(quad_points) / quad_points
    # the periodic trapezoid rule is a plain mean
    mp = np.mean([u_plus(s) for s in t])
    mm = np.mean([u_minus(s) for s in t])
    return bool(abs(mp - mm) <= tol)


def unitary_block_pair(U, W):
    """``(U (+) W, U (+) -W)``, a unitary pair with ``dim M+ = dim U``."""
    U = np.atleast_2d(np.asarray(U, dtype=complex))
    W = np.atleast_2d(np.asarray(W, dtype=complex))
    p, q = len(U), len(W)
    T1 = np.zeros((p + q, p + q), dtype=complex)
    T2 = np.zeros_like(T1)
    T1[:p, :p] = U
    T2[:p, :p] = U
    T1[p:, p:] = W
    T2[p:, p:] = -W
    return OperatorPair(T1, T2)


def random_unitary(d, rng):
    Z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def conjugate_pair(T: OperatorPair, V):
    """``(V T1 V^*, V T2 V^*)`` for unitary ``V``."""
    return OperatorPair(V @ T.T1 @ V.conj().T, V @ T.T2 @ V.conj().T)
