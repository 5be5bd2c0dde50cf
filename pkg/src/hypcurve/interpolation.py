"""Nevanlinna-Pick feasibility for maps between double-point petals."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UnsupportedError

PSD_TOL = 1e-9
MAX_PAIRS = 8


@dataclass(frozen=True)
class PickProblem:
    """Send ``nodes[i]`` to ``targets[i]`` by a holomorphic self-map of the disk."""

    nodes: tuple
    targets: tuple

    def __post_init__(self):
        nodes = tuple(complex(z) for z in self.nodes)
        targets = tuple(complex(z) for z in self.targets)
        if len(nodes) != len(targets):
            raise DomainError("nodes and targets differ in length")
        for z in nodes + targets:
            if not abs(z) < 1:
                raise DomainError(f"{z!r} is not in the open unit disk")
        for a, b in itertools.combinations(nodes, 2):
            if abs(a - b) < 1e-14:
                raise DomainError(f"repeated node {a!r}")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "targets", targets)

    @classmethod
    def from_json(cls, obj):
        def pt(v):
            return complex(v[0], v[1]) if isinstance(v, (list, tuple)) else complex(v)

        return cls(tuple(pt(v) for v in obj["nodes"]), tuple(pt(v) for v in obj["targets"]))


@dataclass(frozen=True)
class PickVerdict:
    solvable: bool
    min_eigenvalue: float
    marginal: bool

    def to_json(self):
        return {"solvable": self.solvable, "min_eigenvalue": self.min_eigenvalue, "marginal": self.marginal}


def pick_matrix(p: PickProblem) -> np.ndarray:
    """``(1 - conj(b_i) b_j) / (1 - conj(a_i) a_j)``."""
    a = np.array(p.nodes, dtype=complex)
    b = np.array(p.targets, dtype=complex)
    M = (1 - np.conj(b)[:, None] * b[None, :]) / (1 - np.conj(a)[:, None] * a[None, :])
    return 0.5 * (M + M.conj().T)


def analyze(p: PickProblem, tol: float = PSD_TOL) -> PickVerdict:
    """Smallest eigenvalue of the Pick matrix and the verdict it implies.

    The tolerance is relative to the largest eigenvalue; verdicts whose
    smallest eigenvalue lies within ten tolerances of zero are marginal.
    """
    if not p.nodes:
        return PickVerdict(True, 0.0, False)
    ev = np.linalg.eigvalsh(pick_matrix(p))
    scale = max(float(ev[-1]), np.finfo(float).tiny)
    lo = float(ev[0])
    return PickVerdict(lo >= -tol * scale, lo, abs(lo) <= 10 * tol * scale)


def solvable(p: PickProblem, tol: float = PSD_TOL) -> bool:
    return analyze(p, tol).solvable


def petal_map_exists(conn1, conn2, tol: float = PSD_TOL):
    """Look for a disk self-map carrying the glued pairs of ``conn1`` onto those of ``conn2``.

    Parameters
    ----------
    conn1, conn2 : Connection
        Pure double-point connections with ``len(conn2) >= len(conn1)``.

    Returns
    -------
    (bool, list or None)
        Feasibility and the first feasible assignment in lexicographic order,
        as a list of ``(index into conn2, swapped)`` per pair of ``conn1``.
    """
    for conn in (conn1, conn2):
        if not conn.is_double_points():
            raise UnsupportedError("only double-point connections are supported")
    src, dst = conn1.double_point_pairs(), conn2.double_point_pairs()
    if len(src) > MAX_PAIRS or len(dst) > MAX_PAIRS:
        raise UnsupportedError(f"at most {MAX_PAIRS} pairs are supported")
    if len(dst) < len(src):
        raise DomainError("the target connection needs at least as many pairs")
    nodes = tuple(z for pair in src for z in pair)
    for perm in itertools.permutations(range(len(dst)), len(src)):
        for swaps in itertools.product((False, True), repeat=len(src)):
            targets = []
            for k, s in zip(perm, swaps):
                b1, b2 = dst[k]
                targets.extend((b2, b1) if s else (b1, b2))
            if solvable(PickProblem(nodes, tuple(targets)), tol):
                return True, list(zip(perm, swaps))
    return False, None
