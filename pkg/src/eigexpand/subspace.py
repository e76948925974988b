"""Expanding-subspace state.

Holds the orthonormal basis V together with the cached product A*V, the
projection H = V^H A V and the residual R = A*V - V*H.  Expansion updates
all three incrementally: appending a unit vector u orthogonal to V costs a
single new product A*u, the retained residual block is corrected by
R - u (u^H A V) and the new residual column is
A u - V (V^H A u) - (u^H A u) u.

States are immutable values; ``expand`` returns a new state.
"""

from dataclasses import dataclass

import numpy as np

from . import linalg


class DeficientStart(Exception):
    """The starting block is numerically rank deficient."""


class NotOrthogonal(Exception):
    """The expansion vector is not orthogonal to the current basis."""


class InvariantSubspace(Exception):
    """The residual vanished: span{V} is numerically invariant under A."""


@dataclass(frozen=True)
class SubspaceState:
    a: np.ndarray        # n-by-n problem matrix (shared, never mutated)
    v: np.ndarray        # n-by-k orthonormal basis
    av: np.ndarray       # cached A @ v
    h: np.ndarray        # k-by-k projection v^H (A v)
    r: np.ndarray        # n-by-k residual av - v @ h
    a_norm1: float       # cached ||A||_1 for scaled tolerances

    @property
    def n(self):
        return self.v.shape[0]

    @property
    def k(self):
        return self.v.shape[1]


def init(a, v0):
    """Build the state from a matrix and a starting block of d >= 1 columns.

    The block is orthonormalized first; a numerically rank-deficient block
    raises DeficientStart.
    """
    a = linalg.check_matrix(a, "A")
    v0 = linalg.check_matrix(v0, "V0")
    if a.shape[0] != a.shape[1]:
        raise ValueError("A must be square")
    if v0.shape[1] < 1:
        raise ValueError("starting block needs at least one column")
    try:
        v, kept = linalg.orthonormalize(v0)
    except linalg.AllDeficient as exc:
        raise DeficientStart(str(exc)) from exc
    if len(kept) < v0.shape[1]:
        raise DeficientStart("starting block is numerically rank deficient "
                             "(%d of %d columns independent)" % (len(kept), v0.shape[1]))
    av = a @ v
    h = v.conj().T @ av
    r = av - v @ h
    return SubspaceState(a=a, v=v, av=av, h=h, r=r,
                         a_norm1=float(np.linalg.norm(a, 1)))


def expand(state, u, direct_check=False):
    """Append one unit vector u orthogonal to V; spends exactly one product A*u.

    A vector violating the orthogonality precondition (||V^H u|| > 1e-10) is
    re-orthogonalized once; NotOrthogonal is raised only if the violation
    persists.  With ``direct_check`` the updated caches are validated against
    direct recomputation (test hook).
    """
    u = np.asarray(u).ravel()
    if u.shape[0] != state.n:
        raise ValueError("expansion vector has wrong length")
    nrm = np.linalg.norm(u)
    if nrm == 0.0:
        raise NotOrthogonal("expansion vector is zero")
    u = u / nrm
    if np.linalg.norm(state.v.conj().T @ u) > 1e-10:
        u = u - state.v @ (state.v.conj().T @ u)
        nrm = np.linalg.norm(u)
        if nrm == 0.0 or np.linalg.norm(state.v.conj().T @ (u / nrm)) > 1e-10:
            raise NotOrthogonal("expansion vector lies (partly) in span{V}")
        u = u / nrm

    au = state.a @ u                    # the single new matrix-vector product
    c = state.v.conj().T @ au           # V^H A u
    row = u.conj() @ state.av           # u^H A V
    rho = np.vdot(u, au)                # u^H A u
    dt = np.result_type(state.h.dtype, u.dtype, au.dtype)
    k = state.k
    h = np.empty((k + 1, k + 1), dtype=dt)
    h[:k, :k] = state.h
    h[:k, k] = c
    h[k, :k] = row
    h[k, k] = rho
    r_kept = state.r - np.outer(u, row)
    r_new = au - state.v @ c - rho * u
    new = SubspaceState(a=state.a,
                        v=np.column_stack([state.v, u]),
                        av=np.column_stack([state.av, au]),
                        h=h,
                        r=np.column_stack([r_kept, r_new]),
                        a_norm1=state.a_norm1)
    if direct_check:
        gap = recursion_gap(new)
        if gap > 1e-12 * state.a_norm1:
            raise AssertionError("incremental update drifted from the direct "
                                 "formulas by %.3e" % gap)
    return new


def residual_vanished(state):
    """True when R is numerically zero relative to A, i.e. span{V} is invariant."""
    return np.linalg.norm(state.r) <= 1e-13 * state.a_norm1 * np.sqrt(state.k)


def residual_basis(state, tol=None):
    """Rank-revealing orthonormal basis Q of span{R}.

    Returns ``(q, rank)``.  Raises InvariantSubspace when R has vanished,
    i.e. no expansion direction is reachable from one multiplication of A
    against V.
    """
    if residual_vanished(state):
        raise InvariantSubspace("residual is numerically zero; span{V} is invariant")
    q, rank = linalg.rank_revealing_basis(state.r, tol=tol)
    # The pivoted QR of R inherits orthogonality against V from V^H R = 0;
    # re-project only if accumulated drift ever exceeds the contract.
    if np.abs(state.v.conj().T @ q).max() > 1e-12:
        q, _ = linalg.orthonormalize(q, against=state.v)
        rank = q.shape[1]
    return q, rank


def recursion_gap(state):
    """Max deviation of the cached av/h/r from direct recomputation."""
    av = state.a @ state.v
    h = state.v.conj().T @ av
    r = av - state.v @ h
    return max(float(np.abs(av - state.av).max()),
               float(np.abs(h - state.h).max()),
               float(np.abs(r - state.r).max()))


def invariant_gaps(state):
    """Numerical size of each state invariant, for tests and debugging."""
    return {
        "basis_orthonormality": linalg.orthonormality(state.v),
        "residual_orthogonality": float(np.abs(state.v.conj().T @ state.r).max()),
        "recursion": float(np.abs(state.r - (state.av - state.v @ state.h)).max()),
    }
