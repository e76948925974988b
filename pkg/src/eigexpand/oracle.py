"""Brute-force verification of the optimal-expansion identities.

Everything here recomputes from scratch with explicit dense bases: the
expanded-subspace cosines come from explicitly orthonormalized bases, the
residual matrix is formed directly as A V - V (V^H A V), and the optimal
gain is cross-checked a third way through a restricted Hermitian-definite
pencil.  Nothing is shared with the incremental machinery it checks.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import linalg


class PreconditionViolated(Exception):
    """An identity-check precondition failed; the message names it."""


@dataclass(frozen=True)
class FullComplement:
    """Orthonormal basis of the orthogonal complement of span{V}."""
    v_perp: np.ndarray


def full_complement(v):
    """V_perp with (V, V_perp) unitary, from the full QR of V."""
    n, k = v.shape
    if k >= n:
        raise ValueError("the complement is empty for k >= n")
    q, _ = scipy.linalg.qr(v, mode="full")
    return FullComplement(v_perp=q[:, k:])


@dataclass
class IdentityReport:
    """Absolute discrepancy of each verified identity."""
    gain: float                    # expansion-gain (Pythagoras) identity
    max_vs_maximizer: float        # maximization characterization vs its maximizer
    maximizer_vs_projection: float # maximizer ratio vs projection cosine
    optimal_direction: float       # (I-P)A w_opt vs Q Q^H x, up to phase
    optimal_cos_combined: float    # cos(V_wopt, x) vs cos(P_V x + R R^+ x, x)
    optimal_cos_residual_span: float  # cos(V_wopt, x) vs cos(V + span{R}, x)
    pencil_gain: float             # optimal gain vs the restricted-pencil eigenvalue

    def as_dict(self):
        return {k: getattr(self, k) for k in
                ("gain", "max_vs_maximizer", "maximizer_vs_projection",
                 "optimal_direction", "optimal_cos_combined",
                 "optimal_cos_residual_span", "pencil_gain")}

    def max_entry(self):
        return max(self.as_dict().values())


def _cos_vec(u, x):
    nu = np.linalg.norm(u)
    return abs(np.vdot(x, u)) / nu if nu > 0 else 0.0


def _cos_basis_with(v, extra, x):
    # cosine of x with span{v} + span{extra columns}, via an explicit basis
    q, _ = linalg.orthonormalize(extra, against=v)
    basis = np.column_stack([v, q])
    return min(float(np.linalg.norm(basis.conj().T @ x)), 1.0)


def _phase_distance(u1, u2):
    # min over unit phases of || u1/||u1|| - e^{i t} u2/||u2|| ||, formed as an
    # aligned vector difference to stay accurate below sqrt(eps)
    u1 = u1 / np.linalg.norm(u1)
    u2 = u2 / np.linalg.norm(u2)
    ip = np.vdot(u2, u1)
    if abs(ip) > 0:
        u2 = u2 * (ip / abs(ip))
    return float(np.linalg.norm(u1 - u2))


def restricted_pencil_mu_opt(a, v, x):
    """Largest eigenvalue of the rank-one pencil restricted to range(V^H A^H V_perp).

    The restriction makes the pair Hermitian definite; its single positive
    eigenvalue is the squared optimal expansion gain.
    """
    vp = full_complement(v).v_perp
    x_perp = vp @ (vp.conj().T @ x)
    s = v.conj().T @ a.conj().T @ vp
    u_r, _ = linalg.rank_revealing_basis(s)
    c = u_r.conj().T @ (v.conj().T @ (a.conj().T @ x_perp))
    a1 = np.outer(c, c.conj())
    a2 = u_r.conj().T @ (s @ s.conj().T) @ u_r
    mu = scipy.linalg.eigh(a1, a2, eigvals_only=True)
    return float(mu[-1])


def verify_identities(a, v, x, w):
    """Check every identity on one instance (A, V, x, w) by direct formulas.

    Preconditions (each raising PreconditionViolated): x not in span{V},
    A w not in span{V}, and x^H w nonzero, all at scaled 1e-12 tolerances.
    Returns an IdentityReport of absolute discrepancies.
    """
    a = linalg.check_matrix(a, "A")
    x = np.asarray(x).ravel()
    w = np.asarray(w).ravel()
    a_norm1 = float(np.linalg.norm(a, 1))

    cos_v, sin_v = linalg.angles(v, x)
    if sin_v <= 1e-12:
        raise PreconditionViolated("x lies in span{V}")
    aw = a @ w
    pw = aw - v @ (v.conj().T @ aw)           # (I - P_V) A w
    if np.linalg.norm(pw) <= 1e-12 * a_norm1 * np.linalg.norm(w):
        raise PreconditionViolated("A w lies in span{V}")
    xw = np.vdot(x, w)
    if abs(xw) <= 1e-12 * np.linalg.norm(w):
        raise PreconditionViolated("x^H w vanishes")

    # expansion-gain identity, with cos(V_w, x) from an explicit basis
    cos_vw = _cos_basis_with(v, aw[:, None], x)
    gain = abs(cos_vw - np.sqrt(cos_v ** 2 + _cos_vec(pw, x) ** 2))

    # maximization characterization and its maximizer
    phi = np.vdot(x, aw) / xw
    rw = aw - phi * w
    qfull, _ = scipy.linalg.qr(rw[:, None], mode="full")
    q_w = qfull[:, 1:]                         # complement of span{r_w}
    g = (v.conj().T @ q_w) @ (q_w.conj().T @ v)
    y_w = scipy.linalg.solve(g, v.conj().T @ x, assume_a="her")
    b_w = v @ y_w
    cos_bx = _cos_vec(b_w, x)
    rem = b_w - rw * (np.vdot(rw, b_w) / np.vdot(rw, rw))
    sin_brw = np.linalg.norm(rem) / np.linalg.norm(b_w)
    ratio = cos_bx / sin_brw
    max_vs_maximizer = abs(cos_vw - ratio)
    t_mat = q_w @ (q_w.conj().T @ v)
    proj = t_mat @ (linalg.pinv(t_mat) @ x)
    maximizer_vs_projection = abs(ratio - _cos_vec(proj, x))

    # the optimal expansion: w_opt = V R^+ x with R formed directly
    av = a @ v
    r = av - v @ (v.conj().T @ av)
    w_opt = v @ (linalg.pinv(r) @ x)
    aw_opt = a @ w_opt
    pw_opt = aw_opt - v @ (v.conj().T @ aw_opt)
    q_r, _ = linalg.rank_revealing_basis(r)
    qqx = q_r @ (q_r.conj().T @ x)
    if np.linalg.norm(qqx) <= 1e-14:
        raise PreconditionViolated("x is orthogonal to span{R}")
    optimal_direction = _phase_distance(pw_opt, qqx)

    cos_vwopt = _cos_basis_with(v, aw_opt[:, None], x)
    best = v @ (v.conj().T @ x) + r @ (linalg.pinv(r) @ x)   # P_V x + R R^+ x
    optimal_cos_combined = abs(cos_vwopt - _cos_vec(best, x))
    optimal_cos_residual_span = abs(cos_vwopt - _cos_basis_with(v, r, x))

    mu_opt = restricted_pencil_mu_opt(a, v, x)
    pencil_gain = abs(_cos_vec(pw_opt, x) - np.sqrt(mu_opt))

    return IdentityReport(gain=float(gain),
                          max_vs_maximizer=float(max_vs_maximizer),
                          maximizer_vs_projection=float(maximizer_vs_projection),
                          optimal_direction=float(optimal_direction),
                          optimal_cos_combined=float(optimal_cos_combined),
                          optimal_cos_residual_span=float(optimal_cos_residual_span),
                          pencil_gain=float(pencil_gain))


def sampled_max_expansion(a, v, x, samples, seed, include=None):
    """Best expansion gain over random unit vectors w in span{V}.

    Draws ``samples`` seeded complex-normal coefficient vectors, evaluates
    cos(V + span{A V y}, x) for each by explicit projection, and returns the
    best cosine together with its w.  ``include`` may list extra candidate w
    vectors (e.g. the theoretical optimum) appended to the sampled set.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    rng = np.random.default_rng(seed)
    n, k = v.shape
    x = np.asarray(x).ravel()
    ys = rng.standard_normal((k, samples)) + 1j * rng.standard_normal((k, samples))
    if include is not None:
        extra = np.column_stack([v.conj().T @ np.asarray(wi).ravel() for wi in include])
        ys = np.column_stack([ys, extra])
    av = a @ v
    aw = av @ ys
    p = aw - v @ (v.conj().T @ aw)
    p -= v @ (v.conj().T @ p)
    norms = np.linalg.norm(p, axis=0)
    cos_v = min(float(np.linalg.norm(v.conj().T @ x)), 1.0)
    gains = np.zeros(ys.shape[1])
    ok = norms > 0
    gains[ok] = np.abs(x.conj() @ p[:, ok]) / norms[ok]
    cosines = np.minimum(np.sqrt(cos_v ** 2 + gains ** 2), 1.0)
    best = int(np.argmax(cosines))
    w_best = v @ ys[:, best]
    return float(cosines[best]), w_best / np.linalg.norm(w_best)


def random_instance(n, k, rng, hermitian=False):
    """One well-conditioned random instance (A, V, x, w, lam) for the checks.

    A is a scaled complex Gaussian matrix (Hermitian on request), x the
    eigenvector of the largest-magnitude eigenvalue, V a random orthonormal
    basis away from x, and w a random admissible vector in span{V}.
    """
    g = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(n)
    a = (g + g.conj().T) / 2 if hermitian else g
    pairs = linalg.eig_dense(a)
    lam, x = max(pairs, key=lambda p: abs(p[0]))
    while True:
        v0 = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
        v, kept = linalg.orthonormalize(v0)
        if len(kept) == k and linalg.angles(v, x)[1] >= 1e-3:
            break
    a_norm1 = np.linalg.norm(a, 1)
    while True:
        w = v @ (rng.standard_normal(k) + 1j * rng.standard_normal(k))
        w = w / np.linalg.norm(w)
        aw = a @ w
        pw = aw - v @ (v.conj().T @ aw)
        if abs(np.vdot(x, w)) > 1e-6 and np.linalg.norm(pw) > 1e-6 * a_norm1:
            break
    return a, v, x, w, lam
