"""Eigenpair extraction from an orthonormal basis.

Implements the four projection methods: standard Rayleigh-Ritz, harmonic
Rayleigh-Ritz (shifted generalized pencil), refined and refined-harmonic
vectors (singular-vector minimization of the shifted residual).  All
functions take the cached product ``aw = A @ w`` so callers never pay for a
recompute of A against the basis.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import linalg

RITZ = "ritz"
HARMONIC = "harmonic"
REFINED = "refined"
REFINED_HARMONIC = "refined-harmonic"

LARGEST_REAL = "largest-real"
LARGEST_MAGNITUDE = "largest-magnitude"
SMALLEST_MAGNITUDE = "smallest-magnitude"
CLOSEST_TO = "closest-to"
NEAREST_TO_REFERENCE = "nearest-to-reference"
MODES = (LARGEST_REAL, LARGEST_MAGNITUDE, SMALLEST_MAGNITUDE, CLOSEST_TO,
         NEAREST_TO_REFERENCE)


class SingularPencil(Exception):
    """The right-hand matrix of the harmonic pencil is numerically singular."""


@dataclass(frozen=True)
class TargetSpec:
    """Which eigenvalue approximation to track."""
    mode: str
    tau: complex = None
    reference: np.ndarray = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError("unknown target mode %r" % (self.mode,))
        if self.mode == CLOSEST_TO:
            if self.tau is None or not np.isfinite(self.tau):
                raise ValueError("closest-to target needs a finite tau")
        if self.mode == NEAREST_TO_REFERENCE and self.reference is None:
            raise ValueError("nearest-to-reference target needs a reference vector")


@dataclass
class EigenApprox:
    """One approximate eigenpair extracted from a basis."""
    value: complex
    coeffs: np.ndarray     # unit coefficient vector in the basis coordinates
    ambient: np.ndarray    # unit vector in the ambient space
    res_norm: float        # ||A z - value z|| / ||A||_1
    kind: str


def _demote(mu):
    # keeps real pipelines in real arithmetic
    mu = complex(mu)
    return mu.real if mu.imag == 0.0 else mu


def _phase(vec):
    p = int(np.argmax(np.abs(vec)))
    piv = vec[p]
    return np.conj(piv) / abs(piv) if piv != 0 else 1.0


def ritz_pairs(a, w, aw, a_norm1=None):
    """Standard Rayleigh-Ritz: eigenpairs of W^H A W lifted to the ambient space."""
    if a_norm1 is None:
        a_norm1 = float(np.linalg.norm(a, 1))
    h = w.conj().T @ aw
    decomp = linalg.eig_dense(h)
    y = np.column_stack([vec for _, vec in decomp])
    vals = [_demote(val) for val, _ in decomp]
    z = w @ y
    az = aw @ y
    znorm = np.linalg.norm(z, axis=0)
    res = np.linalg.norm(az - z * np.array(vals), axis=0) / a_norm1
    return [EigenApprox(value=vals[i], coeffs=y[:, i], ambient=z[:, i] / znorm[i],
                        res_norm=float(res[i]), kind=RITZ)
            for i in range(len(vals))]


def harmonic_pairs(a, w, aw, tau, a_norm1=None):
    """Harmonic Rayleigh-Ritz with shift tau.

    Solves the pencil ((A - tau I)W)^H (A - tau I)W g =
    theta ((A - tau I)W)^H W g and reports the values tau + theta with
    ambient vectors W g.  A tau hitting an eigenvalue of W^H A W makes the
    right-hand matrix singular; the shift is then perturbed once by
    eps * ||A||_1 before giving up with SingularPencil.
    """
    if a_norm1 is None:
        a_norm1 = float(np.linalg.norm(a, 1))
    tau = _demote(tau)

    def pencil(shift):
        s = aw - shift * w
        g1 = s.conj().T @ s
        g2 = s.conj().T @ w
        try:
            theta, g = scipy.linalg.eig(g1, g2)
        except scipy.linalg.LinAlgError as exc:
            raise linalg.NoConvergence(str(exc)) from exc
        return theta, g

    theta, g = pencil(tau)
    if not np.all(np.isfinite(theta)):
        tau = tau + linalg.EPS * max(a_norm1, 1.0)
        theta, g = pencil(tau)
        keep = np.isfinite(theta)
        if not np.any(keep):
            raise SingularPencil("harmonic pencil is singular even after "
                                 "perturbing the shift")
        theta, g = theta[keep], g[:, keep]

    out = []
    for i in range(theta.size):
        coeffs = g[:, i] / np.linalg.norm(g[:, i])
        coeffs = coeffs * _phase(coeffs)
        val = _demote(tau + theta[i])
        z = w @ coeffs
        zn = np.linalg.norm(z)
        res = float(np.linalg.norm(aw @ coeffs - val * z)) / (zn * a_norm1)
        out.append(EigenApprox(value=val, coeffs=coeffs, ambient=z / zn,
                               res_norm=res, kind=HARMONIC))
    return out


def _refined(a, w, aw, mu, kind, rq_refresh, a_norm1):
    if a_norm1 is None:
        a_norm1 = float(np.linalg.norm(a, 1))
    mu = _demote(mu)
    m = aw - mu * w
    _, s, vh = scipy.linalg.svd(m, full_matrices=False)
    g = vh[-1].conj()
    g = g * _phase(g)
    sigma = float(s[-1])
    z = w @ g
    zn = np.linalg.norm(z)
    z = z / zn
    if rq_refresh:
        az = (aw @ g) / zn
        val = _demote(np.vdot(z, az))
        res = float(np.linalg.norm(az - val * z)) / a_norm1
    else:
        val = mu
        res = sigma / (zn * a_norm1)
    return EigenApprox(value=val, coeffs=g, ambient=z, res_norm=res, kind=kind)


def refined_vector(a, w, aw, mu, rq_refresh=True, a_norm1=None):
    """Refined vector: the unit z in span{W} minimizing ||(A - mu I) z||.

    Computed as the right singular vector of (A - mu I)W for the smallest
    singular value.  With ``rq_refresh`` (default) the reported value is the
    Rayleigh quotient of the refined vector and the residual is recomputed
    from it, which can only shrink it; without, the value stays mu and the
    residual is sigma_min / ||A||_1.
    """
    return _refined(a, w, aw, mu, REFINED, rq_refresh, a_norm1)


def refined_harmonic_vector(a, w, aw, theta, rq_refresh=True, a_norm1=None):
    """Same minimization as refined_vector, centered at a harmonic value."""
    return _refined(a, w, aw, theta, REFINED_HARMONIC, rq_refresh, a_norm1)


def select_value(values, target, ambients=None):
    """Index of the best value for a target; deterministic tie-breaking.

    Ties in the score go to the larger |value|, then to the smaller index.
    The nearest-to-reference mode scores |x^H ambient| and needs ``ambients``.
    """
    values = np.asarray(values)
    if values.size == 0:
        raise ValueError("nothing to select from")
    if target.mode == LARGEST_REAL:
        score, best = values.real, max
    elif target.mode == LARGEST_MAGNITUDE:
        score, best = np.abs(values), max
    elif target.mode == SMALLEST_MAGNITUDE:
        score, best = np.abs(values), min
    elif target.mode == CLOSEST_TO:
        score, best = np.abs(values - complex(target.tau)), min
    elif target.mode == NEAREST_TO_REFERENCE:
        if ambients is None:
            raise ValueError("nearest-to-reference selection needs the vectors")
        x = target.reference
        score, best = np.array([abs(np.vdot(x, z)) for z in ambients]), max
    else:  # pragma: no cover - guarded by TargetSpec
        raise ValueError(target.mode)
    top = best(score)
    cand = [i for i in range(values.size) if score[i] == top]
    if len(cand) > 1:
        mags = np.abs(values[cand])
        cand = [i for i, m in zip(cand, mags) if m == mags.max()]
    return cand[0]


def select(pairs, target):
    """Pick one EigenApprox out of a list according to the target."""
    idx = select_value(np.array([p.value for p in pairs]), target,
                       ambients=[p.ambient for p in pairs])
    return pairs[idx]
