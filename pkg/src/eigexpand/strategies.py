"""Expansion-direction policies.

Each policy turns the current subspace state into one or more unit
directions orthogonal to V:

* ``stand``      - orthonormalized A v_k, the last basis column (Arnoldi step)
* ``ritzV``      - orthonormalized A w with w the tracked Ritz vector from V
* ``ritzR``      - the tracked Ritz vector of A from span{R}
* ``rRitzR``     - the refined Ritz vector from span{R}, centered at the
                   tracked Ritz value from V (the current eigenvalue estimate)
* ``harmonicR``  - the tracked harmonic Ritz vector from span{R} (needs a shift)
* ``rHarmonicR`` - the refined harmonic vector from span{R}, centered at the
                   tracked harmonic value from V
* ``optimal``    - the oracle Q Q^H x, the projection of the reference
                   eigenvector onto span{R}; not computable in applications
* ``vr``         - all columns of Q at once, expanding V to V + span{R}

The span{R} directions are orthogonal to V by construction and are used
without re-orthogonalization.  For a real problem whose tracked extraction
vector comes out complex, the normalized real and imaginary parts are added
instead, which keeps the basis real and is equivalent to expanding by the
conjugate pair of vectors.
"""

from dataclasses import dataclass

import numpy as np

from . import extraction, linalg, subspace

STAND = "stand"
RITZ_V = "ritzV"
RITZ_R = "ritzR"
REFINED_RITZ_R = "rRitzR"
HARMONIC_R = "harmonicR"
REFINED_HARMONIC_R = "rHarmonicR"
OPTIMAL = "optimal"
VR = "vr"
TAGS = (STAND, RITZ_V, RITZ_R, REFINED_RITZ_R, HARMONIC_R,
        REFINED_HARMONIC_R, OPTIMAL, VR)
HARMONIC_TAGS = (HARMONIC_R, REFINED_HARMONIC_R)
SPAN_R_TAGS = (RITZ_R, REFINED_RITZ_R, HARMONIC_R, REFINED_HARMONIC_R)

# plot labels for the policy comparison figures
DISPLAY = {STAND: "stand", RITZ_V: "RitzV", RITZ_R: "RitzR",
           REFINED_RITZ_R: "r-RitzR", HARMONIC_R: "harmonicR",
           REFINED_HARMONIC_R: "r-harmonicR", OPTIMAL: "optimal", VR: "VR"}


class Stagnated(Exception):
    """The reference eigenvector has no component in span{R}."""


@dataclass(frozen=True)
class Strategy:
    tag: str
    target: extraction.TargetSpec
    tau: complex = None

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError("unknown strategy tag %r" % (self.tag,))
        if (self.tau is not None) != (self.tag in HARMONIC_TAGS):
            raise ValueError("tau must be given exactly for the harmonic "
                             "strategies, got tag=%r tau=%r" % (self.tag, self.tau))


@dataclass
class ExpansionProposal:
    directions: np.ndarray          # n-by-j, orthonormal, each orthogonal to V
    w: np.ndarray = None            # the w that was multiplied by A, if any
    value: complex = None           # the extraction value behind the proposal
    conjugate_pair: bool = False
    stagnated: bool = False


def _split_conjugate(state, vec):
    # a genuinely complex vector on a real problem contributes its real and
    # imaginary parts; a spurious tiny part (below 1e-12 of the other) is dropped
    real_problem = not (np.iscomplexobj(state.a) or np.iscomplexobj(state.v))
    if not (real_problem and np.iscomplexobj(vec)):
        return [vec], False
    re, im = vec.real, vec.imag
    nr, ni = np.linalg.norm(re), np.linalg.norm(im)
    if ni <= 1e-12 * nr:
        return [re], False
    if nr <= 1e-12 * ni:
        return [im], False
    return [re, im], True


def _from_w(state, w, value):
    """One A*w product, then orthonormalization of the result against V."""
    aw = state.a @ w
    parts, conj = _split_conjugate(state, aw)
    q, kept = linalg.orthonormalize(np.column_stack(parts), against=state.v)
    return ExpansionProposal(directions=q, w=w, value=value,
                             conjugate_pair=conj and len(kept) == 2)


def _from_span_r(state, vec, value):
    """A vector already in span{R}: orthogonal to V, no re-orthogonalization."""
    parts, conj = _split_conjugate(state, vec)
    if len(parts) == 1:
        d = parts[0] / np.linalg.norm(parts[0])
        return ExpansionProposal(directions=d[:, None], value=value)
    q, kept = linalg.orthonormalize(np.column_stack(parts))
    return ExpansionProposal(directions=q, value=value,
                             conjugate_pair=conj and len(kept) == 2)


def propose(strategy, state, reference=None):
    """Expansion direction(s) for one policy on the current state.

    ``reference`` is the unit eigenvector being tracked; it is required for
    the ``optimal`` oracle and, when present, steers the ritzV selection
    (nearest-to-reference) so the comparison is free of mis-selection noise.
    The span{R} policies always select by the spectral target and never see
    the reference.
    """
    tag = strategy.tag
    if tag == STAND:
        return _from_w(state, state.v[:, -1], None)

    if tag == RITZ_V:
        pairs = extraction.ritz_pairs(state.a, state.v, state.av,
                                      a_norm1=state.a_norm1)
        if reference is not None:
            target = extraction.TargetSpec(extraction.NEAREST_TO_REFERENCE,
                                           reference=reference)
        else:
            target = strategy.target
        sel = extraction.select(pairs, target)
        return _from_w(state, sel.ambient, sel.value)

    q, _ = subspace.residual_basis(state)

    if tag == OPTIMAL:
        if reference is None:
            raise ValueError("the optimal oracle needs the reference eigenvector")
        proj = q @ (q.conj().T @ reference)
        nrm = np.linalg.norm(proj)
        if nrm <= 1e-14:
            raise Stagnated("reference eigenvector is orthogonal to span{R}")
        return ExpansionProposal(directions=(proj / nrm)[:, None])

    if tag == VR:
        return ExpansionProposal(directions=q)

    aq = state.a @ q       # the k_1 products A*Q spent by the span{R} policies
    if tag == RITZ_R:
        pairs = extraction.ritz_pairs(state.a, q, aq, a_norm1=state.a_norm1)
        sel = extraction.select(pairs, strategy.target)
        return _from_span_r(state, sel.ambient, sel.value)
    if tag == HARMONIC_R:
        pairs = extraction.harmonic_pairs(state.a, q, aq, strategy.tau,
                                          a_norm1=state.a_norm1)
        sel = extraction.select(pairs, strategy.target)
        return _from_span_r(state, sel.ambient, sel.value)
    # refined variants: the minimization runs over span{R} but is centered at
    # the tracked value from V, where the eigenvalue information lives;
    # centering at the span{R} value locks onto unrelated spectrum
    if tag == REFINED_RITZ_R:
        vpairs = extraction.ritz_pairs(state.a, state.v, state.av,
                                       a_norm1=state.a_norm1)
        center = extraction.select(vpairs, strategy.target).value
        ref = extraction.refined_vector(state.a, q, aq, center,
                                        a_norm1=state.a_norm1)
    else:
        vpairs = extraction.harmonic_pairs(state.a, state.v, state.av,
                                           strategy.tau, a_norm1=state.a_norm1)
        center = extraction.select(vpairs, strategy.target).value
        ref = extraction.refined_harmonic_vector(state.a, q, aq, center,
                                                 a_norm1=state.a_norm1)
    return _from_span_r(state, ref.ambient, center)


def theoretical_w_opt(state, x):
    """The oracle expansion vector w = V R^+ x (up to scaling).

    Only meaningful when x is not already in span{V}; multiplying by A and
    projecting out V reproduces the projection of x onto span{R}.
    """
    x = np.asarray(x).ravel()
    _, sin = linalg.angles(state.v, x)
    if sin <= 1e-12:
        raise ValueError("x already lies in span{V}")
    coef = linalg.pinv(state.r) @ x
    if np.linalg.norm(state.r @ coef) <= 1e-14:
        raise Stagnated("x is orthogonal to span{R}")
    return state.v @ coef


def computable_w_tilde(state, v_tilde):
    """The expansion vector V R^+ v for a computable replacement v in span{R}."""
    return state.v @ (linalg.pinv(state.r) @ np.asarray(v_tilde).ravel())
