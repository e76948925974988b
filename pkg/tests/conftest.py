import numpy as np
import pytest

from eigexpand import linalg, subspace


def random_orthobasis(rng, n, k, complex_=False):
    g = rng.standard_normal((n, k))
    if complex_:
        g = g + 1j * rng.standard_normal((n, k))
    q, kept = linalg.orthonormalize(g)
    assert len(kept) == k
    return q


def random_unit(rng, n, complex_=False):
    x = rng.standard_normal(n)
    if complex_:
        x = x + 1j * rng.standard_normal(n)
    return x / np.linalg.norm(x)


def arnoldi_state(a, v1, steps):
    """Krylov subspace of dimension steps+1 built by repeated stand expansion."""
    state = subspace.init(a, np.asarray(v1).reshape(-1, 1))
    for _ in range(steps):
        u, _ = linalg.orthonormalize(a @ state.v[:, -1], against=state.v)
        state = subspace.expand(state, u[:, 0])
    return state


def principal_sin(b1, b2):
    """Sine of the largest principal angle between two orthonormal bases.

    Computed as the spectral norm of the projection residual, which stays
    accurate for tiny angles.
    """
    resid = b2 - b1 @ (b1.conj().T @ b2)
    return float(np.linalg.norm(resid, 2))


def cos_with_subspace(basis_cols, x):
    """cos of the angle between x and the span of the given columns."""
    q, _ = linalg.orthonormalize(basis_cols)
    return min(float(np.linalg.norm(q.conj().T @ x)), 1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
