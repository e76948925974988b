"""Dense linear-algebra kernels used throughout the package.

Everything works on plain numpy arrays: bases are n-by-k matrices with
orthonormal columns, vectors are 1-d arrays.  Real input stays real and
complex input stays complex; mixing promotes as usual in numpy.  All
functions are pure.
"""

import numpy as np
import scipy.linalg

EPS = float(np.finfo(np.float64).eps)


class AllDeficient(Exception):
    """Every column to be orthonormalized already lies in the given subspace."""


class ZeroMatrix(Exception):
    """All columns of the matrix are numerically zero."""


class NoConvergence(Exception):
    """The dense eigensolver failed to converge."""


def check_matrix(a, name="matrix"):
    """Validate and return a 2-d array with at least one row and finite entries."""
    a = np.asarray(a)
    if a.ndim == 1:
        a = a[:, None]
    if a.ndim != 2:
        raise ValueError("%s must be 2-d, got ndim=%d" % (name, a.ndim))
    if a.shape[0] < 1:
        raise ValueError("%s must have at least one row" % name)
    if a.size and not np.all(np.isfinite(a)):
        raise ValueError("%s contains non-finite entries" % name)
    return a


def orthonormality(q):
    """Max-norm deviation of q^H q from the identity."""
    k = q.shape[1]
    return float(np.abs(q.conj().T @ q - np.eye(k)).max()) if k else 0.0


def orthonormalize(x, against=None):
    """Orthonormalize the columns of x, optionally against an existing basis.

    Column-wise Gram-Schmidt with one unconditional reorthogonalization pass
    and a third pass whenever a column loses more than a factor 1/sqrt(2) of
    its norm during the second pass.  Columns whose remaining norm falls
    below ``n * eps * ||column||`` are dropped.

    Returns ``(q, kept)``: ``q`` has orthonormal columns spanning the part of
    span{x} outside span{against}, ``kept`` lists the indices of the columns
    of x that survived.  Raises AllDeficient when nothing survives.
    """
    x = np.asarray(x)
    if x.ndim == 1:
        x = x[:, None]
    n, p = x.shape
    if p == 0:
        raise ValueError("nothing to orthonormalize")
    if against is not None and against.shape[1] == 0:
        against = None
    dt = np.result_type(x.dtype, np.float64 if against is None else against.dtype)
    cols = []
    kept = []
    for j in range(p):
        v = np.array(x[:, j], dtype=dt)
        nrm0 = np.linalg.norm(v)
        if nrm0 == 0.0:
            continue
        prev = nrm0
        nrm = nrm0
        for it in range(3):
            if against is not None:
                v -= against @ (against.conj().T @ v)
            for q in cols:
                v -= q * np.vdot(q, v)
            nrm = np.linalg.norm(v)
            if it >= 1 and nrm > prev / np.sqrt(2.0):
                break
            prev = nrm
        if nrm <= n * EPS * nrm0:
            continue
        cols.append(v / nrm)
        kept.append(j)
    if not cols:
        raise AllDeficient("all %d columns lie in the span of the existing basis" % p)
    return np.column_stack(cols), kept


def pinv(m, tol=None):
    """Moore-Penrose pseudoinverse via SVD.

    Singular values at or below ``tol`` are treated as zero; the default
    cutoff is ``max(shape) * sigma_max * eps``.  A zero matrix maps to a
    zero matrix.
    """
    m = np.asarray(m)
    if m.ndim == 1:
        m = m[:, None]
    u, s, vh = scipy.linalg.svd(m, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((m.shape[1], m.shape[0]), dtype=m.dtype)
    if tol is None:
        tol = max(m.shape) * s[0] * EPS
    rank = int(np.count_nonzero(s > tol))
    if rank == 0:
        return np.zeros((m.shape[1], m.shape[0]), dtype=m.dtype)
    return (vh[:rank].conj().T / s[:rank]) @ u[:, :rank].conj().T


def rank_revealing_basis(m, tol=None):
    """Orthonormal basis of the numerical column space of m via pivoted QR.

    The numerical rank is the number of diagonal entries of the pivoted R
    factor with ``|r_ii| > tol * |r_11|``; the default ``tol`` is
    ``max(shape) * eps``.  Returns ``(q, rank)``. Raises ZeroMatrix when all
    columns are numerically zero.
    """
    m = np.asarray(m)
    if m.ndim == 1:
        m = m[:, None]
    q, r, _ = scipy.linalg.qr(m, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    if diag.size == 0 or diag[0] == 0.0:
        raise ZeroMatrix("all columns are numerically zero")
    if tol is None:
        tol = max(m.shape) * EPS
    rank = int(np.count_nonzero(diag > tol * diag[0]))
    return q[:, :rank], rank


def angles(v, x):
    """Cosine and sine of the angle between span{v} and a unit vector x.

    cos is the norm of the coefficient vector v^H x, sin the norm of the
    orthogonal remainder x - v (v^H x); for an orthonormal v these satisfy
    cos^2 + sin^2 = 1 to machine precision.
    """
    x = np.asarray(x).ravel()
    if abs(np.linalg.norm(x) - 1.0) > 1e-12:
        raise ValueError("x must have unit norm")
    coef = v.conj().T @ x
    cos = min(float(np.linalg.norm(coef)), 1.0)
    sin = min(float(np.linalg.norm(x - v @ coef)), 1.0)
    return cos, sin


def eig_dense(m, max_order=4000):
    """Full dense eigendecomposition with a deterministic eigenvector phase.

    Returns a list of ``(value, vector)`` pairs.  Vectors have unit norm and
    are scaled so that their largest-magnitude component is real positive.
    A matrix that is Hermitian to machine precision is dispatched to the
    Hermitian solver, which keeps its eigenvalues exactly real instead of
    acquiring spurious conjugate pairs inside clusters.  The order must not
    exceed ``max_order`` (keeps everything desk scale).
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    if m.shape[0] > max_order:
        raise ValueError("order %d above the desk-scale cap %d" % (m.shape[0], max_order))
    scale = float(np.abs(m).max()) if m.size else 0.0
    hermitian = scale == 0.0 or float(np.abs(m - m.conj().T).max()) <= 128 * EPS * scale
    try:
        if hermitian:
            w, vr = scipy.linalg.eigh(m)
        else:
            w, vr = scipy.linalg.eig(m)
    except scipy.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    pairs = []
    for i in range(w.size):
        vec = vr[:, i]
        vec = vec / np.linalg.norm(vec)
        p = int(np.argmax(np.abs(vec)))
        piv = vec[p]
        if piv != 0:
            vec = vec * (np.conj(piv) / abs(piv))
        pairs.append((complex(w[i]), vec))
    return pairs
