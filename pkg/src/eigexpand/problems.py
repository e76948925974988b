"""Test-problem construction and Matrix Market exchange.

Two synthetic diagonal families (the inverse-integer diagonal with clustered
small eigenvalues and the rho-controlled descending diagonal with clustered
large eigenvalues), plus a coordinate-format Matrix Market reader/writer for
external matrices.  Matrices are stored dense; sparsity only speeds up the
products with A, which is out of scope here.
"""

import os
from dataclasses import dataclass

import numpy as np

from . import extraction, linalg


class ParseError(Exception):
    """Matrix Market file is malformed; the message carries the line number."""


class UnsupportedFormat(Exception):
    """Matrix Market variant outside coordinate real/complex general/symmetric."""


@dataclass
class Problem:
    a: np.ndarray
    reference: tuple = None     # (lambda, unit eigenvector) or None
    label: str = ""


def gen_inverse_diag(n):
    """diag(1, 1/2, ..., 1/n); reference pair is the smallest (1/n, e_n)."""
    if n < 2:
        raise ValueError("n must be at least 2")
    a = np.diag(1.0 / np.arange(1, n + 1))
    x = np.zeros(n)
    x[-1] = 1.0
    return Problem(a=a, reference=(1.0 / n, x), label="invdiag-%d" % n)


def gen_strakos(n, lam1, lamn, rho):
    """Diagonal with lam_i = lam1 + ((i-1)/(n-1)) (lamn-lam1) rho^(n-i).

    rho close to one clusters the large eigenvalues; the reference pair is
    the largest (lam1, e_1).
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if not 0.0 < rho <= 1.0:
        raise ValueError("rho must lie in (0, 1]")
    if lam1 == lamn:
        raise ValueError("lam1 and lamn must differ")
    i = np.arange(1, n + 1)
    vals = lam1 + ((i - 1.0) / (n - 1.0)) * (lamn - lam1) * rho ** (n - i)
    a = np.diag(vals)
    x = np.zeros(n)
    x[0] = 1.0
    return Problem(a=a, reference=(float(lam1), x), label="strakos-%d" % n)


def _parse_header(line):
    tokens = line.strip().lower().split()
    if len(tokens) < 5 or tokens[0] != "%%matrixmarket" or tokens[1] != "matrix":
        raise ParseError("line 1: not a MatrixMarket header: %r" % line.strip())
    fmt, field, symmetry = tokens[2], tokens[3], tokens[4]
    if fmt != "coordinate":
        raise UnsupportedFormat("only coordinate format is supported, got %r" % fmt)
    if field not in ("real", "integer", "complex"):
        raise UnsupportedFormat("unsupported field %r" % field)
    if symmetry not in ("general", "symmetric"):
        raise UnsupportedFormat("unsupported symmetry %r" % symmetry)
    return field, symmetry


def load_matrix_market(path):
    """Read a coordinate Matrix Market file into a dense Problem.

    Accepts real/integer/complex general/symmetric variants; symmetric
    entries are mirrored.  Malformed content raises ParseError with the
    offending line number; declared-but-unsupported variants raise
    UnsupportedFormat.  The reference pair is left unset.
    """
    with open(path, "r", encoding="utf-8") as f:
        lines = f.readlines()
    if not lines:
        raise ParseError("line 1: empty file")
    field, symmetry = _parse_header(lines[0])
    complex_field = field == "complex"
    values_per_entry = 4 if complex_field else 3

    a = None
    rows = cols = nnz = None
    seen = 0
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        tokens = line.split()
        if a is None:
            if len(tokens) != 3:
                raise ParseError("line %d: expected 'rows cols nnz'" % lineno)
            try:
                rows, cols, nnz = (int(t) for t in tokens)
            except ValueError:
                raise ParseError("line %d: size line is not three integers" % lineno)
            if rows < 1 or cols < 0 or nnz < 0:
                raise ParseError("line %d: invalid dimensions" % lineno)
            a = np.zeros((rows, cols), dtype=complex if complex_field else float)
            continue
        if len(tokens) != values_per_entry:
            raise ParseError("line %d: expected %d fields, got %d"
                             % (lineno, values_per_entry, len(tokens)))
        try:
            i, j = int(tokens[0]), int(tokens[1])
            if complex_field:
                val = complex(float(tokens[2]), float(tokens[3]))
            else:
                val = float(tokens[2])
        except ValueError:
            raise ParseError("line %d: malformed entry" % lineno)
        if not (1 <= i <= rows and 1 <= j <= cols):
            raise ParseError("line %d: index (%d, %d) out of range" % (lineno, i, j))
        a[i - 1, j - 1] = val
        if symmetry == "symmetric" and i != j:
            a[j - 1, i - 1] = val
        seen += 1
    if a is None:
        raise ParseError("line %d: missing size line" % (len(lines) + 1))
    if seen != nnz:
        raise ParseError("line %d: header announced %d entries, found %d"
                         % (len(lines), nnz, seen))
    if not np.all(np.isfinite(a)):
        raise ParseError("line %d: non-finite values" % len(lines))
    label = os.path.splitext(os.path.basename(path))[0]
    return Problem(a=a, reference=None, label=label)


def save_matrix_market(path, a, comment=None):
    """Write a dense matrix as coordinate Matrix Market with 17 significant digits.

    An exactly symmetric real matrix is stored with symmetric symmetry (lower
    triangle only) so the write-read round trip is bit exact either way.
    """
    a = np.asarray(a)
    complex_field = np.iscomplexobj(a)
    symmetric = not complex_field and a.shape[0] == a.shape[1] and np.array_equal(a, a.T)
    ii, jj = np.nonzero(a)
    if symmetric:
        keep = ii >= jj
        ii, jj = ii[keep], jj[keep]
    field = "complex" if complex_field else "real"
    symmetry = "symmetric" if symmetric else "general"
    with open(path, "w", encoding="utf-8") as f:
        f.write("%%%%MatrixMarket matrix coordinate %s %s\n" % (field, symmetry))
        if comment:
            f.write("%% %s\n" % comment)
        f.write("%d %d %d\n" % (a.shape[0], a.shape[1], ii.size))
        if complex_field:
            for i, j in zip(ii, jj):
                v = a[i, j]
                f.write("%d %d %.17g %.17g\n" % (i + 1, j + 1, v.real, v.imag))
        else:
            for i, j in zip(ii, jj):
                f.write("%d %d %.17g\n" % (i + 1, j + 1, a[i, j]))


def reference_eigenpair(p, target, max_order=4000):
    """Fill the reference pair of a Problem with the targeted exact eigenpair.

    Exactly diagonal matrices are read off directly; everything else goes
    through the dense eigensolver (subject to the desk-scale cap).  The
    selected pair is validated against the 1e-10 * ||A||_1 residual contract.
    """
    a = p.a
    if np.count_nonzero(a - np.diag(np.diag(a))) == 0:
        vals = np.diag(a)
        idx = extraction.select_value(vals, target,
                                      ambients=list(np.eye(a.shape[0])))
        lam = complex(vals[idx])
        x = np.zeros(a.shape[0])
        x[idx] = 1.0
    else:
        pairs = linalg.eig_dense(a, max_order=max_order)
        values = np.array([v for v, _ in pairs])
        idx = extraction.select_value(values, target,
                                      ambients=[vec for _, vec in pairs])
        lam, x = pairs[idx]
    res = np.linalg.norm(a @ x - lam * x)
    if res > 1e-10 * np.linalg.norm(a, 1):
        raise linalg.NoConvergence("reference pair residual %.3e too large" % res)
    if isinstance(lam, complex) and lam.imag == 0.0:
        lam = lam.real
    return Problem(a=a, reference=(lam, x), label=p.label)


def initial_basis(n, d, seed):
    """d seeded standard-normal vectors, orthonormalized."""
    rng = np.random.default_rng(seed)
    v0 = rng.standard_normal((n, d))
    q, kept = linalg.orthonormalize(v0)
    if len(kept) < d:
        raise linalg.AllDeficient("random start came out rank deficient")
    return q
