"""Dense exact linear algebra over prime fields Z/p.

Matrices are numpy int64 arrays with entries reduced mod p.  Sizes here are
small (dimensions <= ~20 for ring computations, a few hundred for the Dixon
oracle), so clarity wins over asymptotics; row operations are vectorized.
"""

import numpy as np


def asmod(a, p):
    return np.asarray(a, dtype=np.int64) % p


def modinv(a, p):
    a = int(a) % p
    if a == 0:
        raise ZeroDivisionError("inverse of 0 mod %d" % p)
    return pow(a, -1, p)


def rref(mat, p):
    """Reduced row echelon form.  Returns (R, pivot_columns)."""
    R = asmod(mat, p).copy()
    if R.ndim != 2:
        raise ValueError("expected a matrix")
    nrows, ncols = R.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if len(nz) == 0:
            continue
        i = r + nz[0]
        if i != r:
            R[[r, i]] = R[[i, r]]
        R[r] = (R[r] * modinv(R[r, c], p)) % p
        col = R[:, c].copy()
        col[r] = 0
        R -= np.outer(col, R[r])
        R %= p
        pivots.append(c)
        r += 1
    return R[:r], pivots


def rank(mat, p):
    return rref(mat, p)[0].shape[0]


def kernel(mat, p):
    """Basis (as rows, in RREF) of the right null space {x : mat @ x = 0}."""
    A = asmod(mat, p)
    n = A.shape[1]
    R, pivots = rref(A, p)
    free = [c for c in range(n) if c not in pivots]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for k, c in enumerate(free):
        basis[k, c] = 1
        for r, pc in enumerate(pivots):
            basis[k, pc] = (-R[r, c]) % p
    return rref(basis, p)[0] if len(free) else basis


def solve(A, b, p):
    """One solution x of A @ x = b, or None if inconsistent."""
    A = asmod(A, p)
    b = asmod(b, p)
    aug = np.concatenate([A, b.reshape(-1, 1)], axis=1)
    R, pivots = rref(aug, p)
    n = A.shape[1]
    if n in pivots:
        return None
    x = np.zeros(n, dtype=np.int64)
    for r, c in enumerate(pivots):
        x[c] = R[r, n]
    return x


def inverse(A, p):
    A = asmod(A, p)
    n = A.shape[0]
    aug = np.concatenate([A, np.eye(n, dtype=np.int64)], axis=1)
    R, pivots = rref(aug, p)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular mod %d" % p)
    return R[:, n:]


def matmul(A, B, p):
    return (asmod(A, p) @ asmod(B, p)) % p


def matpow(A, k, p):
    n = A.shape[0]
    out = np.eye(n, dtype=np.int64)
    base = asmod(A, p)
    while k:
        if k & 1:
            out = (out @ base) % p
        base = (base @ base) % p
        k >>= 1
    return out


def nilpotent_exp(A, p):
    """exp(A) = sum A^i / i! for nilpotent A; requires A^k = 0 with k <= p."""
    n = A.shape[0]
    out = np.eye(n, dtype=np.int64)
    term = np.eye(n, dtype=np.int64)
    A = asmod(A, p)
    for i in range(1, n + 1):
        term = (term @ A) % p
        if not term.any():
            break
        if i >= p:
            raise ValueError("matrix not nilpotent of index < p")
        out = (out + term * modinv(_factorial_mod(i, p), p)) % p
    return out


def _factorial_mod(i, p):
    out = 1
    for k in range(2, i + 1):
        out = (out * k) % p
    return out


def row_space_contains(R, v, p):
    """Membership of v in the row space of an RREF matrix R."""
    v = asmod(v, p).copy()
    for row in R:
        c = np.nonzero(row)[0]
        if len(c) == 0:
            continue
        c = c[0]
        if v[c]:
            v = (v - v[c] * row) % p
    return not v.any()


def reduce_by(R, v, p):
    """Reduce v modulo the row space of RREF matrix R (canonical coset rep)."""
    v = asmod(v, p).copy()
    for row in R:
        c = np.nonzero(row)[0]
        if len(c) == 0:
            continue
        c = c[0]
        if v[c]:
            v = (v - v[c] * row) % p
    return v


def span_rows(mats, p):
    """RREF basis of the row space spanned by the stacked matrices."""
    mats = [asmod(m, p).reshape(-1, mats[0].shape[-1]) for m in mats if m.size]
    if not mats:
        raise ValueError("no rows given")
    return rref(np.concatenate(mats, axis=0), p)[0]


def intersect_row_spaces(A, B, p):
    """RREF basis for the intersection of two row spaces."""
    A = asmod(A, p)
    B = asmod(B, p)
    if A.shape[0] == 0 or B.shape[0] == 0:
        return np.zeros((0, A.shape[1]), dtype=np.int64)
    # x = a^T A = b^T B  <=>  (a, b) in kernel of [A^T | -B^T]
    M = np.concatenate([A.T, (-B.T) % p], axis=1)
    K = kernel(M, p)
    if K.shape[0] == 0:
        return np.zeros((0, A.shape[1]), dtype=np.int64)
    vecs = (K[:, : A.shape[0]] @ A) % p
    nz = vecs.any(axis=1)
    if not nz.any():
        return np.zeros((0, A.shape[1]), dtype=np.int64)
    return rref(vecs[nz], p)[0]


def enumerate_row_space(R, p):
    """All p^k vectors of the row space of R (k rows), as a (p^k, n) array."""
    k, n = R.shape
    if k == 0:
        return np.zeros((1, n), dtype=np.int64)
    coeffs = all_vectors(k, p)
    return (coeffs @ R) % p


def all_vectors(d, p):
    """All vectors of F_p^d in index order (little-endian digits)."""
    n = p**d
    idx = np.arange(n)
    out = np.empty((n, d), dtype=np.int64)
    for j in range(d):
        out[:, j] = idx % p
        idx = idx // p
    return out


def encode_vectors(V, p):
    """Little-endian mixed-radix index of each row of V."""
    d = V.shape[-1]
    radix = p ** np.arange(d, dtype=np.int64)
    return (np.asarray(V, dtype=np.int64) % p) @ radix


def decode_indices(idx, d, p):
    idx = np.asarray(idx, dtype=np.int64)
    out = np.empty(idx.shape + (d,), dtype=np.int64)
    for j in range(d):
        out[..., j] = idx % p
        idx = idx // p
    return out
