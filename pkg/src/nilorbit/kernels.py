"""Kernel dispatch: compiled extension when built, numpy fallback otherwise.

The dense orbit enumeration over p^d indices dominates the runtime of orbit
censuses and base-change towers; both backends implement the identical
contract and the test suite cross-checks them (see also benchmarks/).
"""

from . import _kernels_py

try:
    from . import _orbitc

    _impl = _orbitc
except ImportError:
    _impl = _kernels_py

BACKEND = _impl.BACKEND

_MAX_DENSE_BITS = 24


def orbit_partition(mats, p, backend=None):
    """Partition F_p^d under the matrix monoid; labels by increasing seed.

    Guard: the dense index space must fit 2^24 points (the documented
    budget for dense bitset visitation).
    """
    d = mats.shape[1] if hasattr(mats, "shape") else len(mats[0])
    if p**d > (1 << _MAX_DENSE_BITS):
        raise ValueError(
            "dense orbit enumeration over %d^%d points exceeds the 2^%d budget"
            % (p, d, _MAX_DENSE_BITS)
        )
    impl = _select(backend)
    return impl.orbit_partition(mats, p)


def _select(backend):
    if backend in (None, BACKEND):
        return _impl
    if backend == "python":
        return _kernels_py
    if backend == "c":
        try:
            from . import _orbitc

            return _orbitc
        except ImportError:
            raise RuntimeError("compiled kernel requested but not built")
    raise ValueError("unknown backend %r" % backend)


def single_orbit(mats, p, seed_vec, limit=1 << 22):
    """One orbit by hash-set BFS: for index spaces beyond the dense budget,
    where only the orbit of a given point is needed.

    Returns the orbit as a sorted (size, d) array of points.  Frontier
    steps are vectorized; visited points are tracked by byte keys, so the
    cost scales with the orbit, not with p^d.
    """
    import numpy as np

    mats = np.asarray(mats, dtype=np.int64) % p
    d = mats.shape[1]
    seed = np.asarray(seed_vec, dtype=np.int64).reshape(1, d) % p
    seen = {seed.tobytes()}
    points = [seed[0].copy()]
    frontier = seed
    while len(frontier):
        images = np.concatenate([(frontier @ M.T) % p for M in mats], axis=0)
        fresh = []
        for row in images:
            key = row.tobytes()
            if key not in seen:
                seen.add(key)
                fresh.append(row)
                if len(seen) > limit:
                    raise ValueError("orbit exceeds the hash-set budget")
        if not fresh:
            break
        frontier = np.array(fresh, dtype=np.int64)
        points.extend(frontier)
    out = np.array(points, dtype=np.int64)
    # index order: the last coordinate is the most significant digit
    return out[np.lexsort(out.T)]
