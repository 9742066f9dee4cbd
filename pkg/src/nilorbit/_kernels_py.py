"""Pure-numpy orbit kernel: partition of F_p^d under a matrix monoid.

Fallback implementation selected when the compiled extension is absent.
Points are little-endian base-p indices; generators act as d x d matrices
mod p on coordinate columns.  The image maps are materialized once per
generator (vectorized), then orbits are connected components found by
frontier BFS, seeds scanned in increasing index so orbit ids are stable.
"""

import numpy as np

from . import linalg

BACKEND = "python"


def orbit_partition(mats, p, jobs=None):
    """labels[i] = orbit id of point i; ids numbered by increasing seed."""
    mats = np.asarray(mats, dtype=np.int64) % p
    g, d, d2 = mats.shape
    if d != d2:
        raise ValueError("generator matrices must be square")
    n = p**d
    pts = linalg.all_vectors(d, p)
    radix = p ** np.arange(d, dtype=np.int64)
    images = np.empty((g, n), dtype=np.int64)
    for a in range(g):
        images[a] = ((pts @ mats[a].T) % p) @ radix
    labels = np.full(n, -1, dtype=np.int64)
    next_id = 0
    seed = 0
    while True:
        unvisited = np.nonzero(labels[seed:] < 0)[0]
        if len(unvisited) == 0:
            break
        seed = seed + int(unvisited[0])
        labels[seed] = next_id
        frontier = np.array([seed], dtype=np.int64)
        while len(frontier):
            imgs = images[:, frontier].ravel()
            imgs = imgs[labels[imgs] < 0]
            if len(imgs) == 0:
                break
            frontier = np.unique(imgs)
            labels[frontier] = next_id
        next_id += 1
    return labels
