"""The orbit method: coadjoint orbits, the character formula, the Fourier
transform Phi on the group algebra, and the orbit-counting diagnostics.

The dual g* of a ring of order p^d is identified with F_p^d via the fixed
additive character psi(1) = zeta_p^k: lambda represents x -> zeta_p^(k l.x).
Orbits are connected components of the dual index space under the coadjoint
matrices of the basis exponentials, found by the dense kernel; conjugacy
classes of Exp(g) are adjoint-matrix components of the same index space.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels, linalg
from .chartable import CharacterTable, ClassFunction
from .cyclo import ZERO, Cyclotomic
from .groups import ClassData, FiniteGroup


@dataclass
class DualFunctional:
    ring: object
    vec: np.ndarray
    psi_k: int = 1

    def index(self):
        return self.ring.element_index(self.vec)


class CoadjointOrbit:
    """A coadjoint orbit: sorted dual indices, base point, stabilizer g^f."""

    def __init__(self, ring, indices, psi_k=1):
        self.ring = ring
        self.indices = np.sort(np.asarray(indices, dtype=np.int64))
        self.base_index = int(self.indices[0])
        self.size = len(self.indices)
        self.psi_k = psi_k
        m2 = round(math.log(self.size, ring.p))
        if ring.p**m2 != self.size or m2 % 2 != 0:
            raise ValueError(
                "orbit size %d is not an even power of %d" % (self.size, ring.p)
            )
        self.half_log = m2 // 2
        self.base_point = ring.element_from_index(self.base_index)
        self.stabilizer = ring.stabilizer_subspace(self.base_point)

    def points(self):
        return linalg.decode_indices(self.indices, self.ring.dim, self.ring.p)

    @property
    def dimension_even(self):
        return 2 * self.half_log

    def __repr__(self):
        return "CoadjointOrbit(base=%d, size=%d)" % (self.base_index, self.size)


class OrbitSet:
    def __init__(self, ring, labels, orbits):
        self.ring = ring
        self.labels = labels
        self.orbits = orbits

    def orbit_of_index(self, idx):
        return self.orbits[int(self.labels[idx])]

    def __len__(self):
        return len(self.orbits)


def coadjoint_orbits(ring, psi_k=1):
    """Partition of g* into coadjoint orbits with stabilizer subspaces."""
    _require_lazard(ring)
    key = ("orbits", psi_k)
    if key in ring._cache:
        return ring._cache[key]
    labels = kernels.orbit_partition(ring.coadjoint_generators(), ring.p)
    orbits = []
    order = np.argsort(labels, kind="stable")
    bounds = np.searchsorted(labels[order], np.arange(labels.max() + 1))
    for t in range(labels.max() + 1):
        lo = bounds[t]
        hi = bounds[t + 1] if t + 1 < len(bounds) else len(order)
        orbits.append(CoadjointOrbit(ring, order[lo:hi], psi_k=psi_k))
    out = OrbitSet(ring, labels, orbits)
    ring._cache[key] = out
    return out


def coadjoint_orbit_of(ring, lam, limit=1 << 22):
    """The single coadjoint orbit through lam, as sorted dual points.

    Uses the dense partition when the whole dual fits the 2^24 budget and
    a hash-set BFS beyond it (cost proportional to the orbit).
    """
    _require_lazard(ring)
    lam = np.asarray(lam, dtype=np.int64) % ring.p
    if ring.order <= (1 << 24):
        oset = coadjoint_orbits(ring)
        orb = oset.orbit_of_index(ring.element_index(lam))
        return orb.points()
    return kernels.single_orbit(ring.coadjoint_generators(), ring.p, lam, limit=limit)


def conjugacy_class_data(ring):
    """ClassData of Exp(g): adjoint-action components of the index space."""
    _require_lazard(ring)
    if "class_data" in ring._cache:
        return ring._cache["class_data"]
    labels = kernels.orbit_partition(ring.adjoint_generators(), ring.p)
    t = int(labels.max()) + 1
    sizes = np.bincount(labels, minlength=t)
    reps = np.full(t, -1, dtype=np.int64)
    for idx in range(len(labels)):
        lab = labels[idx]
        if reps[lab] < 0:
            reps[lab] = idx
    # seeds scanned in increasing order, so reps are min indices already
    neg = linalg.encode_vectors(
        (-linalg.decode_indices(reps, ring.dim, ring.p)) % ring.p, ring.p
    )
    inv_class = labels[neg]
    cd = ClassData(ring.order, labels, reps, sizes, inv_class, int(labels[0]))
    ring._cache["class_data"] = cd
    return cd


def lazard_group(ring, spot_check=False):
    """Exp(g) as a black-box FiniteGroup over element indices."""
    _require_lazard(ring)
    p, d = ring.p, ring.dim

    def mult(i, j):
        x = ring.element_from_index(i)
        y = ring.element_from_index(j)
        return int(ring.element_index(ring.group_mul(x, y)))

    def inv(i):
        return int(ring.element_index((-ring.element_from_index(i)) % p))

    def mult_bulk(I, J):
        XS = linalg.decode_indices(np.asarray(I, dtype=np.int64), d, p)
        YS = linalg.decode_indices(np.asarray(J, dtype=np.int64), d, p)
        return linalg.encode_vectors(ring.group_mul_bulk(XS, YS), p)

    def inv_bulk(I):
        XS = linalg.decode_indices(np.asarray(I, dtype=np.int64), d, p)
        return linalg.encode_vectors((-XS) % p, p)

    gens = [int(ring.element_index(ring.basis_vector(i))) for i in range(d)]
    G = FiniteGroup(
        ring.order,
        mult,
        inv=inv,
        identity=0,
        gens=gens,
        mult_bulk=mult_bulk,
        inv_bulk=inv_bulk,
        classes_hook=lambda: conjugacy_class_data(ring),
        name="Exp(%r)" % (ring,),
    )
    G.ring = ring
    if spot_check:
        G.spot_check_axioms()
    return G


def orbit_character(ring, orbit, class_data=None, psi_k=1):
    """chi_Omega(g) = |Omega|^(-1/2) sum_{f in Omega} psi(f . log g)."""
    cd = class_data or conjugacy_class_data(ring)
    pts = orbit.points()
    p = ring.p
    reps = linalg.decode_indices(cd.reps, ring.dim, p)
    dots = (pts @ reps.T) % p  # |Omega| x t
    scale = Fraction(1, p**orbit.half_log)
    values = []
    for j in range(cd.num_classes):
        counts = np.bincount((psi_k * dots[:, j]) % p, minlength=p)
        values.append(Cyclotomic.from_root_counts(p, counts.tolist(), scale))
    return ClassFunction(cd, tuple(values))


def orbit_method_table(ring, psi_k=1):
    """The full character table of Exp(g) via the orbit method.

    Returns (table, orbits) with orbits aligned to table row order.
    """
    cd = conjugacy_class_data(ring)
    oset = coadjoint_orbits(ring, psi_k=psi_k)
    if len(oset) != cd.num_classes:
        raise AssertionError(
            "orbit count %d != class count %d" % (len(oset), cd.num_classes)
        )
    rows = [
        (orbit_character(ring, orb, cd, psi_k=psi_k), orb) for orb in oset.orbits
    ]
    rows.sort(key=lambda pair: (pair[0].degree.sort_key(), pair[0].sort_key()))
    table = CharacterTable(cd, [r for r, _ in rows], sort=False)
    table.psi_k = psi_k
    return table, [o for _, o in rows]


# -- the transform Phi ---------------------------------------------------------


def phi_transform(ring, mu, psi_k=1):
    """Phi(mu)(lambda) = sum_x mu(exp x) psi(lambda . x).

    mu: dense sequence of Cyclotomic/rational over group element indices.
    Returns the dense list of values over dual indices.  The kernel sign is
    fixed so that central idempotents map to orbit indicators.
    """
    p, d = ring.p, ring.dim
    n = ring.order
    X = ring.all_elements()
    out = []
    mu_vals = [
        v if isinstance(v, Cyclotomic) else Cyclotomic.rational(v) for v in mu
    ]
    nonzero = [i for i, v in enumerate(mu_vals) if not v.is_zero()]
    Xnz = X[nonzero]
    lams = ring.all_elements()
    dots = (lams @ Xnz.T) % p  # n_dual x n_nonzero
    for li in range(n):
        acc = ZERO
        row = (psi_k * dots[li]) % p
        # group by residue to keep cyclotomic work at p terms
        by_r = [[] for _ in range(p)]
        for pos, r in enumerate(row):
            by_r[r].append(nonzero[pos])
        for r in range(p):
            if not by_r[r]:
                continue
            s = ZERO
            for i in by_r[r]:
                s = s + mu_vals[i]
            acc = acc + s * Cyclotomic.zeta(p, r)
        out.append(acc)
    return out


def phi_inverse(ring, F, psi_k=1):
    """Inverse of phi_transform (inverse finite Fourier + exp_*)."""
    p = ring.p
    n = ring.order
    lams = ring.all_elements()
    X = ring.all_elements()
    F_vals = [v if isinstance(v, Cyclotomic) else Cyclotomic.rational(v) for v in F]
    nonzero = [i for i, v in enumerate(F_vals) if not v.is_zero()]
    dots = (X @ lams[nonzero].T) % p
    out = []
    scale = Fraction(1, n)
    for xi in range(n):
        acc = ZERO
        row = (-psi_k * dots[xi]) % p
        by_r = [[] for _ in range(p)]
        for pos, r in enumerate(row):
            by_r[r].append(nonzero[pos])
        for r in range(p):
            if not by_r[r]:
                continue
            s = ZERO
            for i in by_r[r]:
                s = s + F_vals[i]
            acc = acc + s * Cyclotomic.zeta(p, r)
        out.append(acc * scale)
    return out


def central_idempotent(ring, character, class_data=None):
    """e_chi as a dense function on group indices:
    e(g) = (deg/|G|) chi(g^-1)."""
    cd = class_data or conjugacy_class_data(ring)
    n = ring.order
    scale = character.degree * Fraction(1, n)
    vals_by_class = [
        character.values[cd.inv_class[j]] * scale for j in range(cd.num_classes)
    ]
    return [vals_by_class[cd.class_of[i]] for i in range(n)]


def verify_phi_idempotents(ring, table, orbits, psi_k=1):
    """Phi(e_Omega) = 1_Omega for every row, via an all-integer path.

    e_Omega(exp x) = (deg/|G|) chi(exp(-x)) has values in (1/|G|) Z[zeta_p];
    the transform is evaluated by residue counting and compared against
    |G| * indicator exactly.
    """
    p, d = ring.p, ring.dim
    n = ring.order
    cd = table.class_data
    t = cd.num_classes
    X = ring.all_elements()
    lams = X
    phi_deg = p - 1
    red = _reduction_int_rows(p)
    R = (psi_k * (lams @ X.T)) % p  # n_dual x n
    neg_class = cd.class_of[
        linalg.encode_vectors((-X) % p, p)
    ]  # class of exp(-x) per x
    key = neg_class[None, :] * p + R
    counts = np.zeros((n, t, p), dtype=np.int64)
    flat = key + (np.arange(n)[:, None] * t * p)
    counts = np.bincount(flat.ravel(), minlength=n * t * p).reshape(n, t, p)
    for row, orb in zip(table.rows, orbits):
        deg = int(row.degree.rational_value())
        m = orb.half_log
        # |G| * e(x) = deg * p^{-m} * (integer combination); clear p^{-m}
        # by scaling with p^m: M[j, r, :] = p^m * deg * chi_j * zeta^r coeffs
        M = np.zeros((t, p, phi_deg), dtype=np.int64)
        for j in range(t):
            v = row.values[j]
            vec = v._to_order(p) if v.order != 1 else [v.coeffs[0]] + [0] * (phi_deg - 1)
            for a, c in enumerate(vec):
                ci = c * (p**m) * deg
                if ci != int(ci):
                    raise AssertionError("unexpected denominator in chi")
                if int(ci):
                    for rr in range(p):
                        M[j, rr] += int(ci) * red[(a + rr) % p]
        result = np.einsum("ljr,jra->la", counts, M)
        target = np.zeros((n, phi_deg), dtype=np.int64)
        target[orb.indices, 0] = n * p**m
        if not (result == target).all():
            return False
    return True


def _reduction_int_rows(p):
    from .cyclo import _reduction_rows

    rows = _reduction_rows(p)
    return np.array(
        [[int(c) for c in row] for row in rows], dtype=np.int64
    )


# -- Appendix-style diagnostics --------------------------------------------------


def perm_vs_tensor(ring, orbit):
    """Compare fibers of the subtraction map pi: Omega x Omega -> g* with
    fibers of the tangent map pi~: TOmega -> g*.

    Returns (report, equal) where report carries both fiber-count vectors
    (indexed by dual point index).
    """
    p, d = ring.p, ring.dim
    n = ring.order
    pts = orbit.points()
    # pi fibers: counts of f - g over all ordered pairs
    sub_counts = np.zeros(n, dtype=np.int64)
    for f in pts:
        diffs = (f[None, :] - pts) % p
        idx = linalg.encode_vectors(diffs, p)
        sub_counts += np.bincount(idx, minlength=n)
    # pi~ fibers: for each f, the image subspace of B_f (each point once)
    tan_counts = np.zeros(n, dtype=np.int64)
    for f in pts:
        B = ring.bf_matrix(f)
        image_rows, _ = linalg.rref(B, p)
        space = linalg.enumerate_row_space(image_rows, p)
        idx = linalg.encode_vectors(space, p)
        tan_counts += np.bincount(idx, minlength=n)
    equal = bool((sub_counts == tan_counts).all())
    report = {
        "subtraction_fibers": sub_counts,
        "tangent_fibers": tan_counts,
        "equal": equal,
        "images_equal": bool(((sub_counts > 0) == (tan_counts > 0)).all()),
    }
    return report, equal


def pointset_fiber_comparison(points, tangent_spaces, p):
    """Generic pi vs pi~ fiber comparison for a point set Y in F_p^d.

    points: (N, d) array; tangent_spaces: list of row-generator matrices
    (the tangent space at the matching point, through the origin).
    """
    points = np.asarray(points, dtype=np.int64) % p
    N, d = points.shape
    n = p**d
    sub_counts = np.zeros(n, dtype=np.int64)
    for y in points:
        diffs = (y[None, :] - points) % p
        sub_counts += np.bincount(linalg.encode_vectors(diffs, p), minlength=n)
    tan_counts = np.zeros(n, dtype=np.int64)
    for y, T in zip(points, tangent_spaces):
        rows, _ = linalg.rref(np.asarray(T, dtype=np.int64) % p, p)
        space = linalg.enumerate_row_space(rows, p)
        tan_counts += np.bincount(linalg.encode_vectors(space, p), minlength=n)
    return {
        "subtraction_fibers": sub_counts,
        "tangent_fibers": tan_counts,
        "equal": bool((sub_counts == tan_counts).all()),
        "images_equal": bool(((sub_counts > 0) == (tan_counts > 0)).all()),
    }


def module_property_check(ring, orbit, psi_k=1, max_order=5**4):
    """Is Phi^{-1}(K(Omega)) a left ideal of the group algebra?

    K(Omega) = functions supported on Omega.  Checked on the generating
    deltas: for each basis exponential gamma and each lambda0 in Omega the
    transform of delta_gamma * Phi^{-1}(1_lambda0) must vanish outside
    Omega.  A sum of p-th roots with residue counts c_r vanishes iff all
    c_r agree, which keeps the check in integer arithmetic.
    """
    p, d = ring.p, ring.dim
    n = ring.order
    if n > max_order:
        raise ValueError("group order %d exceeds the exhaustive-check budget" % n)
    X = ring.all_elements()
    lams = ring.all_elements()
    in_orbit = np.zeros(n, dtype=bool)
    in_orbit[orbit.indices] = True
    outside = np.nonzero(~in_orbit)[0]
    U = lams[outside]
    P = (psi_k * (U @ X.T)) % p  # len(outside) x n
    for gi in range(d):
        gamma_inv = -ring.basis_vector(gi) % p
        # w(x) = log(gamma^-1 * exp x) for all x at once
        W = ring.group_mul_bulk(np.tile(gamma_inv, (n, 1)), X)
        for lam0_idx in orbit.indices:
            lam0 = ring.element_from_index(int(lam0_idx))
            A = (-psi_k * (W @ lam0)) % p  # length n
            R = (P + A[None, :]) % p
            counts = np.stack([(R == r).sum(axis=1) for r in range(p)])
            if (counts != counts[0]).any():
                return False
    return True


def _require_lazard(ring):
    cls = ring.nilpotence_class()
    if cls >= ring.p:
        raise ValueError("nilpotence class %d >= p = %d" % (cls, ring.p))
