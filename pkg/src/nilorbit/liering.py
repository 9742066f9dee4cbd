"""Finite nilpotent Lie rings over F_p and their Lazard groups Exp(g).

A LieRing stores dense structure constants c[i,j,k] (coefficient of e_k in
[e_i, e_j]) over Z/p, with p * g = 0.  The group Exp(g) lives on the same
underlying set; its multiplication evaluates the truncated Campbell-Hausdorff
series of the ring's nilpotence class, which must be < p.  Elements are
int64 vectors; dense tabulation uses the little-endian mixed-radix index.
"""

from dataclasses import dataclass, field

import numpy as np

from . import freelie, linalg


class Subspace:
    """A subspace of F_p^d as a row-reduced (RREF) basis matrix."""

    def __init__(self, rows, p, d=None):
        rows = np.asarray(rows, dtype=np.int64)
        if rows.size == 0:
            if d is None:
                raise ValueError("empty subspace needs an ambient dimension")
            rows = np.zeros((0, d), dtype=np.int64)
        if rows.ndim == 1:
            rows = rows.reshape(1, -1)
        R, _ = linalg.rref(rows, p)
        self.rows = R
        self.p = p
        self.ambient = rows.shape[1]

    @property
    def dim(self):
        return self.rows.shape[0]

    def contains(self, v):
        return linalg.row_space_contains(self.rows, v, self.p)

    def contains_space(self, other):
        return all(self.contains(r) for r in other.rows)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.p == other.p
            and self.rows.shape == other.rows.shape
            and (self.rows == other.rows).all()
        )

    def __le__(self, other):
        return other.contains_space(self)

    def sum(self, other):
        if self.dim == 0:
            return other
        if other.dim == 0:
            return self
        return Subspace(np.concatenate([self.rows, other.rows]), self.p)

    def intersect(self, other):
        rows = linalg.intersect_row_spaces(self.rows, other.rows, self.p)
        return Subspace(rows, self.p, d=self.ambient)

    def perp(self, form):
        """{v : rows . form . v = 0} for a bilinear form matrix."""
        if self.dim == 0:
            return Subspace(np.eye(self.ambient, dtype=np.int64), self.p)
        M = (self.rows @ (np.asarray(form, dtype=np.int64) % self.p)) % self.p
        return Subspace(linalg.kernel(M, self.p), self.p, d=self.ambient)

    def points(self):
        """All p^dim vectors of the subspace."""
        return linalg.enumerate_row_space(self.rows, self.p)

    def coset_reps_in(self, bigger):
        """Vectors of `bigger` reducing to distinct cosets modulo self."""
        reps = {}
        for v in bigger.points():
            key = tuple(linalg.reduce_by(self.rows, v, self.p))
            if key not in reps:
                reps[key] = v
        return [reps[k] for k in sorted(reps)]

    def __repr__(self):
        return "Subspace(dim=%d/%d, p=%d)" % (self.dim, self.ambient, self.p)


@dataclass
class FqStructure:
    """Restriction-of-scalars bookkeeping for a ring defined over F_q.

    The F_p-basis is ordered as (b_1 e_1, ..., b_s e_1, b_1 e_2, ...) where
    e_i is the F_q-basis and b_t = t^(t-1) the field power basis; flat index
    (i, t) -> i*s + t.  fq_constants[i][j] is a dict k -> F_q coefficient of
    [e_i, e_j].  The Frobenius matrix is one absolute (p-power) Frobenius
    step applied coordinate-wise.
    """

    field: object
    dim_q: int
    fq_constants: tuple
    frobenius_matrix: np.ndarray
    scalar_matrices: tuple


@dataclass
class ValidationReport:
    ok: bool
    nilpotence_class: int | None
    failures: list = field(default_factory=list)
    lazard_ok: bool | None = None
    fq_bilinear: bool | None = None


class LieRing:
    """Finite Lie ring over F_p with dense structure constants."""

    def __init__(self, p, constants, labels=None, fq=None):
        constants = np.asarray(constants, dtype=np.int64) % p
        if constants.ndim != 3 or constants.shape[0] != constants.shape[1] or constants.shape[0] != constants.shape[2]:
            raise ValueError("structure constants must be d x d x d")
        self.p = p
        self.dim = constants.shape[0]
        self.constants = constants
        self.labels = tuple(labels) if labels else tuple(
            "e%d" % (i + 1) for i in range(self.dim)
        )
        self.fq = fq
        self._cache = {}

    @property
    def order(self):
        return self.p**self.dim

    def __repr__(self):
        return "LieRing(p=%d, dim=%d)" % (self.p, self.dim)

    # -- bracket ---------------------------------------------------------------

    def bracket(self, x, y):
        x = np.asarray(x, dtype=np.int64) % self.p
        y = np.asarray(y, dtype=np.int64) % self.p
        return np.einsum("i,j,ijk->k", x, y, self.constants) % self.p

    def bracket_bulk(self, XS, YS):
        """Rowwise brackets of two (n, d) batches."""
        XS = np.asarray(XS, dtype=np.int64) % self.p
        YS = np.asarray(YS, dtype=np.int64) % self.p
        return np.einsum("ni,nj,ijk->nk", XS, YS, self.constants) % self.p

    def ad_matrix(self, x):
        """Matrix of ad x = [x, -] acting on column vectors."""
        x = np.asarray(x, dtype=np.int64) % self.p
        return np.einsum("i,ijk->kj", x, self.constants) % self.p

    def basis_vector(self, i):
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return v

    def subspace(self, rows):
        return Subspace(rows, self.p, d=self.dim)

    def zero_subspace(self):
        return Subspace(np.zeros((0, self.dim), dtype=np.int64), self.p, d=self.dim)

    def full_subspace(self):
        return Subspace(np.eye(self.dim, dtype=np.int64), self.p, d=self.dim)

    # -- validation -------------------------------------------------------------

    def validate(self, for_lazard=True):
        """Alternating + Jacobi on basis triples, nilpotence class, class < p."""
        failures = []
        C = self.constants
        d = self.dim
        for i in range(d):
            if C[i, i].any():
                failures.append(("alternating", (i, i)))
        anti = (C + np.swapaxes(C, 0, 1)) % self.p
        if anti.any():
            ij = np.argwhere(anti.any(axis=2))
            failures.append(("antisymmetric", tuple(ij[0])))
        for i in range(d):
            for j in range(i + 1, d):
                for k in range(j + 1, d):
                    v = (
                        self.bracket(self.bracket(self.basis_vector(i), self.basis_vector(j)), self.basis_vector(k))
                        + self.bracket(self.bracket(self.basis_vector(j), self.basis_vector(k)), self.basis_vector(i))
                        + self.bracket(self.bracket(self.basis_vector(k), self.basis_vector(i)), self.basis_vector(j))
                    ) % self.p
                    if v.any():
                        failures.append(("jacobi", (i, j, k)))
        if failures:
            return ValidationReport(False, None, failures)
        cls = self.nilpotence_class()
        report = ValidationReport(True, cls, [])
        if for_lazard:
            report.lazard_ok = cls < self.p
            if not report.lazard_ok:
                report.failures.append(("class >= p", (cls, self.p)))
        if self.fq is not None:
            self._validate_fq(report)
        return report

    def _validate_fq(self, report):
        fq = self.fq
        F = fq.frobenius_matrix
        # Frobenius is a Lie-ring automorphism: F[x,y] = [Fx, Fy]
        for i in range(self.dim):
            for j in range(self.dim):
                lhs = (F @ self.bracket(self.basis_vector(i), self.basis_vector(j))) % self.p
                rhs = self.bracket(F[:, i], F[:, j])
                if (lhs != rhs).any():
                    report.ok = False
                    report.failures.append(("frobenius not automorphism", (i, j)))
                    return
        # F^s = identity on the F_q-points (q-power Frobenius fixes them)
        if linalg.matpow(F, fq.field.s, self.p).tolist() != np.eye(self.dim, dtype=np.int64).tolist():
            report.ok = False
            report.failures.append(("frobenius order", fq.field.s))
        # Is the bracket F_q-bilinear?  Recorded, not required: honest F_q-Lie
        # algebras (exponential type) say yes; fake Heisenberg brackets are
        # only F_p-bilinear by design.
        report.fq_bilinear = True
        for S in fq.scalar_matrices:
            for i in range(self.dim):
                for j in range(self.dim):
                    lhs = self.bracket(S[:, i], self.basis_vector(j))
                    rhs = (S @ self.bracket(self.basis_vector(i), self.basis_vector(j))) % self.p
                    if (lhs != rhs).any():
                        report.fq_bilinear = False
                        return

    def nilpotence_class(self):
        return len(self.lower_central_series()) - 1

    def lower_central_series(self):
        """g >= [g,g] >= [g,[g,g]] >= ... >= 0, as Subspace values."""
        if "lcs" in self._cache:
            return self._cache["lcs"]
        series = [self.full_subspace()]
        current = series[0]
        while current.dim > 0:
            rows = []
            for i in range(self.dim):
                for w in current.rows:
                    rows.append(self.bracket(self.basis_vector(i), w))
            nxt = (
                Subspace(np.array(rows), self.p, d=self.dim)
                if rows
                else self.zero_subspace()
            )
            if nxt.dim == current.dim:
                raise ValueError("ring is not nilpotent")
            series.append(nxt)
            current = nxt
        self._cache["lcs"] = series
        return series

    def derived_subring(self):
        rows = []
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                rows.append(self.bracket(self.basis_vector(i), self.basis_vector(j)))
        if not rows:
            return self.zero_subspace()
        return Subspace(np.array(rows), self.p, d=self.dim)

    def center(self):
        mats = [self.ad_matrix(self.basis_vector(i)) for i in range(self.dim)]
        M = np.concatenate(mats, axis=0)
        return Subspace(linalg.kernel(M, self.p), self.p, d=self.dim)

    def largest_ideal_within(self, W):
        """The unique largest ideal of the ring contained in the subspace W.

        Descending fixed point: I_{k+1} = {x in I_k : [e_i, x] in I_k for
        all basis e_i}; dimensions strictly decrease until stable.
        """
        current = W
        while current.dim > 0:
            K = current.rows
            # v in span(K) iff D @ v = 0, where D spans the dot-complement
            D = linalg.kernel(K, self.p)
            if D.shape[0] == 0:
                return current  # current is everything
            constraints = []
            for i in range(self.dim):
                ad = self.ad_matrix(self.basis_vector(i))
                constraints.append((D @ ad @ K.T) % self.p)
            M = np.concatenate(constraints, axis=0)
            coeffs = linalg.kernel(M, self.p)
            if coeffs.shape[0] == current.dim:
                return current
            if coeffs.shape[0] == 0:
                return self.zero_subspace()
            current = Subspace((coeffs @ K) % self.p, self.p, d=self.dim)
        return current

    # -- the Lazard group --------------------------------------------------------

    def bch(self):
        if "bch" not in self._cache:
            c = self.nilpotence_class()
            if c >= self.p:
                raise ValueError("nilpotence class %d >= p = %d" % (c, self.p))
            self._cache["bch"] = freelie.bch_series(max(c, 1))
        return self._cache["bch"]

    def group_mul(self, x, y):
        return freelie.evaluate(
            self.bch(), self, {freelie.X: x, freelie.Y: y}
        )

    def group_mul_bulk(self, XS, YS):
        return freelie.evaluate_pairs(self.bch(), self, XS, YS)

    def group_inv(self, x):
        return (-np.asarray(x, dtype=np.int64)) % self.p

    def adjoint_matrix(self, x):
        """Ad(exp x) = exp(ad x) acting on the ring (column convention)."""
        return linalg.nilpotent_exp(self.ad_matrix(x), self.p)

    def coadjoint_matrix(self, x):
        """Ad*(exp x) on dual coordinates: the transpose of exp(-ad x)."""
        neg = (-self.ad_matrix(x)) % self.p
        return linalg.nilpotent_exp(neg, self.p).T.copy()

    def adjoint_generators(self):
        if "adjoint_gens" not in self._cache:
            self._cache["adjoint_gens"] = np.array(
                [self.adjoint_matrix(self.basis_vector(i)) for i in range(self.dim)]
            )
        return self._cache["adjoint_gens"]

    def coadjoint_generators(self):
        if "coadjoint_gens" not in self._cache:
            self._cache["coadjoint_gens"] = np.array(
                [self.coadjoint_matrix(self.basis_vector(i)) for i in range(self.dim)]
            )
        return self._cache["coadjoint_gens"]

    def bf_matrix(self, lam):
        """Matrix of the alternating form B_f(x, y) = <lam, [x, y]>."""
        lam = np.asarray(lam, dtype=np.int64) % self.p
        return np.einsum("ijk,k->ij", self.constants, lam) % self.p

    def stabilizer_subspace(self, lam):
        """g^f = radical of B_f (the Lie ring of the stabilizer of f)."""
        return Subspace(linalg.kernel(self.bf_matrix(lam), self.p), self.p, d=self.dim)

    # -- indexing -----------------------------------------------------------------

    def element_index(self, x):
        return int(linalg.encode_vectors(np.asarray(x, dtype=np.int64), self.p))

    def element_from_index(self, idx):
        if not (0 <= idx < self.order):
            raise IndexError("element index out of range")
        return linalg.decode_indices(np.int64(idx), self.dim, self.p)

    def all_elements(self):
        return linalg.all_vectors(self.dim, self.p)

    # -- substructures -------------------------------------------------------------

    def subring(self, space):
        """The ring structure induced on a bracket-closed subspace.

        Returns (ring, basis_rows) where basis_rows embeds the new basis.
        """
        rows = space.rows
        k = rows.shape[0]
        consts = np.zeros((k, k, k), dtype=np.int64)
        for i in range(k):
            for j in range(k):
                v = self.bracket(rows[i], rows[j])
                coeff = linalg.solve(rows.T, v, self.p)
                if coeff is None:
                    raise ValueError("subspace is not bracket-closed")
                consts[i, j] = coeff
        return LieRing(self.p, consts), rows

    def quotient(self, ideal_space):
        """Quotient ring by an ideal; returns (ring, projection matrix)."""
        I = ideal_space.rows
        comp_idx = _complement_coords(I, self.dim, self.p)
        k = len(comp_idx)
        # projection: reduce mod I then read off complement coordinates
        basis = []
        for c in comp_idx:
            v = np.zeros(self.dim, dtype=np.int64)
            v[c] = 1
            basis.append(v)
        consts = np.zeros((k, k, k), dtype=np.int64)
        for i in range(k):
            for j in range(k):
                v = linalg.reduce_by(I, self.bracket(basis[i], basis[j]), self.p)
                consts[i, j] = v[comp_idx]
        proj = np.zeros((k, self.dim), dtype=np.int64)
        for r, c in enumerate(comp_idx):
            proj[r, c] = 1

        def project(v):
            return linalg.reduce_by(I, v, self.p)[comp_idx]

        return LieRing(self.p, consts), project


def _complement_coords(rref_rows, d, p):
    pivots = []
    for row in rref_rows:
        nz = np.nonzero(row)[0]
        if len(nz):
            pivots.append(int(nz[0]))
    return [c for c in range(d) if c not in pivots]


def validate(ring, for_lazard=True):
    return ring.validate(for_lazard=for_lazard)


def lower_central_series(ring):
    return ring.lower_central_series()


def largest_ideal_within(ring, W):
    return ring.largest_ideal_within(W)


def group_mul(ring, x, y):
    return ring.group_mul(x, y)


def group_inv(ring, x):
    return ring.group_inv(x)


def coadjoint_matrix(ring, x):
    return ring.coadjoint_matrix(x)


def element_index(ring, x):
    return ring.element_index(x)


def element_from_index(ring, idx):
    return ring.element_from_index(idx)


# -- basic constructors -------------------------------------------------------


def abelian_ring(p, dim):
    return LieRing(p, np.zeros((dim, dim, dim), dtype=np.int64))


def heisenberg_ring(p):
    """[e1, e2] = e3, e3 central."""
    C = np.zeros((3, 3, 3), dtype=np.int64)
    C[0, 1, 2] = 1
    C[1, 0, 2] = p - 1
    return LieRing(p, C, labels=("x", "y", "z"))


def from_bracket_table(p, dim, table, labels=None, fq=None):
    """table: {(i, j): {k: coeff}} for i < j; antisymmetry is filled in."""
    C = np.zeros((dim, dim, dim), dtype=np.int64)
    for (i, j), row in table.items():
        for k, v in row.items():
            C[i, j, k] = v % p
            C[j, i, k] = (-v) % p
    return LieRing(p, C, labels=labels, fq=fq)
