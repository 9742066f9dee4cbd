"""Polarizations and monomial representations.

Vergne's flag construction in both forms (direct sum-of-kernels and the
recursive descent through V_k-perp), the good-basis/involution
classification of (flag, alternating form) pairs, the associative-algebra
variant, the reduction to Heisenberg quasi-polarizations, Kirillov
induction, and an exhaustive containment search used by the counterexample
battery.
"""

import numpy as np

from . import linalg
from .chartable import ClassFunction
from .cyclo import Cyclotomic
from .liering import Subspace
from .orbits import conjugacy_class_data

from fractions import Fraction


class FlagOfIdeals:
    """V_0 = 0 < V_1 < ... < V_n = g with dim steps <= 1, each V_i an ideal."""

    def __init__(self, ring, spaces, check=True):
        self.ring = ring
        self.spaces = list(spaces)
        if check:
            self.validate()

    def validate(self):
        ring = self.ring
        prev_dim = None
        if self.spaces[0].dim != 0 or self.spaces[-1].dim != ring.dim:
            raise ValueError("flag must run from 0 to the full ring")
        prev = None
        for V in self.spaces:
            if prev is not None:
                if not V.contains_space(prev) or V.dim - prev.dim > 1 or V.dim < prev.dim:
                    raise ValueError("flag is not increasing by steps <= 1")
            if not _is_ideal(ring, V):
                raise ValueError("flag member of dim %d is not an ideal" % V.dim)
            prev = V

    def basis_rows(self):
        """A flag-adapted basis: row i spans V_{i+1} over V_i."""
        rows = []
        prev = self.spaces[0]
        for V in self.spaces[1:]:
            if V.dim == prev.dim:
                prev = V
                continue
            for r in V.rows:
                if not prev.contains(r):
                    rows.append(r)
                    break
            else:
                raise AssertionError("could not adapt basis to flag")
            prev = V
        return np.array(rows, dtype=np.int64)


def _is_ideal(ring, V):
    if V.dim == 0:
        return True
    for i in range(ring.dim):
        for w in V.rows:
            if not V.contains(ring.bracket(ring.basis_vector(i), w)):
                return False
    return True


def flag_from_weights(ring):
    """The natural complete ideal flag: refine the lower central series from
    the bottom, inserting RREF rows in order.

    Any refinement of the LCS by subspaces works: a subspace V between
    gamma_{i+1} and gamma_i satisfies [g, V] <= gamma_{i+1} <= V.
    """
    lcs = ring.lower_central_series()
    rows = []
    spaces = [ring.zero_subspace()]
    for term in reversed(lcs):  # from 0 up to g
        if term.dim == 0:
            continue
        for r in term.rows:
            if rows and linalg.row_space_contains(
                np.array(rows, dtype=np.int64), r, ring.p
            ):
                continue
            rows.append(r)
            spaces.append(ring.subspace(np.array(rows)))
    return FlagOfIdeals(ring, spaces)


def random_ideal_flag(ring, rng):
    """A random complete flag of ideals refining the lower central series."""
    lcs = ring.lower_central_series()
    p = ring.p
    rows = []
    spaces = [ring.zero_subspace()]
    for term in reversed(lcs):
        if term.dim == 0:
            continue
        # random chain through the layer between current span and term
        while spaces[-1].dim < term.dim:
            for _ in range(200):
                coeffs = rng.integers(0, p, term.dim)
                v = (coeffs @ term.rows) % p
                if not spaces[-1].contains(v):
                    rows.append(v)
                    spaces.append(ring.subspace(np.array(rows)))
                    break
            else:
                raise AssertionError("failed to refine flag layer")
    return FlagOfIdeals(ring, spaces)


class Polarization:
    def __init__(self, ring, space, f_vec, kind):
        self.ring = ring
        self.space = space
        self.f_vec = np.asarray(f_vec, dtype=np.int64) % ring.p
        self.kind = kind

    @property
    def dim(self):
        return self.space.dim

    def verify(self):
        ring = self.ring
        B = ring.bf_matrix(self.f_vec)
        S = self.space.rows
        if ((S @ B @ S.T) % ring.p).any():
            raise AssertionError("polarization is not isotropic")
        if not _is_subring(ring, self.space):
            raise AssertionError("polarization is not a subring")
        rk = linalg.rank(B, ring.p)
        if self.space.dim != ring.dim - rk // 2:
            raise AssertionError("polarization is not Lagrangian")
        return True

    def __repr__(self):
        return "Polarization(dim=%d, kind=%s)" % (self.dim, self.kind)


def _is_subring(ring, S):
    for i in range(S.dim):
        for j in range(i + 1, S.dim):
            if not S.contains(ring.bracket(S.rows[i], S.rows[j])):
                return False
    return True


def bracket_closure(ring, S):
    cur = S
    while True:
        rows = [cur.rows] if cur.dim else []
        extra = []
        for i in range(cur.dim):
            for j in range(i + 1, cur.dim):
                v = ring.bracket(cur.rows[i], cur.rows[j])
                if v.any() and not cur.contains(v):
                    extra.append(v)
        if not extra:
            return cur
        cur = ring.subspace(np.concatenate([cur.rows, np.array(extra)]))


# -- Vergne ---------------------------------------------------------------------


def vergne_polarization(ring, flag, f_vec, mode="direct"):
    """The Vergne polarization L(V_., B_f) = sum_i ker(B_f | V_i)."""
    f_vec = np.asarray(f_vec, dtype=np.int64) % ring.p
    B = ring.bf_matrix(f_vec)
    spaces = [V for V in flag.spaces]
    if mode == "direct":
        L = _vergne_direct(ring, B, spaces)
    elif mode == "recursive":
        L = _vergne_recursive(ring, B, spaces, ring.full_subspace())
    else:
        raise ValueError("mode must be direct or recursive")
    pol = Polarization(ring, L, f_vec, kind="vergne-flag")
    pol.verify()
    # uniqueness clause: L meets every flag member in a Lagrangian of it
    for V in spaces:
        inter = L.intersect(V)
        S = V.rows
        BV = (S @ B @ S.T) % ring.p
        rkV = linalg.rank(BV, ring.p)
        if inter.dim != V.dim - rkV // 2:
            raise AssertionError("L does not meet the flag Lagrangianly")
    return pol


def _restricted_kernel(ring, B, V):
    """{v in V : B(v, V) = 0} as a Subspace."""
    if V.dim == 0:
        return V
    S = V.rows
    M = (S @ B @ S.T) % ring.p
    K = linalg.kernel(M.T, ring.p)  # rows c with c @ M = 0  <=> M^T c = 0
    if K.shape[0] == 0:
        return ring.zero_subspace()
    return ring.subspace((K @ S) % ring.p)


def _vergne_direct(ring, B, spaces):
    total = ring.zero_subspace()
    for V in spaces:
        total = total.sum(_restricted_kernel(ring, B, V))
    return total


def _vergne_recursive(ring, B, spaces, W):
    """L via Lemma-style descent: pass to V_k-perp for the minimal V_k not
    inside Ker B, intersect the flag, recurse; when B|W = 0, L = W."""
    S = W.rows
    BW = (S @ B @ S.T) % ring.p
    if not BW.any():
        return W
    # minimal flag member (cut to W) not contained in Ker(B|W)
    radical_coeffs = linalg.kernel(BW.T, ring.p)
    radical = (
        ring.subspace((radical_coeffs @ S) % ring.p)
        if radical_coeffs.shape[0]
        else ring.zero_subspace()
    )
    for V in spaces:
        VW = V.intersect(W)
        if VW.dim == 0:
            continue
        if not radical.contains_space(VW):
            # W' = {w in W : B(w, VW) = 0}
            T = VW.rows
            M = (S @ B @ T.T) % ring.p
            K = linalg.kernel(M.T, ring.p)
            Wn = ring.subspace((K @ S) % ring.p)
            return _vergne_recursive(ring, B, spaces, Wn)
    raise AssertionError("no descent step found though B|W != 0 (bug)")


# -- good bases and the involution classification --------------------------------


def good_basis_and_involution(B, p, flag_rows=None):
    """A good basis for (flag, alternating form) plus its involution.

    B: alternating n x n matrix over Z/p; flag_rows: basis rows adapted to
    the complete flag (defaults to the standard basis).  Returns
    (basis_rows, sigma, L_rows) where sigma is a permutation array with
    sigma[sigma[i]] = i, and L = span{e_i : sigma[i] >= i} is the Vergne
    subspace of the flag.  sigma is independently recomputed from the rank
    statistics eps_ij = r_ij - r_{i-1,j} - r_{i,j-1} + r_{i-1,j-1} and the
    two must agree.
    """
    B = np.asarray(B, dtype=np.int64) % p
    n = B.shape[0]
    if ((B + B.T) % p).any() or B.diagonal().any():
        raise ValueError("form is not alternating")
    rows = (
        np.asarray(flag_rows, dtype=np.int64) % p
        if flag_rows is not None
        else np.eye(n, dtype=np.int64)
    )

    def bval(u, v):
        return int(u @ B @ v % p)

    basis = []
    sigma = []
    for i in range(n):
        v = rows[i].copy()
        paired = [j for j in range(len(basis)) if sigma[j] != j]
        for j in paired:
            t = sigma[j]
            c = bval(basis[j], v)
            if c:
                denom = bval(basis[j], basis[t])
                v = (v - (c * pow(int(denom), -1, p)) * basis[t]) % p
        free = [j for j in range(len(basis)) if sigma[j] == j]
        hot = [j for j in free if bval(basis[j], v) != 0]
        if len(hot) >= 2:
            t = hot[0]
            denom = bval(basis[t], v)
            for j in hot[1:]:
                c = bval(v, basis[j])
                basis[j] = (basis[j] + (c * pow(int(denom), -1, p)) * basis[t]) % p
            hot = [t]
        basis.append(v % p)
        k = len(basis) - 1
        if hot:
            t = hot[0]
            sigma.append(t)
            sigma[t] = k
        else:
            sigma.append(k)
    basis = np.array(basis, dtype=np.int64)
    sigma = np.array(sigma, dtype=np.int64)
    # verify goodness: each basis vector pairs with at most one other
    G = (basis @ B @ basis.T) % p
    for i in range(n):
        nz = np.nonzero(G[i])[0]
        if len(nz) > 1:
            raise AssertionError("constructed basis is not good")
        if len(nz) == 1 and (sigma[i] != nz[0] or sigma[nz[0]] != i):
            raise AssertionError("involution mismatch in construction")
        if len(nz) == 0 and sigma[i] != i:
            raise AssertionError("involution mismatch at a fixed point")
    sigma_rank = involution_from_ranks(B, p, rows)
    if (sigma != sigma_rank).any():
        raise AssertionError("rank-statistics involution disagrees")
    L_rows = basis[[i for i in range(n) if sigma[i] >= i]]
    return basis, sigma, L_rows


def involution_from_ranks(B, p, flag_rows=None):
    """sigma from eps_ij = r_ij - r_{i-1,j} - r_{i,j-1} + r_{i-1,j-1}."""
    B = np.asarray(B, dtype=np.int64) % p
    n = B.shape[0]
    rows = (
        np.asarray(flag_rows, dtype=np.int64) % p
        if flag_rows is not None
        else np.eye(n, dtype=np.int64)
    )
    r = np.zeros((n + 1, n + 1), dtype=np.int64)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            r[i, j] = linalg.rank((rows[:i] @ B @ rows[:j].T) % p, p)
    sigma = np.arange(n, dtype=np.int64)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            eps = r[i, j] - r[i - 1, j] - r[i, j - 1] + r[i - 1, j - 1]
            if eps == 1:
                sigma[i - 1] = j - 1
    return sigma


# -- associative Vergne ------------------------------------------------------------


def associative_vergne(algebra, flag_spaces, B):
    """L = sum ker(B|V_i) for an associative algebra with two-sided-ideal
    flag and B satisfying B(xy,z) + B(yz,x) + B(zx,y) = 0; L is verified
    multiplicatively closed."""
    p = algebra.p
    B = np.asarray(B, dtype=np.int64) % p
    d = algebra.dim
    for i in range(d):
        for j in range(d):
            for k in range(d):
                x, y, z = (np.eye(d, dtype=np.int64)[t] for t in (i, j, k))
                s = (
                    int(algebra.product(x, y) @ B @ z)
                    + int(algebra.product(y, z) @ B @ x)
                    + int(algebra.product(z, x) @ B @ y)
                ) % p
                if s:
                    raise ValueError("cyclic identity fails on basis triple")
    for V in flag_spaces:
        if not _is_twosided_ideal(algebra, V):
            raise ValueError("flag member is not a two-sided ideal")
    total = Subspace(np.zeros((0, d), dtype=np.int64), p, d=d)
    for V in flag_spaces:
        if V.dim == 0:
            continue
        S = V.rows
        M = (S @ B @ S.T) % p
        K = linalg.kernel(M.T, p)
        if K.shape[0]:
            total = total.sum(Subspace((K @ S) % p, p, d=d))
    # multiplicative closure
    for i in range(total.dim):
        for j in range(total.dim):
            if not total.contains(algebra.product(total.rows[i], total.rows[j])):
                raise AssertionError("associative Vergne output not closed")
    return total


def _is_twosided_ideal(algebra, V):
    if V.dim == 0:
        return True
    for i in range(algebra.dim):
        e = np.eye(algebra.dim, dtype=np.int64)[i]
        for w in V.rows:
            if not V.contains(algebra.product(e, w)) or not V.contains(
                algebra.product(w, e)
            ):
                return False
    return True


# -- quasi-polarizations -------------------------------------------------------------


def is_heisenberg_functional(ring, f_vec):
    """f is Heisenberg iff [g, g] lies in the radical g^f of B_f."""
    stab = ring.stabilizer_subspace(np.asarray(f_vec, dtype=np.int64) % ring.p)
    return stab.contains_space(ring.derived_subring())


def quasi_polarization(ring, f_vec):
    """The canonical Heisenberg quasi-polarization chain at f.

    Iterates n = largest ideal inside g^f, z~ = {x : [x, g] <= n},
    g_1 = z~ + z~^perp_f until f is Heisenberg on the current subring.
    Returns (chain, terminal_ring, terminal_f, embed_rows) where chain is
    the list of subspaces of the original ring (starting with g itself) and
    embed_rows maps the terminal ring's basis into original coordinates.
    """
    f_vec = np.asarray(f_vec, dtype=np.int64) % ring.p
    chain = [ring.full_subspace()]
    cur_ring, cur_f = ring, f_vec
    embed = np.eye(ring.dim, dtype=np.int64)
    guard = 0
    while not is_heisenberg_functional(cur_ring, cur_f):
        guard += 1
        if guard > ring.dim + 1:
            raise AssertionError("quasi-polarization failed to terminate (bug)")
        p = cur_ring.p
        stab = cur_ring.stabilizer_subspace(cur_f)
        nid = cur_ring.largest_ideal_within(stab)
        # z~ = {x : [x, e_j] in n for all j}
        D = linalg.kernel(nid.rows, p) if nid.dim else np.eye(cur_ring.dim, dtype=np.int64)
        constraints = []
        for j in range(cur_ring.dim):
            # [x, e_j] = M_j x with M_j[k, i] = C[i, j, k]
            Mj = cur_ring.constants[:, j, :].T
            constraints.append((D @ Mj) % p)
        ztilde = cur_ring.subspace(linalg.kernel(np.concatenate(constraints), p))
        zperp = ztilde.perp(cur_ring.bf_matrix(cur_f))
        g1 = ztilde.sum(zperp)
        if g1.dim >= cur_ring.dim:
            raise AssertionError("reduction step did not shrink (bug)")
        if not _is_subring(cur_ring, g1):
            raise AssertionError("g_1 is not a subring (bug)")
        # coisotropic: g1^perp_f <= g1; and g1 contains the derived subring
        if not g1.contains_space(g1.perp(cur_ring.bf_matrix(cur_f))):
            raise AssertionError("g_1 is not coisotropic (bug)")
        if not g1.contains_space(cur_ring.derived_subring()):
            raise AssertionError("g_1 misses the derived subring (bug)")
        sub, rows = cur_ring.subring(g1)
        embed_new = (rows @ embed) % ring.p
        chain.append(Subspace(embed_new, ring.p, d=ring.dim))
        cur_f = (rows @ cur_f) % ring.p
        cur_ring, embed = sub, embed_new
    return chain, cur_ring, cur_f, embed


# -- Kirillov induction and monomial representations ---------------------------------


class MonomialRep:
    """Ind_{Exp h}^{Gamma} chi_f as generalized permutation matrices."""

    def __init__(self, ring, pol, psi_k=1):
        self.ring = ring
        self.pol = pol
        self.psi_k = psi_k
        p, d = ring.p, ring.dim
        H_pts = pol.space.points()
        self.H_indices = np.sort(linalg.encode_vectors(H_pts, p))
        n = ring.order
        in_H = np.zeros(n, dtype=bool)
        in_H[self.H_indices] = True
        coset_rep = np.full(n, -1, dtype=np.int64)
        reps = []
        H_arr = linalg.decode_indices(self.H_indices, d, p)
        for x in range(n):
            if coset_rep[x] >= 0:
                continue
            xv = ring.element_from_index(x)
            coset = ring.group_mul_bulk(np.tile(xv, (len(H_arr), 1)), H_arr)
            idxs = linalg.encode_vectors(coset, p)
            coset_rep[idxs] = x
            reps.append(x)
        self.coset_rep = coset_rep
        self.reps = np.array(reps, dtype=np.int64)
        self.rep_pos = {int(r): i for i, r in enumerate(reps)}
        self.dim = len(reps)

    def chi_f(self, h_vec):
        r = int(self.pol.f_vec @ h_vec % self.ring.p)
        return Cyclotomic.zeta(self.ring.p, (self.psi_k * r) % self.ring.p)

    def matrix(self, g_vec):
        """(perm, diag): column i carries chi_f(h) at row perm[i], where
        g * rep_i = rep_{perm[i]} * h."""
        ring = self.ring
        p = ring.p
        perm = np.zeros(self.dim, dtype=np.int64)
        diag = []
        for i, r in enumerate(self.reps):
            rv = ring.element_from_index(int(r))
            w = ring.group_mul(g_vec, rv)
            widx = int(ring.element_index(w))
            rep2 = int(self.coset_rep[widx])
            perm[i] = self.rep_pos[rep2]
            r2v = ring.element_from_index(rep2)
            h = ring.group_mul(ring.group_inv(r2v), w)
            diag.append(self.chi_f(h))
        return perm, diag

    def trace(self, g_vec):
        perm, diag = self.matrix(g_vec)
        acc = Cyclotomic.rational(0)
        for i in range(self.dim):
            if perm[i] == i:
                acc = acc + diag[i]
        return acc

    def compose(self, m1, m2):
        p1, d1 = m1
        p2, d2 = m2
        perm = p1[p2]
        diag = [d1[p2[i]] * d2[i] for i in range(self.dim)]
        return perm, diag

    def check_homomorphism(self):
        ring = self.ring
        for i in range(ring.dim):
            for j in range(ring.dim):
                a = ring.basis_vector(i)
                b = ring.basis_vector(j)
                lhs = self.matrix(ring.group_mul(a, b))
                rhs = self.compose(self.matrix(a), self.matrix(b))
                if (lhs[0] != rhs[0]).any() or any(
                    x != y for x, y in zip(lhs[1], rhs[1])
                ):
                    return False
        return True


def induced_character(ring, pol, class_data=None, psi_k=1):
    """Character of Ind_{Exp h}^Gamma chi_f by the conjugation-count formula:
    chi(g) = |C(g)|/|H| * sum over class(g) meet H of chi_f."""
    cd = class_data or conjugacy_class_data(ring)
    p = ring.p
    H_rows = pol.space.rows
    D = linalg.kernel(H_rows, p) if pol.space.dim else np.eye(ring.dim, dtype=np.int64)
    values = []
    all_pts = ring.all_elements()
    in_H = (
        ~((all_pts @ D.T % p).any(axis=1))
        if D.shape[0]
        else np.ones(ring.order, dtype=bool)
    )
    order_H = p**pol.space.dim
    f = pol.f_vec
    for j in range(cd.num_classes):
        members = np.nonzero((cd.class_of == j) & in_H)[0]
        if len(members) == 0:
            values.append(Cyclotomic.rational(0))
            continue
        pts = linalg.decode_indices(members, ring.dim, p)
        res = (psi_k * (pts @ f)) % p
        counts = np.bincount(res, minlength=p)
        scale = Fraction(cd.centralizer_order(j), order_H)
        values.append(Cyclotomic.from_root_counts(p, counts.tolist(), scale))
    return ClassFunction(cd, tuple(values))


def induced_character_and_rep(ring, f_vec, pol, class_data=None, psi_k=1):
    """(ClassFunction, MonomialRep) for Ind from a polarization at f."""
    f_vec = np.asarray(f_vec, dtype=np.int64) % ring.p
    if (pol.f_vec != f_vec).any():
        raise ValueError("polarization base functional mismatch")
    pol.verify()
    chi = induced_character(ring, pol, class_data=class_data, psi_k=psi_k)
    rep = MonomialRep(ring, pol, psi_k=psi_k)
    return chi, rep


# -- containment search -----------------------------------------------------------


def polarization_containment_search(ring, f_vec, h0_rows, max_order=5**5):
    """A polarization at f containing span(h0_rows), or None (exhaustive).

    DFS over bracket-closed isotropic extensions; prunes by the Lagrangian
    dimension bound and closure isotropy.
    """
    if ring.order > max_order:
        raise ValueError("ring order exceeds the search budget")
    p = ring.p
    f_vec = np.asarray(f_vec, dtype=np.int64) % p
    B = ring.bf_matrix(f_vec)
    target = ring.dim - linalg.rank(B, p) // 2
    h0 = ring.subspace(np.asarray(h0_rows, dtype=np.int64)) if np.asarray(h0_rows).size else ring.zero_subspace()
    if ((h0.rows @ B @ h0.rows.T) % p).any():
        raise ValueError("h0 is not isotropic for B_f")
    start = bracket_closure(ring, h0)
    if ((start.rows @ B @ start.rows.T) % p).any() or start.dim > target:
        return None
    seen = set()

    def dfs(S):
        if S.dim == target:
            pol = Polarization(ring, S, f_vec, kind="search")
            pol.verify()
            return pol
        key = S.rows.tobytes()
        if key in seen:
            return None
        seen.add(key)
        # candidates: canonical reps of (S^perp_f modulo S), nonzero
        perp = S.perp(B)
        for v in perp.points():
            v = linalg.reduce_by(S.rows, v, p)
            if not v.any():
                continue
            ext = bracket_closure(ring, S.sum(ring.subspace(v.reshape(1, -1))))
            if ext.dim > target:
                continue
            if ((ext.rows @ B @ ext.rows.T) % p).any():
                continue
            found = dfs(ext)
            if found is not None:
                return found
        return None

    return dfs(start)
