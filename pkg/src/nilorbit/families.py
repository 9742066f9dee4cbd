"""The concrete families: fake Heisenberg groups, algebra groups (UL_n),
generalized unipotent symplectic groups Sp(A, sigma), and USp4 with its
golden character table in characteristic 2.

Rings defined over F_q are built through FqLieScheme, which evaluates the
bracket on points of any extension F_{q^n}: the bracket is a sum of
F_q-bilinear terms twisted by p-power Frobenii, which covers both honest
F_q-Lie algebras (single untwisted term) and the fake Heisenberg bracket
B(x, y) = sum a_ij x^(p^i) y^(p^j) that is not F_q-bilinear at all.
"""

import itertools
import math
from fractions import Fraction

import numpy as np

from . import linalg
from .chartable import CharacterTable, ClassFunction
from .cyclo import Cyclotomic
from .gfq import FqField, fq_embed, register_composite
from .groups import AbelianGroup, FiniteGroup, little_groups
from .liering import FqStructure, LieRing


# -- F_q Lie ring schemes -----------------------------------------------------


class FqLieScheme:
    """A family n -> g(F_{q^n}) of Lie rings over F_p.

    bracket_terms: {(alpha, beta): {(i, j): {k: a}}} contributing
    a * x_i^(p^alpha) * y_j^(p^beta) to coordinate k of [x, y], with a in
    F_q.  The (0,0)-only case is an honest F_q-Lie algebra.
    """

    def __init__(self, field, dim_q, bracket_terms, name=""):
        self.field = field
        self.dim_q = dim_q
        self.bracket_terms = bracket_terms
        self.name = name
        self._levels = {}

    def level_field(self, n):
        return FqField(self.field.p, self.field.s * n)

    def at_level(self, n):
        """g(F_{q^n}) as an F_p LieRing of dimension n * s * dim_q."""
        if n in self._levels:
            return self._levels[n]
        p = self.field.p
        K = self.level_field(n)
        base_emb = fq_embed(self.field, K)
        sn = K.s
        d = self.dim_q * sn
        F = K.frobenius_matrix()
        frob_pows = {0: np.eye(sn, dtype=np.int64)}

        def frob_power(alpha):
            if alpha not in frob_pows:
                frob_pows[alpha] = (frob_power(alpha - 1) @ F) % p
            return frob_pows[alpha]

        C = np.zeros((d, d, d), dtype=np.int64)
        pair_t = np.repeat(np.arange(sn), sn)
        pair_u = np.tile(np.arange(sn), sn)
        for (alpha, beta), table in self.bracket_terms.items():
            # columns of Fa are b_t^(p^alpha); all sn^2 products vectorized
            Xa = frob_power(alpha).T  # row t = coords of b_t^(p^alpha)
            Yb = frob_power(beta).T
            prod = K.bulk_mul(Xa[pair_t], Yb[pair_u])  # (sn^2, sn)
            for (i, j), row in table.items():
                for k, a in row.items():
                    aK = np.array(base_emb(a), dtype=np.int64)
                    vals = K.bulk_mul(prod, np.tile(aK, (sn * sn, 1)))
                    blk = C[i * sn : (i + 1) * sn, j * sn : (j + 1) * sn, k * sn : (k + 1) * sn]
                    blk += vals.reshape(sn, sn, sn)
        C %= p
        frob = _block_diag([K.frobenius_matrix()] * self.dim_q)
        scal = _block_diag([K.mul_matrix(K.gen())] * self.dim_q)
        ring = LieRing(
            p,
            C,
            fq=FqStructure(
                field=K,
                dim_q=self.dim_q,
                fq_constants=None,
                frobenius_matrix=frob,
                scalar_matrices=(scal,),
            ),
        )
        ring.scheme = self
        ring.level = n
        self._levels[n] = ring
        return ring

    def embedding_matrix(self, m, n):
        """F_p-linear matrix g(F_{q^m}) -> g(F_{q^n}) (coordinate-wise)."""
        if n % m != 0:
            raise ValueError("levels must divide")
        Km = self.level_field(m)
        Kn = self.level_field(n)
        emb = fq_embed(Km, Kn)
        E = emb.matrix  # (s*n) x (s*m)
        d_m = self.dim_q * Km.s
        out = np.zeros((self.dim_q * Kn.s, d_m), dtype=np.int64)
        for i in range(self.dim_q):
            out[i * Kn.s : (i + 1) * Kn.s, i * Km.s : (i + 1) * Km.s] = E
        return out

    def pin_tower(self, levels):
        """Register composite embeddings along a chain of levels."""
        fields = [self.level_field(n) for n in levels]
        for a, b, c in zip(fields, fields[1:], fields[2:]):
            register_composite(a, b, c)


def _block_diag(mats):
    d = sum(m.shape[0] for m in mats)
    out = np.zeros((d, d), dtype=np.int64)
    at = 0
    for m in mats:
        k = m.shape[0]
        out[at : at + k, at : at + k] = m
        at += k
    return out


def fake_heisenberg_scheme(p, s, coeffs=None):
    """The fake Heisenberg Lie ring scheme over F_q, q = p^s.

    Coordinates (x, z) with [(x, z), (y, w)] = (0, B(x, y)),
    B(x, y) = sum a_ij x^(p^i) y^(p^j), default B(x, y) = x^p y - x y^p.
    coeffs: {(i, j): a_ij in F_q} with a_ij = -a_ji (and a_ii = 0).
    """
    if p == 2:
        raise ValueError("fake Heisenberg groups need p > 2")
    F = FqField(p, s)
    if coeffs is None:
        coeffs = {(1, 0): F.one, (0, 1): F.neg(F.one)}
    terms = {}
    for (i, j), a in coeffs.items():
        a = F.element(a) if isinstance(a, (int, tuple)) else a
        if (j, i) in coeffs:
            aj = coeffs[(j, i)]
            aj = F.element(aj) if isinstance(aj, (int, tuple)) else aj
            if F.add(a, aj) != F.zero and i != j:
                raise ValueError("coefficients must be antisymmetric")
        if i == j and a != F.zero:
            raise ValueError("diagonal coefficients must vanish")
        if a != F.zero:
            terms.setdefault((i, j), {})[(0, 0)] = {1: a}
    return FqLieScheme(F, 2, terms, name="fakeheis(p=%d,s=%d)" % (p, s))


def fake_heisenberg(p, s, coeffs=None):
    """g(F_q) itself: an F_p Lie ring of dimension 2s, class <= 2."""
    return fake_heisenberg_scheme(p, s, coeffs).at_level(1)


def ul_lie_scheme(n, p, s=1):
    """The Lie algebra of strictly upper triangular n x n matrices over F_q
    as an honest (untwisted) FqLieScheme."""
    F = FqField(p, s)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    idx = {pr: t for t, pr in enumerate(pairs)}
    table = {}
    for a, (i, j) in enumerate(pairs):
        for b, (k, l) in enumerate(pairs):
            row = {}
            if j == k:
                row[idx[(i, l)]] = F.one
            if l == i:
                tgt = idx[(k, j)]
                row[tgt] = F.add(row.get(tgt, F.zero), F.neg(F.one))
            row = {k2: v for k2, v in row.items() if v != F.zero}
            if row:
                table[(a, b)] = row
    return FqLieScheme(F, len(pairs), {(0, 0): table}, name="ul%d(q=%d^%d)" % (n, p, s))


def abelian_scheme(p, s, dim_q):
    """G_a^dim_q over F_q as a (trivial-bracket) scheme."""
    return FqLieScheme(FqField(p, s), dim_q, {}, name="Ga^%d" % dim_q)


# -- associative algebras and algebra groups ------------------------------------


class AssocAlgebra:
    """Nilpotent associative algebra over F_p by structure constants."""

    def __init__(self, p, constants, labels=None):
        constants = np.asarray(constants, dtype=np.int64) % p
        self.p = p
        self.dim = constants.shape[0]
        self.constants = constants
        self.labels = labels
        self._validate()

    def _validate(self):
        d = self.dim
        for i in range(d):
            for j in range(d):
                for k in range(d):
                    ei, ej, ek = (np.eye(d, dtype=np.int64)[t] for t in (i, j, k))
                    lhs = self.product(self.product(ei, ej), ek)
                    rhs = self.product(ei, self.product(ej, ek))
                    if (lhs != rhs).any():
                        raise ValueError("product is not associative at (%d,%d,%d)" % (i, j, k))
        # nilpotency: powers of the whole algebra must vanish
        span = np.eye(d, dtype=np.int64)
        self.nil_index = 1
        cur = span
        while cur.shape[0]:
            rows = []
            for v in cur:
                for w in span:
                    u = self.product(v, w)
                    if u.any():
                        rows.append(u)
            if not rows:
                break
            cur, _ = linalg.rref(np.array(rows), self.p)
            self.nil_index += 1
            if self.nil_index > d + 1:
                raise ValueError("algebra is not nilpotent")

    @property
    def order(self):
        return self.p**self.dim

    def product(self, x, y):
        return np.einsum("i,j,ijk->k", np.asarray(x) % self.p, np.asarray(y) % self.p, self.constants) % self.p

    def product_bulk(self, X, Y):
        return np.einsum("ni,nj,ijk->nk", np.asarray(X) % self.p, np.asarray(Y) % self.p, self.constants) % self.p

    def lie_ring(self):
        """The associated Lie ring [a, b] = ab - ba."""
        C = (self.constants - np.swapaxes(self.constants, 0, 1)) % self.p
        return LieRing(self.p, C)

    def group_inv_vec(self, x):
        """Inverse in 1+A via the alternating geometric series
        -x + x^2 - x^3 + ..."""
        x = np.asarray(x, dtype=np.int64) % self.p
        acc = np.zeros(self.dim, dtype=np.int64)
        power = x.copy()
        sign = -1
        while power.any():
            acc = (acc + sign * power) % self.p
            power = self.product(power, x)
            sign = -sign
        return acc


def strict_upper_algebra(n, p, s=1):
    """Strictly upper triangular n x n matrices over F_{p^s}, restricted to
    an F_p-algebra of dimension s * n(n-1)/2."""
    F = FqField(p, s)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    d = len(pairs) * s
    basis = []
    for (i, j) in pairs:
        for t in range(s):
            basis.append((i, j, t))
    index = {b: t for t, b in enumerate(basis)}
    C = np.zeros((d, d, d), dtype=np.int64)
    kbasis = [tuple(1 if r == t else 0 for r in range(s)) for t in range(s)]
    for a, (i, j, t) in enumerate(basis):
        for b, (k, l, u) in enumerate(basis):
            if j != k:
                continue
            val = F.mul(kbasis[t], kbasis[u])
            for r in range(s):
                if val[r]:
                    C[a, b, index[(i, l, r)]] = val[r]
    alg = AssocAlgebra(p, C)
    alg.field = F
    alg.pairs = pairs
    return alg


def algebra_group(A, spot_check=True):
    """The group 1 + A with x o y = x + y + xy, as a FiniteGroup."""
    p, d = A.p, A.dim

    def mult(i, j):
        x = linalg.decode_indices(np.int64(i), d, p)
        y = linalg.decode_indices(np.int64(j), d, p)
        z = (x + y + A.product(x, y)) % p
        return int(linalg.encode_vectors(z, p))

    def inv(i):
        x = linalg.decode_indices(np.int64(i), d, p)
        return int(linalg.encode_vectors(A.group_inv_vec(x), p))

    def mult_bulk(I, J):
        X = linalg.decode_indices(np.asarray(I, dtype=np.int64), d, p)
        Y = linalg.decode_indices(np.asarray(J, dtype=np.int64), d, p)
        Z = (X + Y + A.product_bulk(X, Y)) % p
        return linalg.encode_vectors(Z, p)

    gens = [
        int(linalg.encode_vectors(np.eye(d, dtype=np.int64)[k], p)) for k in range(d)
    ]
    G = FiniteGroup(
        A.order,
        mult,
        inv=inv,
        identity=0,
        gens=gens,
        mult_bulk=mult_bulk,
        name="1+A",
    )
    G.algebra = A
    if spot_check:
        G.spot_check_axioms()
    return G


def ul_group(n, q):
    """UL_n(F_q) as an algebra group (q = p^s)."""
    p, s = _split_prime_power(q)
    return algebra_group(strict_upper_algebra(n, p, s))


def _split_prime_power(q):
    for p in range(2, q + 1):
        if q % p == 0:
            s = 0
            m = q
            while m % p == 0:
                m //= p
                s += 1
            if m != 1:
                raise ValueError("%d is not a prime power" % q)
            return p, s
    raise ValueError("bad q")


# -- generalized unipotent symplectic groups -------------------------------------


def sp_a_sigma(A, sigma, check_bijection=True):
    """Sp(A, sigma) = {x in 1+A : x + sigma(x) + x sigma(x) = 0}.

    sigma: d x d matrix over Z/p of an anti-involution of A (verified).
    For odd p the order is checked against |A_-| via the explicit square
    root bijection x_+ = -1 + (1 + x_-^2)^(1/2).
    """
    p, d = A.p, A.dim
    S = np.asarray(sigma, dtype=np.int64) % p
    # sigma axioms
    if (linalg.matmul(S, S, p) != np.eye(d, dtype=np.int64)).any():
        raise ValueError("sigma^2 != 1")
    for i in range(d):
        for j in range(d):
            ei = np.eye(d, dtype=np.int64)[i]
            ej = np.eye(d, dtype=np.int64)[j]
            lhs = (S @ A.product(ei, ej)) % p
            rhs = A.product((S @ ej) % p, (S @ ei) % p)
            if (lhs != rhs).any():
                raise ValueError("sigma is not an anti-homomorphism")
    members = []
    for idx in range(A.order):
        x = linalg.decode_indices(np.int64(idx), d, p)
        sx = (S @ x) % p
        if not ((x + sx + A.product(x, sx)) % p).any():
            members.append(idx)
    members = np.array(sorted(members), dtype=np.int64)
    if p > 2 and check_bijection:
        minus_dim = linalg.kernel((S + np.eye(d, dtype=np.int64)) % p, p).shape[0]
        if len(members) != p**minus_dim:
            raise AssertionError("|Sp(A,sigma)| != |A_-|")
        _check_sqrt_bijection(A, S, members)
    pos = {int(e): k for k, e in enumerate(members)}

    def mult(i, j):
        x = linalg.decode_indices(members[i], d, p)
        y = linalg.decode_indices(members[j], d, p)
        z = (x + y + A.product(x, y)) % p
        return pos[int(linalg.encode_vectors(z, p))]

    def inv(i):
        x = linalg.decode_indices(members[i], d, p)
        return pos[int(linalg.encode_vectors(A.group_inv_vec(x), p))]

    G = FiniteGroup(len(members), mult, inv=inv, identity=pos[0], name="Sp(A,sigma)")
    G.members = members
    G.algebra = A
    return G


def _binomial_half(j):
    """The rational binomial coefficient C(1/2, j)."""
    num = Fraction(1)
    half = Fraction(1, 2)
    for t in range(j):
        num *= half - t
    return num / math.factorial(j)


def _check_sqrt_bijection(A, S, members):
    """1 + x  <->  x_-, recovering x_+ = -1 + (1 + x_-^2)^(1/2)."""
    p, d = A.p, A.dim
    minus_proj_kernel = (S + np.eye(d, dtype=np.int64)) % p
    seen = set()
    inv2 = pow(2, -1, p)
    for idx in members:
        x = linalg.decode_indices(np.int64(idx), d, p)
        x_minus = ((x - (S @ x)) * inv2) % p
        key = int(linalg.encode_vectors(x_minus, p))
        if key in seen:
            raise AssertionError("x -> x_- is not injective on Sp(A, sigma)")
        seen.add(key)
        # x_+ via the truncated Newton series on x_-^2
        sq = A.product(x_minus, x_minus)
        acc = np.zeros(d, dtype=np.int64)
        term = sq.copy()
        j = 1
        while term.any():
            coeff = _binomial_half(j)
            c = (coeff.numerator * pow(coeff.denominator, -1, p)) % p
            acc = (acc + c * term) % p
            term = A.product(term, sq)
            j += 1
        x_plus = ((x + (S @ x)) * inv2) % p
        if (acc != x_plus).any():
            raise AssertionError("square-root recovery of x_+ failed")


def usp4_flag_algebra(q):
    """The strictly-upper flag algebra of Sp_4 with the antidiagonal form,
    and the anti-involution sigma(M) = W^-1 M^t W for W = JS."""
    p, s = _split_prime_power(q)
    A = strict_upper_algebra(4, p, s)
    W = np.zeros((4, 4), dtype=np.int64)
    signs = [-1, 1, -1, 1]
    for i in range(4):
        W[i, 3 - i] = signs[i] % p
    Winv = linalg.inverse(W, p)
    d = A.dim
    S = np.zeros((d, d), dtype=np.int64)
    F = A.field
    basis = [(i, j, t) for (i, j) in A.pairs for t in range(F.s)]
    index = {bb: k for k, bb in enumerate(basis)}
    kbasis = [tuple(1 if r == t else 0 for r in range(F.s)) for t in range(F.s)]
    for b, (i, j, t) in enumerate(basis):
        # sigma(c E_ij) = c * Winv E_ji W  (field scalars commute)
        T = np.zeros((4, 4), dtype=np.int64)
        T[j, i] = 1
        out = (Winv @ T @ W) % p
        for k in range(4):
            for l in range(4):
                if out[k, l] and k < l:
                    c = F.scalar_mul(out[k, l], kbasis[t])
                    for r in range(F.s):
                        if c[r]:
                            S[index[(k, l, r)], b] = c[r]
                elif out[k, l] and k >= l:
                    raise AssertionError("sigma left the strict upper algebra")
    return A, S


def usp4_via_sp(q):
    """USp4(F_q) as Sp(A, sigma) of the flag algebra."""
    A, S = usp4_flag_algebra(q)
    return sp_a_sigma(A, S)


# -- USp4 as quadruples ------------------------------------------------------------


class USp4:
    """USp4(F_q) on quadruples [a, b, c, d]: the matrix
    [[1,a,b,c],[0,1,d,ad-b],[0,0,1,a],[0,0,0,1]], which in characteristic 2
    is literally the displayed [a,b,c,d] form."""

    def __init__(self, q):
        p, s = _split_prime_power(q)
        self.q = q
        self.field = FqField(p, s)
        self.n = q**4

    def index(self, quad):
        F = self.field
        out = 0
        for x in reversed(quad):
            out = out * self.q + F.index(x)
        return out

    def from_index(self, idx):
        F = self.field
        out = []
        for _ in range(4):
            out.append(F.from_index(idx % self.q))
            idx //= self.q
        return tuple(out)

    def matrix(self, quad):
        F = self.field
        a, b, c, d = quad
        e = F.sub(F.mul(a, d), b)
        rows = [
            [F.one, a, b, c],
            [F.zero, F.one, d, e],
            [F.zero, F.zero, F.one, a],
            [F.zero, F.zero, F.zero, F.one],
        ]
        return rows

    def mult_quads(self, x, y):
        F = self.field
        a, b, c, d = x
        a2, b2, c2, d2 = y
        a3 = F.add(a, a2)
        b3 = F.add(F.add(b, b2), F.mul(a, d2))
        inner = F.sub(F.mul(a2, d2), b2)
        c3 = F.add(F.add(c, c2), F.add(F.mul(a, inner), F.mul(b, a2)))
        d3 = F.add(d, d2)
        return (a3, b3, c3, d3)

    def group(self, spot_check=True):
        def mult(i, j):
            return self.index(self.mult_quads(self.from_index(i), self.from_index(j)))

        F = self.field
        gens = []
        for slot in range(4):
            for t in range(F.s):
                quad = [F.zero] * 4
                quad[slot] = F.from_index(self.field.p**t)
                gens.append(self.index(tuple(quad)))
        G = FiniteGroup(self.n, mult, identity=0, gens=gens, name="USp4(%d)" % self.q)
        G.usp4 = self
        if spot_check:
            G.spot_check_axioms()
        return G

    # semidirect decomposition U = H lt-semidirect A with H = {(a,0,0,0)}
    # and A = {(0,b,c,d)}
    def semidirect_data(self):
        F = self.field
        s = F.s
        H = AbelianGroup([F.p] * s)
        A = AbelianGroup([F.p] * (3 * s))

        def h_elem(htup):
            return tuple(htup)

        def to_field(tup):
            return tuple(int(t) % F.p for t in tup)

        def act(htup, atup):
            # conjugation of (0,b,c,d) by (h,0,0,0) inside USp4
            h = to_field(htup)
            b, c, d = (
                to_field(atup[:s]),
                to_field(atup[s : 2 * s]),
                to_field(atup[2 * s :]),
            )
            g = (h, F.zero, F.zero, F.zero)
            x = (F.zero, b, c, d)
            ginv = (F.neg(h), F.zero, F.zero, F.zero)
            y = self.mult_quads(self.mult_quads(g, x), ginv)
            if y[0] != F.zero:
                raise AssertionError("A is not normal (bug)")
            return tuple(y[1]) + tuple(y[2]) + tuple(y[3])

        def pair_to_index(htup, atup):
            h = to_field(htup)
            b, c, d = (
                to_field(atup[:s]),
                to_field(atup[s : 2 * s]),
                to_field(atup[2 * s :]),
            )
            # (h,0,0,0) * (0,b,c,d)
            quad = self.mult_quads((h, F.zero, F.zero, F.zero), (F.zero, b, c, d))
            return self.index(quad)

        return H, A, act, pair_to_index


def usp4(q, spot_check=True):
    """USp4(F_q) as a FiniteGroup of quadruples."""
    return USp4(q).group(spot_check=spot_check)


def usp4_little_groups_table(q):
    """Character table via the little-groups method, reindexed onto the
    quadruple group so it is directly comparable with other tables."""
    U = USp4(q)
    G = U.group(spot_check=False)
    H, A, act, pair_to_index = U.semidirect_data()
    table = little_groups(H, A, act)
    Gsemi = table.group
    # verify the index correspondence is an isomorphism onto U
    n = G.n
    to_u = np.empty(n, dtype=np.int64)
    for i in range(n):
        h, a = Gsemi.unpack(i)
        to_u[i] = pair_to_index(h, a)
    if len(set(to_u.tolist())) != n:
        raise AssertionError("semidirect correspondence is not a bijection")
    for g1 in Gsemi.generators():
        for g2 in Gsemi.generators():
            if to_u[Gsemi.mult(g1, g2)] != G.mult(int(to_u[g1]), int(to_u[g2])):
                raise AssertionError("semidirect correspondence is not a homomorphism")
    cd_u = G.conjugacy_classes()
    cd_s = table.class_data
    rows = []
    for r in table.rows:
        values = [None] * cd_u.num_classes
        for j in range(cd_s.num_classes):
            ju = cd_u.class_of[to_u[int(cd_s.reps[j])]]
            values[ju] = r.values[j]
        if any(v is None for v in values):
            raise AssertionError("class correspondence incomplete")
        rows.append(ClassFunction(cd_u, tuple(values)))
    return CharacterTable(cd_u, rows)


def usp4_lusztig_table(q, psi_k=1):
    """Lusztig's golden table for USp4(F_q), q = 2^s.

    (i)   q^2 linear characters psi0(x a + y d);
    (ii)  q-1 of degree q supported on [0,b,c,0] with value q psi0(x b);
    (iii) q-1 of degree q supported on [0,b,c,0] with value q psi0(x c);
    (iv)  4(q-1)^2 of degree q/2 indexed by (a0, d0, eps1, eps2):
          [a,b,c,d] -> (q/2) eps1(a) eps2(d) psi0(a0^-2 d0^-1 (ba + b a0 + c))
          when a in {0, a0} and d in {0, d0}, else 0.
    """
    U = USp4(q)
    F = U.field
    if F.p != 2:
        raise ValueError("the Lusztig table needs q = 2^s")
    G = U.group(spot_check=False)
    cd = G.conjugacy_classes()

    def psi0(x):
        # tr-composed additive character: values are +-1
        return -1 if (psi_k * F.trace_to_prime(x)) % 2 else 1

    formulas = []
    for xi in range(q):
        for yi in range(q):
            x, y = F.from_index(xi), F.from_index(yi)

            def lin(quad, x=x, y=y):
                a, b, c, d = quad
                return psi0(F.add(F.mul(x, a), F.mul(y, d)))

            formulas.append(lin)
    for family in ("b", "c"):
        for xi in range(1, q):
            x = F.from_index(xi)

            def mid(quad, x=x, family=family):
                a, b, c, d = quad
                if a != F.zero or d != F.zero:
                    return 0
                return q * psi0(F.mul(x, b if family == "b" else c))

            formulas.append(mid)
    half = q // 2
    for a0i in range(1, q):
        for d0i in range(1, q):
            a0, d0 = F.from_index(a0i), F.from_index(d0i)
            coef = F.mul(F.inv(F.mul(a0, a0)), F.inv(d0))
            for e1 in (1, -1):
                for e2 in (1, -1):

                    def small(quad, a0=a0, d0=d0, coef=coef, e1=e1, e2=e2):
                        a, b, c, d = quad
                        if a not in (F.zero, a0) or d not in (F.zero, d0):
                            return 0
                        s1 = e1 if a == a0 else 1
                        s2 = e2 if d == d0 else 1
                        arg = F.mul(
                            coef, F.add(F.add(F.mul(b, a), F.mul(b, a0)), c)
                        )
                        return half * s1 * s2 * psi0(arg)

                    formulas.append(small)
    # class constancy: every displayed formula is constant on classes
    values = np.empty((len(formulas), G.n), dtype=np.int64)
    for i in range(G.n):
        quad = U.from_index(i)
        for ridx, fam in enumerate(formulas):
            values[ridx, i] = fam(quad)
    for j in range(cd.num_classes):
        members = np.nonzero(cd.class_of == j)[0]
        col = values[:, members]
        if (col != col[:, :1]).any():
            raise AssertionError("a Lusztig formula is not a class function")
    rows = [
        ClassFunction(cd, tuple(Cyclotomic.rational(int(v)) for v in values[ridx, cd.reps]))
        for ridx in range(len(formulas))
    ]
    table = CharacterTable(cd, rows)
    table.group = G
    return table


def gutkin_witness(A, chi, G=None, cd=None):
    """A subalgebra B and a linear character of B^x inducing chi, by
    exhaustive search over multiplicatively closed subspaces."""
    p, d = A.p, A.dim
    if d > 4 or p > 3:
        raise ValueError("search budget: dim A <= 4 over F_2 or F_3")
    G = G or algebra_group(A, spot_check=False)
    cd = cd or G.conjugacy_classes()
    deg = int(chi.degree.rational_value())
    target_dim = d - round(math.log(deg, p))
    if p**target_dim * deg != p**d:
        raise ValueError("degree does not divide the group order compatibly")
    for rows in _subspaces(d, target_dim, p):
        closed = True
        for i in range(rows.shape[0]):
            for j in range(rows.shape[0]):
                v = A.product(rows[i], rows[j])
                if v.any() and not linalg.row_space_contains(rows, v, p):
                    closed = False
                    break
            if not closed:
                break
        if not closed:
            continue
        sub_elems = np.sort(
            linalg.encode_vectors(linalg.enumerate_row_space(rows, p), p)
        )
        found = _linear_inducing(G, cd, chi, sub_elems)
        if found is not None:
            return rows, found
    return None


def _linear_inducing(G, cd, chi, sub_elems):
    """A linear character of the subgroup inducing chi, or None.

    Linear characters are pulled back from the Dixon table of the
    abelianization of the subgroup (which may have exponent p^2, so the
    elementary-abelian machinery does not apply)."""
    from .dixon import dixon_table
    from .groups import induce_character
    from .heisenberg import _subgroup_group

    H = _subgroup_group(G, sub_elems)
    D = H.derived_subgroup()
    Q, coset_rep, qreps = H.quotient(D)
    qtable = dixon_table(Q)
    qcd = qtable.class_data
    pos = {int(e): i for i, e in enumerate(H.parent_elems)}
    for row in qtable.rows:
        def lam(e, row=row):
            h = pos[int(e)]
            return row.values[qcd.class_of[int(np.searchsorted(qreps, coset_rep[h]))]]

        ind = induce_character(G, sub_elems, lam, class_data=cd)
        if ind == chi:
            return row
    return None


def _subspaces(d, k, p):
    """All k-dim subspaces of F_p^d as RREF rows (canonical, exhaustive)."""
    if k == 0:
        yield np.zeros((0, d), dtype=np.int64)
        return
    for pivots in itertools.combinations(range(d), k):
        free_cols = [
            (r, c)
            for r in range(k)
            for c in range(d)
            if c > pivots[r] and c not in pivots
        ]
        for assign in itertools.product(range(p), repeat=len(free_cols)):
            rows = np.zeros((k, d), dtype=np.int64)
            for r in range(k):
                rows[r, pivots[r]] = 1
            for (r, c), v in zip(free_cols, assign):
                rows[r, c] = v
            yield rows
