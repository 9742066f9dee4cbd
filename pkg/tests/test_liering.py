import numpy as np
import pytest

from nilorbit.battery import appendix_h2_ring
from nilorbit.families import fake_heisenberg, fake_heisenberg_scheme, ul_lie_scheme
from nilorbit.liering import (
    LieRing,
    Subspace,
    abelian_ring,
    from_bracket_table,
    heisenberg_ring,
)
from nilorbit.packets import TowerInstance


def test_validate_examples():
    h3 = heisenberg_ring(3)
    rep = h3.validate()
    assert rep.ok and rep.nilpotence_class == 2 and rep.lazard_ok

    C = np.zeros((2, 2, 2))
    C[0, 1, 0] = 1
    C[1, 0, 0] = 1  # not antisymmetric
    bad = LieRing(3, C)
    rep = bad.validate()
    assert not rep.ok
    assert rep.failures[0][0] in ("alternating", "antisymmetric")

    ul4 = ul_lie_scheme(4, 5).at_level(1)
    rep = ul4.validate()
    assert rep.ok and rep.nilpotence_class == 3
    assert [s.dim for s in ul4.lower_central_series()] == [6, 3, 1, 0]


def test_jacobi_failure_named():
    # [e1,e2]=e3, [e1,e3]=e1 breaks Jacobi on (1,2,3)
    C = np.zeros((3, 3, 3), dtype=np.int64)
    C[0, 1, 2] = 1
    C[1, 0, 2] = -1
    C[0, 2, 0] = 1
    C[2, 0, 0] = -1
    rep = LieRing(5, C).validate()
    assert not rep.ok
    assert any(f[0] == "jacobi" for f in rep.failures)


def test_lower_central_series_examples():
    assert [s.dim for s in abelian_ring(5, 3).lower_central_series()] == [3, 0]
    assert [s.dim for s in heisenberg_ring(3).lower_central_series()] == [3, 1, 0]
    h2 = appendix_h2_ring(5)
    assert [s.dim for s in h2.lower_central_series()] == [4, 2, 1, 0]


def test_largest_ideal_within():
    h2 = appendix_h2_ring(5)
    assert h2.largest_ideal_within(h2.full_subspace()).dim == 4
    W = h2.subspace(np.array([[0, 1, 0, 0], [0, 0, 0, 1]]))  # span(y, t)
    ideal = h2.largest_ideal_within(W)
    assert ideal.rows.tolist() == [[0, 0, 0, 1]]  # span(t)
    ctr = h2.center()
    assert h2.largest_ideal_within(ctr) == ctr


def test_group_law_examples():
    h5 = heisenberg_ring(5)
    assert h5.group_mul([1, 0, 0], [0, 1, 0]).tolist() == [1, 1, 3]
    x = np.array([2, 3, 1])
    assert not h5.group_mul(x, h5.group_inv(x)).any()
    ab = abelian_ring(5, 3)
    assert ab.group_mul([1, 2, 3], [4, 4, 4]).tolist() == [0, 1, 2]


def test_group_axioms_exhaustive_and_powers():
    h3 = heisenberg_ring(3)
    pts = h3.all_elements()
    n = len(pts)
    # associativity on all n^3 triples via bulk evaluation
    AS = np.repeat(pts, n * n, axis=0)
    BS = np.tile(np.repeat(pts, n, axis=0), (n, 1))
    CS = np.tile(pts, (n * n, 1))
    lhs = h3.group_mul_bulk(h3.group_mul_bulk(AS, BS), CS)
    rhs = h3.group_mul_bulk(AS, h3.group_mul_bulk(BS, CS))
    assert (lhs == rhs).all()
    # identity and inverse exhaustively
    zero = np.zeros_like(pts)
    assert (h3.group_mul_bulk(pts, zero) == pts).all()
    assert not h3.group_mul_bulk(pts, (-pts) % 3).any()
    # exponent p: x^(*p) = 0
    for x in pts:
        y = x.copy()
        for _ in range(h3.p - 1):
            y = h3.group_mul(y, x)
        assert not y.any()


def test_coadjoint_matrices():
    h3 = heisenberg_ring(3)
    assert (h3.coadjoint_matrix(np.zeros(3, dtype=np.int64)) == np.eye(3)).all()
    assert (h3.coadjoint_matrix(np.array([0, 0, 2])) == np.eye(3)).all()
    # action law on all pairs
    pts = h3.all_elements()
    for a in pts[:12]:
        for b in pts[:12]:
            lhs = h3.coadjoint_matrix(h3.group_mul(a, b))
            rhs = (h3.coadjoint_matrix(a) @ h3.coadjoint_matrix(b)) % 3
            assert (lhs == rhs).all()


def test_fake_heisenberg_coadjoint_closed_form():
    # Ad*(x, z): (u, v) -> (u + x^(1/p) v^(1/p) - x^p v, v), exhaustive over
    # all points of F_q and F_{q^2} (vectorized over the dual per x)
    scheme = fake_heisenberg_scheme(3, 2)
    from nilorbit import linalg

    for level in (1, 2):
        tower = TowerInstance(scheme, level)
        ring = tower.ring
        K = tower.field
        p, s = K.p, K.s
        n = K.order
        U = linalg.all_vectors(s, p)  # all u coords
        pairs_u = np.repeat(U, n, axis=0)
        pairs_v = np.tile(U, (n, 1))
        lam = (tower.gram_full @ np.concatenate([pairs_u, pairs_v], axis=1).T).T % p
        vp_inv = K.bulk_pow(pairs_v, p ** (s - 1))  # v^(1/p)
        for xi in range(n):
            x = K.from_index(xi)
            gvec = np.zeros(ring.dim, dtype=np.int64)
            gvec[:s] = x
            M = ring.coadjoint_matrix(gvec)
            img_u = ((tower.gram_full_inv @ (M @ lam.T % p)).T % p)[:, :s]
            xinv = np.array(K.frobenius_inv(x), dtype=np.int64)
            xp = np.array(K.pow(x, p), dtype=np.int64)
            shift = (
                K.bulk_mul(np.tile(xinv, (len(pairs_v), 1)), vp_inv)
                - K.bulk_mul(np.tile(xp, (len(pairs_v), 1)), pairs_v)
            ) % p
            assert ((pairs_u + shift) % p == img_u).all()


def test_bch_associativity_exhaustive_and_random():
    # exhaustive on |g| = 5^3; randomized triples at 5^4
    h5 = heisenberg_ring(5)
    pts = h5.all_elements()
    n = len(pts)
    AS = np.repeat(pts, n * n, axis=0)
    BS = np.tile(np.repeat(pts, n, axis=0), (n, 1))
    CS = np.tile(pts, (n * n, 1))
    lhs = h5.group_mul_bulk(h5.group_mul_bulk(AS, BS), CS)
    rhs = h5.group_mul_bulk(AS, h5.group_mul_bulk(BS, CS))
    assert (lhs == rhs).all()
    h2 = appendix_h2_ring(5)
    rng = np.random.default_rng(4)
    A = rng.integers(0, 5, (20000, 4))
    B = rng.integers(0, 5, (20000, 4))
    C = rng.integers(0, 5, (20000, 4))
    lhs = h2.group_mul_bulk(h2.group_mul_bulk(A, B), C)
    rhs = h2.group_mul_bulk(A, h2.group_mul_bulk(B, C))
    assert (lhs == rhs).all()


def test_frobenius_is_group_automorphism():
    ring = fake_heisenberg(3, 2)
    F = ring.fq.frobenius_matrix
    pts = ring.all_elements()
    rng = np.random.default_rng(1)
    for _ in range(200):
        a, b = pts[rng.integers(0, len(pts), 2)]
        lhs = (F @ ring.group_mul(a, b)) % 3
        rhs = ring.group_mul((F @ a) % 3, (F @ b) % 3)
        assert (lhs == rhs).all()


def test_element_index_roundtrip():
    ring = heisenberg_ring(3)
    assert ring.element_index(np.zeros(3, dtype=np.int64)) == 0
    r2 = abelian_ring(3, 2)
    assert r2.element_index(np.array([2, 1])) == 5
    for idx in range(ring.order):
        assert ring.element_index(ring.element_from_index(idx)) == idx
    with pytest.raises(IndexError):
        ring.element_from_index(27)


def test_subspace_operations():
    p = 5
    A = Subspace(np.array([[1, 0, 0], [0, 1, 0]]), p)
    B = Subspace(np.array([[0, 1, 1]]), p)
    assert A.sum(B).dim == 3
    inter = A.intersect(B)
    assert inter.dim == 0
    C = Subspace(np.array([[0, 1, 0], [0, 0, 1]]), p)
    assert A.intersect(C).rows.tolist() == [[0, 1, 0]]
    assert A.contains(np.array([2, 3, 0]))
    assert not A.contains(np.array([0, 0, 1]))


def test_subring_and_quotient():
    h2 = appendix_h2_ring(5)
    sub, rows = h2.subring(h2.subspace(np.array([[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])))
    assert sub.validate().ok
    assert sub.nilpotence_class() == 1  # span(y,z,t) is abelian in H.2
    q, project = h2.quotient(h2.subspace(np.array([[0, 0, 0, 1]])))
    assert q.dim == 3 and q.validate().ok
    assert q.nilpotence_class() == 2
