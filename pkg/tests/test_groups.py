from fractions import Fraction

import numpy as np
import pytest

from nilorbit import orbits as ob
from nilorbit.chartable import ClassFunction, convolve, regular_character, trivial_character
from nilorbit.cyclo import Cyclotomic
from nilorbit.dixon import dixon_table
from nilorbit.families import ul_group, usp4
from nilorbit.groups import (
    AbelianGroup,
    build_group,
    induce_character,
    little_groups,
    twisted_classes,
)
from nilorbit.liering import heisenberg_ring


def test_build_group_examples():
    G6 = build_group(lambda i, j: (i + j) % 6, 6, gens=[1], inv=lambda i: (-i) % 6)
    assert G6.conjugacy_classes().num_classes == 6
    # UL3(F_3) has order 27 and 11 classes (3 central + 8 of size 3)
    u33 = ul_group(3, 3)
    cd = u33.conjugacy_classes()
    assert u33.n == 27 and cd.num_classes == 11
    from collections import Counter

    assert Counter(cd.sizes.tolist()) == {1: 3, 3: 8}
    # USp4(F_2): class count equals irreducible count from the oracle
    G = usp4(2)
    assert G.conjugacy_classes().num_classes == len(dixon_table(G).rows)


def test_center_derived_quotient():
    u33 = ul_group(3, 3)
    assert len(u33.center()) == 3
    D = u33.derived_subgroup()
    assert len(D) == 3
    Q, coset_rep, reps = u33.quotient(D)
    assert Q.n == 9 and Q.is_abelian()


def test_class_function_ops():
    h3 = heisenberg_ring(3)
    table, _ = ob.orbit_method_table(h3)
    cd = table.class_data
    G = ob.lazard_group(h3)
    for row in table.rows:
        assert row.inner(row) == 1
    assert table.rows[0].inner(table.rows[1]) == 0
    assert trivial_character(cd).inner(regular_character(cd)) == 1
    # chi * chi = (|G| / deg) chi and chi * chi' = 0
    chi = table.rows[-1]
    conv = convolve(chi, chi, G)
    scale = Fraction(cd.n) / chi.degree.rational_value()
    assert conv == chi.scale(scale)
    assert convolve(table.rows[0], table.rows[-1], G) == ClassFunction(
        cd, tuple([Cyclotomic.rational(0)] * cd.num_classes)
    )


def test_induce_character_examples():
    h3 = heisenberg_ring(3)
    G = ob.lazard_group(h3)
    cd = G.conjugacy_classes()
    table, _ = ob.orbit_method_table(h3)
    # Ind of trivial character of the trivial subgroup = regular character
    ind = induce_character(G, np.array([0]), lambda e: Cyclotomic.rational(1), class_data=cd)
    assert ind == regular_character(cd)
    # Heisenberg F_3: Ind of chi_f from a 9-element polarization subgroup is
    # an irreducible of degree 3
    H = np.sort(
        np.array([h3.element_index(v) for v in h3.subspace(np.array([[0, 1, 0], [0, 0, 1]])).points()])
    )
    f = np.array([0, 0, 1])

    def chi_f(idx):
        h = h3.element_from_index(int(idx))
        return Cyclotomic.zeta(3, int(f @ h) % 3)

    ind = induce_character(G, H, chi_f, class_data=cd)
    assert ind.degree == Cyclotomic.rational(3)
    assert any(ind == row for row in table.rows)


def test_frobenius_reciprocity():
    h3 = heisenberg_ring(3)
    G = ob.lazard_group(h3)
    cd = G.conjugacy_classes()
    table, _ = ob.orbit_method_table(h3)
    H = np.sort(
        np.array([h3.element_index(v) for v in h3.subspace(np.array([[1, 0, 0], [0, 0, 1]])).points()])
    )
    rng = np.random.default_rng(3)
    for f_vec in rng.integers(0, 3, (4, 3)):
        def chi_H(idx, f_vec=f_vec):
            h = h3.element_from_index(int(idx))
            return Cyclotomic.zeta(3, int(f_vec @ h) % 3)

        ind = induce_character(G, H, chi_H, class_data=cd)
        for chi_G in table.rows[::4]:
            lhs = ind.inner(chi_G)
            # <chi_H, Res chi_G>_H computed directly
            acc = Cyclotomic.rational(0)
            for idx in H:
                g_inv = G.inv(int(idx))
                acc = acc + chi_H(int(idx)) * chi_G.values[cd.class_of[g_inv]]
            rhs = acc * Fraction(1, len(H))
            assert lhs == rhs


def test_little_groups_trivial_action():
    H = AbelianGroup([2, 2])
    A = AbelianGroup([3])
    table = little_groups(H, A, lambda h, a: a)
    assert sorted(table.degree_multiset().items()) == [(1, 12)]
    assert table.verify()


def test_little_groups_degrees_are_orbit_sizes():
    # C_2 acting on C_3 by inversion: S_3; degrees 1,1,2
    H = AbelianGroup([2])
    A = AbelianGroup([3])

    def act(h, a):
        return a if h[0] == 0 else A.neg(a)

    table = little_groups(H, A, act)
    assert sorted(table.degrees) == [1, 1, 2]
    assert table.verify()


def test_twisted_classes_counts():
    # abelian G, phi = inversion: #classes = #fixed characters
    G6 = build_group(lambda i, j: (i + j) % 6, 6, gens=[1], inv=lambda i: (-i) % 6)
    table = dixon_table(G6)
    phi = np.array([(-i) % 6 for i in range(6)])
    rep = twisted_classes(G6, phi, table=table)
    assert rep["counts_match"]
    # identity: ordinary classes
    rep_id = twisted_classes(G6, np.arange(6), table=table)
    assert rep_id["num_classes"] == 6 and rep_id["counts_match"]
    with pytest.raises(ValueError):
        twisted_classes(G6, np.array([0, 2, 1, 3, 4, 5]), table=table)


def test_minimal_ideal_elements_via_monomial_reps():
    # psi_V(f) acts as f on V and 0 on W, tested with monomial matrices
    from nilorbit import polar
    from nilorbit.twisted import _dense_matrix, _mat_mul

    h3 = heisenberg_ring(3)
    cd = ob.conjugacy_class_data(h3)
    table, orbits = ob.orbit_method_table(h3)
    flag = polar.flag_from_weights(h3)
    nonlinear = [
        (row, orb) for row, orb in zip(table.rows, orbits) if orb.size > 1
    ]
    (rowV, orbV), (rowW, orbW) = nonlinear[0], nonlinear[1]
    repV = polar.MonomialRep(h3, polar.vergne_polarization(h3, flag, orbV.base_point))
    repW = polar.MonomialRep(h3, polar.vergne_polarization(h3, flag, orbW.base_point))
    # f = rho_V(g0) for a noncentral g0; psi_V(f) = (dim/|G|) sum tr(f rho(g^-1)) g
    g0 = h3.element_from_index(1)
    f_mat = _dense_matrix(repV, g0)
    n = h3.order
    coeffs = []
    for idx in range(n):
        ginv = (-h3.element_from_index(idx)) % 3
        tr = Cyclotomic.rational(0)
        M = _mat_mul(f_mat, _dense_matrix(repV, ginv))
        for i in range(repV.dim):
            tr = tr + M[i][i]
        coeffs.append(tr * Fraction(3, n))
    for rep, expect_f in ((repV, True), (repW, False)):
        acc = [[Cyclotomic.rational(0)] * rep.dim for _ in range(rep.dim)]
        for idx in range(n):
            if coeffs[idx].is_zero():
                continue
            M = _dense_matrix(rep, h3.element_from_index(idx))
            for i in range(rep.dim):
                for j in range(rep.dim):
                    acc[i][j] = acc[i][j] + coeffs[idx] * M[i][j]
        if expect_f:
            target = _dense_matrix(repV, g0)
            assert all(
                acc[i][j] == target[i][j] for i in range(rep.dim) for j in range(rep.dim)
            )
        else:
            assert all(
                acc[i][j].is_zero() for i in range(rep.dim) for j in range(rep.dim)
            )
