import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from thetalift.corpus import datum_instances
from thetalift.finiteweil import (finite_field, FiniteSymplecticSpace, build_weil, FiniteForm, hyperbolic_form,
                                  zero_form, isometry_group, character_table, group_table, chi_parabolic,
                                  random_parabolic, theta_decompose, full_decomposition, diagonalization_oracle,
                                  first_occurrence, ResidueHeisenberg, special_morphism_residue,
                                  check_special_morphism, check_invariants, lift_depth_zero_datum,
                                  vertex_residue_forms, mat_vec, identity)
from thetalift import ffla
from thetalift.factorization import DatumSkeleton, SpectralElement
from thetalift.hermitian import make_algebra, witt_class_of_entries
from thetalift.lattice import upsilon

F3 = finite_field(3)
F9 = finite_field(9)
D9 = next(c for c in range(1, 9) if F9.frob(c) == F9.neg(c))


def test_weil_dimension_and_identity():
    R = build_weil(FiniteSymplecticSpace(F3, 1))
    assert R.size == 3
    assert np.allclose(R.omega(tuple(map(tuple, identity(2)))), np.eye(3))


def test_heisenberg_all_pairs():
    S = FiniteSymplecticSpace(F3, 1)
    R = build_weil(S)
    half = F3.inv(F3(2))
    n = 0
    for a, b, c, d in itertools.product(range(3), repeat=4):
        lhs = R.heis([a], [b]) @ R.heis([c], [d])
        rhs = S.psi[F3.mul(half, S.form([a, b], [c, d]))] * R.heis([F3.add(a, c)], [F3.add(b, d)])
        assert np.abs(lhs - rhs).max() < 1e-6
        n += 1
    assert n == 81


def test_homomorphism_sl2_f3():
    R = build_weil(FiniteSymplecticSpace(F3, 1))
    G = isometry_group(FiniteForm(F3, [[0, 1], [2, 0]], -1))
    assert G.order == 24
    worst = max(np.abs(R.omega(g) @ R.omega(h) - R.omega(G.mul(g, h))).max() for g in G.elements for h in G.elements)
    assert worst < 1e-6


def test_chi_parabolic():
    rng = random.Random(2)
    n, k = 2, 1
    Wp = [[1, 0, 0, 0]]
    assert chi_parabolic(F3, identity(4), Wp) == 1
    for _ in range(10):
        g, h = random_parabolic(F3, n, k, rng), random_parabolic(F3, n, k, rng)
        gh = ffla.matmul(F3, g, h)
        assert chi_parabolic(F3, gh, Wp) == chi_parabolic(F3, g, Wp) * chi_parabolic(F3, h, Wp)


@pytest.mark.parametrize("n,k", [(1, 1), (2, 1), (2, 2)])
def test_invariants_projection(n, k):
    assert check_invariants(F3, n, k, random.Random(n + k), 5) < 1e-6


def test_circle_table():
    T = group_table(FiniteForm(F9, [[1]], 1, True))
    assert T.group.order == 4 and T.degrees == [1, 1, 1, 1]
    assert all(T.cuspidal)


def test_trivial_group_table():
    T = group_table(zero_form(F3, 1))
    assert T.group.order == 1 and T.degrees == [1]


def test_sl2_f3_degrees():
    T = group_table(hyperbolic_form(F3, -1))
    assert sum(d * d for d in T.degrees) == 24
    assert sorted(T.degrees) == [1, 1, 1, 2, 2, 2, 3]


@pytest.mark.parametrize("form", [FiniteForm(F3, [[1, 0, 0], [0, 1, 0], [0, 0, 1]], 1),
                                  FiniteForm(F9, [[1, 0], [0, 1]], 1, True), hyperbolic_form(F3, -1)])
def test_orthonormality(form):
    T = group_table(form)
    G = np.array([[T.inner(a, b) for b in T.chars] for a in T.chars])
    assert np.allclose(G, np.eye(len(T.degrees)), atol=1e-6)


def test_zero_dual_pair():
    l = zero_form(F3, 1)
    lp = hyperbolic_form(F3, -1)
    assert theta_decompose(l, zero_form(F3, -1), 0) == [(0, 1)]
    T = group_table(lp)
    assert theta_decompose(l, lp, 0) == [(T.trivial_index(), 1)]


def test_u1_u1_vs_oracle():
    l, lp = FiniteForm(F9, [[1]], 1, True), FiniteForm(F9, [[D9]], -1, True)
    assert full_decomposition(l, lp) == diagonalization_oracle(l, lp)
    for i, c in enumerate(group_table(l).cuspidal):
        if c:
            assert len(theta_decompose(l, lp, i)) <= 1


def test_multiplicities_fill_weil():
    # sum over (rho, rho') of m * deg * deg' = dimension of the Weil representation
    l, lp = FiniteForm(F3, [[1, 0], [0, 1]], 1), hyperbolic_form(F3, -1)
    T, Tp = group_table(l), group_table(lp)
    tot = sum(m * T.degrees[i] * Tp.degrees[j] for i, v in full_decomposition(l, lp).items() for j, m in v)
    assert tot == 3 ** 2


def test_first_occurrence_sign_of_circle():
    l = FiniteForm(F9, [[1]], 1, True)
    T = group_table(l)
    sign = next(i for i, row in enumerate(T.chars) if np.allclose(row ** 2, 1) and not np.allclose(row, 1))
    kernel = zero_form(F9, -1, True)
    occ = first_occurrence(l, sign, kernel)
    (j, m), = occ["lifts"]
    assert occ["k"] == 1 and group_table(occ["space"]).cusp_flag(j) == "cuspidal"


def test_first_occurrence_monotone():
    # the next member U(2,2) of the circle's tower is beyond the group cap;
    # check monotonicity on Sp(2) -> O(1) < O(3) instead
    sp = hyperbolic_form(F3, -1)
    kernel = FiniteForm(F3, [[1]], 1)
    T = group_table(sp)
    hits = 0
    for i in (k for k, c in enumerate(T.cuspidal) if c):
        if theta_decompose(sp, kernel, i):
            hits += 1
            assert theta_decompose(sp, kernel.with_hyperbolic(1), i)
    assert hits


def test_first_occurrence_sign_of_O1():
    l = FiniteForm(F3, [[1]], 1)
    T = group_table(l)
    sign = next(i for i, row in enumerate(T.chars) if np.allclose(row, [1, -1]))
    occ = first_occurrence(l, sign, zero_form(F3, -1))
    (j, m), = occ["lifts"]
    assert occ["k"] == 1 and group_table(occ["space"]).cusp_flag(j) == "cuspidal"


@pytest.mark.parametrize("label", ["unramified-hyp", "split-two-scale", "unramified-3"])
def test_special_morphism(label):
    inst = next(d for d in datum_instances(3, 16) if d.label == label)
    S = inst.skeleton
    W = ResidueHeisenberg(S.space, S.x, S.gamma.matrix, inst.r / 2)
    assert W.dim > 0
    assert special_morphism_residue(W, S.space.identity() * 0) == ([0] * W.dim, 0)
    assert check_special_morphism(W, random.Random(1), 8) == []


def test_special_morphism_central():
    inst = next(d for d in datum_instances(3, 16) if d.label == "unramified-central")
    S = inst.skeleton
    W = ResidueHeisenberg(S.space, S.x, S.gamma.matrix, inst.r / 2)
    assert W.dim == 0
    # a pairing-trivial element lands in the centre
    a, t = W.zeta(S.gamma.matrix * S.space.tower(S.space.tower.p ** 2))
    assert a == []


def _depth_zero(kind, eps, ell, ells, p=3):
    alg = make_algebra(kind, p, 6)
    V, x = upsilon(ell, ells, alg, eps)
    return alg, DatumSkeleton(x, SpectralElement.zero(V))


def test_lift_trivial_residues():
    alg, S0 = _depth_zero("split", 1, [], [])
    Tp = witt_class_of_entries(alg, -1, [])
    out = lift_depth_zero_datum(S0, Tp)
    assert out["space"].dim == 0 and out["dims_ok"] and out["witt_ok"]


@pytest.mark.parametrize("kind,eps,ell,ells,target", [
    ("split", -1, [], [[0, 1], [2, 0]], [1]),
    ("split", 1, [], [[1]], []),
    ("ramified", -1, [[1]], [], [1]),
    ("unramified", 1, [], [[1]], ["d"]),
    ("unramified", -1, [], [["d"]], [1, 1]),
])
def test_lift_depth_zero(kind, eps, ell, ells, target):
    ells = [[D9 if x == "d" else x for x in r] for r in ells]
    alg, S0 = _depth_zero(kind, eps, ell, ells)
    ents = [alg.delta() if x == "d" else alg.tower(x) for x in target]
    Tp = witt_class_of_entries(alg, -eps, ents)
    l, ls = vertex_residue_forms(S0.x)
    Tl, Tls = group_table(l), group_table(ls)
    for i in (k for k, c in enumerate(Tl.cuspidal) if c):
        for j in (k for k, c in enumerate(Tls.cuspidal) if c):
            out = lift_depth_zero_datum(S0, Tp, (i, j))
            assert out["dims_ok"] and out["witt_ok"]
            for v in out["lifts"].values():
                assert v["unique"] and v["cuspidal"] == "cuspidal"


def test_cuspidal_counts():
    # SL2(3): the two nontrivial linear characters and one of degree 2
    T = group_table(hyperbolic_form(F3, -1))
    assert sorted(d for d, c in zip(T.degrees, T.cuspidal) if c) == [1, 1, 2]
    # split O(2) has no cuspidals, anisotropic O(2) only cuspidals
    assert not any(group_table(FiniteForm(F3, [[1, 0], [0, 2]], 1)).cuspidal)
    assert all(group_table(FiniteForm(F3, [[1, 0], [0, 1]], 1)).cuspidal)
    # split O(4): frozen from the computed table
    T4 = group_table(hyperbolic_form(F3, 1).plus(hyperbolic_form(F3, 1)))
    assert T4.group.order == 1152
    assert sorted(d for d, c in zip(T4.degrees, T4.cuspidal) if c) == [2, 2, 2, 2, 4, 4, 4, 4]


@given(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2), st.integers(0, 2))
@settings(max_examples=30, deadline=None)
def test_weil_equivariance(a, b, c, d):
    # omega(g) rho(w) omega(g)^-1 = rho(g w)
    R = build_weil(FiniteSymplecticSpace(F3, 1))
    G = isometry_group(FiniteForm(F3, [[0, 1], [2, 0]], -1))
    g = G.elements[(a * 27 + b * 9 + c * 3 + d) % G.order]
    gw = mat_vec(F3, [list(r) for r in g], [a, b])
    lhs = R.omega(g) @ R.heis([a], [b]) @ R.omega(g).conj().T
    assert np.abs(lhs - R.heis([gw[0]], [gw[1]])).max() < 1e-6


def test_restriction_breaks_first_occurrence():
    # plain restriction sends the sign of O(1) to a non-cuspidal of SL2(3)
    l = FiniteForm(F3, [[1]], 1)
    sign = 1
    T = group_table(hyperbolic_form(F3, -1))
    par = first_occurrence(l, sign, zero_form(F3, -1), cap=2)
    res = first_occurrence(l, sign, zero_form(F3, -1), cap=2, normalization="restriction")
    assert par["k"] == res["k"] == 1
    (j, _), = par["lifts"]
    (k, _), = res["lifts"]
    assert T.cuspidal[j] and not T.cuspidal[k]
