import random
from fractions import Fraction as Fr
from math import inf

import pytest
from hypothesis import given, settings, strategies as st

from thetalift.hermitian import make_algebra, HermitianSpace, hyperbolic_gram, tau_mat
from thetalift.localfield import make_tower
from thetalift.lattice import standard_function, SplitLatticeFunction
from thetalift.factorization import (SpectralElement, DatumSkeleton, depth_of, is_good, howe_factorize,
                                     check_def41, def41_holds, block_decompose, direct_sum_data,
                                     check_equivalence_witness, transport_skeleton, validate_prime_bound,
                                     random_isometry, CertificateError)
from thetalift.matrix import Mat


def split_space(p=5, k=1, eps=1, e=1, N=10):
    T = make_tower(p, 1, e, N)
    alg = make_algebra("split", p, N, tower=T)
    return HermitianSpace(alg, eps, hyperbolic_gram(alg, eps, k))


def test_depth_zero_element():
    V = split_space()
    Z = SpectralElement.zero(V)
    assert depth_of(Z) == inf
    assert DatumSkeleton(standard_function(V), Z).depth == 0
    assert is_good(Z)


def test_depth_min_over_blocks():
    V = split_space(k=2, e=2)
    T = V.tower
    pi = T.pi()
    a, b = T(1) / T(25), T(2) / pi
    S = SpectralElement.from_diagonal(V, V.identity(), [a, b, -b, -a])
    assert depth_of(S) == -2


def test_good_ramified_pair():
    V = split_space(e=2)
    T = V.tower
    g = T(1) / T.pi()
    S = SpectralElement.from_diagonal(V, V.identity(), [g, -g])
    assert (g - (-g)).val() == Fr(-1, 2) == depth_of(S)
    assert is_good(S)


def test_not_good_two_scales():
    V = split_space(k=2)
    T = V.tower
    a, b = T(1) / T(5), T(1) / T(5) + T(1)
    S = SpectralElement.from_diagonal(V, V.identity(), [a, b, -b, -a])
    assert (a - b).val() == 0 != depth_of(S)
    assert not is_good(S)


def test_certificate_rejects_unpaired_eigs():
    V = split_space()
    T = V.tower
    with pytest.raises(CertificateError):
        SpectralElement(V, Mat.diag(T, [T(1), T(1)]), V.identity(), [T(1), T(1)])


def test_howe_two_scale():
    # +-g alone is already good (its only root value 2g has valuation -1);
    # a second pair sharing the 5^-1 part forces the two-scale split
    rng = random.Random(3)
    V = split_space(k=2, e=2)
    T = V.tower
    g1 = T(2) / T(5) + T(3) / T.pi()
    g2 = T(2) / T(5) + T(1) / T.pi()
    P = random_isometry(V, rng)
    S = SpectralElement.from_diagonal(V, P, [g1, g2, -g2, -g1])
    assert (g1 - g2).val() == Fr(-1, 2) and not is_good(S)
    fac = howe_factorize(S)
    assert [x for _, x in fac.terms[:2]] == [Fr(1, 2), 1]
    assert all(is_good(t) for t, _ in fac.terms)
    chk = check_def41(fac)
    assert all(chk.values()), chk


def test_howe_good_input_is_itself():
    V = split_space(e=2)
    T = V.tower
    g = T(3) / T.pi()
    S = SpectralElement.from_diagonal(V, V.identity(), [g, -g])
    fac = howe_factorize(S)
    assert fac.terms[0][0] is S and def41_holds(fac)


def test_howe_central_case_II():
    alg = make_algebra("unramified", 5, 10)
    T = alg.tower
    V = HermitianSpace(alg, 1, Mat.identity(T, 2))
    c = T.omega() / T(5)
    fac = howe_factorize(SpectralElement.from_diagonal(V, V.identity(), [c, c]))
    assert fac.case == "II" and def41_holds(fac)


@given(st.integers(1, 4), st.integers(0, 4), st.integers(0, 4), st.integers(0, 4))
@settings(max_examples=30, deadline=None)
def test_howe_property(a, b, c, d):
    V = split_space(p=7, e=2)
    T = V.tower
    pi = T.pi()
    g = T(a) / T(49) + T(b) / (T(7) * pi) + T(c) / T(7) + T(d) / pi + T(1)
    S = SpectralElement.from_diagonal(V, V.identity(), [g, -g])
    fac = howe_factorize(S)
    assert def41_holds(fac)
    tot = fac.remainder.matrix
    for t, _ in fac.terms:
        tot = tot + t.matrix
    assert tot == S.matrix
    again = howe_factorize(fac.remainder)
    assert depth_of(fac.remainder) >= 0
    assert all(t.matrix.is_zero() for t, r in again.terms if r > 0)


def _three_blocks():
    V = split_space(p=7, k=3)
    T = V.tower
    eig = [T(3) / T(49), T(2) / T(7), T(5), -T(5), -T(2) / T(7), -T(3) / T(49)]
    S = SpectralElement.from_diagonal(V, V.identity(), eig)
    return DatumSkeleton(standard_function(V), S)


def test_block_decompose_three():
    D = _three_blocks()
    bl = block_decompose(D)
    assert [b.depth for b in bl] == [2, 1, 0]
    assert sum(b.space.dim for b in bl) == D.space.dim
    V = D.space
    for i, a in enumerate(bl):
        for j, b in enumerate(bl):
            if i != j:
                assert (tau_mat(V.algebra, a.embedding).T * V.gram * b.embedding).is_zero()


def test_single_block_has_empty_zero_block():
    V = split_space(e=2)
    T = V.tower
    g = T(3) / T.pi()
    D = DatumSkeleton(SplitLatticeFunction(V, V.identity(), [Fr(-1, 4), Fr(1, 4)]),
                      SpectralElement.from_diagonal(V, V.identity(), [g, -g]))
    bl = block_decompose(D)
    assert [b.depth for b in bl] == [Fr(1, 2), 0]
    assert bl[1].space.dim == 0


def test_block_round_trip():
    D = _three_blocks()
    back = direct_sum_data(block_decompose(D))
    Pc = back.embedding
    assert Pc * back.gamma.matrix * Pc.inverse() == D.gamma.matrix
    y = SplitLatticeFunction(D.space, Pc * back.x.basis, back.x.gradings)
    assert y.equals(D.x)


def test_direct_sum_single():
    D = _three_blocks()
    b = block_decompose(D)[0]
    assert direct_sum_data([b]) is b


def test_equivalence_witness():
    rng = random.Random(4)
    D = _three_blocks()
    V = D.space
    assert check_equivalence_witness(D, D, V.identity())
    k = random_isometry(V, rng)
    D2 = transport_skeleton(D, k.inverse(), V)
    assert check_equivalence_witness(D, D2, k)
    G3 = SpectralElement.from_diagonal(V, V.identity(), [x * 3 for x in D.gamma.eigs])
    assert not check_equivalence_witness(D, DatumSkeleton(D.x, G3), V.identity())


def test_prime_bound():
    assert validate_prime_bound(11, 2, 1)
    assert not validate_prime_bound(5, 2, 2)
    assert validate_prime_bound(3, 1, 1)
