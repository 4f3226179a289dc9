import random

import pytest
from hypothesis import given, settings, strategies as st

from thetalift.hermitian import (make_algebra, HermitianSpace, adjoint, trace_form_B, twist_space,
                                 witt_invariants, witt_subtract, witt_add, witt_class_of_entries,
                                 isometric, hyperbolic_gram, classical_invariants)
from thetalift.matrix import Mat


def _rand_el(T, rng, lo=-3, hi=3):
    return T.element([rng.randint(lo, hi) for _ in range(T.d)])


def _rand_hermitian(alg, rng, n):
    T = alg.tower
    while True:
        rows = [[None] * n for _ in range(n)]
        for i in range(n):
            rows[i][i] = T(rng.randint(1, 9))
            for j in range(i + 1, n):
                x = _rand_el(T, rng)
                rows[i][j] = x
                rows[j][i] = alg.tau(x)
        G = Mat(T, rows)
        if not G.det().is_zero():
            return HermitianSpace(alg, 1, G)


def _apply(X, u):
    n = len(u)
    return [sum((X[i, j] * u[j] for j in range(n)), X.tower.zero()) for i in range(X.shape[0])]


def test_adjoint_identity():
    alg = make_algebra("split", 5, 8)
    V = HermitianSpace(alg, 1, Mat.identity(alg.tower, 2))
    assert adjoint(V, V.identity()) == V.identity()


def test_adjoint_pairing_ramified():
    rng = random.Random(11)
    alg = make_algebra("ramified", 5, 8)
    T = alg.tower
    V = _rand_hermitian(alg, rng, 3)
    X = Mat(T, [[_rand_el(T, rng) for _ in range(3)] for _ in range(3)])
    Xs = adjoint(V, X)
    for _ in range(20):
        u = [_rand_el(T, rng) for _ in range(3)]
        v = [_rand_el(T, rng) for _ in range(3)]
        assert V.pairing(_apply(X, u), v) == V.pairing(u, _apply(Xs, v))


def test_B_identity():
    alg = make_algebra("split", 5, 8)
    V = HermitianSpace(alg, 1, Mat.identity(alg.tower, 2))
    assert trace_form_B(V, V.identity(), V.identity()) == alg.tower(1)


@pytest.mark.parametrize("kind", ["split", "unramified", "ramified"])
def test_B_adjoint_invariant(kind):
    rng = random.Random(3)
    alg = make_algebra(kind, 5, 8)
    T = alg.tower
    V = _rand_hermitian(alg, rng, 2)
    for _ in range(6):
        X = Mat(T, [[_rand_el(T, rng) for _ in range(2)] for _ in range(2)])
        Y = Mat(T, [[_rand_el(T, rng) for _ in range(2)] for _ in range(2)])
        assert trace_form_B(V, adjoint(V, X), adjoint(V, Y)) == trace_form_B(V, X, Y)


def test_twist_symplectic():
    alg = make_algebra("split", 5, 8)
    T = alg.tower
    V = HermitianSpace(alg, 1, Mat.identity(T, 2))
    pinv = T(1) / T(5)
    G = Mat(T, [[0, pinv], [-pinv, 0]])
    W = twist_space(V, G)
    assert W.eps == -1 and W.gram == G
    assert (W.gram.T + W.gram).is_zero() and not W.gram.det().is_zero()


def test_twist_moment_of_identity():
    # M(iota) = iota^* iota where iota^* is the adjoint between V and V_Gamma
    alg = make_algebra("split", 5, 8)
    T = alg.tower
    V = HermitianSpace(alg, 1, Mat.identity(T, 2))
    G = Mat(T, [[0, T(1) / T(5)], [-T(1) / T(5), 0]])
    W = twist_space(V, G)
    iota = V.identity()
    star = V.ginv * iota.T * W.gram
    assert star * iota == G


def test_twist_scaled_unit():
    alg = make_algebra("split", 5, 8)
    T = alg.tower
    V = HermitianSpace(alg, -1, hyperbolic_gram(alg, -1, 1))
    G = Mat(T, [[1, 0], [0, -1]])
    c = T(2)
    W1 = twist_space(V, G * c)
    W2 = HermitianSpace(alg, 1, (V.gram * G) * c)
    assert W1.gram == W2.gram
    assert isometric(W1, W2)


def _isotropic_exists(a, b, p, k):
    mod = p ** k
    return any((a * x * x + b * y * y) % mod == 0 for x in range(mod) for y in range(mod) if x % p or y % p)


def test_witt_aniso_diag12():
    assert not _isotropic_exists(1, 2, 5, 3)
    alg = make_algebra("split", 5, 8)
    V = HermitianSpace(alg, 1, Mat.diag(alg.tower, [alg.tower(1), alg.tower(2)]))
    assert witt_invariants(V).aniso_dim == 2


def test_witt_hyperbolic_trivial():
    alg = make_algebra("split", 5, 8)
    H = HermitianSpace(alg, 1, hyperbolic_gram(alg, 1, 2))
    assert witt_invariants(H).is_trivial()
    assert witt_subtract(witt_invariants(H), witt_class_of_entries(alg, 1, [])) == witt_invariants(H)


def test_witt_subtract_example():
    alg = make_algebra("split", 5, 8)
    T = alg.tower
    got = witt_subtract(witt_class_of_entries(alg, 1, [T(1)]), witt_class_of_entries(alg, 1, [T(2)]))
    direct = witt_invariants(HermitianSpace(alg, 1, Mat.diag(T, [T(1), T(-2)])))
    assert got == direct and got.aniso_dim == 2
    assert not _isotropic_exists(1, -2, 5, 3)


def test_isometric_examples():
    alg = make_algebra("split", 5, 8)
    T = alg.tower
    H = HermitianSpace(alg, 1, hyperbolic_gram(alg, 1, 1))
    D = HermitianSpace(alg, 1, Mat.diag(T, [T(1), T(-1)]))
    assert isometric(H, H) and isometric(H, D)
    assert not isometric(HermitianSpace(alg, 1, Mat.diag(T, [T(1), T(1)])),
                         HermitianSpace(alg, 1, Mat.diag(T, [T(1), T(2)])))


@given(st.lists(st.sampled_from([1, 2, 3, 4, 5, 10, 15, 20, 6]), min_size=1, max_size=4))
@settings(max_examples=40, deadline=None)
def test_witt_matches_classical_invariants(entries):
    # two diagonal forms of equal dimension are isometric iff dim, disc and Hasse agree
    alg = make_algebra("split", 5, 8)
    T = alg.tower
    V = HermitianSpace(alg, 1, Mat.diag(T, [T(x) for x in entries]))
    W = witt_invariants(V)
    pad = len(entries) - W.aniso_dim
    assert pad >= 0 and pad % 2 == 0
    rep = W.rep + [T(1), T(-1)] * (pad // 2)
    U = HermitianSpace(alg, 1, Mat.diag(T, rep))
    assert classical_invariants(U) == classical_invariants(V)


@given(st.lists(st.sampled_from([1, 2, 5, 10, 3]), max_size=3), st.lists(st.sampled_from([1, 2, 5, 10, 3]), max_size=3))
@settings(max_examples=40, deadline=None)
def test_witt_group_laws(a, b):
    for kind, eps in (("split", 1), ("unramified", 1), ("ramified", 1)):
        alg = make_algebra(kind, 5, 8)
        A = witt_class_of_entries(alg, eps, [alg.tower(x) for x in a])
        B = witt_class_of_entries(alg, eps, [alg.tower(x) for x in b])
        assert witt_add(A, B) == witt_add(B, A)
        assert witt_subtract(witt_add(A, B), B) == A
        assert witt_subtract(A, A).is_trivial()
