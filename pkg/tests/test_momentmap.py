import random
from fractions import Fraction as Fr

import pytest

from thetalift.corpus import datum_instances
from thetalift.factorization import SpectralElement, is_good, howe_factorize, depth_of
from thetalift.hermitian import make_algebra, HermitianSpace, hyperbolic_gram, isometric, twist_space
from thetalift.lattice import standard_function, is_self_dual, TensorLattice
from thetalift.matrix import Mat
from thetalift.momentmap import (DualPairContext, iota, transported_lattice, jump_shift_ok, perturbations,
                                 solve_moment, gamma_class_space, transport_factorization, lift_positive_block,
                                 verify_orbit_structure, corrupt, lemma21_checks, random_lie, PreconditionError,
                                 transport_witness, centralizer_twist)

FAMILIES = {}


def instance(label, seed=5):
    if label not in FAMILIES:
        FAMILIES.update({d.label: d for d in datum_instances(seed, 16)})
    return FAMILIES[label]


def split_pair():
    alg = make_algebra("split", 5, 10)
    T = alg.tower
    V = HermitianSpace(alg, 1, hyperbolic_gram(alg, 1, 1))
    G = SpectralElement.from_diagonal(V, V.identity(), [T(2) / T(5), -T(2) / T(5)])
    return V, G


def test_moment_zero_and_iota():
    V, G = split_pair()
    Vg, w = iota(V, G.matrix)
    ctx = DualPairContext(V, Vg)
    assert ctx.moment(Mat.zeros(V.tower, 2)).is_zero()
    assert ctx.moment(w) == G.matrix


@pytest.mark.parametrize("label", ["split-hyp", "ramified-hyp", "unramified-3"])
def test_lemma21(label):
    d = instance(label)
    V = d.skeleton.space
    ctx = DualPairContext(V, gamma_class_space(V, d.skeleton.gamma.matrix))
    assert lemma21_checks(ctx, random.Random(2), count=4)


def test_transport_depth_one():
    V, G = split_pair()
    sL = standard_function(V)
    Vg, w = iota(V, G.matrix)
    xp = transported_lattice(sL, w, Fr(1, 2), Vg, G.matrix, 1)
    assert jump_shift_ok(sL, xp, Fr(1, 2))
    assert set(xp.jumps()) == {Fr(1, 2)}
    assert is_self_dual(xp)
    pert = perturbations(xp, 10, random.Random(1))
    assert len(pert) == 10
    for q in pert:
        assert is_self_dual(q) and not q.equals(xp)
        assert TensorLattice(sL, q).level(w) < -Fr(1, 2)


def test_solve_trivial_target():
    V, G = split_pair()
    sL = standard_function(V)
    Vg, w = iota(V, G.matrix)
    ctx = DualPairContext(V, Vg)
    fac = howe_factorize(G)
    w2, it, bound = solve_moment(ctx, w, G.matrix, sL, 1, Fr(1, 2), fac, 8)
    assert it == 0 and w2 == w


@pytest.mark.parametrize("t0", [Fr(1, 2), Fr(1)])
def test_solve_perturbed(t0):
    rng = random.Random(int(t0 * 4))
    V, G = split_pair()
    sL = standard_function(V)
    Vg, w = iota(V, G.matrix)
    ctx = DualPairContext(V, Vg)
    fac = howe_factorize(G)
    target = G.matrix + random_lie(sL, -Fr(1, 2) + t0, rng)
    trace = []
    w2, it, bound = solve_moment(ctx, w, target, sL, 1, t0, fac, 8, trace=trace)
    assert it <= bound
    # independent check: multiply out and read valuations
    R = ctx.star(w2) * w2 - target
    assert all(x.is_zero() or x.val() >= 8 for row in R.rows for x in row)
    assert all(a < b for a, b in zip(trace, trace[1:]))


def test_solve_precondition():
    V, G = split_pair()
    sL = standard_function(V)
    Vg, w = iota(V, G.matrix)
    ctx = DualPairContext(V, Vg)
    fac = howe_factorize(G)
    far = G.matrix * Fr(4, 3)
    with pytest.raises(PreconditionError):
        solve_moment(ctx, w, far, sL, 1, Fr(1, 2), fac, 8)


def test_gamma_class_space_and_dims():
    d = instance("unramified-hyp")
    S = d.skeleton
    res = lift_positive_block(S)
    assert isometric(gamma_class_space(S.space, S.gamma.matrix), res.Vp)
    other = HermitianSpace(S.space.algebra, -S.space.eps, hyperbolic_gram(S.space.algebra, -S.space.eps, 2))
    assert not isometric(res.Vp, other)


def test_transport_factorization_two_term():
    d = instance("split-two-scale")
    res = lift_positive_block(d.skeleton)
    assert len([r for _, r in res.fac.terms if r > 0]) >= 2
    assert [r for _, r in res.fac_p.terms] == [r for _, r in res.fac.terms]
    for (t, r), (tp, rp) in zip(res.fac.terms, res.fac_p.terms):
        assert is_good(tp) == is_good(t) and depth_of(tp) == depth_of(t)


def test_case_II_central():
    d = instance("unramified-central")
    res = lift_positive_block(d.skeleton)
    assert res.fac.case == "II"
    assert isometric(res.Vp, twist_space(d.skeleton.space, d.skeleton.gamma.matrix))
    assert res.skeleton.depth == 1
    rep = verify_orbit_structure(res, random.Random(1), samples=10, pairs=3)
    assert rep["3_radical"]["r_is_full"]
    assert rep["3_radical"]["dim_b0"] == 0
    assert all(v["pass"] for v in rep.values())


def test_ramified_line_all_predicates():
    d = instance("ramified-line")
    assert d.skeleton.space.dim == 1
    rep = verify_orbit_structure(lift_positive_block(d.skeleton), random.Random(3), samples=30)
    assert all(v["pass"] for v in rep.values()), rep


@pytest.mark.parametrize("label", ["ramified-hyp", "split-hyp", "unramified-3"])
def test_corrupted_control(label):
    rng = random.Random(7)
    res = corrupt(lift_positive_block(instance(label).skeleton), rng)
    rep = verify_orbit_structure(res, rng, samples=10, pairs=3)
    failed = sorted(k for k, v in rep.items() if not v["pass"])
    assert failed == ["2_iota_isometry"]


@pytest.mark.parametrize("label", ["ramified-3", "split-two-scale", "unramified-hyp"])
def test_well_defined_and_double_transport(label):
    rng = random.Random(4)
    S = instance(label).skeleton
    r1 = lift_positive_block(S)
    k = centralizer_twist(S, rng)
    r2 = lift_positive_block(S, w=r1.w * k, Vp=r1.Vp)
    assert not (r2.w == r1.w)
    assert transport_witness(r1, r2)["status"] == "equivalent"
    r3 = lift_positive_block(r1.skeleton)
    assert howe_factorize(r3.source.gamma).depths() == r1.fac.depths()


def test_offdiag_anisotropic_transport_is_unique():
    # V_Gamma is an anisotropic plane: sL' is self-dual and has no perturbations
    from thetalift.corpus import offdiag_instances
    from thetalift.hermitian import witt_invariants
    for I in offdiag_instances(3, 4):
        s = I.r / 2
        Vp = gamma_class_space(I.V, I.gamma)
        xp = transported_lattice(I.x, I.V.identity(), s, Vp, I.gamma, I.r)
        assert is_self_dual(xp) and jump_shift_ok(I.x, xp, s)
        assert witt_invariants(Vp).aniso_dim == 2
        assert perturbations(xp, 5, random.Random(0)) == []
