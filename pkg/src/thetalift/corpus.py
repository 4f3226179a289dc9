"""Seeded generators for the desk instance families used by the checks."""
import random
from math import gcd
from fractions import Fraction

from .factorization import DatumSkeleton, SpectralElement, random_isometry
from .hermitian import HermitianSpace, hyperbolic_gram, make_algebra, orthogonal_sum
from .lattice import (SplitLatticeFunction, ceil_frac, is_self_dual, recipe_module_function,
                      selfdual_from_module_function)
from .localfield import make_tower
from .matrix import Mat

PRIMES = (5, 7, 11)
CS = [Fraction(0), Fraction(1, 8), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2)]


def _unit(rng, p):
    return rng.randrange(1, p)


def _space(alg, eps, k, line=None):
    V = HermitianSpace(alg, eps, hyperbolic_gram(alg, eps, k))
    if line is not None:
        V = orthogonal_sum(V, HermitianSpace(alg, eps, Mat(alg.tower, [[line]])))
    return V


def _conj(V, rng, P0=None):
    g = random_isometry(V, rng, 1) if rng.random() < 0.7 else V.identity()
    return g if P0 is None else g * P0


def _grads(rng, k, extra=0):
    c = [rng.choice(CS) * rng.choice((1, -1)) for _ in range(k)]
    return c + [-x for x in reversed(c)] + [Fraction(0)] * extra


class Instance:
    """A space with a self-dual split function and a skew Gamma of depth -r."""

    def __init__(self, label, V, x, gamma, r, skeleton=None):
        self.label = label
        self.V = V
        self.x = x
        self.gamma = gamma
        self.r = Fraction(r)
        self.skeleton = skeleton

    def __repr__(self):
        return "Instance(%s, r=%s)" % (self.label, self.r)


def _finish(label, V, P, grads, eigs=None, gamma=None, r=None):
    grads = [Fraction(c) / V.tower.e for c in grads]
    x = SplitLatticeFunction(V, P, grads)
    if not is_self_dual(x):
        raise AssertionError("generator produced a non self-dual function: %s" % label)
    if eigs is not None:
        S = SpectralElement.from_diagonal(V, P, eigs)
        vals = {v.val() for v in eigs}
        r = -vals.pop()
        return Instance(label, V, x, S.matrix, r, DatumSkeleton(x, S))
    return Instance(label, V, x, P * gamma * P.inverse(), r)


# ---------------------------------------------------------------- diagonal families

def _ram_line(rng, p, N):
    alg = make_algebra("ramified", p, N)
    T = alg.tower
    k = rng.choice((1, 3))
    V = HermitianSpace(alg, 1, Mat.identity(T, 1))
    return _finish("ramified-line", V, _conj(V, rng), [0], [T(_unit(rng, p)) / T.pi() ** k])


def _ram_hyp(rng, p, N):
    alg = make_algebra("ramified", p, N)
    T = alg.tower
    V = _space(alg, 1, 1)
    if rng.random() < 0.5:
        a = T(_unit(rng, p)) / p
        b = -a
    else:
        a = T(_unit(rng, p)) / T.pi() ** rng.choice((1, 3))
        b = a
    return _finish("ramified-hyp", V, _conj(V, rng), _grads(rng, 1), [a, b])


def _ram_three(rng, p, N):
    alg = make_algebra("ramified", p, N)
    T = alg.tower
    V = _space(alg, 1, 1, 1)
    k = rng.choice((1, 3))
    u = _unit(rng, p)
    v = rng.choice([x for x in range(1, p) if x != u])
    a = T(u) / T.pi() ** k
    g3 = T(v) / T.pi() ** k
    return _finish("ramified-3", V, _conj(V, rng), _grads(rng, 1, 1), [a, a, g3])


def _unr_hyp(rng, p, N):
    alg = make_algebra("unramified", p, N)
    T = alg.tower
    eps = rng.choice((1, -1))
    V = _space(alg, eps, 1)
    om = T.omega()
    a = (T(_unit(rng, p)) + om * rng.randrange(p)) / p
    b = -alg.tau(a) if eps == 1 else alg.tau(a)
    b = b if V.is_skew(Mat(T, [[a, 0], [0, b]])) else -b
    return _finish("unramified-hyp", V, _conj(V, rng), _grads(rng, 1), [a, b])


def _unr_three(rng, p, N):
    alg = make_algebra("unramified", p, N)
    T = alg.tower
    om = T.omega()
    V = _space(alg, 1, 1, 1)
    u, v1 = _unit(rng, p), rng.randrange(p)
    v = rng.choice([x for x in range(1, p) if x != v1])
    a = (T(u) + om * v1) / p
    return _finish("unramified-3", V, _conj(V, rng), _grads(rng, 1, 1),
                   [a, -alg.tau(a), om * v / p])


def _unr_central(rng, p, N):
    alg = make_algebra("unramified", p, N)
    T = alg.tower
    V = HermitianSpace(alg, 1, Mat.identity(T, 2))
    c = T.omega() * _unit(rng, p) / p
    return _finish("unramified-central", V, _conj(V, rng), [0, 0], [c, c])


def _split_hyp(rng, p, N):
    alg = make_algebra("split", p, N)
    T = alg.tower
    eps = rng.choice((1, -1))
    V = _space(alg, eps, 1)
    a = T(_unit(rng, p)) / p
    return _finish("split-hyp", V, _conj(V, rng), _grads(rng, 1), [a, -a])


def _split_two_scale(rng, p, N):
    alg = make_algebra("split", p, N)
    T = alg.tower
    V = _space(alg, -1, 2)
    u = T(_unit(rng, p)) / p ** 2
    a = _unit(rng, p)
    b = rng.choice([x for x in range(1, p) if x != a])
    g1, g2 = u + T(a) / p, u + T(b) / p
    return _finish("split-two-scale", V, _conj(V, rng), _grads(rng, 2), [g1, g2, -g2, -g1])


DATUM_FAMILIES = [_ram_line, _ram_hyp, _ram_three, _unr_hyp, _unr_three, _unr_central,
                  _split_hyp, _split_two_scale]


def datum_instances(seed, count, N=12, families=None):
    rng = random.Random(seed)
    fams = families or DATUM_FAMILIES
    out = []
    for k in range(count):
        fam = fams[k % len(fams)]
        out.append(fam(rng, rng.choice(PRIMES), N))
    return out


# ---------------------------------------------------------------- off-diagonal families

def _offdiag(rng, p, N, kind):
    """Gamma = [[0, x], [y, 0]] on a hyperbolic plane, depth 1/2 or 3/2:
    eigenvalues are square roots of xy and lie outside D."""
    alg = make_algebra(kind, p, N)
    T = alg.tower
    eps = -1 if kind == "split" else rng.choice((1, -1))
    V = _space(alg, eps, 1)
    r = rng.choice((Fraction(1, 2), Fraction(3, 2)))
    a, b = (0, 1) if r == Fraction(1, 2) else (1, 2)
    for _ in range(200):
        cx = T(_unit(rng, p)) if kind == "split" else rng.choice((T(_unit(rng, p)), T.omega() * _unit(rng, p)))
        cy = T(_unit(rng, p)) if kind == "split" else rng.choice((T(_unit(rng, p)), T.omega() * _unit(rng, p)))
        G = Mat(T, [[0, cx / p ** a], [cy / p ** b, 0]])
        if V.is_skew(G):
            break
    else:
        raise AssertionError("no skew off-diagonal element found")
    return _finish("%s-offdiag" % kind, V, _conj(V, rng), [Fraction(-1, 4), Fraction(1, 4)],
                   gamma=G, r=r)


def transport_instances(seed, count=50, N=12):
    """Families with a hyperbolic plane on both sides (so that perturbed
    self-dual functions exist), n <= 3, r in {1, 1/2, 3/2}."""
    rng = random.Random(seed)
    fams = [_ram_hyp, _ram_three, _unr_hyp, _unr_three, _split_hyp]
    return [fams[k % len(fams)](rng, rng.choice(PRIMES), N) for k in range(count)]


def offdiag_instances(seed, count=8, N=12):
    """Depth 1/2, 3/2 elements whose twisted space V_Gamma is an anisotropic
    plane: the transported function is the only self-dual one there."""
    rng = random.Random(seed)
    return [_offdiag(rng, rng.choice(PRIMES), N, ("split", "unramified")[k % 2]) for k in range(count)]


# ---------------------------------------------------------------- Howe corpus

def howe_corpus(seed, count=30, N=12):
    """Certified Gamma over split D on towers with e in {1, 2, 3}, with 1 to 3
    valuation scales in the eigenvalues."""
    rng = random.Random(seed)
    out = []
    for k in range(count):
        e = (1, 2, 3)[k % 3]
        p = rng.choice([q for q in PRIMES if gcd(q, e) == 1])
        E = make_tower(p, 1, e, N)
        alg = make_algebra("split", p, N, tower=E)
        pi = E.pi()
        scales = 1 + (k // 3) % 3
        m = rng.choice((1, 2))
        V = _space(alg, rng.choice((1, -1)), m)
        top = rng.randrange(1, 2 * e + 1)
        exps = sorted(rng.sample(range(0, top + 1), min(scales, top + 1)), reverse=True)
        eigs = []
        used = set()
        for _ in range(m):
            while True:
                cs = tuple(rng.randrange(1, p) for _ in exps)
                if cs not in used:
                    used.add(cs)
                    break
            x = E(0)
            for c, ex in zip(cs, exps):
                x = x + E(c) / pi ** ex
            eigs.append(x)
        eigs = eigs + [-x for x in reversed(eigs)]
        out.append(SpectralElement.from_diagonal(V, _conj(V, rng), eigs))
    return out


# ---------------------------------------------------------------- appendix module functions

def _rand_hom(rng, sL, sLp, t0):
    V, Vp = sL.space, sLp.space
    T = V.tower
    pi = V.algebra.uniformizer()
    e = T.e
    A = Mat(T, [[T(rng.randrange(1, T.p)) * pi ** (ceil_frac(e * (t0 - sLp.gradings[j] + sL.gradings[i]))
                                                     + rng.randrange(2))
                 for i in range(V.dim)] for j in range(Vp.dim)])
    return sLp.basis * A * sL.binv


HULL_SHAPES = [
    (4, 1, [Fraction(-1, 4), Fraction(1, 4)], [Fraction(-1, 2), Fraction(-1, 4), Fraction(1, 4), Fraction(1, 2)]),
    (4, 3, [Fraction(-1, 4), Fraction(1, 4)], [0, Fraction(-1, 4), Fraction(1, 4), 0]),
    (2, 1, [Fraction(-1, 2), Fraction(1, 2)], [Fraction(-1, 2), 0, 0, Fraction(1, 2)]),
    (1, 1, [0, 0], [0, 0, 0, 0]),
]


class HullInstance:
    def __init__(self, label, N, sL, sLp_ref, m):
        self.label = label
        self.N = N
        self.sL = sL
        self.sLp_ref = sLp_ref
        self.m = m

    def construct(self):
        return selfdual_from_module_function(self.N, self.sLp_ref.space.identity())


def hull_instances(seed, count=24, N=12):
    rng = random.Random(seed)
    out = []
    k = 0
    while len(out) < count:
        kind = ("split", "unramified", "ramified")[k % 3]
        m, j, cs, cps = HULL_SHAPES[(k // 3) % len(HULL_SHAPES)]
        b0 = (k // 12) % 2 == 0
        k += 1
        p = rng.choice(PRIMES)
        alg = make_algebra(kind, p, N)
        e = alg.tower.e
        eV = -1 if kind == "split" else 1
        V = _space(alg, eV, 1)
        Vp = _space(alg, -eV, 2)
        sL = SplitLatticeFunction(V, V.identity(), [Fraction(c) / e for c in cs])
        sLp = SplitLatticeFunction(Vp, Vp.identity(), [Fraction(c) / e for c in cps])
        s = Fraction(j, m) / e / 2
        w = _rand_hom(rng, sL, sLp, -s + Fraction(1, 2 * m) / e)
        Nf = recipe_module_function(sL, sLp, w, s, m, with_b0=b0)
        out.append(HullInstance("%s-m%d-j%d-%s" % (kind, m, j, "b0" if b0 else "w"), Nf, sL, sLp, m))
    return out


def hull_contains(out, inst):
    e = out.space.tower.e
    m = inst.m
    N = inst.N
    for i in range(-2 * m, 2 * m + 1):
        gens = N.at_index(i)
        if gens.shape[1] and not out.at(Fraction(i, 2 * m) / e + Fraction(1, 2 * m) / e).contains_vectors(gens):
            return False
    return True
