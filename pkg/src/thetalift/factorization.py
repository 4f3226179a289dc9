"""Depth and goodness of semisimple skew elements, Howe factorizations,
block decompositions and direct sums of data, equivalence witnesses."""

from fractions import Fraction
from math import inf

from .hermitian import HermitianSpace, orthogonal_sum, tau_mat, zero_space
from .lattice import (SplitLatticeFunction, Lattice, chain_to_split, ceil_frac,
                      moy_prasad_member, span_basis)
from .localfield import PrecisionError, hensel_root, teichmuller
from .matrix import Mat


class CertificateError(ValueError):
    pass


class SpectralElement:
    """Skew Gamma with a diagonalising basis P over the tower of D:
    P^-1 Gamma P = diag(eigs)."""

    def __init__(self, space, matrix, P, eigs, check=True):
        self.space = space
        self.matrix = matrix
        self.P = P
        self.eigs = tuple(space.tower(x) for x in eigs)
        self._pinv = None
        if check:
            self.validate()

    @classmethod
    def from_diagonal(cls, space, P, eigs):
        T = space.tower
        Gm = P * Mat.diag(T, list(eigs)) * P.inverse()
        return cls(space, Gm, P, eigs)

    @classmethod
    def zero(cls, space):
        T = space.tower
        n = space.dim
        return cls(space, Mat.zeros(T, n), space.identity(), [T.zero()] * n)

    @property
    def pinv(self):
        if self._pinv is None:
            self._pinv = self.P.inverse()
        return self._pinv

    def validate(self):
        V = self.space
        n = V.dim
        if self.P.shape != (n, n) or len(self.eigs) != n:
            raise CertificateError("certificate has the wrong size")
        if not V.is_skew(self.matrix):
            raise CertificateError("Gamma is not skew-adjoint")
        Dg = self.pinv * self.matrix * self.P
        for i in range(n):
            for j in range(n):
                target = self.eigs[i] if i == j else V.tower.zero()
                if not (Dg[i, j] - target).is_zero():
                    raise CertificateError("basis does not diagonalise Gamma to the stated eigenvalues")
        alg = V.algebra
        left = list(self.eigs)
        for x in self.eigs:
            y = -alg.tau(x)
            k = next((k for k, z in enumerate(left) if (z - y).is_zero()), None)
            if k is None:
                raise CertificateError("eigenvalues are not closed under x -> -tau(x)")
            left.pop(k)

    def blocks(self):
        """[(gamma, [column indices])] grouping equal eigenvalues."""
        out = []
        for i, x in enumerate(self.eigs):
            for g, idx in out:
                if (g - x).is_zero():
                    idx.append(i)
                    break
            else:
                out.append((x, [i]))
        return out

    def with_eigs(self, eigs):
        """The element of F'[Gamma] acting by eigs on the same eigenvectors."""
        T = self.space.tower
        M = self.P * Mat.diag(T, list(eigs)) * self.pinv
        return SpectralElement(self.space, M, self.P, eigs, check=False)

    def __repr__(self):
        return "SpectralElement(eigs=%s)" % (list(self.eigs),)


def _eig_depth(eigs):
    vals = [x.val() for x in eigs if not x.is_zero()]
    return min(vals) if vals else inf


def depth_of(G):
    return _eig_depth(G.eigs)


def _eig_good(eigs):
    d = _eig_depth(eigs)
    if d == inf:
        return True
    for a in eigs:
        for b in eigs:
            x = a - b
            if not x.is_zero() and x.val() != d:
                return False
    return True


def is_good(G):
    return _eig_good(G.eigs)


class GoodFactorization:
    """terms[i] = (Gamma_i, r_i) for i = 0..d (Gamma_d central in Case II,
    zero in Case I), plus the remainder Gamma_{-1}."""

    def __init__(self, gamma, terms, remainder, case):
        self.gamma = gamma
        self.terms = terms
        self.remainder = remainder
        self.case = case

    @property
    def d(self):
        return len(self.terms) - 1

    def depths(self):
        return [r for _, r in self.terms]

    def leading_good(self):
        """The deepest non-central good term."""
        k = self.d - 1
        return self.terms[k][0] if k >= 0 else None

    def serialize(self):
        return {"case": self.case,
                "terms": [{"r": str(r), "matrix": [[str(x) for x in row] for row in G.matrix.rows]}
                          for G, r in self.terms],
                "remainder_depth": str(depth_of(self.remainder))}


def howe_factorize(G, max_steps=64):
    V = G.space
    T = V.tower
    if T.e % T.p == 0:
        raise ValueError("wild ramification is not supported")
    d0 = depth_of(G)
    zero = [T.zero()] * V.dim
    if d0 < 0 and is_good(G):
        # a good element is its own factorization
        rem = G.with_eigs(zero)
        if _is_central(G.eigs):
            return GoodFactorization(G, [(G, -d0)], rem, "II")
        return GoodFactorization(G, [(G, -d0), (G.with_eigs(zero), -d0)], rem, "I")
    rem = list(G.eigs)
    extracted = []
    for _ in range(max_steps):
        d = _eig_depth(rem)
        if d >= 0:
            break
        k, e = d.numerator, d.denominator
        if e % T.p == 0:
            raise ValueError("wild ramification is not supported")
        beta = []
        for x in rem:
            if x.is_zero() or x.val() != d:
                beta.append(T.zero())
                continue
            b = x ** e * T(Fraction(1, T.p) ** k)
            bhat = teichmuller(T, b.residue())
            root = hensel_root(e, bhat / b, 1)
            beta.append(x * root)
        extracted.append((beta, -d))
        rem = [x - y for x, y in zip(rem, beta)]
    else:
        raise PrecisionError("factorization did not terminate within the step budget")
    terms = []
    case = "II" if extracted and _is_central(extracted[0][0]) else "I"
    for beta, r in reversed(extracted):
        terms.append((G.with_eigs(beta), r))
    if case == "I":
        terms.append((G.with_eigs(zero), terms[-1][1] if terms else 0))
    return GoodFactorization(G, terms, G.with_eigs(rem), case)


def _is_central(eigs):
    return all(not x.is_zero() for x in eigs) and all((x - eigs[0]).is_zero() for x in eigs)


def check_def41(fac, P=None):
    """Independent check of conditions (a)-(f). Eigenvalues are re-read from
    P^-1 Gamma_i P; returns a dict of verdicts."""
    G = fac.gamma
    V = G.space
    P = G.P if P is None else P
    Pinv = P.inverse()
    mats = [t.matrix for t, _ in fac.terms] + [fac.remainder.matrix]
    out = {}

    def eig(M):
        Dm = Pinv * M * P
        n = Dm.n
        if any(not Dm[i, j].is_zero() for i in range(n) for j in range(n) if i != j):
            return None
        return [Dm[i, i] for i in range(n)]

    total = mats[0]
    for M in mats[1:]:
        total = total + M
    out["sum"] = (total - G.matrix).is_zero()
    out["skew"] = all(V.is_skew(M) for M in mats)
    out["a_commute"] = all(A.commutator(B).is_zero() for A in mats for B in mats)
    eigs = [eig(M) for M in mats]
    if any(e is None for e in eigs):
        out["diagonal"] = False
        return out
    out["diagonal"] = True
    out["b_remainder"] = _eig_depth(eigs[-1]) >= 0
    d = fac.d
    depths = [_eig_depth(e) for e in eigs[:-1]]
    out["c_good"] = all(_eig_good(eigs[i]) and depths[i] < 0 for i in range(d))
    last = eigs[d]
    if fac.case == "I":
        out["d_central"] = all(x.is_zero() for x in last)
        seq = depths[:d]
    else:
        out["d_central"] = _is_central(last)
        seq = depths[:d + 1]
    # -r_top < ... < -r_0 < 0
    out["ef_order"] = all(seq[i] > seq[i + 1] for i in range(len(seq) - 1)) and all(s < 0 for s in seq)
    out["r_match"] = all(depths[i] == -fac.terms[i][1] for i in range(len(seq)))
    return out


def def41_holds(fac, P=None):
    return all(check_def41(fac, P).values())


# ---------------------------------------------------------------- data

class DatumSkeleton:
    def __init__(self, x, gamma, phi=None, rho=None, embedding=None):
        self.x = x
        self.gamma = gamma
        self.phi = phi if phi is not None else {"label": "trivial"}
        self.rho = rho if rho is not None else {"label": "trivial"}
        self.embedding = embedding

    @property
    def space(self):
        return self.x.space

    @property
    def depth(self):
        d = depth_of(self.gamma)
        return max(-d, 0) if d != inf else 0

    def __repr__(self):
        return "DatumSkeleton(dim=%d, depth=%s)" % (self.space.dim, self.depth)


def _eig_class(x):
    """Block label: r > 0 for val = -r, 0 for the depth-zero part."""
    if x.is_zero() or x.val() >= 0:
        return Fraction(0)
    return -x.val()


def restrict_function(sL, P, idx):
    """Restriction of sL to the span of columns idx of P, in those coordinates.
    Requires sL to be split by the corresponding idempotent."""
    V = sL.space
    T = V.tower
    Pinv = P.inverse()
    n = V.dim
    E = Mat.diag(T, [1 if i in idx else 0 for i in range(n)])
    e_l = P * E * Pinv
    if sL.level(e_l) < 0:
        raise ValueError("lattice function is not split by the block idempotents")
    Pl = Mat(T, [[P[i, j] for j in idx] for i in range(n)])
    if not idx:
        sub = zero_space(V.algebra, V.eps)
        return sub, SplitLatticeFunction(sub, Mat(T, []), []), Pl
    gram = tau_mat(V.algebra, Pl).T * V.gram * Pl
    sub = HermitianSpace(V.algebra, V.eps, gram)
    chain = []
    for t in sL.jumps():
        C = Pinv * sL.at(t).basis
        gens = Mat(T, [list(C.rows[i]) for i in idx])
        chain.append((t * T.e, Lattice(sub, span_basis(gens))))
    return sub, chain_to_split(sub, chain), Pl


def block_decompose(S):
    G = S.gamma
    classes = {}
    for i, x in enumerate(G.eigs):
        classes.setdefault(_eig_class(x), []).append(i)
    classes.setdefault(Fraction(0), [])
    out = []
    for c in sorted(classes, reverse=True):
        idx = classes[c]
        sub, sLl, Pl = restrict_function(S.x, G.P, idx)
        T = sub.tower
        eigs = [G.eigs[i] for i in idx]
        if idx:
            Gl = SpectralElement(sub, Mat.diag(T, eigs), sub.identity(), eigs)
        else:
            Gl = SpectralElement(sub, Mat(T, []), Mat(T, []), [], check=False)
        out.append(DatumSkeleton(sLl, Gl, dict(S.phi), dict(S.rho), embedding=Pl))
    return out


def direct_sum_data(blocks):
    if not blocks:
        raise ValueError("need at least one block")
    pos = [b.depth for b in blocks if b.depth > 0]
    if len(set(pos)) != len(pos):
        raise ValueError("positive-depth blocks must have distinct depths")
    if sum(1 for b in blocks if b.depth == 0) > 1:
        raise ValueError("at most one depth-zero block")
    if pos != sorted(pos, reverse=True) or (blocks[-1].depth != 0 and len(pos) != len(blocks)):
        order = [b.depth for b in blocks]
        if order != sorted(order, reverse=True):
            raise ValueError("blocks must be ordered by strictly decreasing depth")
    eps = {b.space.eps for b in blocks if b.space.dim} or {blocks[0].space.eps}
    if len(eps) != 1:
        raise ValueError("sign mismatch between blocks")
    if len(blocks) == 1:
        return blocks[0]
    V = blocks[0].space
    basis = blocks[0].x.basis
    grads = list(blocks[0].x.gradings)
    Gm = blocks[0].gamma.matrix
    P = blocks[0].gamma.P
    eigs = list(blocks[0].gamma.eigs)
    emb = blocks[0].embedding
    for b in blocks[1:]:
        V = orthogonal_sum(V, b.space)
        basis = basis.blockdiag(b.x.basis)
        grads += list(b.x.gradings)
        Gm = Gm.blockdiag(b.gamma.matrix)
        P = P.blockdiag(b.gamma.P)
        eigs += list(b.gamma.eigs)
        if emb is not None and b.embedding is not None:
            emb = Mat(V.tower, [list(r1) + list(r2) for r1, r2 in zip(emb.rows, b.embedding.rows)]) \
                if emb.shape[1] else b.embedding
        else:
            emb = None
    x = SplitLatticeFunction(V, basis, grads)
    G = SpectralElement(V, Gm, P, eigs)
    phi = blocks[0].phi if all(b.phi == blocks[0].phi for b in blocks) else {"blocks": [b.phi for b in blocks]}
    rho = {"blocks": [b.rho for b in blocks]} if len(blocks) > 1 else blocks[0].rho
    return DatumSkeleton(x, G, phi, rho, embedding=emb)


def transport_skeleton(S, g, target_space):
    """Push S forward along the linear map g: V -> target_space."""
    gi = g.inverse()
    x = SplitLatticeFunction(target_space, g * S.x.basis, S.x.gradings)
    G = SpectralElement(target_space, g * S.gamma.matrix * gi, g * S.gamma.P, S.gamma.eigs)
    return DatumSkeleton(x, G, S.phi, S.rho)


def check_equivalence_witness(S, S2, g):
    V = S.space
    if not V.is_isometry(g):
        raise ValueError("g is not an isometry")
    gx = SplitLatticeFunction(V, g * S2.x.basis, S2.x.gradings)
    a = S.x.equals(gx)
    diff = g * S2.gamma.matrix * g.inverse() - S.gamma.matrix
    b = moy_prasad_member(diff, S.x, 0, "g")
    c = (S.rho == S2.rho) and (S.phi == S2.phi)
    return bool(a and b and c)


def validate_prime_bound(p, n, e_D):
    return p >= max(2 * n + 1, e_D * n + 2)


# ---------------------------------------------------------------- generators

def cayley(space, Y):
    """(1 + Y)(1 - Y)^-1, an isometry for skew Y with 1 - Y invertible."""
    I = space.identity()
    return (I + Y) * (I - Y).inverse()


def random_skew(space, rng, scale_val=1, bound=None):
    """Random skew element with entries of valuation >= scale_val (D-units)."""
    V = space
    T = V.tower
    pi = V.algebra.uniformizer()
    n = V.dim
    bound = bound or T.p
    def rnd():
        c = [rng.randrange(bound) for _ in range(T.d)]
        return T.element(c)
    X = Mat(T, [[rnd() * pi ** scale_val for _ in range(n)] for _ in range(n)])
    return (X - V.adjoint(X)) * Fraction(1, 2)


def random_isometry(space, rng, scale_val=1):
    return cayley(space, random_skew(space, rng, scale_val))
