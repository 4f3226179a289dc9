"""epsilon-Hermitian spaces over (D, tau), adjoints, the trace form and Witt
classes over Q_p and its quadratic extensions."""

from fractions import Fraction

from .localfield import (LocalElement, hilbert_symbol, legendre, make_tower,
                         square_class, _reduce)
from .matrix import Mat

KINDS = ("split", "unramified", "ramified")


class InvolutiveAlgebra:
    """D with involution tau and a fixed uniformizer pi_D, tau(pi_D) = eps_D pi_D."""

    def __init__(self, kind, tower):
        if kind not in KINDS:
            raise ValueError("unknown algebra kind %r" % kind)
        if kind == "unramified":
            if (tower.f, tower.e) != (2, 1) or tower.poly[1] % tower.p:
                raise ValueError("unramified D needs f=2, e=1 and a pure x^2 - a generator")
        if kind == "ramified" and (tower.f, tower.e) != (1, 2):
            raise ValueError("ramified D needs f=1, e=2")
        self.kind = kind
        self.tower = tower
        self.p = tower.p
        if kind == "split":
            self.base = tower
        else:
            self.base = make_tower(tower.p, 1, 1, tower.N)

    @property
    def eps_D(self):
        return -1 if self.kind == "ramified" else 1

    @property
    def e_D(self):
        """Ramification of D over F."""
        return 2 if self.kind == "ramified" else 1

    @property
    def val_unit(self):
        """val(pi_D) in the normalisation val(p) = 1."""
        return Fraction(1, self.tower.e)

    def uniformizer(self):
        return self.tower.pi()

    def delta(self):
        """A fixed tau-anti-invariant element (zero for split D)."""
        if self.kind == "split":
            return self.tower.zero()
        c = [0] * self.tower.d
        c[1] = 1
        return self.tower.element(c)

    def d_param(self):
        """d with D = F(sqrt d)."""
        if self.kind == "split":
            return None
        x = self.delta()
        return self.base(0) + self.restrict(x * x)

    def tau(self, x):
        if self.kind == "split":
            return x
        c = list(x.coords)
        c[1] = -c[1]
        return LocalElement(x.tower, c, x.shift, x.prec)

    def restrict(self, x):
        """View a tau-fixed element of D as an element of F."""
        if self.kind == "split":
            return x
        return self.tower.restrict(x)

    def trace(self, x):
        """Reduced trace D -> F."""
        if self.kind == "split":
            return x
        return self.restrict(x + self.tau(x))

    def __call__(self, x):
        return self.tower(x)

    def residue_involution(self, a):
        if self.kind == "unramified":
            return self.tower.residue.frob(a)
        return a

    def __eq__(self, o):
        return isinstance(o, InvolutiveAlgebra) and (self.kind, self.tower) == (o.kind, o.tower)

    def __hash__(self):
        return hash((self.kind, self.tower))

    def __repr__(self):
        return "Algebra(%s, %r)" % (self.kind, self.tower)


def make_algebra(kind, p, N, tower=None, zeta=1):
    if kind == "split":
        return InvolutiveAlgebra("split", tower or make_tower(p, 1, 1, N))
    if kind == "unramified":
        a = next(a for a in range(2, p) if legendre(a, p) == -1)
        return InvolutiveAlgebra("unramified", make_tower(p, 2, 1, N, poly=((-a) % p, 0, 1)))
    return InvolutiveAlgebra("ramified", make_tower(p, 1, 2, N, zeta=zeta))


def tau_mat(alg, X):
    return X.map(alg.tau)


class HermitianSpace:
    """(V, <,>) with <u, v> = tau(u)^T G v and tau(G)^T = eps G."""

    def __init__(self, algebra, eps, gram, check=True):
        if eps not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if not isinstance(gram, Mat):
            gram = Mat(algebra.tower, gram)
        self.algebra = algebra
        self.eps = eps
        self.gram = gram
        self.dim = gram.n
        self._ginv = None
        if check:
            if gram.shape[0] != gram.shape[1]:
                raise ValueError("Gram matrix must be square")
            if not (tau_mat(algebra, gram).T == gram * eps):
                raise ValueError("Gram matrix is not %+d-Hermitian" % eps)
            if self.dim and gram.det().is_zero():
                raise ValueError("degenerate form")

    @property
    def tower(self):
        return self.algebra.tower

    @property
    def ginv(self):
        if self._ginv is None:
            self._ginv = self.gram.inverse()
        return self._ginv

    def pairing(self, u, v):
        tu = [self.algebra.tau(x) for x in u]
        acc = self.tower.zero()
        for i in range(self.dim):
            for j in range(self.dim):
                acc = acc + tu[i] * self.gram[i, j] * v[j]
        return acc

    def adjoint(self, X):
        if X.shape != (self.dim, self.dim):
            raise ValueError("dimension mismatch: %s vs %d" % (X.shape, self.dim))
        return self.ginv * tau_mat(self.algebra, X).T * self.gram

    def is_skew(self, X):
        return (X + self.adjoint(X)).is_zero()

    def is_isometry(self, g):
        return (tau_mat(self.algebra, g).T * self.gram * g) == self.gram

    def tr_F(self, X):
        return self.algebra.trace(X.trace())

    def B(self, X, Y):
        return self.tr_F(X * Y) * Fraction(1, 2)

    def identity(self):
        return Mat.identity(self.tower, self.dim)

    def __repr__(self):
        return "HermitianSpace(%s, eps=%+d, dim=%d)" % (self.algebra.kind, self.eps, self.dim)


def adjoint(V, X):
    return V.adjoint(X)


def trace_form_B(V, X, Y):
    return V.B(X, Y)


def twist_space(V, Gamma):
    if not V.is_skew(Gamma):
        raise ValueError("Gamma is not skew-adjoint")
    if Gamma.det().is_zero():
        raise ValueError("Gamma is singular")
    return HermitianSpace(V.algebra, -V.eps, V.gram * Gamma)


def orthogonal_sum(V1, V2):
    if V1.algebra != V2.algebra or V1.eps != V2.eps:
        raise ValueError("orthogonal sum needs matching algebra and sign")
    if V1.dim == 0:
        return V2
    if V2.dim == 0:
        return V1
    return HermitianSpace(V1.algebra, V1.eps, V1.gram.blockdiag(V2.gram))


def zero_space(algebra, eps):
    return HermitianSpace(algebra, eps, Mat(algebra.tower, []), check=False)


# ---------------------------------------------------------------- diagonalisation

def diagonalize(alg, G):
    """Diagonal entries of a tau-Hermitian G (tau(G)^T = G) under congruence."""
    A = [list(r) for r in G.rows]
    n = len(A)
    out = []
    idx = list(range(n))
    tau = alg.tau
    while idx:
        diag = [i for i in idx if not A[i][i].is_zero()]
        if diag:
            i = min(diag, key=lambda k: A[k][k].val())
        else:
            pair = None
            for a in idx:
                for b in idx:
                    if a != b and not A[a][b].is_zero():
                        pair = (a, b)
                        break
                if pair:
                    break
            if pair is None:
                raise ValueError("degenerate form")
            a, b = pair
            lams = [alg.tower.one()]
            if alg.kind != "split":
                lams.append(alg.delta())
            for lam in lams:
                # e_a <- e_a + lam e_b
                new = A[a][a] + tau(lam) * A[b][a] + A[a][b] * lam + tau(lam) * A[b][b] * lam
                if not new.is_zero():
                    break
            else:
                raise ValueError("could not find an anisotropic vector")
            for k in idx:
                A[a][k] = A[a][k] + tau(lam) * A[b][k]
            for k in idx:
                A[k][a] = A[k][a] + A[k][b] * lam
            i = a
        piv = A[i][i]
        inv = piv.inverse()
        rest = [k for k in idx if k != i]
        for k in rest:
            c = A[k][i] * inv
            if c.is_zero():
                continue
            for m in idx:
                A[k][m] = A[k][m] - c * A[i][m]
        for k in rest:
            A[i][k] = alg.tower.zero()
            A[k][i] = alg.tower.zero()
        out.append(alg.restrict(piv))
        idx = rest
    return out


# ---------------------------------------------------------------- Witt classes

class WittClass:
    """Class in the Witt group, stored through a canonical anisotropic
    diagonal representative."""

    def __init__(self, algebra, eps, key, rep):
        self.algebra = algebra
        self.eps = eps
        self.key = key
        self.rep = rep            # list of diagonal entries in D

    @property
    def kind(self):
        return self.algebra.kind

    @property
    def aniso_dim(self):
        return len(self.rep)

    def gram(self):
        return Mat.diag(self.algebra.tower, self.rep) if self.rep else Mat(self.algebra.tower, [])

    def space(self):
        if not self.rep:
            return zero_space(self.algebra, self.eps)
        return HermitianSpace(self.algebra, self.eps, self.gram())

    def is_trivial(self):
        return not self.rep

    @property
    def discriminant(self):
        """Square class (parity, Legendre) of the representative's determinant
        for symmetric forms; norm class (+1/-1) for Hermitian ones."""
        return _disc(self)

    @property
    def hasse(self):
        return _hasse(self)

    def __eq__(self, o):
        return (isinstance(o, WittClass) and self.algebra == o.algebra
                and self.eps == o.eps and self.key == o.key)

    def __hash__(self):
        return hash((self.algebra, self.eps, self.key))

    def describe(self):
        return {"kind": self.kind, "sign": self.eps, "aniso_dim": self.aniso_dim,
                "key": list(self.key),
                "rep": [str(x) for x in self.rep]}

    def __repr__(self):
        return "WittClass(%s, eps=%+d, aniso=%d, key=%s)" % (self.kind, self.eps, self.aniso_dim, self.key)


def _require_base(alg):
    t = alg.base
    if (t.f, t.e) != (1, 1):
        raise NotImplementedError("Witt invariants are implemented over Q_p and its quadratic extensions only")


def _canon_unit(p, leg):
    nu = next(a for a in range(2, p) if legendre(a, p) == -1)
    return 1 if leg == 1 else nu


def _symmetric_class(alg, entries):
    p = alg.p
    levels = {0: [], 1: []}
    for a in entries:
        k, leg = square_class(a)
        levels[k].append(leg)
    key, rep = [], []
    m1 = legendre(-1, p)
    for k in (0, 1):
        us = levels[k]
        n = len(us)
        s = m1 ** (n * (n - 1) // 2)
        for u in us:
            s *= u
        key.append((n % 2, s))
        scale = p ** k
        if n % 2:
            rep.append(_canon_unit(p, s) * scale)
        elif s == -1:
            # <1, x> is anisotropic iff -x is a non-square
            rep += [scale, _canon_unit(p, -m1) * scale]
    return tuple(key), [alg.tower(x) for x in rep]


def _is_norm(alg, x):
    return hilbert_symbol(x, alg.d_param()) == 1


def _hermitian_class(alg, entries):
    base = alg.base
    n = len(entries)
    det = base.one()
    for a in entries:
        det = det * a
    s = det * ((-1) ** (n * (n - 1) // 2))
    norm = 1 if _is_norm(alg, s) else -1
    key = (n % 2, norm)
    nonnorm = next(base(c) for c in [_canon_unit(alg.p, -1), alg.p] if not _is_norm(alg, base(c)))
    if n % 2:
        rep = [base.one() if norm == 1 else nonnorm]
    elif norm == -1:
        rep = [base.one(), -nonnorm]
    else:
        rep = []
    return key, [alg.tower.embed(x) for x in rep]


def witt_class_of_entries(alg, eps, entries):
    """Witt class of the diagonal form diag(entries) (entries tau-fixed for
    Hermitian, anti-fixed times delta for skew-Hermitian)."""
    _require_base(alg)
    if alg.kind == "split":
        if eps == -1:
            return WittClass(alg, eps, (), [])
        key, rep = _symmetric_class(alg, [alg.restrict(alg.tower(x)) for x in entries])
        return WittClass(alg, eps, key, rep)
    if eps == 1:
        key, rep = _hermitian_class(alg, [alg.restrict(alg.tower(x)) for x in entries])
        return WittClass(alg, eps, key, rep)
    d = alg.delta()
    key, rep = _hermitian_class(alg, [alg.restrict(d * x) for x in entries])
    dinv = d.inverse()
    return WittClass(alg, eps, key, [dinv * x for x in rep])


def witt_invariants(V):
    alg = V.algebra
    _require_base(alg)
    if V.dim == 0:
        return witt_class_of_entries(alg, V.eps, [])
    if alg.kind == "split" and V.eps == -1:
        return WittClass(alg, -1, (), [])
    G = V.gram
    if alg.kind != "split" and V.eps == -1:
        G = G * alg.delta()
        entries = diagonalize(alg, G)
        dinv = alg.delta().inverse()
        return witt_class_of_entries(alg, -1, [dinv * alg.tower.embed(x) for x in entries])
    entries = diagonalize(alg, G)
    return witt_class_of_entries(alg, V.eps, [alg.tower.embed(x) if alg.kind != "split" else x
                                              for x in entries])


def witt_add(T, S):
    if T.algebra != S.algebra or T.eps != S.eps:
        raise ValueError("incompatible Witt classes")
    return witt_class_of_entries(T.algebra, T.eps, T.rep + S.rep)


def witt_neg(T):
    return witt_class_of_entries(T.algebra, T.eps, [-x for x in T.rep])


def witt_subtract(T, S):
    if T.algebra != S.algebra or T.eps != S.eps:
        raise ValueError("incompatible Witt classes: %r vs %r" % (T, S))
    return witt_add(T, witt_neg(S))


def classical_invariants(V):
    """(dim, discriminant square class, Hasse symbol) of a symmetric form over
    Q_p, computed straight from a diagonalisation."""
    alg = V.algebra
    entries = diagonalize(alg, V.gram)
    det = alg.tower.one()
    for a in entries:
        det = det * a
    h = 1
    for i in range(len(entries)):
        for j in range(i + 1, len(entries)):
            h *= hilbert_symbol(entries[i], entries[j])
    return (V.dim, square_class(det) if entries else (0, 1), h)


def _disc(W):
    alg = W.algebra
    if alg.kind == "split" and W.eps == 1:
        det = alg.tower.one()
        for a in W.rep:
            det = det * a
        return square_class(det)
    return W.key[-1] if W.key else 1


def _hasse(W):
    alg = W.algebra
    if alg.kind == "split" and W.eps == 1:
        h = 1
        for i in range(len(W.rep)):
            for j in range(i + 1, len(W.rep)):
                h *= hilbert_symbol(W.rep[i], W.rep[j])
        return h
    return 1


def isometric(V1, V2):
    if V1.algebra != V2.algebra or V1.eps != V2.eps or V1.dim != V2.dim:
        return False
    return witt_invariants(V1) == witt_invariants(V2)


def hyperbolic_gram(alg, eps, k):
    """Gram of k hyperbolic planes in the basis e_1..e_k, f_k..f_1."""
    n = 2 * k
    rows = [[0] * n for _ in range(n)]
    for i in range(k):
        rows[i][n - 1 - i] = 1
        rows[n - 1 - i][i] = eps
    return Mat(alg.tower, rows)
