"""Finite symplectic spaces, the Heisenberg-Weil representation in a
Schroedinger model, character tables of small classical groups and the finite
theta correspondence used by depth-zero lifts."""
import cmath
import itertools
from fractions import Fraction

import numpy as np

from . import ffla
from .localfield import GF, default_poly, is_prime
from .matrix import Mat

TOL = 1e-6
ORDER_CAP = 50000
BUDGET = 729


class FiniteWeilError(ValueError):
    pass


class BudgetError(FiniteWeilError):
    pass


def finite_field(q):
    for p in range(2, q + 1):
        if q % p == 0 and is_prime(p):
            break
    f, r = 0, q
    while r % p == 0:
        r //= p
        f += 1
    if r != 1:
        raise FiniteWeilError("%d is not a prime power" % q)
    return GF(p, default_poly(p, f))


# ---------------------------------------------------------------- matrices over F

def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_inv(F, M):
    n = len(M)
    A, piv = ffla.rref(F, [list(r) + e for r, e in zip(M, identity(n))])
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [r[n:] for r in A]


def mat_vec(F, M, v):
    return [_dot(F, r, v) for r in M]


def _dot(F, u, v):
    acc = 0
    for a, b in zip(u, v):
        if a and b:
            acc = F.add(acc, F.mul(a, b))
    return acc


def freeze(M):
    return tuple(tuple(r) for r in M)


def legendre_sign(F, a):
    if a == 0:
        raise FiniteWeilError("Legendre symbol of 0")
    return 1 if F.is_square(a) else -1


# ---------------------------------------------------------------- forms over finite fields

class FiniteForm:
    """Sesquilinear space over F: sigma is the identity, or the order-2
    Frobenius of F = f_{p^2} (unitary case); sign = +1 or -1."""

    def __init__(self, F, gram, sign, sigma=False):
        self.F = F
        self.gram = [list(r) for r in gram]
        self.sign = sign
        self.sigma = bool(sigma)
        if self.sigma and F.f != 2:
            raise FiniteWeilError("unitary forms need F = f_{p^2}")
        n = len(self.gram)
        for i in range(n):
            for j in range(n):
                lhs = self.conj(self.gram[j][i])
                rhs = self.gram[i][j] if sign == 1 else F.neg(self.gram[i][j])
                if lhs != rhs:
                    raise FiniteWeilError("Gram matrix does not have the declared symmetry")
        if n and ffla.det(F, self.gram) == 0:
            raise FiniteWeilError("degenerate form")

    @property
    def dim(self):
        return len(self.gram)

    @property
    def kind(self):
        if self.sigma:
            return "unitary"
        return "orthogonal" if self.sign == 1 else "symplectic"

    @property
    def base(self):
        return GF(self.F.p) if self.sigma else self.F

    def conj(self, a):
        return self.F.frob(a) if self.sigma else a

    def pair(self, u, v):
        F = self.F
        acc = 0
        for i, a in enumerate(u):
            if not a:
                continue
            ca = self.conj(a)
            for j, b in enumerate(v):
                if b and self.gram[i][j]:
                    acc = F.add(acc, F.mul(ca, F.mul(self.gram[i][j], b)))
        return acc

    def vectors(self):
        return itertools.product(range(self.F.q), repeat=self.dim)

    def isotropic_vector(self):
        for v in self.vectors():
            if any(v) and self.pair(v, v) == 0:
                return list(v)
        return None

    def is_anisotropic(self):
        return self.dim == 0 or self.isotropic_vector() is None

    def plus(self, other):
        if (self.F, self.sign, self.sigma) != (other.F, other.sign, other.sigma):
            raise FiniteWeilError("orthogonal sum of forms of different type")
        n, m = self.dim, other.dim
        G = [[0] * (n + m) for _ in range(n + m)]
        for i in range(n):
            G[i][:n] = self.gram[i]
        for i in range(m):
            G[n + i][n:] = other.gram[i]
        return FiniteForm(self.F, G, self.sign, self.sigma)

    def with_hyperbolic(self, k):
        out = self
        for _ in range(k):
            out = out.plus(hyperbolic_form(self.F, self.sign, self.sigma))
        return out

    def describe(self):
        return {"q": self.F.q, "kind": self.kind, "sign": self.sign, "dim": self.dim, "gram": self.gram}

    def key(self):
        return (self.F.p, self.F.poly, self.sign, self.sigma, freeze(self.gram))

    def __repr__(self):
        return "FiniteForm(%s, q=%d, dim=%d)" % (self.kind, self.F.q, self.dim)


def hyperbolic_form(F, sign, sigma=False):
    s = 1 if sign == 1 else F.neg(1)
    return FiniteForm(F, [[0, 1], [s, 0]], sign, sigma)


def zero_form(F, sign, sigma=False):
    return FiniteForm(F, [], sign, sigma)


# ---------------------------------------------------------------- finite groups

class FiniteGroup:
    """A matrix group over F given by the full list of its elements."""

    def __init__(self, F, n, elements, form=None):
        self.F = F
        self.n = n
        self.elements = [freeze(g) for g in elements]
        self.index = {g: i for i, g in enumerate(self.elements)}
        self.form = form
        self.one = freeze(identity(n))

    @property
    def order(self):
        return len(self.elements)

    def mul(self, a, b):
        if self.n == 0:
            return ()
        return freeze(ffla.matmul(self.F, a, b))

    def inv(self, a):
        if self.n == 0:
            return ()
        return freeze(mat_inv(self.F, a))


def isometry_group(form, cap=ORDER_CAP):
    """All g with sigma(g)^T G g = G, by column-wise backtracking."""
    F, n = form.F, form.dim
    if n == 0:
        return FiniteGroup(F, 0, [()], form)
    vecs = [list(v) for v in form.vectors() if any(v)]
    norm = {}
    for v in vecs:
        norm.setdefault(form.pair(v, v), []).append(v)
    out = []

    def rec(j, cols):
        if j == n:
            out.append([[cols[c][r] for c in range(n)] for r in range(n)])
            if len(out) > cap:
                raise BudgetError("group order exceeds the cap %d" % cap)
            return
        for v in norm.get(form.gram[j][j], []):
            if all(form.pair(cols[i], v) == form.gram[i][j] for i in range(j)):
                rec(j + 1, cols + [v])

    rec(0, [])
    return FiniteGroup(F, n, out, form)


# ---------------------------------------------------------------- character tables

class FiniteGroupRepTable:
    def __init__(self, group, classes, sizes, chars, degrees, cuspidal):
        self.group = group
        self.classes = classes          # list of lists of element indices
        self.sizes = sizes
        self.chars = chars              # numpy array (irreps x classes)
        self.degrees = degrees
        self.cuspidal = cuspidal        # list of True / False / None (unknown)
        self.class_of = {}
        for k, c in enumerate(classes):
            for i in c:
                self.class_of[i] = k

    @property
    def reps(self):
        return [self.group.elements[c[0]] for c in self.classes]

    def inner(self, a, b):
        return complex(np.sum(np.array(self.sizes) * a * np.conj(b)) / self.group.order)

    def trivial_index(self):
        for i, row in enumerate(self.chars):
            if np.allclose(row, 1, atol=TOL):
                return i
        raise FiniteWeilError("no trivial character")

    def cusp_flag(self, i):
        c = self.cuspidal[i]
        return "unknown" if c is None else ("cuspidal" if c else "non-cuspidal")

    def to_json(self):
        return {
            "order": self.group.order,
            "classes": [{"size": s, "rep": [list(r) for r in self.group.elements[c[0]]]}
                        for s, c in zip(self.sizes, self.classes)],
            "characters": [[[round(float(z.real), 9), round(float(z.imag), 9)] for z in row]
                           for row in self.chars],
            "degrees": self.degrees,
            "cuspidality": [self.cusp_flag(i) for i in range(len(self.degrees))],
        }


def conjugacy_classes(G):
    seen = [False] * G.order
    classes = []
    invs = [G.inv(g) for g in G.elements]
    for i, x in enumerate(G.elements):
        if seen[i]:
            continue
        orb = set()
        for g, gi in zip(G.elements, invs):
            orb.add(G.index[G.mul(G.mul(g, x), gi)])
        for k in orb:
            seen[k] = True
        classes.append(sorted(orb))
    one = G.index[G.one]
    classes.sort(key=lambda c: (c[0] != one, len(c), c[0]))
    return classes


def character_table(G, cap=ORDER_CAP, seed=0):
    """Burnside-Dixon: common eigenvectors of the class multiplication
    matrices give the central characters."""
    if G.order > cap:
        raise BudgetError("group order %d exceeds the cap %d" % (G.order, cap))
    classes = conjugacy_classes(G)
    k = len(classes)
    cls = {}
    for c, members in enumerate(classes):
        for i in members:
            cls[i] = c
    sizes = [len(c) for c in classes]
    invs = {i: G.index[G.inv(G.elements[i])] for i in range(G.order)}
    # A[i][j, l] = #{x in C_i : x^-1 z_l in C_j}
    A = np.zeros((k, k, k))
    for l in range(k):
        z = G.elements[classes[l][0]]
        for i in range(k):
            for xi in classes[i]:
                y = G.mul(G.elements[invs[xi]], z)
                A[i, cls[G.index[y]], l] += 1
    rng = np.random.default_rng(seed)
    for _ in range(20):
        coef = rng.normal(size=k)
        M = np.tensordot(coef, A, axes=1)
        vals, vecs = np.linalg.eig(M)
        if len(set(np.round(vals, 6))) == k:
            break
    else:
        raise FiniteWeilError("could not separate the central characters")
    chars = []
    degrees = []
    for t in range(k):
        w = vecs[:, t] / vecs[0, t]
        norm = sum(abs(w[c]) ** 2 / sizes[c] for c in range(k))
        d = (G.order / norm) ** 0.5
        di = int(round(d.real if isinstance(d, complex) else d))
        if abs(d - di) > TOL:
            raise FiniteWeilError("non-integral degree %s" % d)
        chars.append(np.array([di * w[c] / sizes[c] for c in range(k)]))
        degrees.append(di)
    order = sorted(range(k), key=lambda t: (degrees[t], -round(chars[t].real.sum(), 6),
                                            tuple(np.round(chars[t].real, 6)),
                                            tuple(np.round(chars[t].imag, 6))))
    chars = np.array([chars[t] for t in order])
    degrees = [degrees[t] for t in order]
    table = FiniteGroupRepTable(G, classes, sizes, chars, degrees, [None] * k)
    gram = np.array([[table.inner(a, b) for b in chars] for a in chars])
    if not np.allclose(gram, np.eye(k), atol=TOL):
        raise FiniteWeilError("character orthonormality failed")
    if sum(d * d for d in degrees) != G.order:
        raise FiniteWeilError("sum of squared degrees differs from the group order")
    table.cuspidal = cuspidality_flags(table)
    return table


def isotropic_flag(form):
    """Basis of a maximal totally isotropic subspace, built greedily."""
    F = form.F
    X = []
    for v in form.vectors():
        v = list(v)
        if not any(v) or form.pair(v, v) or any(form.pair(x, v) for x in X):
            continue
        if ffla.rank(F, X + [v]) > len(X):
            X.append(v)
    return X


def unipotent_radical(G, X):
    """Elements g with (g-1)X = 0, (g-1)X^perp in X and (g-1)V in X^perp:
    the unipotent radical of the parabolic fixing the isotropic span of X."""
    form = G.form
    F = form.F
    n = form.dim
    perp = ffla.nullspace(F, [[form.pair(x, e) for e in identity(n)] for x in X], n)
    out = []
    for i, g in enumerate(G.elements):
        d = [[F.sub(g[r][c], 1 if r == c else 0) for c in range(n)] for r in range(n)]
        if any(any(mat_vec(F, d, x)) for x in X):
            continue
        if any(ffla.rank(F, X + [mat_vec(F, d, u)]) > len(X) for u in perp):
            continue
        if any(form.pair(x, mat_vec(F, d, e)) for x in X for e in identity(n)):
            continue
        out.append(i)
    return out


def cuspidality_flags(table):
    """A character is cuspidal when its sum over the unipotent radical of
    every proper parabolic vanishes; one isotropic subspace per dimension
    suffices since the isometry group is transitive on each dimension."""
    G = table.group
    flag = isotropic_flag(G.form)
    flags = [True] * len(table.degrees)
    for k in range(1, len(flag) + 1):
        U = unipotent_radical(G, flag[:k])
        for j, row in enumerate(table.chars):
            if abs(sum(row[table.class_of[i]] for i in U)) > TOL:
                flags[j] = False
    return flags


_TABLES = {}


def group_table(form):
    key = form.key()
    if key not in _TABLES:
        _TABLES[key] = character_table(isometry_group(form))
    return _TABLES[key]


# ---------------------------------------------------------------- Weil representation

class FiniteSymplecticSpace:
    """F^{2n} with <(a, b), (a', b')> = a.b' - b.a' and an additive character."""

    def __init__(self, F, n, psi=None):
        if F.p == 2:
            raise FiniteWeilError("even characteristic")
        self.F = F
        self.n = n
        if psi is None:
            psi = {a: cmath.exp(2j * cmath.pi * F.trace(a) / F.p) for a in range(F.q)}
        if all(abs(psi[a] - 1) < TOL for a in range(F.q)):
            raise FiniteWeilError("additive character is trivial")
        self.psi = psi

    @property
    def dim(self):
        return 2 * self.n

    def form(self, u, v):
        F, n = self.F, self.n
        return F.sub(_dot(F, u[:n], v[n:]), _dot(F, u[n:], v[:n]))

    def J(self):
        n = self.n
        F = self.F
        return [[(1 if c == r + n else (F.neg(1) if r == c + n else 0)) for c in range(2 * n)]
                for r in range(2 * n)]

    def is_symplectic(self, g):
        F = self.F
        gT = ffla.transpose(g)
        return ffla.matmul(F, ffla.matmul(F, gT, self.J()), g) == self.J()


class FiniteWeilRep:
    """Schroedinger model on functions on F^n: Heisenberg operators rho(a, b, t),
    the Siegel Levi by chi(det) times substitution, lower unipotents by a
    quadratic phase, Weyl elements by Fourier transform, and arbitrary g by
    the factorisation g = w_S^-1 l(C) m(A) u(S')."""

    def __init__(self, space):
        self.space = space
        F = self.F = space.F
        n = self.n = space.n
        q = F.q
        self.size = q ** n
        if self.size > BUDGET ** 2:
            raise BudgetError("operator size %d too large" % self.size)
        self.ADD = np.array(F._add)
        self.MUL = np.array(F._mul)
        self.NEG = np.array(F._neg)
        self.PSI = np.array([space.psi[a] for a in range(q)])
        self.half = F.inv(F(2))
        self.X = np.array(list(itertools.product(range(q), repeat=n)), dtype=int).reshape(self.size, n) \
            if n else np.zeros((1, 0), dtype=int)
        self.weights = np.array([q ** (n - 1 - k) for k in range(n)], dtype=int)
        self.gamma = self._gamma()
        self._cache = {}

    # vectorised field arithmetic
    def _dotv(self, U, V):
        acc = np.zeros(np.broadcast_shapes(U.shape[:-1], V.shape[:-1]), dtype=int)
        for k in range(U.shape[-1]):
            acc = self.ADD[acc, self.MUL[U[..., k], V[..., k]]]
        return acc

    def _apply(self, M, X):
        cols = []
        for r in M:
            acc = np.zeros(X.shape[0], dtype=int)
            for k, c in enumerate(r):
                if c:
                    acc = self.ADD[acc, self.MUL[c, X[:, k]]]
            cols.append(acc)
        return np.stack(cols, axis=1) if cols else X[:, :0]

    def _idx(self, X):
        return X @ self.weights if self.n else np.zeros(X.shape[0], dtype=int)

    def chi(self, a):
        return legendre_sign(self.F, a)

    # operators
    def heis(self, a, b, t=0):
        F = self.F
        X = self.X
        a = np.array(a, dtype=int)
        b = np.array(b, dtype=int)
        shifted = self.ADD[X, a[None, :]] if self.n else X
        ph = self.ADD[self._dotv(X, b[None, :]), F.mul(self.half, _dot(F, list(a), list(b)))]
        ph = self.ADD[ph, t]
        M = np.zeros((self.size, self.size), dtype=complex)
        M[np.arange(self.size), self._idx(shifted)] = self.PSI[ph]
        return M

    def levi(self, A):
        F = self.F
        Ainv = mat_inv(F, A)
        Y = self._apply(Ainv, self.X)
        M = np.zeros((self.size, self.size), dtype=complex)
        M[np.arange(self.size), self._idx(Y)] = self.chi(ffla.det(F, A))
        return M

    def lower(self, C):
        CX = self._apply(C, self.X)
        Q = self._dotv(self.X, CX)
        return np.diag(self.PSI[self.NEG[self.MUL[self.half, Q]]])

    def weyl(self, S, gamma=None):
        S = sorted(S)
        g = self.gamma if gamma is None else gamma
        q = self.F.q
        X = self.X
        if not S:
            return np.eye(self.size, dtype=complex)
        rest = [k for k in range(self.n) if k not in S]
        XS = X[:, S]
        dots = self._dotv(XS[:, None, :], XS[None, :, :])
        M = self.PSI[dots] * (g ** len(S)) / q ** (len(S) / 2)
        if rest:
            same = np.all(X[:, None, rest] == X[None, :, rest], axis=2)
            M = M * same
        return M

    def upper(self, S):
        W = self.weyl(range(self.n))
        return W.conj().T @ self.lower([[self.F.neg(x) for x in r] for r in S]) @ W

    def _gamma(self):
        """gamma with omega(w)^2 = omega(m(-1)) and (omega(w) omega(u(1)))^3 = 1,
        computed on one coordinate; it is the normalised Gauss sum."""
        F = self.F
        one = FiniteWeilRep.__new__(FiniteWeilRep)
        one.space, one.F, one.n = self.space, F, 1
        one.size = F.q
        one.ADD, one.MUL, one.NEG, one.PSI, one.half = self.ADD, self.MUL, self.NEG, self.PSI, self.half
        one.X = np.arange(F.q, dtype=int).reshape(F.q, 1)
        one.weights = np.array([1], dtype=int)
        F0 = one.weyl([0], gamma=1)
        L = one.lower([[F.neg(1)]])
        T = L @ F0
        T3 = T @ T @ T
        lam = T3[0, 0]
        if not np.allclose(T3, lam * np.eye(F.q), atol=TOL):
            raise FiniteWeilError("Weyl relation is not scalar")
        g = 1 / (lam * self.chi(F.neg(1)))
        if abs(g * g - self.chi(F.neg(1))) > TOL:
            raise FiniteWeilError("inconsistent Gauss normalisation")
        return g

    # group elements
    def weyl_matrix(self, S):
        F, n = self.F, self.n
        M = identity(2 * n)
        for i in S:
            M[i][i] = 0
            M[n + i][n + i] = 0
            M[i][n + i] = 1
            M[n + i][i] = F.neg(1)
        return M

    def omega(self, g):
        key = freeze(g)
        if key in self._cache:
            return self._cache[key]
        F, n = self.F, self.n
        if n == 0:
            return np.eye(1, dtype=complex)
        for k in range(n + 1):
            for S in itertools.combinations(range(n), k):
                h = ffla.matmul(F, self.weyl_matrix(S), g)
                A = [r[:n] for r in h[:n]]
                if ffla.det(F, A):
                    break
            else:
                continue
            break
        B = [r[n:] for r in h[:n]]
        C = [r[:n] for r in h[n:]]
        Ai = mat_inv(F, A)
        Cl = ffla.matmul(F, C, Ai)
        Su = ffla.matmul(F, Ai, B)
        Wi = self.weyl(S).conj().T
        out = Wi @ self.lower(Cl) @ self.levi(A) @ self.upper(Su)
        if len(self._cache) < 4096:
            self._cache[key] = out
        return out


def build_weil(space):
    return FiniteWeilRep(space)


def heisenberg_mul(F, space, h1, h2):
    (w1, t1), (w2, t2) = h1, h2
    w = [F.add(a, b) for a, b in zip(w1, w2)]
    t = F.add(F.add(t1, t2), F.mul(F.inv(F(2)), space.form(w1, w2)))
    return (w, t)


def chi_parabolic(F, g, Wplus):
    """det(g|W+)^((q-1)/2) as +-1; Wplus a list of basis vectors."""
    k = len(Wplus)
    if k == 0:
        return 1
    imgs = [mat_vec(F, g, v) for v in Wplus]
    B = ffla.transpose(Wplus)
    coords = []
    for u in imgs:
        x = ffla.solve(F, B, u)
        if x is None:
            raise FiniteWeilError("g does not stabilise W+")
        coords.append(x)
    d = ffla.det(F, ffla.transpose(coords))
    return legendre_sign(F, d)


def symplectic_embed(F, n, k, h):
    """Embed h in Sp(2(n-k)) acting on coordinates k..n-1 of both halves."""
    m = n - k
    g = identity(2 * n)
    idx = [k + i for i in range(m)] + [n + k + i for i in range(m)]
    for r in range(2 * m):
        for c in range(2 * m):
            g[idx[r]][idx[c]] = h[r][c]
    return g


def random_sp(F, n, rng, words=6):
    """Random element of Sp(2n, F) as a word in Levi, unipotent and Weyl
    generators."""
    g = identity(2 * n)
    for _ in range(words):
        t = rng.randrange(3)
        if t == 0:
            while True:
                A = [[rng.randrange(F.q) for _ in range(n)] for _ in range(n)]
                if ffla.det(F, A):
                    break
            Ai = ffla.transpose(mat_inv(F, A))
            h = [A[r] + [0] * n for r in range(n)] + [[0] * n + Ai[r] for r in range(n)]
        elif t == 1:
            S = [[0] * n for _ in range(n)]
            for i in range(n):
                for j in range(i, n):
                    S[i][j] = S[j][i] = rng.randrange(F.q)
            h = [identity(n)[r] + S[r] for r in range(n)] + [[0] * n + identity(n)[r] for r in range(n)]
        else:
            h = identity(2 * n)
            for i in range(n):
                if rng.random() < 0.5:
                    h[i][i] = h[n + i][n + i] = 0
                    h[i][n + i] = 1
                    h[n + i][i] = F.neg(1)
        g = ffla.matmul(F, g, h)
    return g


def random_parabolic(F, n, k, rng, words=6):
    """Random element of the stabiliser of W+ = span(e_1..e_k)."""
    g = identity(2 * n)
    for _ in range(words):
        t = rng.randrange(4)
        if t == 0:
            while True:
                A = [[rng.randrange(F.q) if (r < k or c >= k) else 0 for c in range(n)] for r in range(n)]
                if ffla.det(F, A):
                    break
            Ai = ffla.transpose(mat_inv(F, A))
            h = [A[r] + [0] * n for r in range(n)] + [[0] * n + Ai[r] for r in range(n)]
        elif t == 1:
            S = [[0] * n for _ in range(n)]
            for i in range(n):
                for j in range(i, n):
                    S[i][j] = S[j][i] = rng.randrange(F.q)
            h = [identity(n)[r] + S[r] for r in range(n)] + [[0] * n + identity(n)[r] for r in range(n)]
        elif t == 2:
            C = [[0] * n for _ in range(n)]
            for i in range(k, n):
                for j in range(i, n):
                    C[i][j] = C[j][i] = rng.randrange(F.q)
            h = [identity(n)[r] + [0] * n for r in range(n)] + [C[r] + identity(n)[r] for r in range(n)]
        else:
            if n == k:
                continue
            h = symplectic_embed(F, n, k, random_sp(F, n - k, rng, 3))
        g = ffla.matmul(F, g, h)
    return g


def levi_parts(F, n, k, g):
    """(det(g|W+), induced element of Sp(W0)) for g in P(W+)."""
    A = [r[:k] for r in g[:k]]
    m = n - k
    idx = [k + i for i in range(m)] + [n + k + i for i in range(m)]
    h = [[g[r][c] for c in idx] for r in idx]
    return ffla.det(F, A), h


def check_invariants(F, n, k, rng, samples=10):
    """W+-invariants carry chi^{W+} (x) omega_{W0}; returns the max deviation."""
    S = FiniteSymplecticSpace(F, n)
    R = FiniteWeilRep(S)
    R0 = FiniteWeilRep(FiniteSymplecticSpace(F, n - k))
    # invariants under translations by W+: functions of x_k..x_{n-1}
    X = R.X
    emb = np.zeros((R.size, R0.size))
    emb[np.arange(R.size), R0._idx(X[:, k:]) if n > k else 0] = 1
    emb /= np.sqrt(F.q ** k)
    for i in range(k):
        a = [0] * n
        a[i] = 1
        T = R.heis(a, [0] * n)
        if not np.allclose(T @ emb, emb, atol=TOL):
            return float("inf")
    worst = 0.0
    for _ in range(samples):
        g = random_parabolic(F, n, k, rng)
        d, h = levi_parts(F, n, k, g)
        lhs = emb.T @ R.omega(g) @ emb
        rhs = legendre_sign(F, d) * R0.omega(h)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
        # the invariant subspace is stable
        worst = max(worst, float(np.max(np.abs(R.omega(g) @ emb - emb @ lhs))))
    return worst


# ---------------------------------------------------------------- dual pairs

class DualPairModel:
    """W = l (x) l' as a symplectic space over the base field, with the
    embeddings of U(l) and U(l') into Sp(W) in a symplectic basis."""

    def __init__(self, l, lp, normalization="parity"):
        if normalization not in ("parity", "restriction"):
            raise FiniteWeilError("unknown normalization %r" % normalization)
        self.normalization = normalization
        if l.F != lp.F or l.sigma != lp.sigma:
            raise FiniteWeilError("dual pair over different fields")
        self.l, self.lp = l, lp
        F = self.F = l.F
        f0 = self.f0 = l.base
        if not l.sigma and l.sign == lp.sign and l.dim and lp.dim:
            raise FiniteWeilError("an orthogonal-symplectic pair needs opposite signs")
        self.deg = 2 if l.sigma else 1
        n, m = l.dim, lp.dim
        self.N2 = n * m * self.deg
        if self.N2 % 2:
            raise FiniteWeilError("odd-dimensional W")
        self.N = self.N2 // 2
        if f0.q ** self.N > BUDGET:
            raise BudgetError("operator size %d exceeds the budget %d" % (f0.q ** self.N, BUDGET))
        if l.sigma:
            self.c = 1 if l.sign * lp.sign == -1 else self._anti()
        else:
            self.c = 1
        self.basis = [(i, j, t) for i in range(n) for j in range(m) for t in range(self.deg)]
        A = [[self._form(x, y) for y in self.basis] for x in self.basis]
        self.P = self._symplectic_basis(A)
        self.Pinv = mat_inv(f0, self.P) if self.N2 else []
        self.space = FiniteSymplecticSpace(f0, self.N)

    def _anti(self):
        F = self.F
        for c in range(1, F.q):
            if F.frob(c) == F.neg(c):
                return c
        raise FiniteWeilError("no trace-zero element")

    def _unit(self, t):
        return 1 if t == 0 else self.F.from_digits([0, 1])

    def _form(self, x, y):
        F = self.F
        (i, j, s), (k, l, t) = x, y
        z = F.mul(self.l.conj(self._unit(s)), self._unit(t))
        z = F.mul(z, F.mul(self.l.gram[i][k], self.lp.gram[j][l]))
        z = F.mul(self.c, z)
        if self.l.sigma:
            z = F.add(z, F.frob(z))
        return self.f0(F.digits(z)[0]) if self.l.sigma else z

    def _symplectic_basis(self, A):
        f0 = self.f0
        d = self.N2
        if d == 0:
            return []
        vecs = [[1 if i == j else 0 for i in range(d)] for j in range(d)]

        def form(u, v):
            return _dot(f0, u, mat_vec(f0, A, v))

        es, fs = [], []
        while True:
            vecs = [v for v in vecs if any(v)]
            if not vecs:
                break
            e = vecs[0]
            partner = next((v for v in vecs if form(e, v)), None)
            if partner is None:
                raise FiniteWeilError("degenerate pairing on W")
            inv = f0.inv(form(e, partner))
            f = [f0.mul(inv, x) for x in partner]
            es.append(e)
            fs.append(f)
            new = []
            for x in vecs[1:]:
                a, b = form(x, f), form(x, e)
                new.append([f0.add(f0.sub(xi, f0.mul(a, ei)), f0.mul(b, fi))
                            for xi, ei, fi in zip(x, e, f)])
            vecs = new
        cols = es + fs
        return ffla.transpose(cols)

    def _coords(self, M):
        """f0-coordinates of a tensor given as an n x m matrix over F."""
        out = []
        for (i, j, t) in self.basis:
            if self.deg == 1:
                out.append(M[i][j])
            else:
                out.append(self.F.digits(M[i][j])[t])
        return out

    def _act(self, fn):
        F = self.F
        cols = []
        for (i, j, t) in self.basis:
            M = [[0] * self.lp.dim for _ in range(self.l.dim)]
            M[i][j] = self._unit(t)
            cols.append(self._coords(fn(M)))
        return ffla.transpose(cols)

    def scalar(self, g, side):
        """Character twist on an odd orthogonal member: chi(det h)^(m) with
        2m the dimension of the symplectic partner, so -1 acts by parity."""
        a, b = (self.l, self.lp) if side == 0 else (self.lp, self.l)
        if self.normalization == "restriction" or a.kind != "orthogonal" or a.dim % 2 == 0:
            return 1
        m = b.dim // 2
        return legendre_sign(self.F, ffla.det(self.F, [list(r) for r in g])) ** m

    def operator(self, R, g, side):
        emb = self.embed(g) if side == 0 else self.embed_p(g)
        base = R.omega(emb) if R else np.eye(1, dtype=complex)
        return self.scalar(g, side) * base

    def embed(self, g):
        F = self.F

        def fn(M):
            return ffla.matmul(F, [list(r) for r in g], M)
        return self._sp(self._act(fn))

    def embed_p(self, g):
        F = self.F
        gT = ffla.transpose([list(r) for r in g])

        def fn(M):
            return ffla.matmul(F, M, gT)
        return self._sp(self._act(fn))

    def _sp(self, G):
        if not self.N2:
            return []
        h = ffla.matmul(self.f0, ffla.matmul(self.f0, self.Pinv, G), self.P)
        if not self.space.is_symplectic(h):
            raise FiniteWeilError("embedded element is not symplectic")
        return h


_WEIL = {}


def weil_for(space):
    key = (space.F.p, space.F.poly, space.n)
    if key not in _WEIL:
        _WEIL[key] = FiniteWeilRep(space)
    return _WEIL[key]


def _pair_operators(model, table, side):
    R = weil_for(model.space) if model.N else None
    G = table.group
    return [model.operator(R, G.elements[c[0]], side) for c in table.classes]


def _as_vector(table, rho):
    if isinstance(rho, (int, np.integer)):
        return table.chars[int(rho)]
    return np.asarray(rho)


def theta_decompose(l, lp, rho, normalization="parity"):
    """[(index of rho' in the table of U(l'), multiplicity)] with positive
    multiplicity of rho (x) rho' in omega restricted to U(l) x U(l')."""
    T, Tp = group_table(l), group_table(lp)
    chi = _as_vector(T, rho)
    model = DualPairModel(l, lp, normalization)
    Om = _pair_operators(model, T, 0)
    Omp = _pair_operators(model, Tp, 1)
    tr = np.array([[np.sum(a * b.T) for b in Omp] for a in Om])
    sz, szp = np.array(T.sizes), np.array(Tp.sizes)
    out = []
    for j, row in enumerate(Tp.chars):
        m = np.sum(np.outer(sz * np.conj(chi), szp * np.conj(row)) * tr) / (T.group.order * Tp.group.order)
        mi = int(round(m.real))
        if abs(m - mi) > TOL:
            raise FiniteWeilError("non-integral multiplicity %s" % m)
        if mi:
            out.append((j, mi))
    return out


def full_decomposition(l, lp, normalization="parity"):
    T = group_table(l)
    return {i: theta_decompose(l, lp, i, normalization) for i in range(len(T.degrees))}


def _split(space_basis, H):
    """Split an orthonormal basis block by the eigenvalues of the Hermitian H."""
    B = space_basis.conj().T @ H @ space_basis
    vals, vecs = np.linalg.eigh(B)
    groups = []
    start = 0
    for k in range(1, len(vals) + 1):
        if k == len(vals) or vals[k] - vals[k - 1] > 1e-6:
            groups.append(space_basis @ vecs[:, start:k])
            start = k
    return groups


def diagonalization_oracle(l, lp, normalization="parity"):
    """Independent decomposition: joint eigenspaces of the class-sum operators
    of both groups, matched against central characters."""
    T, Tp = group_table(l), group_table(lp)
    model = DualPairModel(l, lp, normalization)
    R = weil_for(model.space) if model.N else None
    size = R.size if R else 1

    def class_sums(table, side):
        G = table.group
        out = []
        for c in table.classes:
            Z = np.zeros((size, size), dtype=complex)
            for i in c:
                Z += model.operator(R, G.elements[i], side)
            out.append(Z)
        return out

    Zs = class_sums(T, 0) + class_sums(Tp, 1)
    blocks = [np.eye(size, dtype=complex)]
    for Z in Zs:
        for H in ((Z + Z.conj().T) / 2, (Z - Z.conj().T) / 2j):
            nb = []
            for b in blocks:
                nb.extend(_split(b, H))
            blocks = nb

    def central(table):
        return [np.array(table.sizes) * row / row[0] for row in table.chars]

    cen, cenp = central(T), central(Tp)
    k = len(T.classes)
    mult = {}
    for b in blocks:
        d = b.shape[1]
        lam = np.array([np.trace(b.conj().T @ Z @ b) / d for Z in Zs])
        i = next(i for i, c in enumerate(cen) if np.allclose(c, lam[:k], atol=1e-5))
        j = next(j for j, c in enumerate(cenp) if np.allclose(c, lam[k:], atol=1e-5))
        mult[(i, j)] = mult.get((i, j), 0) + d
    out = {i: [] for i in range(len(T.degrees))}
    for (i, j), d in mult.items():
        dd = T.degrees[i] * Tp.degrees[j]
        if d % dd:
            raise FiniteWeilError("eigenspace dimension not divisible by the degree")
        out[i].append((j, d // dd))
    return {i: sorted(v) for i, v in out.items()}


def first_occurrence(l, rho, kernel, cap=4, normalization="parity"):
    """Walk kernel + H^k, k = 0..cap, and return the first member where rho
    has a theta lift."""
    tried = []
    for k in range(cap + 1):
        lp = kernel.with_hyperbolic(k)
        try:
            res = theta_decompose(l, lp, rho, normalization)
        except BudgetError as ex:
            raise BudgetError("first occurrence not reached within the budget after %s: %s" % (tried, ex))
        tried.append(k)
        if res:
            return {"k": k, "space": lp, "lifts": res}
    raise BudgetError("no lift up to %d hyperbolic planes" % cap)


# ---------------------------------------------------------------- special morphism

class ResidueHeisenberg:
    """W = the part of g_{x,s:s+} off the centraliser of Gamma (Gamma diagonal
    in the basis of sL), with <X1, X2> = res B([X1, X2], Gamma), and the
    Heisenberg group H(W) = W x f."""

    def __init__(self, V, sL, Gamma, s):
        from .momentmap import ResidueFrame, eig_pattern, filtered_g, base_residue
        self._res = base_residue
        self.V, self.sL, self.Gamma, self.s = V, sL, Gamma, Fraction(s)
        same = eig_pattern(sL, [Gamma])
        self.frame = ResidueFrame(sL, s)
        self.F = F = self.frame.field
        self.lifts, self.rows = filtered_g(V, self.frame, lambda j, i: not same(j, i))
        self.gram = [[base_residue(V.B(a.commutator(b), Gamma)) for b in self.lifts] for a in self.lifts]
        if self.lifts and ffla.nullspace(F, self.gram, len(self.lifts)):
            raise FiniteWeilError("pairing degenerate on the supplied quotient")

    @property
    def dim(self):
        return len(self.lifts)

    def pair(self, a, b):
        return _dot(self.F, a, mat_vec(self.F, self.gram, b))

    def mul(self, h1, h2):
        F = self.F
        (a, t), (b, u) = h1, h2
        w = [F.add(x, y) for x, y in zip(a, b)]
        return (w, F.add(F.add(t, u), F.mul(F.inv(F(2)), self.pair(a, b))))

    def sample(self, rng):
        """Random X in the span of the lifts (a genuine element of W)."""
        X = Mat.zeros(self.V.tower, self.V.dim)
        for L in self.lifts:
            X = X + L * rng.randrange(self.F.p)
        return X

    def zeta(self, X):
        return special_morphism_residue(self, X)


def special_morphism_residue(W, X):
    """(X mod g_{x,s+} in the coordinates of W, res B(X, Gamma))."""
    F = W.F
    c = W.frame.coords(X)
    if not W.rows:
        a = []
        if any(c):
            raise FiniteWeilError("element has a component outside W")
    else:
        a = ffla.solve(F, ffla.transpose(W.rows), c)
        if a is None:
            raise FiniteWeilError("element has a component outside W")
    return (list(a), W._res(W.V.B(X, W.Gamma)))


def exp_substitute(V, X):
    """Cayley transform c(X/2): agrees with exp to second order."""
    I = V.identity()
    Y = X * Fraction(1, 2)
    return (I + Y) * (I - Y).inverse()


def log_substitute(V, g):
    I = V.identity()
    return (g - I) * (g + I).inverse() * 2


def check_special_morphism(W, rng, count=10):
    """zeta(e^X) zeta(e^Y) = zeta(e^X e^Y) on sampled pairs; both sides
    computed independently (group law in H(W) vs the product in G)."""
    fails = []
    for _ in range(count):
        X, Y = W.sample(rng), W.sample(rng)
        lhs = W.mul(W.zeta(X), W.zeta(Y))
        Z = log_substitute(W.V, exp_substitute(W.V, X) * exp_substitute(W.V, Y))
        rhs = W.zeta(Z)
        if lhs != rhs:
            fails.append((lhs, rhs))
    return fails


# ---------------------------------------------------------------- depth-zero lifts

def residue_forms(res):
    """FiniteForms of the good-lattice residues (l, l*)."""
    sig = res.involution(res.field.gen) != res.field.gen if res.field.f == 2 else False
    F = res.field
    l = FiniteForm(F, res.ell, res.sign_ell, sig) if res.ell else zero_form(F, res.sign_ell, sig)
    ls = FiniteForm(F, res.ell_star, res.sign_ell_star, sig) if res.ell_star else zero_form(F, res.sign_ell_star, sig)
    return l, ls


def vertex_residue_forms(sL):
    """Residue forms (l, l*) of the good lattice of a vertex; zero spaces give
    zero forms of the right types."""
    from .lattice import good_lattice_residues
    V = sL.space
    if V.dim:
        return residue_forms(good_lattice_residues(sL))
    alg = V.algebra
    F = V.tower.residue
    sig = alg.kind == "unramified"
    return zero_form(F, alg.eps_D * V.eps, sig), zero_form(F, V.eps, sig)


def anisotropic_vertex(T):
    """The self-dual split function of the anisotropic kernel of T."""
    from .hermitian import HermitianSpace, zero_space
    from .lattice import SplitLatticeFunction, is_self_dual
    from .matrix import Mat
    alg = T.algebra
    tower = alg.tower
    if not T.rep:
        V = zero_space(alg, T.eps)
        return V, SplitLatticeFunction(V, Mat(tower, []), [])
    pi = alg.uniformizer()
    ents, grads = [], []
    for x in T.rep:
        x = x if x.tower == tower else tower.embed(x)
        k = x.vpi()
        j = k // 2
        y = alg.tau(pi ** (-j)) * x * pi ** (-j)
        ents.append(y)
        grads.append(Fraction(1, 2 * tower.e) if k % 2 else Fraction(0))
    V = HermitianSpace(alg, T.eps, Mat.diag(tower, ents))
    sL = SplitLatticeFunction(V, V.identity(), grads)
    if not is_self_dual(sL):
        raise FiniteWeilError("anisotropic vertex is not self-dual")
    return V, sL


def lift_depth_zero_datum(S0, Tp, rho=None, cap=4):
    """Theta lift of a depth-zero datum with respect to the Witt tower of Tp.
    rho = (index on U(l), index on U(l*)); default: the first cuspidal pair."""
    from .factorization import DatumSkeleton, SpectralElement
    from .hermitian import witt_invariants
    from .lattice import upsilon
    l, ls = vertex_residue_forms(S0.x)
    Tl, Tls = group_table(l), group_table(ls)
    if rho is None:
        rho = (_first_cuspidal(Tl), _first_cuspidal(Tls))
    V0, x0 = anisotropic_vertex(Tp)
    a, a_star = vertex_residue_forms(x0)
    # each residue space pairs with the target tower of opposite type
    if _opposite(l, a_star):
        pairs = [("ell", l, rho[0], a_star, "ell_prime_star"), ("ell_star", ls, rho[1], a, "ell_prime")]
    else:
        pairs = [("ell", l, rho[0], a, "ell_prime"), ("ell_star", ls, rho[1], a_star, "ell_prime_star")]
    found = {}
    for name, src, r, kernel, target in pairs:
        occ = first_occurrence(src, r, kernel, cap)
        (j, mult), = occ["lifts"] if len(occ["lifts"]) == 1 else [(None, None)]
        if j is None:
            found[target] = {"space": occ["space"], "rho": [list(x) for x in occ["lifts"]], "unique": False}
        else:
            tab = group_table(occ["space"])
            found[target] = {"space": occ["space"], "rho": j, "unique": True,
                             "multiplicity": mult, "cuspidal": tab.cusp_flag(j), "k": occ["k"]}
    lp, lps = found["ell_prime"]["space"], found["ell_prime_star"]["space"]
    alg = S0.x.space.algebra
    Vp, xp = upsilon(lp.gram, lps.gram, alg, -S0.x.space.eps)
    ok_class = witt_invariants(Vp) == Tp
    src_cusp = [Tl.cusp_flag(rho[0]), Tls.cusp_flag(rho[1])]
    skel = DatumSkeleton(xp, SpectralElement.zero(Vp), {"label": "1"},
                         {"ell_prime": found["ell_prime"].get("rho"),
                          "ell_prime_star": found["ell_prime_star"].get("rho")})
    return {
        "skeleton": skel,
        "space": Vp,
        "ell": l, "ell_star": ls, "rho": rho, "rho_cuspidal": src_cusp,
        "ell_prime": lp, "ell_prime_star": lps,
        "lifts": found,
        "witt_ok": ok_class,
        "dims_ok": (l.dim + ls.dim == S0.x.space.dim) and (lp.dim + lps.dim == Vp.dim),
    }


def _opposite(a, b):
    if a.sigma:
        return True
    return a.sign != b.sign


def _first_cuspidal(table):
    for i, c in enumerate(table.cuspidal):
        if c:
            return i
    return table.trivial_index()
