"""Lattices, split self-dual lattice functions, Moy-Prasad filtrations, good
lattices with their residue forms, and the self-dual hull of a module function.

Lattice-function parameters t are measured with val(p) = 1; a basis vector
v_i with grading c_i contributes v_i * pi_D^ceil(e(t - c_i)) to L_t, e being
the ramification index of the tower carrying D.
"""

from fractions import Fraction
from math import lcm

from . import ffla
from .hermitian import HermitianSpace, tau_mat
from .localfield import PrecisionError
from .matrix import Mat


def ceil_frac(x):
    x = Fraction(x)
    return -((-x.numerator) // x.denominator)


def floor_frac(x):
    x = Fraction(x)
    return x.numerator // x.denominator


class NotGoodLattice(ValueError):
    pass


class PairingBoundError(ValueError):
    pass


# ---------------------------------------------------------------- lattices

def span_basis(gens):
    """Columns spanning the O_D-module generated by the columns of gens.
    Column operations only, pivoting on the smallest valuation."""
    n, k = gens.shape
    cols = [list(gens.col(j)) for j in range(k)]
    cols = [c for c in cols if not all(x.is_zero() for x in c)]
    out = []
    rows_left = list(range(n))
    while cols and rows_left:
        best = None
        for ci, c in enumerate(cols):
            for r in rows_left:
                x = c[r]
                if x.is_zero():
                    continue
                v = x.val()
                if best is None or v < best[0]:
                    best = (v, ci, r)
        if best is None:
            break
        _, ci, r = best
        piv = cols.pop(ci)
        inv = piv[r].inverse()
        new = []
        for c in cols:
            if not c[r].is_zero():
                fac = c[r] * inv
                c = [a - fac * b for a, b in zip(c, piv)]
            if not all(x.is_zero() for x in c):
                new.append(c)
        cols = new
        out.append(piv)
        rows_left.remove(r)
    tower = gens.tower
    if not out:
        return Mat(tower, [[] for _ in range(n)]) if n else Mat(tower, [])
    return Mat(tower, [[c[i] for c in out] for i in range(n)])


class Lattice:
    """Full-rank O_D-lattice in a Hermitian space, given by basis columns."""

    def __init__(self, space, basis):
        self.space = space
        self.basis = basis
        self._inv = None

    @classmethod
    def span(cls, space, gens):
        b = span_basis(gens)
        if b.shape[1] != space.dim:
            raise ValueError("generators do not span a full lattice")
        return cls(space, b)

    @property
    def inv(self):
        if self._inv is None:
            self._inv = self.basis.inverse()
        return self._inv

    def coords(self, M):
        return self.inv * M

    def contains_vectors(self, M):
        if M.shape[1] == 0:
            return True
        C = self.coords(M)
        return all(x.is_zero() or x.val() >= 0 for r in C.rows for x in r)

    def contains(self, other):
        return self.contains_vectors(other.basis)

    def __le__(self, other):
        return other.contains(self)

    def __eq__(self, other):
        return self.contains(other) and other.contains(self)

    __hash__ = None

    def dual(self):
        """{v : <v, L> in p_D}."""
        V = self.space
        alg = V.algebra
        A = tau_mat(alg, self.basis).T * V.gram
        return Lattice(V, A.inverse() * alg.uniformizer())

    def scale(self, k):
        return Lattice(self.space, self.basis * (self.space.algebra.uniformizer() ** k))

    def __add__(self, other):
        return Lattice.span(self.space, _hcat(self.basis, other.basis))

    def __and__(self, other):
        return (self.dual() + other.dual()).dual()

    def index_length(self, sub):
        """Length of self/sub as O_D-module (sub inside self)."""
        C = self.coords(sub.basis)
        return C.det().vpi()

    def __repr__(self):
        return "Lattice(%r)" % (self.basis,)


def _hcat(A, B):
    if A.shape[1] == 0:
        return B
    if B.shape[1] == 0:
        return A
    return Mat(A.tower, [list(a) + list(b) for a, b in zip(A.rows, B.rows)])


# ---------------------------------------------------------------- lattice functions

class SplitLatticeFunction:
    def __init__(self, space, basis, gradings):
        if basis.shape != (space.dim, space.dim):
            raise ValueError("basis must be a square matrix of size dim V")
        self.space = space
        self.basis = basis
        self.gradings = tuple(Fraction(c) for c in gradings)
        if len(self.gradings) != space.dim:
            raise ValueError("one grading per basis vector")
        self._binv = None

    @property
    def e(self):
        return self.space.tower.e

    @property
    def m(self):
        return lcm(*(c.denominator for c in self.gradings)) if self.gradings else 1

    @property
    def binv(self):
        if self._binv is None:
            self._binv = self.basis.inverse()
        return self._binv

    def exponents(self, t, plus=False):
        e = self.e
        t = Fraction(t)
        if plus:
            return [floor_frac(e * (t - c)) + 1 for c in self.gradings]
        return [ceil_frac(e * (t - c)) for c in self.gradings]

    def at(self, t, plus=False):
        pi = self.space.algebra.uniformizer()
        ks = self.exponents(t, plus)
        D = Mat.diag(self.space.tower, [pi ** k for k in ks])
        return Lattice(self.space, self.basis * D)

    def jumps(self):
        """Jump points in one period [0, 1/e)."""
        per = Fraction(1, self.e)
        return sorted(set((c % per) for c in self.gradings))

    def jumps_between(self, a, b):
        """Jump points in the closed interval [a, b]."""
        per = Fraction(1, self.e)
        out = set()
        for j in self.jumps():
            k = ceil_frac((a - j) / per)
            while j + k * per <= b:
                out.add(j + k * per)
                k += 1
        return sorted(out)

    def sample_points(self):
        js = self.jumps()
        per = Fraction(1, self.e)
        pts = set(js)
        for a, b in zip(js, js[1:] + [js[0] + per]):
            pts.add((a + b) / 2)
        return sorted(pts)

    def coords(self, X):
        return self.binv * X * self.basis

    def level(self, X):
        """Largest t with X in gl_{x,t} (inf for X = 0)."""
        A = self.coords(X)
        best = None
        n = self.space.dim
        for j in range(n):
            for i in range(n):
                a = A[j, i]
                if a.is_exact_zero:
                    continue
                v = a.val() + self.gradings[j] - self.gradings[i]
                best = v if best is None else min(best, v)
        return float("inf") if best is None else best

    def hom_level(self, w, target):
        """Largest t with w in Hom-lattice level t from self to target."""
        A = target.binv * w * self.basis
        best = None
        for j in range(target.space.dim):
            for i in range(self.space.dim):
                a = A[j, i]
                if a.is_exact_zero:
                    continue
                v = a.val() + target.gradings[j] - self.gradings[i]
                best = v if best is None else min(best, v)
        return float("inf") if best is None else best

    def shifted(self, s):
        return SplitLatticeFunction(self.space, self.basis, [c + s for c in self.gradings])

    def on_space(self, space):
        return SplitLatticeFunction(space, self.basis, self.gradings)

    def transported(self, w, s, space):
        """t -> w L_{t+s}, as a function on `space`."""
        return SplitLatticeFunction(space, w * self.basis, [c - s for c in self.gradings])

    def equals(self, other, extra=()):
        pts = set(self.sample_points()) | set(other.sample_points()) | set(extra)
        return all(self.at(t) == other.at(t) for t in pts)

    def describe(self):
        return {"gradings": [str(c) for c in self.gradings],
                "basis": [[str(x) for x in r] for r in self.basis.rows]}

    def __repr__(self):
        return "SplitLatticeFunction(gradings=%s)" % ([str(c) for c in self.gradings],)


def dual_lattice_function(sL):
    """t -> (L_{-t+})^*, again split: dual basis with negated gradings."""
    V = sL.space
    U = V.ginv * tau_mat(V.algebra, sL.basis).T.inverse()
    return SplitLatticeFunction(V, U, [-c for c in sL.gradings])


def _split_contains(a, b):
    """b_t within a_t for every t: each basis vector of b, at its own grading,
    lies in a at that level."""
    C = a.binv * b.basis
    n = a.space.dim
    for j in range(n):
        for i in range(n):
            x = C[i, j]
            if not x.is_exact_zero and x.val() + a.gradings[i] - b.gradings[j] < 0:
                return False
    return True


def split_functions_equal(a, b):
    return _split_contains(a, b) and _split_contains(b, a)


def duality_sample_points(sL):
    """Both sides of L_t^* = L_{(-t)+} are constant between consecutive
    points of jumps(sL) and -jumps(sL): those points and the midpoints."""
    per = Fraction(1, sL.e)
    js = sorted(set(sL.jumps()) | {(-j) % per for j in sL.jumps()})
    pts = set(js)
    for a, b in zip(js, js[1:] + [js[0] + per]):
        pts.add((a + b) / 2)
    return sorted(pts)


def is_self_dual(sL, samples=None):
    """L_t^* = L_{(-t)+} for all t. Without samples this compares sL with its
    dual function through one change of basis; with samples it checks the
    lattices pointwise."""
    if samples is None:
        return split_functions_equal(sL, dual_lattice_function(sL))
    if samples == "pointwise":
        samples = duality_sample_points(sL)
    for t in samples:
        if not (sL.at(t).dual() == sL.at(-Fraction(t), plus=True)):
            return False
    return True


def standard_function(space, gradings=None):
    g = gradings or [0] * space.dim
    return SplitLatticeFunction(space, space.identity(), g)


# ---------------------------------------------------------------- Hom(V, V')

def hom_space(V, Vp):
    """Hom_D(V, V') with the D-valued form tr(w1^* w2), vectorised row-major."""
    n, n2 = V.dim, Vp.dim
    Ginv = V.ginv
    Gp = Vp.gram
    rows = []
    for j in range(n2):
        for i in range(n):
            row = []
            for l in range(n2):
                for k in range(n):
                    row.append(Gp[j, l] * Ginv[k, i])
            rows.append(row)
    return HermitianSpace(V.algebra, -1 if V.eps * Vp.eps == -1 else 1, Mat(V.tower, rows))


def vec(w):
    return [x for r in w.rows for x in r]


def unvec(tower, v, n2, n):
    return Mat(tower, [v[j * n:(j + 1) * n] for j in range(n2)])


class TensorLattice:
    """sB_t = {w : w L_u in L'_{u+t} for all u}; split on B' E_ji B^-1 with
    grading c'_j - c_i."""

    def __init__(self, left, right):
        if left.space.algebra != right.space.algebra:
            raise ValueError("algebra mismatch")
        self.left = left
        self.right = right

    def gradings(self):
        return [cj - ci for cj in self.right.gradings for ci in self.left.gradings]

    def as_function(self):
        V, Vp = self.left.space, self.right.space
        W = hom_space(V, Vp)
        n, n2 = V.dim, Vp.dim
        cols = []
        Binv = self.left.binv
        for j in range(n2):
            for i in range(n):
                E = Mat.unit(V.tower, n2, n, j, i)
                cols.append(vec(self.right.basis * E * Binv))
        basis = Mat(V.tower, [[c[r] for c in cols] for r in range(n * n2)])
        return SplitLatticeFunction(W, basis, self.gradings())

    def level(self, w):
        return self.left.hom_level(w, self.right)

    def member(self, w, t):
        return self.level(w) >= t


def tensor_lattice(sL, sLp):
    return TensorLattice(sL, sLp)


# ---------------------------------------------------------------- Moy-Prasad

def moy_prasad_member(X, sL, t, mode="g"):
    t = Fraction(t)
    if mode == "group":
        if t <= 0:
            raise ValueError("group mode needs t > 0")
        if not sL.space.is_isometry(X):
            return False
        return sL.level(X - sL.space.identity()) >= t
    if sL.level(X) < t:
        return False
    if mode == "g":
        return sL.space.is_skew(X)
    if mode == "gl":
        return True
    raise ValueError("mode must be 'g', 'gl' or 'group'")


def jumps_of_g(sL):
    """Jump set of the filtration on gl(V) (differences of gradings) within
    one period."""
    per = Fraction(1, sL.e)
    return sorted(set((cj - ci) % per for cj in sL.gradings for ci in sL.gradings))


def g_jumps_between(sL, a, b):
    per = Fraction(1, sL.e)
    out = []
    for j in jumps_of_g(sL):
        k = ceil_frac((a - j) / per)
        while j + k * per <= b:
            out.append(j + k * per)
            k += 1
    return sorted(set(out))


# ---------------------------------------------------------------- good lattices

class GoodLatticeResidues:
    def __init__(self, L, Ls, field, ell, ell_star, ell_basis, ell_star_basis, sign_ell, sign_ell_star, involution):
        self.L = L
        self.Ls = Ls
        self.field = field
        self.ell = ell                  # Gram over f_D of pi^-1 <,> on L / L* pi
        self.ell_star = ell_star        # Gram over f_D of <,> on L* / L
        self.ell_basis = ell_basis
        self.ell_star_basis = ell_star_basis
        self.sign_ell = sign_ell
        self.sign_ell_star = sign_ell_star
        self.involution = involution

    @property
    def dims(self):
        return (len(self.ell), len(self.ell_star))

    def __repr__(self):
        return "GoodLatticeResidues(dim ell=%d, dim ell*=%d)" % self.dims


def _quotient_basis(big, small, field):
    """Vectors of `big` whose images form a basis of big/small (small contains pi*big)."""
    C = big.coords(small.basis)
    n = C.shape[0]
    img = [[C[i, j].residue() for i in range(n)] for j in range(C.shape[1])]
    sub = [img[j] for j in range(len(img))]
    unit = [[1 if i == k else 0 for i in range(n)] for k in range(n)]
    r0 = ffla.rank(field, sub) if sub else 0
    taken = []
    cur = [list(v) for v in sub]
    r = r0
    for k, u in enumerate(unit):
        trial = cur + [u]
        r2 = ffla.rank(field, trial)
        if r2 > r:
            cur, r = trial, r2
            taken.append(k)
    return [big.basis.col(k) for k in taken]


def residue_gram(V, vecs, scale, field):
    out = []
    for u in vecs:
        row = []
        for v in vecs:
            x = V.pairing(u, v) * scale
            row.append(x.residue())
        out.append(row)
    return out


def good_lattice_residues(sL, L=None):
    V = sL.space
    alg = V.algebra
    if L is None:
        L = sL.at(0, plus=True)
    Ls = L.dual()
    pi = alg.uniformizer()
    if not (Ls.contains(L) and L.contains(Ls.scale(1))):
        raise NotGoodLattice("L is not a good lattice: need L* pi <= L <= L*")
    F = V.tower.residue
    ell_vecs = _quotient_basis(L, Ls.scale(1), F)
    star_vecs = _quotient_basis(Ls, L, F)
    ell = residue_gram(V, ell_vecs, pi.inverse(), F)
    ell_star = residue_gram(V, star_vecs, V.tower.one(), F)
    return GoodLatticeResidues(L, Ls, F, ell, ell_star, ell_vecs, star_vecs,
                               alg.eps_D * V.eps, V.eps, alg.residue_involution)


def _lift_form(alg, G, sign):
    """Lift a residue Gram (tau-bar(G)^T = sign G) to D keeping the symmetry exact."""
    k = len(G)
    T = alg.tower
    rows = [[T.zero()] * k for _ in range(k)]
    half = Fraction(1, 2)
    for a in range(k):
        for b in range(a, k):
            x = T.lift(G[a][b])
            if a == b:
                x = (x + alg.tau(x) * sign) * half
                rows[a][a] = x
            else:
                rows[a][b] = x
                rows[b][a] = alg.tau(x) * sign
    return rows


def upsilon(ell, ell_star, algebra, eps, T=None):
    """Space and vertex function realising the residue pair (ell, ell*)."""
    from .hermitian import witt_invariants, zero_space
    k1, k2 = len(ell), len(ell_star)
    tower = algebra.tower
    if k1 + k2 == 0:
        V = zero_space(algebra, eps)
        return V, SplitLatticeFunction(V, Mat(tower, []), [])
    pi = algebra.uniformizer()
    A = _lift_form(algebra, ell, algebra.eps_D * eps)
    A = [[pi * x for x in r] for r in A]
    B = _lift_form(algebra, ell_star, eps)
    n = k1 + k2
    rows = [[tower.zero()] * n for _ in range(n)]
    for i in range(k1):
        for j in range(k1):
            rows[i][j] = A[i][j]
    for i in range(k2):
        for j in range(k2):
            rows[k1 + i][k1 + j] = B[i][j]
    V = HermitianSpace(algebra, eps, Mat(tower, rows))
    g = [Fraction(1, 2 * tower.e)] * k1 + [Fraction(0)] * k2
    sL = SplitLatticeFunction(V, V.identity(), g)
    if T is not None and witt_invariants(V) != T:
        raise ValueError("residue pair is not realisable in the requested Witt tower")
    return V, sL


def is_vertex(sL):
    """At most two jump orbits per period."""
    return len(sL.jumps()) <= 2


# ---------------------------------------------------------------- module functions

class ModuleFunction:
    """Periodic O_D-module function N with jumps in (1/2m)Z (units of val(pi_D)).

    gens[i] is a generator matrix of N at i/(2m) for i in one period
    (-m < i <= m); N_{t+1} = N_t pi_D and N is left-continuous.
    """

    def __init__(self, space, m, gens):
        self.space = space
        self.m = m
        self.gens = dict(gens)
        assert set(self.gens) == set(range(-m + 1, m + 1)), "need one generator matrix per grid point"

    def at_index(self, i):
        m2 = 2 * self.m
        q, r = divmod(i + self.m - 1, m2)
        r = r - self.m + 1
        G = self.gens[r]
        if q and G.shape[1]:
            G = G * (self.space.algebra.uniformizer() ** q)
        return G

    def at(self, tD):
        """N at tD, tD in units of val(pi_D)."""
        i = ceil_frac(Fraction(tD) * 2 * self.m)
        return self.at_index(i)


def check_pairing_bound(N, indices=None):
    V = N.space
    m = N.m
    if indices is None:
        indices = range(-2 * m, 2 * m + 1)
    indices = list(indices)
    for i1 in indices:
        A = N.at_index(i1)
        if A.shape[1] == 0:
            continue
        TA = tau_mat(V.algebra, A).T * V.gram
        for i2 in indices:
            Bm = N.at_index(i2)
            if Bm.shape[1] == 0:
                continue
            P = TA * Bm
            need = ceil_frac(Fraction(i1 + i2, 2 * m) + Fraction(1, m))
            for r in P.rows:
                for x in r:
                    if not x.is_zero() and x.vpi() < need:
                        return (i1, i2)
    return None


def smallest_good_lattice(V, basis, N0):
    """Smallest good lattice split by `basis` (monomial Gram) containing N0."""
    alg = V.algebra
    G = tau_mat(alg, basis).T * V.gram * basis
    n = V.dim
    partner = {}
    for i in range(n):
        nz = [j for j in range(n) if not G[i, j].is_zero()]
        if len(nz) != 1:
            raise ValueError("basis must have a monomial Gram matrix")
        partner[i] = nz[0]
    C = basis.inverse() * N0 if N0.shape[1] else None
    bound = []
    for i in range(n):
        vals = []
        if C is not None:
            vals = [C[i, j].vpi() for j in range(C.shape[1]) if not C[i, j].is_zero()]
        bound.append(min(vals) if vals else None)
    ks = [None] * n
    for i in range(n):
        if ks[i] is not None:
            continue
        j = partner[i]
        gam = G[i, j].vpi()
        if i == j:
            k = ceil_frac(Fraction(1 - gam, 2))
            if bound[i] is not None and k > bound[i]:
                raise ValueError("N_0 is not contained in a good lattice of this basis")
            ks[i] = k
            continue
        ai, aj = bound[i], bound[j]
        if ai is None and aj is None:
            ki = ceil_frac(Fraction(1 - gam, 2))
            kj = 1 - gam - ki if (1 - gam - 2 * ki) < 0 else 2 - gam - ki
            kj = max(1 - gam - ki, min(2 - gam - ki, ki))
        elif aj is None:
            ki = ai
            kj = 2 - gam - ki
        elif ai is None:
            kj = aj
            ki = 2 - gam - kj
        else:
            if ai + aj + gam < 1:
                raise ValueError("N_0 is not contained in a good lattice of this basis")
            ki = ai
            kj = min(aj, 2 - gam - ai)
        ks[i], ks[j] = ki, kj
    pi = alg.uniformizer()
    R = Lattice(V, basis * Mat.diag(V.tower, [pi ** k for k in ks]))
    assert R.dual().contains(R) and R.contains(R.dual().scale(1))
    return R


def chain_to_split(V, chain):
    """Split presentation of a periodic lattice chain.

    chain: list of (tD, lattice) for one period, tD increasing, lattices
    decreasing, with chain[0] * pi containing nothing outside chain[-1]."""
    top = chain[0][1]
    F = V.tower.residue
    levels = []
    for tD, Lj in chain:
        C = top.coords(Lj.basis)
        levels.append((tD, C))
    chosen, lifts, grad = [], [], []
    n = V.dim
    for tD, C in reversed(levels):
        vecs = [[C[i, j].residue() for i in range(n)] for j in range(C.shape[1])]
        taken = ffla.extend_basis(F, chosen, vecs)
        for k in taken:
            chosen.append(vecs[k])
            lifts.append(C.col(k))
            grad.append(Fraction(tD, V.tower.e))
    if len(lifts) != n:
        raise PrecisionError("could not find an adapted basis for the chain")
    coords = Mat(V.tower, [[c[i] for c in lifts] for i in range(n)])
    return SplitLatticeFunction(V, top.basis * coords, grad)


def selfdual_from_module_function(N, basis, check=True):
    """Self-dual lattice function sL with N_t inside sL_{t+1/2m}."""
    V = N.space
    m = N.m
    if check:
        bad = check_pairing_bound(N)
        if bad is not None:
            raise PairingBoundError("pairing bound fails at grid indices %s" % (bad,))
    R = smallest_good_lattice(V, basis, N.at_index(0))
    Rs = R.dual()
    chain = []
    lower = {}
    for i in range(-m + 1, 1):
        Ni = N.at_index(i - 1)
        lower[i] = Lattice.span(V, _hcat(Ni, Rs.basis))
    for i in range(-m + 1, m + 1):
        if i <= 0:
            Li = lower[i]
        else:
            Li = lower[-i + 1].dual()
        chain.append((Fraction(i, 2 * m), Li))
    return chain_to_split(V, chain)


def recipe_module_function(sL, sLp_ref, w, s, m, with_b0=True):
    """N_t = (w + B_0) L_{t+s}, B_0 the level-0 Hom lattice from sL to sLp_ref
    (dropped when with_b0 is False, giving a rank-deficient N).
    Grid in units of val(pi_D); s given with val(p) = 1."""
    V, Vp = sL.space, sLp_ref.space
    e = V.tower.e
    pi = V.algebra.uniformizer()
    n, n2 = V.dim, Vp.dim
    B0 = []
    for j in range(n2 if with_b0 else 0):
        for i in range(n):
            k = ceil_frac(e * (sL.gradings[i] - sLp_ref.gradings[j]))
            E = Mat.unit(V.tower, n2, n, j, i) * (pi ** k)
            B0.append(sLp_ref.basis * E * sL.binv)
    gens = {}
    for i in range(-m + 1, m + 1):
        t = Fraction(i, 2 * m) / e
        Lb = sL.at(t + s).basis
        blocks = [w * Lb] + [b * Lb for b in B0]
        G = blocks[0]
        for b in blocks[1:]:
            G = _hcat(G, b)
        gens[i] = span_basis(G)
    return ModuleFunction(Vp, m, gens)
