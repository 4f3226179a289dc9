"""Truncated exact arithmetic in tame towers Q_p(omega)(pi), pi^e = zeta*p.

An element is p^shift * sum c_ab omega^a pi^b.  Coefficients are p-integral
rationals.  Exact elements keep them as Fractions; elements produced by
limiting processes (Teichmuller, Hensel) carry an absolute precision and
their coefficients are reduced to integers.
"""

from fractions import Fraction
from functools import lru_cache
from math import gcd, inf


class PrecisionError(ArithmeticError):
    pass


class Beyond(Fraction):
    """Valuation of a value that vanishes at the working precision."""

    def __repr__(self):
        return "≥%s" % Fraction(self)

    __str__ = __repr__


def vp(n, p):
    """p-adic valuation of a nonzero rational."""
    n = Fraction(n)
    if n == 0:
        return inf
    v = 0
    a, b = n.numerator, n.denominator
    while a % p == 0:
        a //= p
        v += 1
    while b % p == 0:
        b //= p
        v -= 1
    return v


def is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


# ---------------------------------------------------------------- finite fields

class GF:
    """F_q = F_p[w]/(poly).  Elements are ints 0..q-1 encoding base-p digits."""

    def __init__(self, p, poly=None):
        assert is_prime(p)
        if poly is None:
            poly = (0, 1)
        poly = tuple(int(c) % p for c in poly)
        assert poly[-1] == 1, "residue generator must be monic"
        self.p = p
        self.f = len(poly) - 1
        self.poly = poly
        self.q = p ** self.f
        if not _irreducible(poly, p):
            raise ValueError("residue generator %s is reducible mod %d" % (poly, p))
        q = self.q
        self._add = [[self._enc([(x + y) % p for x, y in zip(self._dec(a), self._dec(b))])
                      for b in range(q)] for a in range(q)]
        self._mul = [[self._enc(_polymulmod(self._dec(a), self._dec(b), poly, p))
                      for b in range(q)] for a in range(q)]
        self._neg = [self._enc([(-x) % p for x in self._dec(a)]) for a in range(q)]
        self._inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if self._mul[a][b] == 1:
                    self._inv[a] = b
                    break
        self._sq = set(self._mul[a][a] for a in range(1, q))
        # generator of the multiplicative group
        for g in range(2 if q > 2 else 1, q):
            x, k = g, 1
            while x != 1:
                x = self._mul[x][g]
                k += 1
            if k == q - 1:
                self.gen = g
                break
        else:
            self.gen = 1

    def _dec(self, a):
        out = []
        for _ in range(self.f):
            out.append(a % self.p)
            a //= self.p
        return out

    def _enc(self, digits):
        a = 0
        for d in reversed(list(digits)):
            a = a * self.p + int(d) % self.p
        return a

    def digits(self, a):
        return tuple(self._dec(a))

    def from_digits(self, digits):
        return self._enc(digits)

    def __call__(self, n):
        return self._enc([n % self.p] + [0] * (self.f - 1))

    def add(self, a, b):
        return self._add[a][b]

    def sub(self, a, b):
        return self._add[a][self._neg[b]]

    def neg(self, a):
        return self._neg[a]

    def mul(self, a, b):
        return self._mul[a][b]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_%d" % self.q)
        return self._inv[a]

    def pow(self, a, k):
        if k < 0:
            a, k = self.inv(a), -k
        r = 1
        while k:
            if k & 1:
                r = self._mul[r][a]
            a = self._mul[a][a]
            k >>= 1
        return r

    def is_square(self, a):
        return a == 0 or a in self._sq

    def frob(self, a):
        return self.pow(a, self.p)

    def trace(self, a):
        """Absolute trace to F_p, as an int mod p."""
        t, x = 0, a
        for _ in range(self.f):
            t = self.add(t, x)
            x = self.frob(x)
        return self._dec(t)[0]

    def nonsquare(self):
        for a in range(1, self.q):
            if not self.is_square(a):
                return a
        raise ValueError("no non-squares in F_2")

    def elements(self):
        return range(self.q)

    def units(self):
        return range(1, self.q)

    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.poly) == (other.p, other.poly)

    def __hash__(self):
        return hash((self.p, self.poly))

    def __repr__(self):
        return "GF(%d^%d)" % (self.p, self.f)


def _polymulmod(a, b, poly, p):
    f = len(poly) - 1
    prod = [0] * (2 * f)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] += x * y
    for k in range(2 * f - 1, f - 1, -1):
        c = prod[k] % p
        if c:
            for i in range(f + 1):
                prod[k - f + i] -= c * poly[i]
    return [x % p for x in prod[:f]]


def _irreducible(poly, p):
    f = len(poly) - 1
    if f <= 1:
        return True
    # brute force: no monic factor of degree <= f/2
    from itertools import product
    for d in range(1, f // 2 + 1):
        for tail in product(range(p), repeat=d):
            g = list(tail) + [1]
            if _polydivides(g, list(poly), p):
                return False
    return True


def _polydivides(g, h, p):
    h = h[:]
    dg = len(g) - 1
    for k in range(len(h) - 1, dg - 1, -1):
        c = h[k] % p
        if c:
            for i in range(dg + 1):
                h[k - dg + i] = (h[k - dg + i] - c * g[i]) % p
    return all(x % p == 0 for x in h[:dg])


@lru_cache(maxsize=None)
def default_poly(p, f):
    """Lexicographically first irreducible monic polynomial of degree f, of
    the pure form x^f - a when one exists."""
    from itertools import product
    if f == 1:
        return (0, 1)
    for a in range(1, p):
        poly = tuple([(-a) % p] + [0] * (f - 1) + [1])
        if _irreducible(poly, p):
            return poly
    for tail in product(range(p), repeat=f):
        poly = tuple(tail) + (1,)
        if tail[0] and _irreducible(poly, p):
            return poly
    raise ValueError("no irreducible polynomial")


# ---------------------------------------------------------------- towers

class LocalFieldTower:
    """Unramified degree f then totally ramified degree e over Q_p."""

    def __init__(self, p, f, e, N, poly=None, zeta=1):
        if p % 2 == 0 or not is_prime(p):
            raise ValueError("p must be an odd prime, got %r" % p)
        if f < 1 or e < 1:
            raise ValueError("degrees must be positive")
        if e % p == 0:
            raise ValueError("wild ramification: p=%d divides e=%d" % (p, e))
        if N < 2:
            raise ValueError("precision N must be at least 2")
        self.p, self.f, self.e, self.N = p, f, e, N
        self.poly = tuple(int(c) for c in (poly or default_poly(p, f)))
        self.residue = GF(p, self.poly)
        if isinstance(zeta, int):
            zeta = (zeta,) + (0,) * (f - 1)
        self.zeta = tuple(int(c) for c in zeta) + (0,) * (f - len(zeta))
        if all(c % p == 0 for c in self.zeta):
            raise ValueError("zeta must be a unit")
        self.d = f * e
        self._table = self._structure_constants()
        self._one = None

    @property
    def q(self):
        return self.p ** self.f

    def key(self):
        return (self.p, self.f, self.e, self.N, self.poly, self.zeta)

    def __eq__(self, other):
        return isinstance(other, LocalFieldTower) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return "Tower(p=%d, f=%d, e=%d, N=%d)" % (self.p, self.f, self.e, self.N)

    def index(self, a, b):
        return b * self.f + a

    def _structure_constants(self):
        f, e, p = self.f, self.e, self.p
        # omega^k for k < 2f as integer vectors
        wp = []
        for k in range(2 * f - 1):
            v = [0] * (2 * f)
            v[k] = 1
            for j in range(2 * f - 1, f - 1, -1):
                c = v[j]
                if c:
                    for i in range(f + 1):
                        v[j - f + i] -= c * self.poly[i]
            wp.append(v[:f])

        def umul(u, v):
            out = [0] * f
            for i, x in enumerate(u):
                if x:
                    for j, y in enumerate(v):
                        if y:
                            for k, z in enumerate(wp[i + j]):
                                out[k] += x * y * z
            return out

        table = {}
        for b1 in range(e):
            for b2 in range(e):
                for a1 in range(f):
                    for a2 in range(f):
                        u = wp[a1 + a2]
                        b = b1 + b2
                        if b >= e:
                            u = [p * c for c in umul(u, list(self.zeta))]
                            b -= e
                        vec = {}
                        for a, c in enumerate(u):
                            if c:
                                vec[self.index(a, b)] = c
                        table[(self.index(a1, b1), self.index(a2, b2))] = vec
        return table

    # constructors
    def element(self, coords, shift=0, prec=None):
        return LocalElement(self, coords, shift, prec)

    def __call__(self, x):
        """Coerce an int, Fraction or LocalElement of the base field."""
        if isinstance(x, LocalElement):
            if x.tower == self:
                return x
            return self.embed(x)
        c = [Fraction(0)] * self.d
        c[0] = Fraction(x)
        return LocalElement(self, c)

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def omega(self):
        if self.f == 1:
            return self.one()
        c = [0] * self.d
        c[self.index(1, 0)] = 1
        return LocalElement(self, c)

    def pi(self):
        c = [0] * self.d
        if self.e == 1:
            return self(self.p)
        c[self.index(0, 1)] = 1
        return LocalElement(self, c)

    def uniformizer(self):
        return self.pi()

    def embed(self, x):
        """Image of an element of Q_p (any tower with f=e=1) in this tower."""
        t = x.tower
        if t.f != 1 or t.e != 1 or t.p != self.p:
            if t == self:
                return x
            raise ValueError("only the base field Q_p embeds canonically")
        c = [Fraction(0)] * self.d
        c[0] = x.coords[0]
        prec = None if x.prec is None else x.prec * self.e
        return LocalElement(self, c, x.shift, prec)

    def restrict(self, x):
        """Inverse of embed: x must lie in Q_p at its precision."""
        for i, c in enumerate(x.coords):
            if i and c != 0:
                raise ValueError("element does not lie in Q_p")
        base = make_tower(self.p, 1, 1, self.N)
        prec = None if x.prec is None else -(-x.prec // self.e)
        return LocalElement(base, [x.coords[0]], x.shift, prec)

    def residue_elements(self):
        return list(self.residue.elements())

    def lift(self, u, prec=None):
        """Integer lift of a residue-field element (int code or digit tuple)."""
        digits = self.residue.digits(u) if isinstance(u, int) else tuple(u)
        c = [0] * self.d
        for a, x in enumerate(digits):
            c[self.index(a, 0)] = int(x) % self.p
        return LocalElement(self, c, 0, prec)


@lru_cache(maxsize=None)
def make_tower(p, f, e, N, poly=None, zeta=1):
    return LocalFieldTower(p, f, e, N, poly, zeta)


# ---------------------------------------------------------------- elements

def _reduce(c, m, p):
    """p-integral rational c modulo p^m as an int."""
    if m <= 0:
        return 0
    mod = p ** m
    c = Fraction(c)
    return c.numerator * pow(c.denominator, -1, mod) % mod


class LocalElement:
    __slots__ = ("tower", "coords", "shift", "prec")

    def __init__(self, tower, coords, shift=0, prec=None):
        p, e = tower.p, tower.e
        coords = [Fraction(c) for c in coords]
        assert len(coords) == tower.d, (len(coords), tower.d)
        nz = [c for c in coords if c]
        if nz:
            s = min(vp(c, p) for c in nz)
            if s:
                coords = [c / Fraction(p) ** s for c in coords]
                shift += s
        else:
            shift = 0
        if prec is not None:
            prec = int(prec)
            red = []
            f = tower.f
            for i, c in enumerate(coords):
                b = i // f
                m = -((-(prec - b - e * shift)) // e)   # ceil
                red.append(Fraction(_reduce(c, m, p)) if c else Fraction(0))
            coords = red
            if not any(coords):
                shift = 0
            elif min(vp(c, p) for c in coords if c):
                return self.__init__(tower, coords, shift, prec)
        object.__setattr__(self, "tower", tower)
        object.__setattr__(self, "coords", tuple(coords))
        object.__setattr__(self, "shift", shift)
        object.__setattr__(self, "prec", prec)

    def __setattr__(self, k, v):
        raise AttributeError("LocalElement is immutable")

    # -- predicates
    def is_zero(self):
        return not any(self.coords)

    @property
    def is_exact(self):
        return self.prec is None

    @property
    def is_exact_zero(self):
        return self.prec is None and self.is_zero()

    def vpi(self):
        """Valuation in units of 1/e; None for zero."""
        if self.is_zero():
            return None
        p, e, f = self.tower.p, self.tower.e, self.tower.f
        return min(e * (self.shift + vp(c, p)) + i // f
                   for i, c in enumerate(self.coords) if c)

    def val(self):
        v = self.vpi()
        if v is None:
            if self.prec is None:
                return inf
            return Beyond(self.prec, self.tower.e)
        return Fraction(v, self.tower.e)

    def _vlow(self):
        v = self.vpi()
        if v is None:
            return inf if self.prec is None else self.prec
        return v

    # -- arithmetic
    def _coerce(self, other):
        if isinstance(other, LocalElement):
            if other.tower != self.tower:
                if other.tower.d == 1:
                    return self.tower.embed(other)
                if self.tower.d == 1:
                    raise _Promote(other.tower)
                raise ValueError("tower mismatch %r vs %r" % (self.tower, other.tower))
            return other
        if isinstance(other, (int, Fraction)):
            return self.tower(other)
        return NotImplemented

    def __add__(self, other):
        try:
            o = self._coerce(other)
        except _Promote as pr:
            return pr.tower.embed(self) + other
        if o is NotImplemented:
            return o
        if self.is_exact_zero:
            return o
        if o.is_exact_zero:
            return self
        s = min(self.shift, o.shift)
        a = Fraction(self.tower.p) ** (self.shift - s)
        b = Fraction(self.tower.p) ** (o.shift - s)
        c = [x * a + y * b for x, y in zip(self.coords, o.coords)]
        return LocalElement(self.tower, c, s, _pmin(self.prec, o.prec))

    __radd__ = __add__

    def __neg__(self):
        return LocalElement(self.tower, [-c for c in self.coords], self.shift, self.prec)

    def __sub__(self, other):
        try:
            o = self._coerce(other)
        except _Promote as pr:
            return pr.tower.embed(self) - other
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = self._coerce(other)
        except _Promote as pr:
            return pr.tower.embed(self) * other
        if o is NotImplemented:
            return o
        if self.is_exact_zero or o.is_exact_zero:
            return self.tower.zero()
        out = [Fraction(0)] * self.tower.d
        tab = self.tower._table
        for i, x in enumerate(self.coords):
            if x:
                for j, y in enumerate(o.coords):
                    if y:
                        xy = x * y
                        for k, z in tab[(i, j)].items():
                            out[k] += xy * z
        prec = _pmin(_padd(self.prec, o._vlow()), _padd(o.prec, self._vlow()))
        return LocalElement(self.tower, out, self.shift + o.shift, prec)

    __rmul__ = __mul__

    def _mulmatrix(self):
        d = self.tower.d
        tab = self.tower._table
        M = [[Fraction(0)] * d for _ in range(d)]
        for i, x in enumerate(self.coords):
            if x:
                for j in range(d):
                    for k, z in tab[(i, j)].items():
                        M[k][j] += x * z
        return M

    def inverse(self):
        if self.is_zero():
            if self.prec is None:
                raise ZeroDivisionError("inverse of exact zero")
            raise PrecisionError("inverse of a value that is zero at precision %s" % self.val())
        d = self.tower.d
        rhs = [Fraction(0)] * d
        rhs[0] = Fraction(1)
        sol = _solve_q(self._mulmatrix(), rhs)
        prec = None
        if self.prec is not None:
            v = self.vpi()
            prec = self.prec - 2 * v
            if prec <= -v:
                raise PrecisionError("no significant digits left after inversion")
        return LocalElement(self.tower, sol, -self.shift, prec)

    def __truediv__(self, other):
        try:
            o = self._coerce(other)
        except _Promote as pr:
            return pr.tower.embed(self) / other
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        r = self.tower.one()
        a = self
        while k:
            if k & 1:
                r = r * a
            a = a * a
            k >>= 1
        return r

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.tower(other)
        if not isinstance(other, LocalElement):
            return NotImplemented
        try:
            diff = self - other
        except ValueError:
            return False
        return diff.is_zero()

    __hash__ = None

    def __bool__(self):
        return not self.is_zero()

    def with_prec(self, prec):
        """Truncate to absolute precision prec (units of 1/e)."""
        prec = _pmin(self.prec, prec)
        return LocalElement(self.tower, self.coords, self.shift, prec)

    def residue(self):
        """Image in the residue field; requires val >= 0."""
        v = self._vlow()
        if v < 0:
            raise ValueError("residue of a non-integral element")
        p, f = self.tower.p, self.tower.f
        if self.shift > 0:
            return 0
        digits = [_reduce(self.coords[a], 1, p) if self.coords[a] else 0 for a in range(f)]
        if self.shift < 0:
            raise ValueError("residue of a non-integral element")
        return self.tower.residue.from_digits(digits)

    def unit_part(self):
        """(k, u) with self = pi^k * u, u a unit."""
        k = self.vpi()
        if k is None:
            raise PrecisionError("zero has no unit part")
        return k, self * self.tower.pi() ** (-k)

    def __repr__(self):
        if self.is_zero():
            return "0" if self.prec is None else "O(pi^%d)" % self.prec
        terms = []
        f = self.tower.f
        for i, c in enumerate(self.coords):
            if c:
                a, b = i % f, i // f
                mono = "".join(s for s in ("w^%d" % a if a else "", "pi^%d" % b if b else ""))
                terms.append("%s%s" % (c, "*" + mono if mono else ""))
        s = " + ".join(terms)
        if self.shift:
            s = "%d^%d*(%s)" % (self.tower.p, self.shift, s)
        if self.prec is not None:
            s += " + O(pi^%d)" % self.prec
        return s


class _Promote(Exception):
    def __init__(self, tower):
        self.tower = tower


def _pmin(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _padd(a, b):
    if a is None:
        return None
    if b == inf:
        return None
    return a + b


def _solve_q(M, rhs):
    """Exact Gaussian elimination over Q."""
    n = len(M)
    A = [row[:] + [rhs[i]] for i, row in enumerate(M)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular multiplication matrix")
        A[col], A[piv] = A[piv], A[col]
        inv = 1 / A[col][col]
        A[col] = [x * inv for x in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                fac = A[r][col]
                A[r] = [x - fac * y for x, y in zip(A[r], A[col])]
    return [A[r][n] for r in range(n)]


def val(x):
    return x.val()


# ---------------------------------------------------------------- limits

def teichmuller(tower, u):
    """Root of unity lift of a nonzero residue element u (code or digits)."""
    if not isinstance(u, int):
        u = tower.residue.from_digits(u)
    if u == 0:
        raise ValueError("Teichmuller lift of 0")
    prec = tower.e * tower.N
    x = tower.lift(u, prec)
    q = tower.q
    for _ in range(tower.N + 2):
        y = x ** q
        if y.coords == x.coords and y.shift == x.shift:
            return y
        x = y
    return x


def hensel_root(m, b, x0):
    """x with x^m = b at precision N and x = x0 in the residue field."""
    tower = b.tower
    p = tower.p
    if m <= 0 or m % p == 0:
        raise ValueError("exponent must be positive and prime to p")
    if b.vpi() != 0:
        raise ValueError("hensel_root needs a unit right-hand side")
    if isinstance(x0, LocalElement):
        seed = x0.residue()
    else:
        seed = x0 if isinstance(x0, int) else tower.residue.from_digits(x0)
    F = tower.residue
    if seed == 0 or F.pow(seed, m) != b.residue():
        raise ValueError("seed is not an m-th root of b in the residue field")
    prec = tower.e * tower.N
    if m == 1:
        return b.with_prec(prec)
    x = tower.lift(seed, prec)
    bb = b.with_prec(prec)
    for _ in range(2 * tower.N + 4):
        fx = x ** m - bb
        if fx.is_zero():
            return x
        x = x - fx / (x ** (m - 1) * m)
    if not (x ** m - bb).is_zero():
        raise PrecisionError("Hensel iteration did not settle")
    return x


def legendre(a, p):
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def hilbert_symbol(a, b):
    """(a, b)_p over Q_p, p odd."""
    ta = a.tower if isinstance(a, LocalElement) else None
    tb = b.tower if isinstance(b, LocalElement) else None
    t = ta or tb
    if t is None:
        raise TypeError("need LocalElement arguments")
    for x in (a, b):
        if isinstance(x, LocalElement) and (x.tower.f != 1 or x.tower.e != 1):
            raise ValueError("Hilbert symbol is only implemented over Q_p")
    a, b = t(a), t(b)
    if a.is_zero() or b.is_zero():
        raise ValueError("Hilbert symbol of zero")
    p = t.p
    al, be = a.vpi(), b.vpi()
    u = _reduce(a.coords[0], 1, p)
    v = _reduce(b.coords[0], 1, p)
    s = (-1) ** (al * be * ((p - 1) // 2))
    return s * legendre(u, p) ** (be % 2) * legendre(v, p) ** (al % 2)


def square_class(a):
    """(parity of val, Legendre symbol of the unit part) for a in Q_p^*."""
    p = a.tower.p
    return (a.vpi() % 2, legendre(_reduce(a.coords[0], 1, p), p))
