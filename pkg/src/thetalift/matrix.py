"""Small dense matrices over a LocalFieldTower."""

from fractions import Fraction
from math import inf

from .localfield import LocalElement, PrecisionError


class Mat:
    __slots__ = ("tower", "rows")

    def __init__(self, tower, rows):
        rows = tuple(tuple(tower(x) for x in r) for r in rows)
        object.__setattr__(self, "tower", tower)
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, k, v):
        raise AttributeError("Mat is immutable")

    @classmethod
    def zeros(cls, tower, n, m=None):
        m = n if m is None else m
        z = tower.zero()
        return cls(tower, [[z] * m for _ in range(n)])

    @classmethod
    def identity(cls, tower, n):
        return cls.diag(tower, [1] * n)

    @classmethod
    def diag(cls, tower, entries):
        n = len(entries)
        z = tower.zero()
        return cls(tower, [[entries[i] if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def unit(cls, tower, n, m, i, j):
        rows = [[0] * m for _ in range(n)]
        rows[i][j] = 1
        return cls(tower, rows)

    @property
    def shape(self):
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    @property
    def n(self):
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def col(self, j):
        return [r[j] for r in self.rows]

    def map(self, fn):
        return Mat(self.tower, [[fn(x) for x in r] for r in self.rows])

    def __add__(self, o):
        assert self.shape == o.shape, (self.shape, o.shape)
        return Mat(self.tower, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, o.rows)])

    def __sub__(self, o):
        assert self.shape == o.shape, (self.shape, o.shape)
        return Mat(self.tower, [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, o.rows)])

    def __neg__(self):
        return self.map(lambda x: -x)

    def __mul__(self, o):
        if isinstance(o, Mat):
            n, k = self.shape
            k2, m = o.shape
            assert k == k2, (self.shape, o.shape)
            cols = [o.col(j) for j in range(m)]
            out = []
            for r in self.rows:
                row = []
                for c in cols:
                    acc = self.tower.zero()
                    for a, b in zip(r, c):
                        if not (a.is_exact_zero or b.is_exact_zero):
                            acc = acc + a * b
                    row.append(acc)
                out.append(row)
            return Mat(self.tower, out)
        return self.map(lambda x: x * o)

    def __rmul__(self, o):
        return self.map(lambda x: o * x)

    @property
    def T(self):
        n, m = self.shape
        return Mat(self.tower, [[self.rows[i][j] for i in range(n)] for j in range(m)])

    def trace(self):
        acc = self.tower.zero()
        for i in range(self.n):
            acc = acc + self.rows[i][i]
        return acc

    def is_zero(self):
        return all(x.is_zero() for r in self.rows for x in r)

    def __eq__(self, o):
        if not isinstance(o, Mat):
            return NotImplemented
        return self.shape == o.shape and (self - o).is_zero()

    __hash__ = None

    def min_val(self):
        """Smallest entry valuation (inf for the zero matrix)."""
        vals = [x.val() for r in self.rows for x in r if not x.is_exact_zero]
        return min(vals) if vals else inf

    def with_prec(self, prec):
        return self.map(lambda x: x.with_prec(prec))

    def block(self, r0, r1, c0, c1):
        return Mat(self.tower, [r[c0:c1] for r in self.rows[r0:r1]])

    def inverse(self):
        n, m = self.shape
        assert n == m
        A = [list(r) + [self.tower(1 if i == j else 0) for j in range(n)]
             for i, r in enumerate(self.rows)]
        for col in range(n):
            piv, best = None, None
            for r in range(col, n):
                x = A[r][col]
                if x.is_zero():
                    continue
                v = x.val()
                if best is None or v < best:
                    piv, best = r, v
            if piv is None:
                if any(not A[r][col].is_exact_zero for r in range(col, n)):
                    raise PrecisionError("pivot vanishes at working precision")
                raise ZeroDivisionError("singular matrix")
            A[col], A[piv] = A[piv], A[col]
            inv = A[col][col].inverse()
            A[col] = [x * inv for x in A[col]]
            for r in range(n):
                if r != col and not A[r][col].is_exact_zero:
                    fac = A[r][col]
                    A[r] = [x - fac * y for x, y in zip(A[r], A[col])]
        return Mat(self.tower, [r[n:] for r in A])

    def det(self):
        n = self.n
        A = [list(r) for r in self.rows]
        d = self.tower.one()
        for col in range(n):
            piv = next((r for r in range(col, n) if not A[r][col].is_zero()), None)
            if piv is None:
                return self.tower.zero()
            if piv != col:
                A[col], A[piv] = A[piv], A[col]
                d = -d
            d = d * A[col][col]
            inv = A[col][col].inverse()
            for r in range(col + 1, n):
                if not A[r][col].is_exact_zero:
                    fac = A[r][col] * inv
                    A[r] = [x - fac * y for x, y in zip(A[r], A[col])]
        return d

    def commutator(self, o):
        return self * o - o * self

    def blockdiag(self, o):
        n1, m1 = self.shape
        n2, m2 = o.shape
        z = self.tower.zero()
        rows = [list(r) + [z] * m2 for r in self.rows]
        rows += [[z] * m1 + list(r) for r in o.rows]
        return Mat(self.tower, rows)

    def embed(self, tower):
        return Mat(tower, [[tower.embed(x) if x.tower != tower else x for x in r] for r in self.rows])

    def __repr__(self):
        return "Mat(%s)" % ("; ".join(", ".join(repr(x) for x in r) for r in self.rows))


def mat(tower, rows):
    return Mat(tower, rows)
