"""Linear algebra over a GF (matrices are lists of rows of element codes)."""


def rref(F, M):
    A = [list(r) for r in M]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    piv = []
    r = 0
    for c in range(cols):
        k = next((i for i in range(r, rows) if A[i][c]), None)
        if k is None:
            continue
        A[r], A[k] = A[k], A[r]
        inv = F.inv(A[r][c])
        A[r] = [F.mul(x, inv) for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c]:
                fac = A[i][c]
                A[i] = [F.sub(x, F.mul(fac, y)) for x, y in zip(A[i], A[r])]
        piv.append(c)
        r += 1
        if r == rows:
            break
    return A, piv


def rank(F, M):
    if not M or not M[0]:
        return 0
    return len(rref(F, M)[1])


def transpose(M):
    return [list(c) for c in zip(*M)] if M else []


def nullspace(F, M, ncols=None):
    """Basis of {x : M x = 0}."""
    if not M:
        n = ncols or 0
        return [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    n = len(M[0])
    A, piv = rref(F, M)
    free = [c for c in range(n) if c not in piv]
    out = []
    for fc in free:
        x = [0] * n
        x[fc] = 1
        for i, pc in enumerate(piv):
            x[pc] = F.neg(A[i][fc])
        out.append(x)
    return out


def matmul(F, A, B):
    n, k = len(A), len(B)
    m = len(B[0]) if B else 0
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = 0
            for t in range(k):
                if A[i][t] and B[t][j]:
                    acc = F.add(acc, F.mul(A[i][t], B[t][j]))
            row.append(acc)
        out.append(row)
    return out


def det(F, M):
    A = [list(r) for r in M]
    n = len(A)
    d = 1
    for c in range(n):
        k = next((i for i in range(c, n) if A[i][c]), None)
        if k is None:
            return 0
        if k != c:
            A[c], A[k] = A[k], A[c]
            d = F.neg(d)
        d = F.mul(d, A[c][c])
        inv = F.inv(A[c][c])
        for i in range(c + 1, n):
            if A[i][c]:
                fac = F.mul(A[i][c], inv)
                A[i] = [F.sub(x, F.mul(fac, y)) for x, y in zip(A[i], A[c])]
    return d


def extend_basis(F, chosen, candidates):
    """Greedily add candidate vectors that are independent of chosen;
    returns indices of the candidates taken."""
    taken = []
    cur = [list(v) for v in chosen]
    r = rank(F, cur) if cur else 0
    for k, v in enumerate(candidates):
        trial = cur + [list(v)]
        r2 = rank(F, trial)
        if r2 > r:
            cur, r = trial, r2
            taken.append(k)
    return taken


def solve(F, M, b):
    """One solution x of M x = b or None."""
    n = len(M[0]) if M else 0
    aug = [list(r) + [bi] for r, bi in zip(M, b)]
    A, piv = rref(F, aug)
    if n in piv:
        return None
    x = [0] * n
    for i, pc in enumerate(piv):
        x[pc] = A[i][n]
    return x
