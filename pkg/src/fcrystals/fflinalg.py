"""Linear algebra over a single finite field (matrices of ints).

All functions take the FieldTower first.  Vectors are lists, matrices are
lists of rows.
"""
from __future__ import annotations


def zeros(r, c):
    return [[0] * c for _ in range(r)]


def eye(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(F, A, B):
    n = len(A)
    k = len(B)
    m = len(B[0]) if B else 0
    out = zeros(n, m)
    mul, add = F.mul, F.add
    for i in range(n):
        Ai = A[i]
        oi = out[i]
        for l in range(k):
            a = Ai[l]
            if a:
                Bl = B[l]
                for j in range(m):
                    b = Bl[j]
                    if b:
                        oi[j] = add(oi[j], mul(a, b))
    return out


def matvec(F, A, v):
    mul, add = F.mul, F.add
    out = []
    for row in A:
        acc = 0
        for a, x in zip(row, v):
            if a and x:
                acc = add(acc, mul(a, x))
        out.append(acc)
    return out


def frob_vec(F, v, k):
    return [F.frob(x, k) for x in v]


def frob_mat(F, A, k):
    return [[F.frob(x, k) for x in row] for row in A]


def embed_mat(F, A, G):
    return [[F.embed(x, G) for x in row] for row in A]


def embed_vec(F, v, G):
    return [F.embed(x, G) for x in v]


def transpose(A):
    return [list(c) for c in zip(*A)]


def rref(F, A):
    """Reduced row echelon form; returns (R, pivot columns)."""
    R = [list(r) for r in A]
    nrows = len(R)
    ncols = len(R[0]) if R else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if R[i][c]:
                piv = i
                break
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        inv = F.inv(R[r][c])
        R[r] = [F.mul(x, inv) for x in R[r]]
        for i in range(nrows):
            if i != r and R[i][c]:
                f = R[i][c]
                Ri, Rr = R[i], R[r]
                R[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(Ri, Rr)]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return R, pivots


def rank(F, A):
    if not A or not A[0]:
        return 0
    return len(rref(F, A)[1])


def kernel(F, A, ncols=None):
    """Basis of the right kernel {x : A x = 0} (list of vectors)."""
    if not A:
        n = ncols or 0
        return [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    ncols = len(A[0])
    R, piv = rref(F, A)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for i, pc in enumerate(piv):
            if R[i][fc]:
                v[pc] = F.neg(R[i][fc])
        basis.append(v)
    return basis


def column_space(F, cols, n):
    """Echelon basis of the span of the given column vectors."""
    if not cols:
        return []
    R, piv = rref(F, cols)
    return [R[i] for i in range(len(piv))]


def solve(F, A, b):
    """One solution x of A x = b, or None."""
    n = len(A)
    m = len(A[0]) if A else 0
    aug = [list(A[i]) + [b[i]] for i in range(n)]
    R, piv = rref(F, aug)
    if m in piv:
        return None
    x = [0] * m
    for i, pc in enumerate(piv):
        x[pc] = R[i][m]
    return x


def inverse(F, A):
    n = len(A)
    aug = [list(A[i]) + eye(n)[i] for i in range(n)]
    R, piv = rref(F, aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R]


def det(F, A):
    n = len(A)
    R = [list(r) for r in A]
    d = 1
    for c in range(n):
        piv = None
        for i in range(c, n):
            if R[i][c]:
                piv = i
                break
        if piv is None:
            return 0
        if piv != c:
            R[c], R[piv] = R[piv], R[c]
            d = F.neg(d)
        d = F.mul(d, R[c][c])
        inv = F.inv(R[c][c])
        for i in range(c + 1, n):
            if R[i][c]:
                f = F.mul(R[i][c], inv)
                R[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(R[i], R[c])]
    return d


def normalize_line(F, v):
    """Scale v so its first nonzero coordinate is 1."""
    for x in v:
        if x:
            inv = F.inv(x)
            return [F.mul(y, inv) for y in v]
    raise ValueError("zero vector does not span a line")


def is_zero_vec(v):
    return not any(v)


def in_span(F, vecs, v):
    """Is v in the span of vecs?"""
    if not any(v):
        return True
    if not vecs:
        return False
    return rank(F, [list(x) for x in vecs] + [list(v)]) == rank(F, [list(x) for x in vecs])


def parallel(F, u, v):
    """u and v nonzero and proportional, or v == 0 (v lies in the line of u)."""
    return in_span(F, [u], v)


def all_lines(F, n):
    """Every line of F^n, canonical representatives, deterministic order."""
    out = []
    for lead in range(n):
        rest = n - lead - 1
        for code in range(F.Q ** rest):
            v = [0] * n
            v[lead] = 1
            c = code
            for j in range(lead + 1, n):
                v[j] = c % F.Q
                c //= F.Q
            out.append(v)
    return out


def prime_field_matrix(F, apply, n):
    """Matrix over F_p of an additive map F^n -> F^n given as a callable.

    Coordinates: element j of the vector, coordinate l over F_p.
    """
    p, N = F.p, F.N
    cols = []
    for j in range(n):
        for l in range(N):
            v = [0] * n
            v[j] = p ** l
            w = apply(v)
            col = []
            for x in w:
                col.extend(F.coords(x))
            cols.append(col)
    return transpose(cols)


def prime_kernel(F, M):
    """Kernel of a matrix with entries in the prime field, as vectors of F^n."""
    P = _prime_field(F)
    ker = kernel(P, M)
    out = []
    N = F.N
    for kv in ker:
        n = len(kv) // N
        out.append([F.from_coords(kv[j * N:(j + 1) * N]) for j in range(n)])
    return out


def _prime_field(F):
    from .arith import FieldTower
    return FieldTower(F.p, 1, 1)
