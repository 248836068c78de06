"""Small dense matrices over Laurent polynomials.

Matrices are lists of rows of LaurentPoly.  Everything here is exact; the
sizes in play are tiny (n <= 6), so determinants and minors are computed by
cofactor recursion memoized over row/column bitmasks.
"""
from __future__ import annotations

from .arith import INF, LaurentPoly, common_field


def zeros(F, r, c=None):
    c = r if c is None else c
    return [[LaurentPoly(F) for _ in range(c)] for _ in range(r)]


def identity(F, n):
    M = zeros(F, n)
    for i in range(n):
        M[i][i] = LaurentPoly.one(F)
    return M


def diag_monomial(F, exps):
    n = len(exps)
    M = zeros(F, n)
    for i, a in enumerate(exps):
        M[i][i] = LaurentPoly.monomial(F, a)
    return M


def from_monomial_table(F, table):
    """Build a matrix from nested lists whose entries are None (zero), an
    int exponent k (meaning t^k), or a LaurentPoly."""
    out = []
    for row in table:
        r = []
        for x in row:
            if x is None:
                r.append(LaurentPoly(F))
            elif isinstance(x, LaurentPoly):
                r.append(x.to_field(F))
            else:
                r.append(LaurentPoly.monomial(F, int(x)))
        out.append(r)
    return out


def field_of(M):
    fields = {x.field for row in M for x in row}
    if len(fields) == 1:
        return fields.pop()
    return common_field(*fields)


def to_field(M, F):
    return [[x.to_field(F) for x in row] for row in M]


def unify(*mats):
    F = common_field(*[field_of(M) for M in mats])
    return F, [to_field(M, F) for M in mats]


def shape(M):
    return len(M), (len(M[0]) if M else 0)


def copy(M):
    return [list(row) for row in M]


def transpose(M):
    return [list(col) for col in zip(*M)]


def add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def neg(A):
    return [[-a for a in row] for row in A]


def mul(A, B):
    F, (A, B) = unify(A, B)
    n, k = shape(A)
    k2, m = shape(B)
    if k != k2:
        raise ValueError("shape mismatch")
    out = []
    for i in range(n):
        row = []
        Ai = A[i]
        for j in range(m):
            acc = LaurentPoly(F)
            for l in range(k):
                a = Ai[l]
                if a.terms:
                    b = B[l][j]
                    if b.terms:
                        acc = acc + a * b
            row.append(acc)
        out.append(row)
    return out


def mul_vec(A, v):
    return [col[0] for col in mul(A, [[x] for x in v])]


def scale(A, c):
    return [[a * c for a in row] for row in A]


def shift(A, k):
    return [[a.shift(k) for a in row] for row in A]


def frob(A, k=1):
    return [[a.frob(k) for a in row] for row in A]


def column(A, j):
    return [row[j] for row in A]


def from_columns(cols):
    n = len(cols[0])
    return [[cols[j][i] for j in range(len(cols))] for i in range(n)]


def columns(A):
    return [column(A, j) for j in range(len(A[0]))]


def min_val(A):
    return min((x.val() for row in A for x in row), default=INF)


def key(A):
    return tuple(tuple(x.key() for x in row) for row in A)


def equal(A, B):
    F, (A, B) = unify(A, B)
    return all(a.terms == b.terms for ra, rb in zip(A, B) for a, b in zip(ra, rb))


def is_zero(A):
    return all(not x.terms for row in A for x in row)


def _popcount(x):
    return bin(x).count("1")


def all_minors(A):
    """Dict (rowmask, colmask) -> minor for all square submatrices."""
    n, m = shape(A)
    F = field_of(A)
    D = {}
    for i in range(n):
        for j in range(m):
            D[(1 << i, 1 << j)] = A[i][j]
    rows_by_size = {1: [1 << i for i in range(n)]}
    cols_by_size = {1: [1 << j for j in range(m)]}
    for k in range(2, min(n, m) + 1):
        rows_by_size[k] = [R for R in range(1 << n) if _popcount(R) == k]
        cols_by_size[k] = [C for C in range(1 << m) if _popcount(C) == k]
        for R in rows_by_size[k]:
            r0 = (R & -R).bit_length() - 1
            Rr = R & ~(1 << r0)
            row = A[r0]
            for C in cols_by_size[k]:
                acc = LaurentPoly(F)
                idx = 0
                for c in range(m):
                    if C >> c & 1:
                        a = row[c]
                        if a.terms:
                            sub_ = D[(Rr, C & ~(1 << c))]
                            if sub_.terms:
                                term = a * sub_
                                acc = acc - term if idx & 1 else acc + term
                        idx += 1
                D[(R, C)] = acc
    return D


def minor_valuations(A):
    """d_k = min valuation of the k x k minors, for k = 1..min(n,m)."""
    D = all_minors(A)
    out = {}
    for (R, C), v in D.items():
        k = _popcount(R)
        val = v.val()
        if val < out.get(k, INF):
            out[k] = val
        else:
            out.setdefault(k, INF)
    return [out[k] for k in range(1, min(shape(A)) + 1)]


def det(A):
    n, m = shape(A)
    if n != m:
        raise ValueError("det of a non-square matrix")
    if n == 0:
        return LaurentPoly.one(field_of(A)) if A else None
    F = field_of(A)
    # expand along rows from the bottom: D[C] = minor on last |C| rows and cols C
    D = {0: LaurentPoly.one(F)}
    for k in range(1, n + 1):
        r0 = n - k
        row = A[r0]
        newD = {}
        for C in range(1 << n):
            if _popcount(C) != k:
                continue
            acc = LaurentPoly(F)
            idx = 0
            for c in range(n):
                if C >> c & 1:
                    a = row[c]
                    if a.terms:
                        s = D[C & ~(1 << c)]
                        if s.terms:
                            term = a * s
                            acc = acc - term if idx & 1 else acc + term
                    idx += 1
            newD[C] = acc
        D = newD
    return D[(1 << n) - 1]


def adjugate(A):
    n, _ = shape(A)
    F = field_of(A)
    if n == 1:
        return [[LaurentPoly.one(F)]]
    D = all_minors(A)
    full = (1 << n) - 1
    adj = zeros(F, n)
    for i in range(n):
        for j in range(n):
            # adj[i][j] = (-1)^{i+j} minor deleting row j, column i
            mnr = D[(full & ~(1 << j), full & ~(1 << i))]
            adj[i][j] = -mnr if (i + j) & 1 else mnr
    return adj


def inverse_monomial_det(A):
    """Exact inverse when det(A) is a monomial c t^k."""
    d = det(A)
    if not d.is_monomial():
        raise ValueError("determinant is not a monomial")
    return scale(adjugate(A), d ** -1)


def lattice_inverse(A):
    """A matrix whose columns span the same lattice as those of A^{-1}.

    A^{-1} = adj(A)/det(A) and det(A) = t^v u with u a unit of O, so the unit
    can be dropped: t^{-v} adj(A) spans the same O-module.
    """
    d = det(A)
    if d.is_zero():
        raise ZeroDivisionError("singular matrix")
    return shift(adjugate(A), -d.val())


def lattice_solve(A, B):
    """Matrix spanning the lattice A^{-1} B O^n (up to unit scalar)."""
    return mul(lattice_inverse(A), B)


def constant_part(A):
    """Entrywise coefficient of t^0 (ints in the field)."""
    return [[x.coeff(0) for x in row] for row in A]


def coefficient(A, k):
    return [[x.coeff(k) for x in row] for row in A]


def permutation_matrix(F, perm):
    """Matrix sending e_j to e_{perm[j]}."""
    n = len(perm)
    M = zeros(F, n)
    for j, i in enumerate(perm):
        M[i][j] = LaurentPoly.one(F)
    return M


def block_diag(F, blocks):
    n = sum(len(B) for B in blocks)
    M = zeros(F, n)
    off = 0
    for B in blocks:
        k = len(B)
        for i in range(k):
            for j in range(k):
                M[off + i][off + j] = B[i][j].to_field(F)
        off += k
    return M
