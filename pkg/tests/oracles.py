"""Brute-force reference implementations used to freeze and cross-check values.

Nothing here calls the algorithm it is checking: relative positions come
from truncated Smith elimination instead of minor valuations, lattices are
enumerated by colength-one descent instead of Hermite enumeration, the
Bruhat order is the Bjorner-Brenti counting criterion instead of the
subword recursion, and incident lines are found by trying every tuple.
"""
import itertools
from fractions import Fraction

from fcrystals.arith import LaurentPoly


# --- relative position by elimination ------------------------------------------------

def _det_leibniz(A):
    n = len(A)
    F = A[0][0].field
    total = LaurentPoly(F, {})
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = LaurentPoly(F, {0: 1})
        for i in range(n):
            term = term * A[i][perm[i]]
        total = total - term if inv % 2 else total + term
    return total


def _minor(A, i, j):
    return [row[:j] + row[j + 1:] for k, row in enumerate(A) if k != i]


def adjugate_cofactor(A):
    n = len(A)
    F = A[0][0].field
    if n == 1:
        return [[LaurentPoly(F, {0: 1})]]
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            c = _det_leibniz(_minor(A, i, j))
            out[j][i] = -c if (i + j) % 2 else c
    return out


def _series_inv(u, N):
    """Inverse of a unit power series modulo t^N (coefficient recursion)."""
    F = u.field
    c0 = u.coeff(0)
    inv0 = F.inv(c0)
    g = {}
    for k in range(N):
        acc = 1 if k == 0 else 0
        for j in range(1, k + 1):
            cj = u.coeff(j)
            if cj and g.get(k - j):
                acc = F.sub(acc, F.mul(cj, g[k - j]))
        g[k] = F.mul(inv0, acc)
    return LaurentPoly(F, {k: c for k, c in g.items() if c})


def _trunc(x, N):
    return LaurentPoly(x.field, {k: c for k, c in x.terms.items() if k < N})


def smith_exponents(g, N=48):
    """Elementary divisor exponents (descending) of a square matrix over
    F((t)) by pivoting elimination, computed modulo t^N after shifting."""
    n = len(g)
    lo = min((x.val() for row in g for x in row if x.terms), default=0)
    g = [[_trunc(x.shift(-lo), N) for x in row] for row in g]
    exps = []
    for p in range(n):
        best = None
        for i in range(p, n):
            for j in range(p, n):
                if g[i][j].terms and (best is None or g[i][j].val() < best[0]):
                    best = (g[i][j].val(), i, j)
        if best is None:
            raise ValueError("singular modulo the working precision")
        v, i, j = best
        g[p], g[i] = g[i], g[p]
        for row in g:
            row[p], row[j] = row[j], row[p]
        u = g[p][p].shift(-v)
        uinv = _series_inv(u, N)
        for i2 in range(p + 1, n):
            if g[i2][p].terms:
                c = _trunc(g[i2][p].shift(-v) * uinv, N)
                g[i2] = [_trunc(a - c * b, N) for a, b in zip(g[i2], g[p])]
        for j2 in range(p + 1, n):
            if g[p][j2].terms:
                c = _trunc(g[p][j2].shift(-v) * uinv, N)
                for r in range(n):
                    g[r][j2] = _trunc(g[r][j2] - g[r][p] * c, N)
        exps.append(v + lo)
    return sorted(exps, reverse=True)


def matmul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    F = A[0][0].field
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = LaurentPoly(F, {})
            for l in range(k):
                acc = acc + A[i][l] * B[l][j]
            row.append(acc)
        out.append(row)
    return out


def relpos_oracle(A, B):
    """Exponents of A^{-1} B: Smith form of adj(A) B shifted by val det A."""
    d = _det_leibniz(A).val()
    return tuple(e - d for e in smith_exponents(matmul(adjugate_cofactor(A), B)))


# --- lattices between t^a L0 and t^-a L0 by colength-one descent ---------------------

def lattices_between(F, n, a):
    """All lattices M with t^a L0 <= M <= t^-a L0, by repeated passage to
    colength-one sublattices (kernels of nonzero functionals on M/tM)."""
    from fcrystals.lattice import Lattice
    top = Lattice.standard(F, n, -a)
    bottom = Lattice.standard(F, n, a)
    seen = {top}
    frontier = [top]
    functionals = [v for v in itertools.product(range(F.size), repeat=n) if any(v)]
    while frontier:
        nxt = []
        for M in frontier:
            cols = M.columns()
            for phi in functionals:
                # kernel of phi on M/tM: t M plus basis vectors adjusted
                piv = next(i for i, c in enumerate(phi) if c)
                gens = [[x.shift(1) for x in cols[piv]]]
                for i in range(n):
                    if i == piv:
                        continue
                    c = F.neg(F.mul(phi[i], F.inv(phi[piv])))
                    gens.append([x + y.scale(c) for x, y in zip(cols[i], cols[piv])])
                L = Lattice.from_generators(gens, n, F)
                if L.contains(bottom) and L not in seen:
                    seen.add(L)
                    nxt.append(L)
        frontier = nxt
    return seen


# --- Bruhat order by counting (Bjorner-Brenti, type A affine) ------------------------

def bruhat_leq_counting(x, y):
    """x <= y for affine permutations of equal kappa: for all i, j the
    counts #{a <= i : x(a) >= j} <= #{a <= i : y(a) >= j}."""
    if x.kappa != y.kappa:
        return False
    n = x.n
    big = max(max(abs(v) for v in x.lam), max(abs(v) for v in y.lam), 1)
    reach = n * (big + 2)          # u(a) >= j forces a >= j - reach
    span = 2 * reach + n
    for i in range(-span, span):
        for j in range(i - 2 * reach, i + 2 * reach + 1):
            lo = j - reach
            cx = sum(1 for a in range(lo, i + 1) if x(a) >= j)
            cy = sum(1 for a in range(lo, i + 1) if y(a) >= j)
            if cx > cy:
                return False
    return True


# --- incident lines by exhaustion ---------------------------------------------------

def _apply(G, A, k, v):
    fv = [G.frob(c, k) for c in v]
    out = []
    for row in A:
        acc = 0
        for a, b in zip(row, fv):
            acc = G.add(acc, G.mul(a, b))
        out.append(acc)
    return out


def _in_line(G, w, v):
    if not any(w):
        return True
    # w = c v for some c
    i = next(i for i, c in enumerate(v) if c)
    c = G.mul(w[i], G.inv(v[i]))
    return all(G.mul(c, b) == a for a, b in zip(w, v))


def all_lines(G, m):
    out = []
    for v in itertools.product(range(G.size), repeat=m):
        if any(v):
            i = next(i for i, c in enumerate(v) if c)
            if v[i] == 1:
                out.append(list(v))
    return out


def incident_tuples(G, maps, m):
    """All (l_0, ..., l_{f-1}) with phi_i l_{i-1} in l_i and psi_i l_i in
    l_{i-1}; maps[i] = (phi_i, sigma_i, psi_i, tau_i) embedded in G."""
    f = len(maps)
    lines = all_lines(G, m)
    sols = []
    for tup in itertools.product(lines, repeat=f):
        ok = True
        for i in range(f):
            phi, s, psi, t = maps[i]
            prev, cur = tup[(i - 1) % f], tup[i]
            if not _in_line(G, _apply(G, phi, s, prev), cur) or \
                    not _in_line(G, _apply(G, psi, t, cur), prev):
                ok = False
                break
        if ok:
            sols.append(tuple(tuple(v) for v in tup))
    return sols


# --- coweights --------------------------------------------------------------------------

def prefix_leq(nu, mu):
    a = b = Fraction(0)
    for x, y in zip(nu, mu):
        a += Fraction(x)
        b += Fraction(y)
        if a > b:
            return False
    return a == b


def dominant_window(n, lo, hi, total=None):
    out = []
    for v in itertools.product(range(lo, hi + 1), repeat=n):
        if all(v[i] >= v[i + 1] for i in range(n - 1)) and (total is None or sum(v) == total):
            out.append(v)
    return out


def brute_minimum_above(nu, w=3):
    """The unique dominance-minimal integral dominant mu >= nu in a window."""
    nu = [Fraction(x) for x in nu]
    tot = sum(nu)
    if tot.denominator != 1:
        return None
    cands = [m for m in dominant_window(len(nu), -w, w, int(tot)) if prefix_leq(nu, m)]
    mins = [m for m in cands if all(prefix_leq(m, c) for c in cands)]
    return mins[0] if len(mins) == 1 else None


def newton_of_monomial(perm, exps):
    """Slopes of b = P diag(t^exps) (b e_j = t^{exps_j} e_{perm(j)}): cycle averages."""
    n = len(perm)
    seen = [False] * n
    out = []
    for s in range(n):
        if seen[s]:
            continue
        cyc = []
        j = s
        while not seen[j]:
            seen[j] = True
            cyc.append(j)
            j = perm[j]
        avg = Fraction(sum(exps[j] for j in cyc), len(cyc))
        out.extend([avg] * len(cyc))
    return tuple(sorted(out, reverse=True))


def random_window_lattice(F, n, a, rng):
    """A random canonical form with diagonal and off-diagonal exponents in
    [-a, a] (the enumeration window), sampled uniformly slot by slot."""
    from fcrystals.lattice import Lattice
    d = [rng.randint(-a, a) for _ in range(n)]
    B = [[LaurentPoly(F, {}) for _ in range(n)] for _ in range(n)]
    for i in range(n):
        B[i][i] = LaurentPoly(F, {d[i]: 1})
    for j in range(n):
        for i in range(j + 1, n):
            B[i][j] = LaurentPoly(F, {e: rng.randrange(F.size) for e in range(-a, d[i])})
    return Lattice(B)


def _mat_f2(A, B):
    n, k, m = len(A), len(B), len(B[0])
    return [[sum(A[i][l] * B[l][j] for l in range(k)) % 2 for j in range(m)] for i in range(n)]


def orpheus_pairs_f2(m):
    """All (A, B) of m x m matrices over F_2 with AB = BA = 0."""
    mats = [[list(bits[i * m:(i + 1) * m]) for i in range(m)]
            for bits in itertools.product((0, 1), repeat=m * m)]
    zero = [[0] * m for _ in range(m)]
    return [(A, B) for A in mats for B in mats
            if _mat_f2(A, B) == zero and _mat_f2(B, A) == zero]
