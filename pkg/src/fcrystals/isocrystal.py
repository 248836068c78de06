"""Isocrystals F = b sigma^k on L^n, Newton points and symplectic structure.

Newton points are computed along several routes, tried in order:

* ``monomial``: b is a generalized permutation matrix; slopes are cycle
  averages of entry valuations.
* ``triangular``: b is block triangular after a simultaneous permutation;
  the slopes are the union of the slopes of the diagonal blocks.
* ``cyclic-skew``: for a cyclic vector v, F^n v = sum a_i F^i v and the
  slopes are read off the lower convex hull of the points (i, val a_i).
* ``bounds(s)``: minor valuations of the norms b sigma(b) ... give one-sided
  bounds; a candidate is certified only under a stability test.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import gcd
from typing import Optional

from . import laurentmat as lm
from .arith import INF, FieldTower, LaurentPoly, common_field
from .config import DEFAULT, SearchConfig
from .coweight import (Coweight, CoweightError, GSpCoweight, as_coweight,
                       check_newton_vector, dominance_leq, is_newton_vector)
from .lattice import Lattice, SymplecticForm, elementary_divisors


class IsocrystalError(ValueError):
    pass


def _lcm(a, b):
    return a * b // gcd(a, b)


class Isocrystal:
    """The sigma^k-linear bijection F = b sigma^k of L^n (k = sigma_power)."""

    def __init__(self, b, sigma_power: int = 1):
        F = lm.field_of(b)
        self.b = lm.to_field(b, F)
        self.n = len(b)
        self.field = F
        self.sigma_power = sigma_power
        d = lm.det(self.b)
        if d.is_zero():
            raise IsocrystalError("b is not invertible")
        self.det = d
        self._newton = {}

    @property
    def f_def(self):
        """Smallest m' such that b has entries over F_{q^m'}."""
        F = self.field
        m = 1
        for row in self.b:
            for x in row:
                for c in x.terms.values():
                    m = _lcm(m, F.degree_of(c))
        return m

    def to_field(self, F):
        return Isocrystal(lm.to_field(self.b, F), self.sigma_power)

    def apply(self, vec):
        """F(v) = b sigma^k(v)."""
        return lm.mul_vec(self.b, [x.frob(self.sigma_power) for x in vec])

    def norm(self, s: int):
        """N_s = b sigma^k(b) ... sigma^{k(s-1)}(b), so F^s = N_s sigma^{ks}."""
        k = self.sigma_power
        N = lm.identity(self.field, self.n)
        for j in range(s):
            N = lm.mul(N, lm.frob(self.b, k * j))
        return N

    def norm_isocrystal(self, s: int):
        return Isocrystal(self.norm(s), self.sigma_power * s)

    def val_det(self):
        return self.det.val()

    def __repr__(self):
        return f"Isocrystal(n={self.n}, sigma_power={self.sigma_power}, b={self.b})"


@dataclass
class NewtonPoint:
    nu: Coweight
    certified: bool
    method: str
    bounds: Optional[dict] = None
    field_degree: Optional[int] = None

    def __iter__(self):
        return iter(self.nu)


@dataclass
class SymplecticIsocrystal:
    iso: Isocrystal
    form: SymplecticForm
    c: LaurentPoly
    d: int


# --- standard forms -----------------------------------------------------------

def cyclic_block(F, m, r):
    """The basis e_1, ..., e_m with F e_j = e_{j+1} and F e_m = t^r e_1."""
    B = lm.zeros(F, m)
    for j in range(m - 1):
        B[j + 1][j] = LaurentPoly.one(F)
    B[0][m - 1] = LaurentPoly.monomial(F, r) if m > 1 else LaurentPoly.monomial(F, r)
    return B


def isoclinic_parts(nu):
    """[(slope, multiplicity)] in dominant order."""
    nu = as_coweight(nu)
    P = check_newton_vector(nu)
    out = []
    off = 0
    for m in P:
        out.append((nu[off], m))
        off += m
    return out


def standard_isocrystal(nu, field: Optional[FieldTower] = None) -> Isocrystal:
    """Block diagonal b with one cyclic block per isoclinic part of nu: for
    slope s/m with multiplicity m the block is (subdiagonal ones, corner t^s)."""
    nu = as_coweight(nu)
    if not nu.is_dominant():
        raise CoweightError(f"nu = {nu} is not dominant")
    F = field or FieldTower(2)
    blocks = [cyclic_block(F, m, int(m * s)) for s, m in isoclinic_parts(nu)]
    return Isocrystal(lm.block_diag(F, blocks))


def block_offsets(nu):
    parts = isoclinic_parts(nu)
    out = []
    off = 0
    for s, m in parts:
        out.append((off, m, s))
        off += m
    return out


def standard_symplectic_isocrystal(nu, field: Optional[FieldTower] = None):
    """Similitude isocrystal of GSp Newton vector nu (length 2n, symmetric
    with defect d) for the standard form, with similitude factor t^d.

    Layout: slopes > d/2 first (cyclic blocks), then the slope-d/2 part as
    swapped pairs e_i <-> e_{2n+1-i}, then the dual of the first part in
    reversed coordinates.
    """
    nu = GSpCoweight(nu)
    if not nu.is_dominant():
        raise CoweightError(f"nu = {nu} is not dominant")
    check_newton_vector(nu)
    F = field or FieldTower(2)
    n2 = len(nu)
    d = nu.d
    if d.denominator != 1:
        raise CoweightError("defect must be integral")
    d = int(d)
    half = Fraction(d, 2)
    high = [x for x in nu if x > half]
    h = len(high)
    mid = n2 - 2 * h
    b = lm.zeros(F, n2)
    if h:
        BH = standard_isocrystal(high, F).b
        # low block in reversed coordinates is t^d (BH^T)^{-1}
        BHinv = lm.inverse_monomial_det(BH)
        BL = lm.scale(lm.transpose(BHinv), LaurentPoly.monomial(F, d))
        for i in range(h):
            for j in range(h):
                b[i][j] = BH[i][j]
                # reversed coordinates: low index h-1-a sits at n2-1-a
                b[n2 - 1 - i][n2 - 1 - j] = BL[i][j]
    lo = h
    hi = n2 - h          # middle positions lo..hi-1, paired i <-> n2-1-i
    if mid:
        # pair e_i with e_ip (ip = n2-1-i) and swap them:
        # F e_i = -t^e e_ip, F e_ip = t^(d-e) e_i, e = floor(d/2)
        e = d // 2
        for i in range(lo, lo + mid // 2):
            ip = n2 - 1 - i
            b[ip][i] = -LaurentPoly.monomial(F, e)
            b[i][ip] = LaurentPoly.monomial(F, d - e)
    X = Isocrystal(b)
    form = SymplecticForm.standard(n2)
    c, dd = similitude_scale(X, form)
    return SymplecticIsocrystal(X, form, c, dd)


# --- Newton point ---------------------------------------------------------------

def _support_graph(b):
    n = len(b)
    return [[j for j in range(n) if b[i][j].terms] for i in range(n)]


def _is_generalized_permutation(b):
    n = len(b)
    perm = [None] * n
    for j in range(n):
        rows = [i for i in range(n) if b[i][j].terms]
        if len(rows) != 1:
            return None
        perm[j] = rows[0]
    if len(set(perm)) != n:
        return None
    return perm


def _newton_monomial(b, perm):
    n = len(b)
    seen = [False] * n
    slopes = []
    for j in range(n):
        if seen[j]:
            continue
        cyc = []
        x = j
        while not seen[x]:
            seen[x] = True
            cyc.append(x)
            x = perm[x]
        tot = sum(b[perm[y]][y].val() for y in cyc)
        slopes.extend([Fraction(tot, len(cyc))] * len(cyc))
    return Coweight(sorted(slopes, reverse=True))


def _strong_components(b):
    """Strongly connected components of the support graph (edge j -> i when
    b[i][j] != 0), in a topological order of the condensation."""
    n = len(b)
    reach = [[b[i][j].terms != {} or i == j for i in range(n)] for j in range(n)]
    # reach[j][i]: path j -> i ; transitive closure
    for k in range(n):
        for j in range(n):
            if reach[j][k]:
                for i in range(n):
                    if reach[k][i]:
                        reach[j][i] = True
    comps = []
    assigned = [False] * n
    for j in range(n):
        if assigned[j]:
            continue
        comp = [i for i in range(n) if reach[j][i] and reach[i][j]]
        for i in comp:
            assigned[i] = True
        comps.append(comp)
    # order: a component precedes another if it reaches it
    comps.sort(key=lambda c: -sum(reach[c[0]][i] for i in range(n)))
    return comps


def _principal(b, idx):
    return [[b[i][j] for j in idx] for i in idx]


def _lower_hull_slopes(points, n):
    """points: dict i -> val a_i (finite), with (n, 0) included.  Returns the
    isocrystal slopes (negated hull slopes, one per unit of x-length)."""
    pts = sorted(points.items())
    hull = []
    for x, y in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # keep lower hull: remove hull[-1] if it is above segment hull[-2] -> (x,y)
            if (y2 - y1) * (x - x1) >= (y - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append((x, y))
    slopes = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        s = Fraction(y2 - y1, x2 - x1)
        slopes.extend([-s] * (x2 - x1))
    if hull[0][0] != 0:
        raise IsocrystalError("internal: a_0 vanished")
    return Coweight(sorted(slopes, reverse=True))


def _cyclic_attempt(X: Isocrystal, v):
    n = X.n
    vecs = [v]
    for _ in range(n):
        vecs.append(X.apply(vecs[-1]))
    K = lm.from_columns(vecs[:n])
    dK = lm.det(K)
    if dK.is_zero():
        return None
    vK = dK.val()
    points = {n: 0}
    for i in range(n):
        Ki = lm.from_columns(vecs[:i] + [vecs[n]] + vecs[i + 1:n])
        di = lm.det(Ki)
        if not di.is_zero():
            points[i] = di.val() - vK
    return _lower_hull_slopes(points, n)


def _newton_cyclic(X: Isocrystal, cfg: SearchConfig):
    rng = random.Random(cfg.seed)
    base = X.field
    m = base.m
    tried = 0
    while m <= max(cfg.m_max, base.m):
        F = FieldTower(base.p, base.e, m)
        if F.Q > 1 << 16:
            break
        Y = X if F is base else X.to_field(F)
        for _ in range(12):
            v = []
            for _ in range(X.n):
                terms = {0: F.random(rng), 1: F.random(rng)}
                v.append(LaurentPoly(F, terms))
            if all(x.is_zero() for x in v):
                continue
            tried += 1
            nu = _cyclic_attempt(Y, v)
            if nu is not None:
                return nu, m
        m += base.m
    return None, None


def _fekete(X: Isocrystal, cfg: SearchConfig):
    n = X.n
    f = X.f_def
    data = {}
    s = f
    while s <= max(cfg.s_max, f):
        H = elementary_divisors(X.norm(s))
        # d_k(s) = sum of the k smallest Hodge entries
        Hs = sorted(H)
        dk = []
        acc = 0
        for x in Hs:
            acc += x
            dk.append(acc)
        data[s] = [int(x) for x in dk]
        s *= 2
    s_last = max(data)
    # rigorous case: nu <= H_s / s and a central bound forces equality
    for s0, dk in sorted(data.items()):
        steps = [dk[0]] + [dk[i] - dk[i - 1] for i in range(1, n)]
        if len(set(steps)) == 1:
            c = Fraction(steps[0], s0)
            nu = Coweight([c] * n)
            if is_newton_vector(nu):
                return NewtonPoint(nu, True, f"bounds({s0})",
                                   bounds={str(k): v for k, v in data.items()})
    # candidate from the largest s
    xs = [Fraction(0)] + [Fraction(v, s_last).limit_denominator(n) for v in data[s_last]]
    pts = {i: xs[i] for i in range(n + 1)}
    hull_pts = sorted(pts.items())
    hull = []
    for x, y in hull_pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (x - x1) >= (y - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append((x, y))
    slopes = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slopes.extend([Fraction(y2 - y1, x2 - x1)] * (x2 - x1))
    cand = Coweight(sorted(slopes, reverse=True))
    certified = False
    method = f"bounds({s_last})"
    if is_newton_vector(cand) and cand.total == X.val_det():
        partial = []
        acc = Fraction(0)
        for x in sorted(cand):
            acc += x
            partial.append(acc)
        exact = [s0 for s0, dk in data.items()
                 if all(Fraction(dk[k]) == s0 * partial[k] for k in range(n))]
        for s0 in sorted(exact):
            if 2 * s0 in data and 2 * s0 in exact:
                certified = True
                method = f"bounds({s0})"
                break
    return NewtonPoint(cand, certified, method,
                       bounds={str(k): v for k, v in data.items()})


def newton_point(X: Isocrystal, budget: SearchConfig = DEFAULT) -> NewtonPoint:
    """Dominant slope vector of X with a certification flag."""
    key = (budget.seed, budget.m_max, budget.s_max)
    if key in X._newton:
        return X._newton[key]
    res = _newton(X, budget)
    if res.certified and res.nu.total != X.val_det():
        raise IsocrystalError("internal: slope sum differs from val det b")
    X._newton[key] = res
    return res


def _newton(X: Isocrystal, cfg: SearchConfig) -> NewtonPoint:
    b = X.b
    perm = _is_generalized_permutation(b)
    if perm is not None:
        return NewtonPoint(_newton_monomial(b, perm), True, "monomial")
    comps = _strong_components(b)
    if len(comps) > 1:
        slopes = []
        certified = True
        sub_methods = []
        for comp in comps:
            sub = Isocrystal(_principal(b, comp), X.sigma_power)
            r = newton_point(sub, cfg)
            slopes.extend(r.nu)
            certified = certified and r.certified
            sub_methods.append(r.method)
        return NewtonPoint(Coweight(sorted(slopes, reverse=True)), certified,
                           "triangular", bounds={"blocks": sub_methods})
    nu, m = _newton_cyclic(X, cfg)
    if nu is not None:
        return NewtonPoint(nu, True, "cyclic-skew", field_degree=m)
    return _fekete(X, cfg)


def newton_bounds(X: Isocrystal, s: int):
    """d_k(s)/s for k = 1..n (lower bounds for sums of k smallest slopes)."""
    H = sorted(elementary_divisors(X.norm(s)))
    out = []
    acc = 0
    for x in H:
        acc += x
        out.append(Fraction(acc, s))
    return out


# --- twisting lattices -------------------------------------------------------------

def twist_apply(X: Isocrystal, M: Lattice, s: int = 1) -> Lattice:
    """F^s(M).  Negative s uses F^{-1} = sigma^{-k} b^{-1}, exact up to the
    unit part of det b (which does not change a lattice)."""
    if X.field is not M.field:
        F = common_field(X.field, M.field)
        X, M = X.to_field(F), M.to_field(F)
    k = X.sigma_power
    if s == 0:
        return M
    if s > 0:
        A = M.basis
        N = X.norm(s)
        return Lattice(lm.mul(N, lm.frob(A, k * s)))
    A = M.basis
    binv = lm.lattice_inverse(X.b)
    for _ in range(-s):
        A = lm.frob(lm.mul(binv, A), -k)
    return Lattice(A)


def hodge_vector(X: Isocrystal, M: Lattice):
    """mu(M) = relative_position(M, F M)."""
    from .lattice import relative_position
    return relative_position(M, twist_apply(X, M, 1))


# --- symplectic similitudes -----------------------------------------------------

class SimilitudeError(IsocrystalError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


def similitude_scale(X: Isocrystal, form: SymplecticForm):
    """c with <Fx, Fy> = c <x, y>^sigma, i.e. b^T J b = c J; returns (c, val c)."""
    F = X.field
    J = form.matrix(F)
    G = lm.mul(lm.transpose(X.b), lm.mul(J, X.b))
    c = None
    for i in range(X.n):
        for j in range(X.n):
            if J[i][j].terms:
                cand = G[i][j] * LaurentPoly.const(F, F.inv(J[i][j].coeff(0)))
                if c is None:
                    c = cand
                break
        if c is not None:
            break
    for i in range(X.n):
        for j in range(X.n):
            expect = c * J[i][j]
            if G[i][j] != expect:
                raise SimilitudeError(
                    f"b is not a similitude: <F e_{i+1}, F e_{j+1}> != c <e_{i+1}, e_{j+1}>",
                    witness=(i, j))
    if c.is_zero():
        raise SimilitudeError("similitude factor is zero")
    d = c.val()
    return c, d


def check_newton_symmetry(nu, d):
    """nu_i + nu_{2n+1-i} = d for all i."""
    nu = as_coweight(nu)
    n2 = len(nu)
    return all(nu[i] + nu[n2 - 1 - i] == d for i in range(n2))


def symplectic_isocrystal(X: Isocrystal, form: SymplecticForm, cfg=DEFAULT):
    c, d = similitude_scale(X, form)
    npt = newton_point(X, cfg)
    if npt.certified and not check_newton_symmetry(npt.nu, d):
        raise IsocrystalError("Newton point violates the symplectic symmetry")
    return SymplecticIsocrystal(X, form, c, d)


def isocrystal_from_table(table, field=None, sigma_power=1):
    F = field or FieldTower(2)
    return Isocrystal(lm.from_monomial_table(F, table), sigma_power)


def example_block(a=1, field=None):
    """The 3 x 3 example [[0, t^a, 0], [t^(a+1), 0, 0], [0, 0, t^a]]."""
    return isocrystal_from_table([[None, a, None], [a + 1, None, None], [None, None, a]], field)


def example_conjugate(a=1, field=None):
    """The same with an extra 1 in position (3, 2)."""
    return isocrystal_from_table([[None, a, None], [a + 1, None, None], [None, 0, a]], field)
