"""Circular diagrams of semilinear maps and incident line tuples.

A diagram has spaces W_0, ..., W_{f-1} of a common dimension m over a finite
field and, for each i in Z/f, maps phi_i : W_{i-1} -> W_i (semilinear for
sigma^{s_i}) and psi_i : W_i -> W_{i-1} (semilinear for sigma^{t_i}) with
psi_i phi_i = 0 and phi_i psi_i = 0.  ``solve_lines`` finds lines l_i with
phi_i l_{i-1} in l_i and psi_i l_i in l_{i-1}, extending the field when an
eigen-equation has no solution over the current one.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import gcd
from typing import List, Optional

from . import fflinalg as ff
from .arith import MAX_FIELD_SIZE, FieldTower, common_field
from .config import DEFAULT, BudgetExhausted, SearchConfig


class IncidenceError(ValueError):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


# --- semilinear maps -------------------------------------------------------------

class SemilinearMap:
    """x -> A sigma^k(x) for an r x c matrix A of field ints."""

    __slots__ = ("A", "k", "field")

    def __init__(self, A, k: int, field: FieldTower):
        self.A = [list(r) for r in A]
        self.k = int(k)
        self.field = field

    @property
    def rows(self):
        return len(self.A)

    @property
    def cols(self):
        return len(self.A[0]) if self.A else 0

    def __call__(self, v):
        F = self.field
        return ff.matvec(F, self.A, ff.frob_vec(F, v, self.k))

    def compose(self, other: "SemilinearMap") -> "SemilinearMap":
        """self o other."""
        F = self.field
        return SemilinearMap(ff.matmul(F, self.A, ff.frob_mat(F, other.A, self.k)),
                             self.k + other.k, F)

    def inverse(self) -> "SemilinearMap":
        F = self.field
        return SemilinearMap(ff.frob_mat(F, ff.inverse(F, self.A), -self.k), -self.k, F)

    def embed(self, G: FieldTower) -> "SemilinearMap":
        if G is self.field:
            return self
        return SemilinearMap(ff.embed_mat(self.field, self.A, G), self.k, G)

    def rank(self):
        return ff.rank(self.field, self.A)

    def is_zero(self):
        return not any(any(r) for r in self.A)

    def is_bijective(self):
        return self.rows == self.cols and self.rank() == self.rows

    def kernel(self):
        """Basis of ker(A sigma^k) = sigma^{-k}(ker A)."""
        F = self.field
        return [ff.frob_vec(F, v, -self.k) for v in ff.kernel(F, self.A, self.cols)]

    def image(self):
        """Echelon basis of the image (= column space of A)."""
        F = self.field
        return ff.column_space(F, ff.transpose(self.A), self.rows)

    def __repr__(self):
        return f"SemilinearMap(k={self.k}, A={self.A})"


def line_key(v):
    """Order on canonical lines: leading position first, then coordinates."""
    lead = next(i for i, x in enumerate(v) if x)
    return (lead, tuple(v))


def _canon(F, v):
    return ff.normalize_line(F, v)


def _in_line(F, line, v):
    return ff.parallel(F, line, v)


def _field_ladder(F: FieldTower, cfg: SearchConfig):
    """F, then extensions F_{q^(m j)} within the budget."""
    cap = max(cfg.m_max, F.m)
    j = 1
    while F.m * j <= cap:
        G = F if j == 1 else F.extension(j)
        if G.Q > MAX_FIELD_SIZE:
            break
        yield G
        j += 1


def _budget_error(what, cfg):
    return BudgetExhausted(
        f"{what}: no solution over fields of degree <= {cfg.m_max}; over finite "
        f"fields an eigenline may only appear after a larger extension")


# --- eigenlines --------------------------------------------------------------------

def _poly_eval(F, coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = F.add(F.mul(acc, x), c)
    return acc


def _char_roots(F, A):
    """Nonzero roots in F of det(A - x I), found from the interpolated
    characteristic polynomial."""
    n = len(A)

    def det_at(x):
        return ff.det(F, [[F.sub(A[i][j], x) if i == j else A[i][j] for j in range(n)]
                          for i in range(n)])

    if F.Q <= 4 * (n + 1):
        return [x for x in F.nonzero() if det_at(x) == 0]
    pts = list(range(n + 1))
    vals = [det_at(x) for x in pts]
    # Lagrange interpolation: coefficients low to high
    coeffs = [0] * (n + 1)
    for i, xi in enumerate(pts):
        basis = [1]
        denom = 1
        for j, xj in enumerate(pts):
            if j == i:
                continue
            nxt = [0] * (len(basis) + 1)
            for k, c in enumerate(basis):
                nxt[k] = F.sub(nxt[k], F.mul(c, xj))
                nxt[k + 1] = F.add(nxt[k + 1], c)
            basis = nxt
            denom = F.mul(denom, F.sub(xi, xj))
        scale = F.div(vals[i], denom)
        for k, c in enumerate(basis):
            coeffs[k] = F.add(coeffs[k], F.mul(c, scale))
    return [x for x in F.nonzero() if _poly_eval(F, coeffs, x) == 0]


def _eigen_candidates(G, A, k, fixed_vector):
    """Nonzero solutions of A sigma^k(x) = lambda x over G for the first
    eigenvalue class that has any (lambda = 1 tried first)."""
    n = len(A)
    if k % G.m == 0:
        lams = [1] if fixed_vector else sorted(_char_roots(G, A), key=lambda x: (x != 1, x))
        for lam in lams:
            M = [[G.sub(A[i][j], lam) if i == j else A[i][j] for j in range(n)]
                 for i in range(n)]
            ker = ff.kernel(G, M, n)
            if ker:
                return ker
        return []
    kk = k % G.m
    index = gcd(G.q ** kk - 1, G.order)
    reps = [1] if fixed_vector else [G.element_from_log(i) for i in range(index)]
    for lam in reps:
        def apply(v, lam=lam):
            w = ff.matvec(G, A, ff.frob_vec(G, v, k))
            return [G.sub(a, G.mul(lam, b)) for a, b in zip(w, v)]
        ker = ff.prime_kernel(G, ff.prime_field_matrix(G, apply, n))
        if ker:
            return ker
    return []


def semilinear_eigenline(A, k: int = 1, field: Optional[FieldTower] = None,
                         cfg: SearchConfig = DEFAULT, fixed_vector: bool = False):
    """A line l with A sigma^k(l) = l, and the field it was found over.

    ``A`` is a square matrix of field ints (or a SemilinearMap, in which case
    ``k`` and ``field`` are taken from it).  With ``fixed_vector`` the line is
    spanned by a vector x with A sigma^k(x) = x.
    """
    if isinstance(A, SemilinearMap):
        A, k, field = A.A, A.k, A.field
    F = field
    if F is None:
        raise ValueError("field required")
    if not A:
        raise ValueError("empty matrix")
    for G in _field_ladder(F, cfg):
        AG = ff.embed_mat(F, A, G)
        ker = _eigen_candidates(G, AG, k, fixed_vector)
        if ker:
            lines = [_canon(G, v) for v in ker]
            return min(lines, key=line_key), G
    raise _budget_error("semilinear eigenline", cfg)


def stable_line_pair(phi: SemilinearMap, psi: SemilinearMap, cfg: SearchConfig = DEFAULT):
    """A line stable under two semilinear endomorphisms with phi psi = psi phi = 0.

    If phi is bijective (so psi = 0) the line is a phi-eigenline.  Otherwise
    psi maps W into ker phi and the line is taken inside ker phi: a kernel
    line of psi there if psi is not injective on it, else a psi-eigenline.
    Returns (line, field, case).
    """
    F = phi.field
    if phi.is_bijective():
        line, G = semilinear_eigenline(phi, cfg=cfg)
        return line, G, "bijective"
    K = phi.kernel()                      # basis of ker phi
    n = phi.cols
    B = ff.transpose(K)                   # n x dimK
    # psi restricted to ker phi, in the basis K: psi(B y) = B R sigma^t(y)
    img = ff.matmul(F, psi.A, ff.frob_mat(F, B, psi.k))
    R_cols = []
    for j in range(len(K)):
        col = [img[i][j] for i in range(n)]
        y = ff.solve(F, B, col)
        if y is None:
            raise IncidenceError("psi does not preserve ker phi; the composition condition fails")
        R_cols.append(y)
    R = ff.transpose(R_cols)
    rest = SemilinearMap(R, psi.k, F)
    if not rest.is_bijective():
        y = min((_canon(F, v) for v in rest.kernel()), key=line_key)
        line = ff.matvec(F, B, y)
        return _canon(F, line), F, "kernel"
    y, G = semilinear_eigenline(rest, cfg=cfg)
    BG = ff.embed_mat(F, B, G)
    return _canon(G, ff.matvec(G, BG, y)), G, "eigenline"


# --- diagrams ----------------------------------------------------------------------

@dataclass
class RankProfile:
    r: tuple

    def __iter__(self):
        return iter(self.r)

    @property
    def r_min(self):
        return min(self.r)


@dataclass
class LineTuple:
    lines: list
    field: FieldTower
    transcript: list = dc_field(default_factory=list)

    @property
    def extension_degree(self):
        return self.field.m


@dataclass
class CircularDiagram:
    """phi[i] : W_{i-1} -> W_i, psi[i] : W_i -> W_{i-1}, i in Z/f."""
    phi: List[SemilinearMap]
    psi: List[SemilinearMap]

    def __post_init__(self):
        if len(self.phi) != len(self.psi) or not self.phi:
            raise IncidenceError("need f >= 1 pairs of maps")
        m = self.phi[0].rows
        for i, (a, b) in enumerate(zip(self.phi, self.psi)):
            if (a.rows, a.cols, b.rows, b.cols) != (m, m, m, m):
                raise IncidenceError(f"map dimensions inconsistent at index {i}", i)
        if m < 1:
            raise IncidenceError("spaces must have positive dimension")
        F = common_field(*[x.field for x in self.phi + self.psi])
        self.phi = [x.embed(F) for x in self.phi]
        self.psi = [x.embed(F) for x in self.psi]

    @property
    def f(self):
        return len(self.phi)

    @property
    def m(self):
        return self.phi[0].rows

    @property
    def field(self):
        return self.phi[0].field

    def embed(self, G):
        return CircularDiagram([x.embed(G) for x in self.phi], [x.embed(G) for x in self.psi])

    @classmethod
    def from_matrices(cls, field, maps):
        """maps: list of (phi, sigma, psi, tau)."""
        return cls([SemilinearMap(p, s, field) for p, s, _, _ in maps],
                   [SemilinearMap(q, t, field) for _, _, q, t in maps])

    def Phi(self):
        """phi_f ... phi_2 phi_1 on W_0 (phi_f = phi_0)."""
        f = self.f
        out = self.phi[1 % f]
        for i in range(2, f + 1):
            out = self.phi[i % f].compose(out)
        return out

    def to_json(self):
        return {"f": self.f, "m": self.m,
                "field": {"p": self.field.p, "e": self.field.e, "m": self.field.m},
                "maps": [{"phi": a.A, "sigma": a.k, "psi": b.A, "tau": b.k}
                         for a, b in zip(self.phi, self.psi)]}

    @classmethod
    def from_json(cls, data):
        fd = data.get("field", {"p": 2})
        F = FieldTower(fd.get("p", 2), fd.get("e", 1), fd.get("m", 1))
        return cls.from_matrices(F, [(x["phi"], x.get("sigma", 1), x["psi"], x.get("tau", -1))
                                     for x in data["maps"]])


def validate(diagram: CircularDiagram) -> RankProfile:
    """Check psi_i phi_i = 0 and phi_i psi_i = 0; return the ranks of the phi_i."""
    for i in range(diagram.f):
        a, b = diagram.phi[i], diagram.psi[i]
        if not b.compose(a).is_zero():
            raise IncidenceError(f"psi_{i} o phi_{i} != 0 at i = {i}", i)
        if not a.compose(b).is_zero():
            raise IncidenceError(f"phi_{i} o psi_{i} != 0 at i = {i}", i)
    return RankProfile(tuple(a.rank() for a in diagram.phi))


def in_U_r(diagram: CircularDiagram) -> bool:
    """rank psi_i = m - r_i for all i, rank Phi = r_min and Phi invertible on
    its image."""
    prof = validate(diagram)
    m = diagram.m
    if any(b.rank() != m - r for b, r in zip(diagram.psi, prof.r)):
        return False
    Phi = diagram.Phi()
    rk = Phi.rank()
    if rk != prof.r_min:
        return False
    return Phi.compose(Phi).rank() == rk


def canonical_witness(field, r, m=None, sigmas=None, taus=None) -> CircularDiagram:
    """phi_i = E_{r_i} sigma^{s_i}, psi_i = F_{r_i} sigma^{t_i}, where E_s is
    diag(1^s 0^(m-s)) and F_s is diag(0^s 1^(m-s))."""
    f = len(r)
    m = m if m is not None else max(max(r), 1)
    sigmas = sigmas if sigmas is not None else [1] * f
    taus = taus if taus is not None else [-1] * f
    phi, psi = [], []
    for i in range(f):
        E = [[1 if (a == b and a < r[i]) else 0 for b in range(m)] for a in range(m)]
        Fm = [[1 if (a == b and a >= r[i]) else 0 for b in range(m)] for a in range(m)]
        phi.append(SemilinearMap(E, sigmas[i], field))
        psi.append(SemilinearMap(Fm, taus[i], field))
    return CircularDiagram(phi, psi)


def check_lines(diagram: CircularDiagram, lines, field=None) -> bool:
    """The incidences phi_i l_{i-1} in l_i and psi_i l_i in l_{i-1}."""
    f = diagram.f
    G = field or diagram.field
    D = diagram.embed(G)
    for i in range(f):
        prev, cur = lines[(i - 1) % f], lines[i]
        if not any(prev) or not any(cur):
            return False
        if not _in_line(G, cur, D.phi[i](prev)):
            return False
        if not _in_line(G, prev, D.psi[i](cur)):
            return False
    return True


# --- solver --------------------------------------------------------------------------

class _Reduced:
    """Spaces labelled by original indices with the edges between neighbours:
    edge p joins spaces[p-1] -> spaces[p] via (phi[p], psi[p])."""

    def __init__(self, spaces, phi, psi):
        self.spaces, self.phi, self.psi = spaces, phi, psi

    def embed(self, G):
        return _Reduced(self.spaces, [x.embed(G) for x in self.phi],
                        [x.embed(G) for x in self.psi])


def solve_lines(diagram: CircularDiagram, cfg: SearchConfig = DEFAULT) -> LineTuple:
    """Lines l_i in W_i with phi_i l_{i-1} in l_i and psi_i l_i in l_{i-1}."""
    validate(diagram)
    log = []
    red = _Reduced(list(range(diagram.f)), list(diagram.phi), list(diagram.psi))
    lines, G = _solve(red, cfg, log)
    out = [lines[i] for i in range(diagram.f)]
    if not check_lines(diagram, out, G):
        raise AssertionError("solver output violates the incidences")
    return LineTuple(out, G, log)


def _solve(red: _Reduced, cfg, log):
    # order: psi reduction, Phi eigenline, mirror reduction, then the single
    # space algorithm or the search
    f = len(red.spaces)
    if f > 1:
        for j in range(f):
            if red.psi[j].is_bijective():
                return _reduce_psi(red, j, cfg, log)
    got = _phi_eigenline(red, cfg, log)
    if got is not None:
        return got
    if f == 1:
        line, G, case = stable_line_pair(red.phi[0], red.psi[0], cfg)
        log.append({"step": "single space", "case": case, "field_degree": G.m})
        return {red.spaces[0]: line}, G
    for j in range(f):
        if red.phi[j].is_bijective():
            return _reduce_phi(red, j, cfg, log)
    return _dfs(red, cfg, log)


def _reduce_psi(red, j, cfg, log):
    """psi_j bijective: l_{j-1} = psi_j l_j; drop the space before j."""
    f = len(red.spaces)
    pj = (j - 1) % f
    phi_new = red.psi[j].inverse().compose(red.phi[pj])
    psi_new = red.psi[pj].compose(red.psi[j])
    spaces = [s for p, s in enumerate(red.spaces) if p != pj]
    phi, psi = [], []
    for p in range(f):
        if p == pj:
            continue
        if p == j:
            phi.append(phi_new)
            psi.append(psi_new)
        else:
            phi.append(red.phi[p])
            psi.append(red.psi[p])
    log.append({"step": "psi reduction", "index": red.spaces[j]})
    lines, G = _solve(_Reduced(spaces, phi, psi), cfg, log)
    lines[red.spaces[pj]] = _canon(G, red.psi[j].embed(G)(lines[red.spaces[j]]))
    return lines, G


def _reduce_phi(red, j, cfg, log):
    """phi_j bijective (mirror reduction): l_j = phi_j l_{j-1}; drop space j."""
    f = len(red.spaces)
    nj = (j + 1) % f
    phi_new = red.phi[nj].compose(red.phi[j])
    psi_new = red.phi[j].inverse().compose(red.psi[nj])
    spaces = [s for p, s in enumerate(red.spaces) if p != j]
    phi, psi = [], []
    for p in range(f):
        if p == j:
            continue
        if p == nj:
            phi.append(phi_new)
            psi.append(psi_new)
        else:
            phi.append(red.phi[p])
            psi.append(red.psi[p])
    log.append({"step": "mirror reduction", "index": red.spaces[j]})
    prev = red.spaces[(j - 1) % f]
    lines, G = _solve(_Reduced(spaces, phi, psi), cfg, log)
    lines[red.spaces[j]] = _canon(G, red.phi[j].embed(G)(lines[prev]))
    return lines, G


def _phi_eigenline(red, cfg, log):
    """If Phi is invertible on its nonzero image, propagate an eigenline."""
    f = len(red.spaces)
    Phi = red.phi[1 % f]
    for i in range(2, f + 1):
        Phi = red.phi[i % f].compose(Phi)
    rk = Phi.rank()
    if rk == 0 or Phi.compose(Phi).rank() != rk:
        return None
    F = Phi.field
    basis = Phi.image()                  # rk vectors
    B = ff.transpose(basis)              # m x rk
    img = ff.matmul(F, Phi.A, ff.frob_mat(F, B, Phi.k))
    R_cols = []
    for c in range(rk):
        y = ff.solve(F, B, [img[i][c] for i in range(len(B))])
        R_cols.append(y)
    R = SemilinearMap(ff.transpose(R_cols), Phi.k, F)
    y, G = semilinear_eigenline(R, cfg=cfg)
    l0 = _canon(G, ff.matvec(G, ff.embed_mat(F, B, G), y))
    redG = red.embed(G)
    lines = {red.spaces[0]: l0}
    cur = l0
    for i in range(1, f):
        cur = _canon(G, redG.phi[i](cur))
        lines[red.spaces[i]] = cur
    log.append({"step": "Phi eigenline", "rank": rk, "field_degree": G.m})
    return lines, G


DFS_LIMIT = 200000


def _dfs(red, cfg, log):
    """Exhaustive search over line tuples by propagation, over growing fields."""
    f = len(red.spaces)
    base = red.phi[0].field
    for G in _field_ladder(base, cfg):
        rG = red.embed(G)
        m = rG.phi[0].rows
        if (G.Q ** (m - 1)) ** 2 > DFS_LIMIT and G is not base:
            break
        all_l = ff.all_lines(G, m)
        budget = [DFS_LIMIT]

        def rec(i, chosen):
            budget[0] -= 1
            if budget[0] < 0:
                raise BudgetExhausted("line search exceeded its step limit")
            if i == f:
                l0, last = chosen[0], chosen[-1]
                if _in_line(G, l0, rG.phi[0](last)) and _in_line(G, last, rG.psi[0](l0)):
                    return chosen
                return None
            prev = chosen[-1]
            img = rG.phi[i](prev)
            cands = [_canon(G, img)] if any(img) else all_l
            for c in cands:
                if _in_line(G, prev, rG.psi[i](c)):
                    got = rec(i + 1, chosen + [c])
                    if got is not None:
                        return got
            return None

        for l0 in all_l:
            got = rec(1, [l0])
            if got is not None:
                log.append({"step": "search", "field_degree": G.m})
                return {red.spaces[i]: got[i] for i in range(f)}, G
    raise _budget_error("incident lines", cfg)
