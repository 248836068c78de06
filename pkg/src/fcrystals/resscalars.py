"""Restriction of scalars along an unramified extension of degree f.

N = N_0 + ... + N_{f-1}, each a copy of L^n, and F maps N_{j-1} to N_j by
b_j sigma.  A graded lattice is a list (M~_0, ..., M~_{f-1}); it is turned
into the sequence M_j = F^j M~_{-j} (j = 0..f) of lattices in N_0, with
M_f = F^f M_0, where F^f = b_0 sigma(b_{f-1}) ... sigma^{f-1}(b_1) sigma^f.
The conditions on graded objects are imposed on this sequence:
inv(M_j, M_{j+1}) = mu_j.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

from . import laurentmat as lm
from .arith import FieldTower, common_field, unit_inverse_mod
from .chains import Empty, Quotient
from .config import DEFAULT, BudgetExhausted, SearchConfig
from .coweight import Coweight, CoweightError, as_coweight, omega
from .incidence import CircularDiagram, solve_lines
from .isocrystal import (Isocrystal, IsocrystalError, newton_point,
                         similitude_scale, standard_isocrystal,
                         standard_symplectic_isocrystal)
from .lattice import (ChainError, Lattice, LatticeChain, SymplecticForm,
                      chain_validate, dual, relative_position)
from .mazur import (construct_lattice, construct_lattice_gsp,
                    in_b_g_mu, iter_lattices, selfdual_scalar)


class GradedError(ValueError):
    pass


@dataclass
class GradedIsocrystal:
    """F : N_{j-1} -> N_j is b_j sigma (j in Z/f)."""
    bs: list

    def __post_init__(self):
        if not self.bs:
            raise GradedError("need f >= 1")
        F = common_field(*[lm.field_of(b) for b in self.bs])
        self.bs = [lm.to_field(b, F) for b in self.bs]
        self.field = F
        n = len(self.bs[0])
        for j, b in enumerate(self.bs):
            if len(b) != n:
                raise GradedError("blocks of different size")
            if lm.det(b).is_zero():
                raise GradedError(f"b_{j} is not invertible")

    @property
    def f(self):
        return len(self.bs)

    @property
    def n(self):
        return len(self.bs[0])

    def to_field(self, F):
        return GradedIsocrystal([lm.to_field(b, F) for b in self.bs])

    def transport(self, j: int):
        """T_j with F^j = T_j sigma^j on N_{-j} (values in N_0)."""
        f = self.f
        T = lm.identity(self.field, self.n)
        for s in range(j):
            T = lm.mul(T, lm.frob(self.bs[(-s) % f], s))
        return T

    def norm(self) -> Isocrystal:
        """F^f on N_0 as a sigma^f-linear isocrystal."""
        return Isocrystal(self.transport(self.f), sigma_power=self.f)

    def push(self, M: Lattice, j: int) -> Lattice:
        """F^j M for M in N_{-j}."""
        F = common_field(self.field, M.field)
        T = lm.to_field(self.transport(j), F)
        return Lattice(lm.mul(T, lm.frob(M.to_field(F).basis, j)))

    def pull(self, M: Lattice, j: int) -> Lattice:
        """F^{-j} M, a lattice in N_{-j} (exact up to units)."""
        F = common_field(self.field, M.field)
        Tinv = lm.lattice_inverse(lm.to_field(self.transport(j), F))
        return Lattice(lm.frob(lm.mul(Tinv, M.to_field(F).basis), -j))

    @classmethod
    def from_norm(cls, b, f, others=None):
        """Graded isocrystal with F^f = b' sigma^f where b' = b when b has
        sigma-fixed entries: b_1..b_{f-1} given (default identity) and b_0
        chosen to compensate."""
        F = lm.field_of(b)
        n = len(b)
        others = others or [lm.identity(F, n) for _ in range(f - 1)]
        tail = lm.identity(F, n)
        # T_f = b_0 * prod_{s=1}^{f-1} sigma^s(b_{-s})
        for s in range(1, f):
            tail = lm.mul(tail, lm.frob(others[(f - s) - 1], s))
        b0 = lm.mul(b, lm.inverse_monomial_det(tail))
        return cls([b0] + list(others))


class GradedCoweight(tuple):
    """(mu_0, ..., mu_{f-1}), each dominant of the same length."""

    def __new__(cls, parts):
        parts = [as_coweight(m) for m in parts]
        if not parts:
            raise CoweightError("need at least one part")
        n = len(parts[0])
        for m in parts:
            if len(m) != n or not m.is_dominant():
                raise CoweightError(f"part {m} is not dominant of length {n}")
        return super().__new__(cls, parts)

    @property
    def f(self):
        return len(self)

    def total(self) -> Coweight:
        return _sum_parts(self)


@dataclass
class GradedLattice:
    parts: list                     # M~_j, j in Z/f

    @property
    def f(self):
        return len(self.parts)


def ungrade(GM, X: GradedIsocrystal) -> list:
    """(M_0, ..., M_f) with M_j = F^j M~_{-j}."""
    parts = GM.parts if isinstance(GM, GradedLattice) else list(GM)
    f = X.f
    if len(parts) != f:
        raise GradedError("graded lattice has the wrong number of parts")
    return [X.push(parts[(-j) % f], j) for j in range(f + 1)]


def regrade(Ms, X: GradedIsocrystal) -> GradedLattice:
    """Inverse of ungrade: M~_{-j} = F^{-j} M_j (j = 0..f-1)."""
    f = X.f
    if len(Ms) not in (f, f + 1):
        raise GradedError("need M_0..M_{f-1} (or ..M_f)")
    if len(Ms) == f + 1 and X.push(Ms[0], f) != Ms[f]:
        raise GradedError("M_f != F^f M_0")
    parts = [None] * f
    for j in range(f):
        parts[(-j) % f] = X.pull(Ms[j], j)
    return GradedLattice(parts)


def graded_membership(GM, X: GradedIsocrystal, mus) -> bool:
    """inv(M_j, M_{j+1}) = mu_j for j = 0..f-1 on the ungraded sequence."""
    Ms = ungrade(GM, X)
    return all(tuple(relative_position(Ms[j], Ms[j + 1])) == tuple(as_coweight(mus[j]))
               for j in range(X.f))


# --- interpolation -------------------------------------------------------------------

def _smith_basis(M0: Lattice, Mf: Lattice, N: int):
    """A basis E of M0 (columns) and exponents m_i with
    Mf + t^N M0 = span(t^{m_i} E_i) + t^N M0, computed mod t^N."""
    F = common_field(M0.field, Mf.field)
    M0, Mf = M0.to_field(F), Mf.to_field(F)
    from .lattice import transition_matrix
    g = transition_matrix(M0, Mf)
    n = M0.n
    shift = lm.min_val(g)
    if shift == float("inf"):
        raise GradedError("degenerate lattices")
    shift = int(shift)
    g = [[x.shift(-shift).truncate(N) for x in row] for row in g]
    E = [row[:] for row in M0.basis]       # columns are the basis vectors
    exps = []

    def col_add(i, k, c):
        # E col_k += c * col_i   (inverse of row_i -= c row_k)
        for r in range(n):
            if E[r][i].terms:
                E[r][k] = E[r][k] + E[r][i] * c

    for p in range(n):
        best = None
        for i in range(p, n):
            for j in range(p, n):
                v = g[i][j].val()
                if v != float("inf") and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            raise GradedError("relative position exceeds the working precision")
        v, i, j = best
        # move the pivot to (p, p)
        g[p], g[i] = g[i], g[p]
        for r in range(n):
            E[r][p], E[r][i] = E[r][i], E[r][p]
        for row in g:
            row[p], row[j] = row[j], row[p]
        piv = g[p][p]
        unit = piv.shift(-v)
        uinv = unit_inverse_mod(unit, N)
        # row_p *= uinv  <->  E col_p *= unit
        g[p] = [(x * uinv).truncate(N) for x in g[p]]
        for r in range(n):
            E[r][p] = E[r][p] * unit
        for i2 in range(p + 1, n):
            c = g[i2][p].shift(-v).truncate(N) if g[i2][p].terms else None
            if c is None:
                continue
            g[i2] = [(a - c * b).truncate(N) for a, b in zip(g[i2], g[p])]
            col_add(i2, p, c)
        for j2 in range(p + 1, n):
            if g[p][j2].terms:
                c = g[p][j2].shift(-v)
                for r in range(n):
                    g[r][j2] = (g[r][j2] - g[r][p] * c).truncate(N)
        exps.append(v + shift)
    return E, exps


def interpolate_chain(M0: Lattice, Mf: Lattice, mu_parts) -> list:
    """Lattices M_0, M_1, ..., M_f with inv(M_j, M_{j+1}) = mu_j, given
    inv(M_0, M_f) = sum of the mu_j (coordinatewise on dominant vectors)."""
    parts = [as_coweight(m) for m in mu_parts]
    if not parts:
        raise GradedError("need at least one part")
    n = M0.n
    for m in parts:
        if len(m) != n or not m.is_integral or not m.is_dominant():
            raise CoweightError(f"part {m} is not dominant integral of length {n}")
    total = Coweight([sum(m[i] for m in parts) for i in range(n)])
    have = relative_position(M0, Mf)
    if tuple(have) != tuple(total):
        raise GradedError(f"inv(M_0, M_f) = {have} but the parts sum to {total}")
    f = len(parts)
    if f == 1:
        return [M0, Mf]
    N = int(max(total)) - int(min(total)) + 2
    E, exps = _smith_basis(M0, Mf, N)
    order = sorted(range(n), key=lambda i: -exps[i])
    if sorted(exps, reverse=True) != [int(x) for x in total]:
        raise AssertionError("adapted basis does not reproduce the relative position")
    F = E[0][0].field if E and E[0] else M0.field
    cols = [[E[r][i] for r in range(n)] for i in order]
    out = [M0]
    acc = [0] * n
    for j in range(f - 1):
        for i in range(n):
            acc[i] += int(parts[j][i])
        gens = [[x.shift(acc[i]) for x in cols[i]] for i in range(n)]
        Mj = Lattice.from_generators(gens, n, F)
        out.append(Mj)
    out.append(Mf.to_field(F))
    for j in range(f):
        got = relative_position(out[j], out[j + 1])
        if tuple(got) != tuple(parts[j]):
            raise AssertionError(f"step {j}: inv = {got}, expected {parts[j]}")
    return out


# --- witnesses -------------------------------------------------------------------------

def _sum_parts(mus):
    mus = [as_coweight(m) for m in mus]
    n = len(mus[0])
    return Coweight([sum(m[i] for m in mus) for i in range(n)])


def _start_lattice(Y: Isocrystal, nu, mu, group, form, cfg, log):
    """M with inv(M, Y M) = mu (selfdual up to scalar for GSp)."""
    from .mazur import hodge
    F = Y.field
    try:
        if group == "GSp":
            S = standard_symplectic_isocrystal(nu, F)
            std = lm.equal(S.iso.b, Y.b)
        else:
            std = lm.equal(standard_isocrystal(nu, F).b, Y.b)
    except CoweightError:
        std = False
    if std:
        if group == "GSp":
            M = construct_lattice_gsp(nu, mu, form, cfg, field=F)
        else:
            M = construct_lattice(nu, mu, cfg, field=F)
        if tuple(hodge(M, Y.to_field(M.field))) == tuple(mu) and \
                (group != "GSp" or selfdual_scalar(M, form) is not None):
            log.append({"step": "standard witness", "field_degree": M.field.m})
            return M
    clock = cfg.clock()
    for M in iter_lattices(F, Y.n, cfg.a):
        clock.check("witness_graded")
        if tuple(hodge(M, Y)) == tuple(mu) and \
                (group != "GSp" or selfdual_scalar(M, form) is not None):
            log.append({"step": "window search"})
            return M
    raise BudgetExhausted(f"no start lattice with inv = {mu} in window a = {cfg.a}")


def witness_graded(mus, X: GradedIsocrystal, group: str = "GL",
                   form: Optional[SymplecticForm] = None, cfg: SearchConfig = DEFAULT,
                   transcript=None):
    """A graded lattice with inv(M_j, M_{j+1}) = mu_j, or Empty."""
    log = transcript if transcript is not None else []
    group = "GSp" if group.upper() == "GSP" else "GL"
    mus = [as_coweight(m) for m in mus]
    if len(mus) != X.f:
        raise GradedError("need one coweight per graded piece")
    mu = _sum_parts(mus)
    Y = X.norm()
    if group == "GSp":
        form = form or SymplecticForm.standard(X.n)
        for j in range(X.f):
            # each b_j must be a similitude
            similitude_scale(Isocrystal(X.bs[j]), form)
    verdict = in_b_g_mu(Y, mu, group, form, cfg)
    if verdict is None:
        raise IsocrystalError("Newton point of the norm is not certified")
    if not verdict:
        npt = newton_point(Y, cfg)
        return Empty(f"not in B(G, mu): nu = {npt.nu}, sum of parts = {mu}")
    nu = newton_point(Y, cfg).nu
    M0 = _start_lattice(Y, nu, mu, group, form, cfg, log)
    Mf = X.push(M0, X.f)
    Ms = interpolate_chain(M0, Mf, mus)
    log.append({"step": "interpolate", "steps": [list(map(str, m)) for m in mus]})
    if group == "GSp":
        for j, M in enumerate(Ms):
            if selfdual_scalar(M, form) is None:
                raise AssertionError(f"M_{j} is not selfdual up to a scalar")
    GM = regrade(Ms, X)
    if not graded_membership(GM, X, mus):
        raise AssertionError("graded witness fails the membership check")
    log.append({"step": "verified", "field_degree": M0.field.m})
    return GM


# --- graded chains -------------------------------------------------------------------

@dataclass
class GradedChain:
    """chains[j] is a periodic chain in N_j (all of the same type)."""
    chains: list

    @property
    def f(self):
        return len(self.chains)

    @property
    def type(self):
        return self.chains[0].type

    @property
    def period(self):
        return self.chains[0].period


def ungrade_chain(GC: GradedChain, X: GradedIsocrystal):
    """{i: [M_0^i, ..., M_f^i]} with M_j^i = F^j M~_{-j}^i."""
    f = X.f
    return {i: [X.push(GC.chains[(-j) % f].lattices[i], j) for j in range(f + 1)]
            for i in GC.type}


def graded_chain_membership(GC: GradedChain, X: GradedIsocrystal, rs,
                            form: Optional[SymplecticForm] = None) -> bool:
    """M_j^i > M_{j+1}^i > t M_j^i with colength r_j, for all i and j."""
    for ch in GC.chains:
        rep = chain_validate(ch, form)
        if not rep.ok:
            raise ChainError(f"invalid chain: {rep.message}", rep.failure)
    U = ungrade_chain(GC, X)
    n = GC.chains[0].n
    for i, Ms in U.items():
        for j in range(X.f):
            if tuple(relative_position(Ms[j], Ms[j + 1])) != tuple(omega(rs[j], n)):
                return False
    return True


def seam_diagram(Ms, Mps, Y: Isocrystal):
    """Circular diagram on W_j = M_j / M'_j (j = 0..f-1): multiplication by t
    W_j -> W_{j+1}, inclusion W_{j+1} -> W_j, and at the seam
    t F^{-f} : W_{f-1} -> W_0, F^f : W_0 -> W_{f-1} (F^f = Y)."""
    f = len(Ms) - 1
    F = common_field(Y.field, *[M.field for M in Ms + Mps])
    Y = Y.to_field(F)
    Ms = [M.to_field(F) for M in Ms]
    Mps = [M.to_field(F) for M in Mps]
    Qs = [Quotient(Ms[j], Mps[j]) for j in range(f)]
    k = Y.sigma_power
    phi = [None] * f
    psi = [None] * f
    for j in range(f - 1):
        A = Qs[j].big.basis
        phi[j + 1] = Qs[j + 1].induced(Qs[j], lm.shift(A, 1), 0)
        psi[j + 1] = Qs[j].induced(Qs[j + 1], Qs[j + 1].big.basis, 0)
    A0 = Qs[0].big.basis
    Alast = Qs[f - 1].big.basis
    psi[0] = Qs[f - 1].induced(Qs[0], lm.mul(Y.b, lm.frob(A0, k)), k)
    Z = lm.frob(lm.shift(lm.mul(lm.adjugate(Y.b), Alast), 1), -k)
    phi[0] = Qs[0].induced(Qs[f - 1], Z, -k, denom=Y.det.frob(-k))
    return CircularDiagram(phi, psi), Qs


def refine_graded(Ms, Mps, Y: Isocrystal, rs, cfg: SearchConfig = DEFAULT, transcript=None):
    """Given M_j > M'_j > t M_j (j = 0..f) with M_f = F^f M_0, M'_f = F^f M'_0,
    both satisfying M_j > M_{j+1} > t M_j with colength r_j, find L_j with
    M'_j < L_j < M_j of colength one, L_f = F^f L_0 and L_j > L_{j+1} > t L_j
    of colength r_j."""
    log = transcript if transcript is not None else []
    f = len(Ms) - 1
    D, Qs = seam_diagram(Ms, Mps, Y)
    sol = solve_lines(D, cfg)
    G = sol.field
    log.append({"step": "incident lines", "lines": sol.lines, "field_degree": G.m,
                "path": [s["step"] for s in sol.transcript]})
    Ls = [Qs[j].to_field(G).preimage(sol.lines[j]) for j in range(f)]
    YG = Y.to_field(common_field(Y.field, G))
    from .isocrystal import twist_apply
    Ls.append(twist_apply(YG, Ls[0], 1))
    n = Ls[0].n
    for j in range(f):
        small, big = Mps[j].to_field(G), Ms[j].to_field(G)
        if not (big.contains(Ls[j]) and Ls[j].contains(small) and small.colength_in(Ls[j]) == 1):
            raise AssertionError(f"L_{j} is not a colength-one refinement")
        if tuple(relative_position(Ls[j], Ls[j + 1])) != tuple(omega(rs[j], n)):
            raise AssertionError(f"L_{j} > L_{j+1} fails the colength condition")
    return Ls


def graded_chain_extend(GC: GradedChain, X: GradedIsocrystal, rs, I_target,
                        form: Optional[SymplecticForm] = None,
                        cfg: SearchConfig = DEFAULT, transcript=None) -> GradedChain:
    """Enlarge the type of a graded chain one index (GSp: one symmetric pair)
    at a time through incident lines on the residue spaces."""
    log = transcript if transcript is not None else []
    f = X.f
    period = GC.period
    target = sorted({int(i) % period for i in I_target})
    if not set(GC.type) <= set(target):
        raise ChainError("target type does not contain the chain type")
    if not graded_chain_membership(GC, X, rs, form):
        raise ChainError("input graded chain fails membership")
    Y = X.norm()
    defects = None
    if form is not None:
        defects = [chain_validate(ch, form, raise_on_failure=True).defect for ch in GC.chains]
    per_j = [dict(ch.lattices) for ch in GC.chains]
    while not set(target) <= set(per_j[0]):
        have = sorted(per_j[0])
        k = None
        for i in have:
            if (i + 1) % period not in per_j[0]:
                if form is not None or any((j - i) % period and (j % period) in target
                                           and (j % period) not in per_j[0]
                                           for j in range(i + 1, i + period)):
                    k = i
                    break
        l = min((j for j in have if j > k), default=have[0] + period)
        chainsU = {}
        for idx in (k, l):
            q, r = divmod(idx, period)
            chainsU[idx] = [X.push(per_j[(-j) % f][r].shift(-q), j) for j in range(f + 1)]
        Ls = refine_graded(chainsU[l], chainsU[k], Y, rs, cfg, log)
        p = k + 1
        q, rr = divmod(p, period)
        G = Ls[0].field
        new = [None] * f
        for j in range(f):
            new[(-j) % f] = X.pull(Ls[j], j)
        for j in range(f):
            per_j[j][rr] = new[j].shift(q)
        if form is not None:
            qn = -p
            q2, r2 = divmod(qn, period)
            for j in range(f):
                Yj = dual(new[j], form).shift(defects[j])
                per_j[j][r2] = Yj.shift(q2)
        Fc = common_field(*[M.field for d in per_j for M in d.values()])
        per_j = [{i: M.to_field(Fc) for i, M in d.items()} for d in per_j]
        log[-1]["index"] = rr
    chains = [LatticeChain(tuple(target), {i: d[i] for i in target},
                           defects[j] if defects else None) for j, d in enumerate(per_j)]
    out = GradedChain(chains)
    if not graded_chain_membership(out, X, rs, form):
        raise AssertionError("extended graded chain fails membership")
    return out
