"""Lattice chains in X(omega_r, F): membership, residue spaces, stable lines
and chain completion.

A chain of type I belongs to X(omega_r, F)_I when every member satisfies
t M < F M < M with length(M / F M) = r.  Missing indices are filled one at a
time: between consecutive members M' < M of a chain the quotient W = M / M'
carries the induced maps Fbar (sigma-linear) and Vbar (sigma^{-1}-linear,
V = t F^{-1}) with Fbar Vbar = Vbar Fbar = 0, and the preimage of a line
stable under both is the new member.  For GSp the dual index is filled with
t^d M^perp at the same time.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Optional

from . import fflinalg as ff
from . import laurentmat as lm
from .arith import FieldTower, LaurentPoly, common_field
from .config import DEFAULT, BudgetExhausted, SearchConfig
from .coweight import (Coweight, CoweightError, as_coweight, is_minuscule_weight_r,
                       omega)
from .incidence import SemilinearMap, stable_line_pair
from .isocrystal import (Isocrystal, IsocrystalError, block_offsets, newton_point,
                         similitude_scale, standard_isocrystal,
                         standard_symplectic_isocrystal, twist_apply)
from .lattice import (ChainError, Lattice, LatticeChain, SymplecticForm,
                      _inverse_hermite, chain_validate, dual, relative_position)
from .mazur import iter_lattices, selfdual_lattice, staircase_exponents, selfdual_scalar


@dataclass
class Empty:
    """No chain exists; ``reason`` says why."""
    reason: str

    def __bool__(self):
        return False


# --- membership ----------------------------------------------------------------

def _common(X: Isocrystal, *lats):
    F = common_field(X.field, *[M.field for M in lats])
    return X.to_field(F) if X.field is not F else X, [M.to_field(F) for M in lats]


def member_ok(M: Lattice, X: Isocrystal, r: int) -> bool:
    """t M < F M < M with length(M / F M) = r."""
    X, (M,) = _common(X, M)
    FM = twist_apply(X, M, 1)
    return tuple(relative_position(M, FM)) == tuple(omega(r, M.n))


def chain_membership(chain: LatticeChain, X: Isocrystal, r: int,
                     form: Optional[SymplecticForm] = None) -> bool:
    """Every member satisfies t M_i < F M_i < M_i with colength r (and, with a
    form, the chain is selfdual and X a similitude)."""
    rep = chain_validate(chain, form)
    if not rep.ok:
        raise ChainError(f"invalid chain: {rep.message}", rep.failure)
    if form is not None:
        similitude_scale(X, form)
    return all(member_ok(chain.lattices[i], X, r) for i in chain.type)


# --- residue spaces --------------------------------------------------------------

@dataclass
class ResidueSpace:
    """W = M / M' with t M < M' < M, as k^dim with explicit operators.

    ``comp`` lists the standard basis vectors of M / t M (coordinates in the
    canonical basis of M) spanning a complement of M' / t M; W has them as
    basis.  Fbar has sigma-power +k and Vbar sigma-power -k, where k is the
    sigma-power of the isocrystal.
    """
    big: Lattice
    small: Lattice
    field: FieldTower
    dim: int
    comp: list
    Fbar: SemilinearMap
    Vbar: SemilinearMap

    def lift(self, w):
        """Vector of L^n lifting w in W."""
        F = self.field
        n = self.big.n
        c = [0] * n
        for j, idx in enumerate(self.comp):
            c[idx] = w[j]
        A = self.big.to_field(F).basis
        coeffs = [LaurentPoly.const(F, x) for x in c]
        return lm.mul_vec(A, coeffs)

    def preimage(self, w) -> Lattice:
        """M' + O lift(w)."""
        F = self.field
        small = self.small.to_field(F)
        return Lattice.from_generators(small.columns() + [self.lift(w)], small.n, F)


def _mod_t(mat):
    """Constant terms of a matrix over O (entries must have val >= 0)."""
    out = []
    for row in mat:
        r = []
        for x in row:
            if x.terms and x.val() < 0:
                raise ChainError("matrix is not integral; lattice not stable")
            r.append(x.coeff(0))
        out.append(r)
    return out


class Quotient:
    """M / M' (t M < M' < M) with a basis of standard vectors of M / t M.

    ``comp`` are the indices (in the canonical basis of M) of the basis
    vectors, ``P`` projects coordinates mod t onto them.
    """

    def __init__(self, big: Lattice, small: Lattice):
        F = common_field(big.field, small.field)
        big, small = big.to_field(F), small.to_field(F)
        if not big.contains(small) or not small.contains(big.shift(1)):
            raise ChainError("need t M < M' < M")
        n = big.n
        self.big, self.small, self.field, self.n = big, small, F, n
        self.Ainv = _inverse_hermite(big)
        C = _mod_t(lm.mul(self.Ainv, small.basis))
        S = ff.column_space(F, ff.transpose(C), n)
        comp = []
        span = [list(v) for v in S]
        for i in range(n):
            e_i = [1 if j == i else 0 for j in range(n)]
            if not ff.in_span(F, span, e_i):
                comp.append(i)
                span.append(e_i)
        self.comp = comp
        self.dim = len(comp)
        if self.dim != small.colength_in(big):
            raise ChainError("residue dimension does not match the colength")
        Bfull = ff.transpose([list(v) for v in S] + [[1 if j == i else 0 for j in range(n)]
                                                      for i in comp])
        self.P = ff.inverse(F, Bfull)[n - self.dim:]
        self.Cm = [[1 if comp[j] == i else 0 for j in range(self.dim)] for i in range(n)]

    def to_field(self, F):
        if F is self.field:
            return self
        return Quotient(self.big.to_field(F), self.small.to_field(F))

    def induced(self, source: "Quotient", Z, k: int, denom=None) -> SemilinearMap:
        """Map source -> self induced by x -> Z' sigma^k(x) where Z is the
        image of the basis of source.big already twisted, i.e. the map sends
        A_s c to Z sigma^k(c).  With ``denom`` (a LaurentPoly) the map is
        Z / denom; Z / denom must be integral over self.big."""
        F = self.field
        coords = lm.mul(self.Ainv, Z)
        if denom is None:
            mat = _mod_t(coords)
        else:
            e = denom.val()
            if lm.min_val(coords) < e:
                raise ChainError("induced map is not integral")
            u0inv = F.inv(denom.coeff(e))
            mat = [[F.mul(x.coeff(e), u0inv) for x in row] for row in coords]
        return SemilinearMap(ff.matmul(F, self.P, ff.matmul(F, mat, source.Cm)), k, F)

    def lift(self, w):
        F = self.field
        c = [0] * self.n
        for j, idx in enumerate(self.comp):
            c[idx] = w[j]
        return lm.mul_vec(self.big.basis, [LaurentPoly.const(F, x) for x in c])

    def preimage(self, w) -> Lattice:
        """M' + O lift(w)."""
        return Lattice.from_generators(self.small.columns() + [self.lift(w)],
                                       self.n, self.field)


def residue_space(X: Isocrystal, big: Lattice, small: Lattice) -> ResidueSpace:
    """Residue space W = big / small with its induced Fbar and Vbar."""
    X, (big, small) = _common(X, big, small)
    k = X.sigma_power
    Q = Quotient(big, small)
    A = Q.big.basis
    Fbar = Q.induced(Q, lm.mul(X.b, lm.frob(A, k)), k)
    # V = t F^{-1} = sigma^{-k}(t adj(b) / det b)
    Z = lm.frob(lm.shift(lm.mul(lm.adjugate(X.b), A), 1), -k)
    Vbar = Q.induced(Q, Z, -k, denom=X.det.frob(-k))
    return ResidueSpace(Q.big, Q.small, Q.field, Q.dim, Q.comp, Fbar, Vbar)


def check_operators(W: ResidueSpace) -> bool:
    """Fbar Vbar = Vbar Fbar = 0."""
    return W.Fbar.compose(W.Vbar).is_zero() and W.Vbar.compose(W.Fbar).is_zero()


def stable_line(W: ResidueSpace, cfg: SearchConfig = DEFAULT):
    """A line of W stable under Fbar and Vbar; returns (line, field)."""
    if W.dim < 1:
        raise ChainError("residue space is zero")
    line, G, _ = stable_line_pair(W.Fbar, W.Vbar, cfg)
    return line, G


def line_is_stable(W: ResidueSpace, line, G=None) -> bool:
    G = G or W.field
    Fb, Vb = W.Fbar.embed(G), W.Vbar.embed(G)
    return ff.parallel(G, line, Fb(line)) and ff.parallel(G, line, Vb(line))


def _embed_residue(W: ResidueSpace, G: FieldTower) -> ResidueSpace:
    if G is W.field:
        return W
    return ResidueSpace(W.big, W.small, G, W.dim, W.comp, W.Fbar.embed(G), W.Vbar.embed(G))


def refine_step(X: Isocrystal, big: Lattice, small: Lattice, cfg: SearchConfig = DEFAULT):
    """One stable-line step: a lattice small < M < big with length(M/small) = 1.

    Returns (M, record) where record has the line, the field degree and the
    operators' check results.
    """
    W = residue_space(X, big, small)
    if not check_operators(W):
        raise ChainError("Fbar Vbar or Vbar Fbar is nonzero: a member is not F- and V-stable")
    line, G = stable_line(W, cfg)
    WG = _embed_residue(W, G)
    if not line_is_stable(WG, line, G):
        raise AssertionError("line is not stable under Fbar and Vbar")
    M = WG.preimage(line)
    return M, {"line": list(line), "field_degree": G.m, "dim": W.dim, "stable": True}


# --- chain extension --------------------------------------------------------------

def _chain_field(chain: LatticeChain):
    return common_field(*[M.field for M in chain.lattices.values()])


def _to_field_chain(chain, F):
    return chain.map(lambda M: M.to_field(F))


def _gaps(indices, period):
    """Consecutive pairs (k, l) of the periodic index set, l in (k, k + period]."""
    idx = sorted(indices)
    return [(a, b) for a, b in zip(idx, idx[1:] + [idx[0] + period])]


def extend_chain(chain_J: LatticeChain, X: Isocrystal, r: int, I_target,
                 form: Optional[SymplecticForm] = None, cfg: SearchConfig = DEFAULT,
                 transcript=None) -> LatticeChain:
    """Extend a chain of type J in X(omega_r, F) to type I_target (J in I).

    Without a form, indices are added one at a time by stable-line steps;
    indices outside I_target needed on the way are dropped at the end.  With
    a form the symmetric pair {k+1, -(k+1)} is added per step, the second
    member being t^d M^perp.
    """
    period = chain_J.period
    I_target = tuple(sorted({int(i) % period for i in I_target}))
    J = set(chain_J.type)
    if not J <= set(I_target):
        raise ChainError("target type does not contain the chain type")
    log = transcript if transcript is not None else []
    if not chain_membership(chain_J, X, r, form):
        raise ChainError("input chain is not in X(omega_r, F)")
    if J == set(I_target):
        return chain_J
    if form is None:
        out = _extend_gl(chain_J, X, r, I_target, cfg, log)
    else:
        out = _extend_gsp(chain_J, X, r, I_target, form, cfg, log)
    # postconditions
    if out.restrict(chain_J.type) != _to_field_chain(chain_J, _chain_field(out)):
        raise AssertionError("extension does not restrict to the input chain")
    if not chain_membership(out, X, r, form):
        raise AssertionError("extended chain fails membership")
    return out


def _extend_gl(chain_J, X, r, I_target, cfg, log):
    period = chain_J.period
    lats = dict(chain_J.lattices)
    need = set(I_target) - set(lats)
    for k, l in _gaps(list(lats), period):
        wanted = [j for j in range(k + 1, l) if j % period in need]
        if not wanted:
            continue
        last = max(wanted)
        cur_i, cur = k, _member(lats, period, k)
        big = _member(lats, period, l)
        while cur_i < last:
            X2, (big2, cur2) = _common(X, big, cur)
            M, rec = refine_step(X2, big2, cur2, cfg)
            cur_i += 1
            cur = M
            rec["index"] = cur_i % period
            log.append(rec)
            if cur_i % period in need:
                lats[cur_i % period] = _rep(M, cur_i, period)
    F = common_field(*[M.field for M in lats.values()])
    lats = {i: M.to_field(F) for i, M in lats.items()}
    return LatticeChain(I_target, {i: lats[i] for i in I_target}, chain_J.defect)


def _member(lats, period, i):
    q, rr = divmod(i, period)
    return lats[rr].shift(-q)


def _rep(M, i, period):
    """Representative stored at i mod period for the member M at index i."""
    q = i // period
    return M.shift(q)


def _extend_gsp(chain_J, X, r, I_target, form, cfg, log):
    period = chain_J.period
    rep = chain_validate(chain_J, form, raise_on_failure=True)
    d = rep.defect
    target = set(I_target)
    if any((-i) % period not in target for i in target):
        raise ChainError("GSp target type must be symmetric")
    lats = dict(chain_J.lattices)
    while set(lats) != set(range(period)):
        # next index to add: smallest k in the chain with k+1 missing
        k = min(i for i in lats if (i + 1) % period not in lats)
        l = min((j for j in lats if j > k), default=min(lats) + period)
        small = _member(lats, period, k)
        big = _member(lats, period, l)
        X2, (big2, small2) = _common(X, big, small)
        M, rec = refine_step(X2, big2, small2, cfg)
        p = k + 1
        q = -p
        # Y_{-p} = t^d M^perp
        Y = dual(M, form).shift(d)
        rec["index"] = p % period
        rec["dual_index"] = q % period
        log.append(rec)
        if (p - q) % period == 0:
            # p and -p coincide mod the period: M must be selfdual there
            if _rep(Y, q, period) != _rep(M, p, period):
                raise AssertionError("isotropy failure: M differs from t^d M^perp")
        lats[p % period] = _rep(M, p, period)
        lats[q % period] = _rep(Y, q, period)
        F = common_field(*[L.field for L in lats.values()])
        lats = {i: L.to_field(F) for i, L in lats.items()}
        step_chain = LatticeChain(tuple(lats), dict(lats), d)
        rep2 = chain_validate(step_chain, form)
        if not rep2.ok:
            raise AssertionError(f"selfdual refinement failed: {rep2.message}")
    full = LatticeChain(tuple(range(period)), lats, d)
    return full.restrict(I_target)


# --- witnesses -----------------------------------------------------------------------

def _is_standard(X: Isocrystal, nu) -> bool:
    try:
        S = standard_isocrystal(nu, X.field)
    except CoweightError:
        return False
    return X.sigma_power == 1 and lm.equal(S.b, X.b)


def weight_r_lattice(nu, r, F):
    """Lattice M in the standard isocrystal of nu with inv(M, FM) = omega_r:
    per isoclinic block of size m and slope s/m the exponents of
    (1^s, 0^(m-s))."""
    exps = []
    for off, m, slope in block_offsets(nu):
        s = int(slope * m)
        exps.extend(staircase_exponents([1] * s + [0] * (m - s)))
    return Lattice.diagonal(F, exps)


def _search_member(X, r, cfg, form=None):
    """Least lattice in the window with inv(M, FM) = omega_r (selfdual up to a
    scalar when a form is given)."""
    clock = cfg.clock()
    for M in iter_lattices(X.field, X.n, cfg.a):
        clock.check("build_chain")
        if member_ok(M, X, r) and (form is None or selfdual_scalar(M, form) is not None):
            return M
    raise BudgetExhausted(f"no lattice with inv(M, FM) = omega_{r} in window a = {cfg.a}")


def build_chain(X: Isocrystal, r: int, I, form: Optional[SymplecticForm] = None,
                cfg: SearchConfig = DEFAULT, transcript=None):
    """A chain of type I in X(omega_r, F), or Empty when the Newton point is
    not minuscule of weight r."""
    log = transcript if transcript is not None else []
    npt = newton_point(X, cfg)
    if not npt.certified:
        raise IsocrystalError("Newton point not certified; cannot decide")
    nu = npt.nu
    n = X.n
    if not 0 <= r <= n:
        raise CoweightError("need 0 <= r <= n")
    if not is_minuscule_weight_r(nu, r):
        return Empty(f"Mazur violation: nu = {nu} is not <= omega_{r} (entries in [0, 1], sum {r})")
    period = n
    I = tuple(sorted({int(i) % period for i in I}))
    if not I:
        raise ChainError("chain type must be nonempty")
    if form is None:
        if _is_standard(X, nu):
            M0 = weight_r_lattice(nu, r, X.field)
            log.append({"step": "block lattice", "index": 0})
        else:
            M0 = _search_member(X, r, cfg)
            log.append({"step": "window search", "index": 0})
        if not member_ok(M0, X, r):
            raise AssertionError("start lattice fails membership")
        full = extend_chain(LatticeChain.single(M0, 0), X, r, range(n), None, cfg, log)
        return full.restrict(I)
    # GSp
    if any((-i) % period not in I for i in I):
        raise ChainError("GSp chain type must be symmetric")
    c, d = similitude_scale(X, form)
    if r * 2 != n * d:
        return Empty(f"weight {r} does not match similitude degree {d}")
    if r not in (0, n // 2, n):
        return Empty(f"weight {r} is not 0, n or 2n")
    M0 = _gsp_start(X, nu, r, form, cfg, log)
    full = extend_chain(LatticeChain.single(M0, 0), X, r, range(n), form, cfg, log)
    return full.restrict(I)


def _gsp_start(X, nu, r, form, cfg, log):
    n2 = X.n
    if form.gram == SymplecticForm.standard(n2).gram:
        try:
            S = standard_symplectic_isocrystal(nu, X.field)
            std = lm.equal(S.iso.b, X.b) and X.sigma_power == 1
        except CoweightError:
            std = False
        if std:
            if r == n2 // 2:
                M = selfdual_lattice(S, nu)
                log.append({"step": "selfdual block lattice", "index": 0})
            else:
                M = Lattice.standard(X.field, n2)
                log.append({"step": "standard lattice", "index": 0})
            if member_ok(M, X, r) and selfdual_scalar(M, form) is not None:
                return M
    M = _search_member(X, r, cfg, form)
    log.append({"step": "window search", "index": 0})
    return M

