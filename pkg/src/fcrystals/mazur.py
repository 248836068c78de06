"""Mazur's inequality, the B(G, mu) predicate and witness lattices.

``construct_lattice(nu, mu)`` returns a lattice M in the standard isocrystal
of nu with relative_position(M, F M) = mu.  When the Hodge polygon of mu runs
through the break points of nu the lattice is written down block by block;
otherwise a search over u t^lambda Lambda_0 (u sparse unipotent) and then
over canonical forms in a growing window is run.  Every returned witness is
checked before it is returned.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations, product
from typing import Optional

from . import laurentmat as lm
from .arith import FieldTower, LaurentPoly
from .config import DEFAULT, BudgetExhausted, SearchConfig
from .coweight import (Coweight, CoweightError, GSpCoweight, as_coweight,
                       check_newton_vector, decomposable_wrt, dominance_leq,
                       dominant_integral_vectors, integral_points_of_hull,
                       kappa_levi, levi_minuscule_lift, newton_partition,
                       split_at_blocks)
from .isocrystal import (Isocrystal, NewtonPoint, block_offsets, newton_point,
                         similitude_scale, standard_isocrystal,
                         standard_symplectic_isocrystal, twist_apply)
from .lattice import Lattice, SymplecticForm, dual, relative_position


class MazurViolation(ValueError):
    pass


@dataclass
class MazurReport:
    nu: NewtonPoint
    hodge: Coweight
    verdict: Optional[bool]
    kappa: bool

    def __bool__(self):
        return bool(self.verdict)


def hodge(M: Lattice, X: Isocrystal) -> Coweight:
    """mu(M) = relative_position(M, F M)."""
    return relative_position(M, twist_apply(X, M, 1))


def mazur_check(M: Lattice, X: Isocrystal, cfg: SearchConfig = DEFAULT) -> MazurReport:
    """Hodge vector of M and the dominance verdict nu <= mu(M)."""
    npt = newton_point(X, cfg)
    mu = hodge(M, X)
    kappa = npt.nu.total == mu.total
    verdict = dominance_leq(npt.nu, mu)
    if not npt.certified and not verdict:
        verdict = None
    return MazurReport(npt, mu, verdict, kappa)


def in_b_g_mu(X: Isocrystal, mu, group: str = "GL", form=None,
              cfg: SearchConfig = DEFAULT):
    """[b] in B(G, mu): equal degree and nu(b) <= mu.

    Returns True/False, or None when the Newton point is not certified and
    the bracketing data cannot decide.
    """
    mu = as_coweight(mu)
    if not mu.is_integral or not mu.is_dominant():
        raise CoweightError("mu must be dominant integral")
    if len(mu) != X.n:
        raise CoweightError("length mismatch")
    if mu.total != X.val_det():
        return False
    if group.upper() == "GSP":
        mu = GSpCoweight(mu)
        form = form or SymplecticForm.standard(X.n)
        _, d = similitude_scale(X, form)
        if d != mu.d:
            return False
    npt = newton_point(X, cfg)
    ok = dominance_leq(npt.nu, mu)
    if npt.certified:
        return ok
    # the bound-based candidate is below the true point, so "no" is reliable
    # only when certified; report unknown
    return None


# --- explicit constructions -----------------------------------------------------

def staircase_exponents(mu):
    """Exponents c_k = mu_{k+1} + ... + mu_n with M spanned by t^{c_k} e_k."""
    mu = [int(x) for x in mu]
    n = len(mu)
    return [sum(mu[k + 1:]) for k in range(n)]


def block_witness_exponents(nu, pieces):
    """Diagonal exponents of the block-wise construction for dominant pieces
    of mu cut along the isoclinic blocks of nu."""
    out = []
    for piece in pieces:
        out.extend(staircase_exponents(sorted(piece, reverse=True)))
    return out


def _verify(X, M, mu):
    got = hodge(M, X)
    if tuple(got) != tuple(mu):
        raise AssertionError(f"witness check failed: inv = {got}, expected {mu}")
    return M


def _prepare(nu, mu):
    nu, mu = as_coweight(nu), as_coweight(mu)
    if len(nu) != len(mu):
        raise CoweightError("length mismatch")
    check_newton_vector(nu)
    if not mu.is_integral or not mu.is_dominant():
        raise CoweightError("mu must be dominant integral")
    if not dominance_leq(nu, mu):
        raise MazurViolation(f"Mazur violation: nu = {nu} is not <= mu = {mu}")
    return nu, mu


def _blocks_of(nu):
    return [(off, m) for off, m, _ in block_offsets(nu)]


def _lambda_candidates(nu, mu):
    """Integral points lambda of Conv(W mu) with the block degrees of nu,
    grouped per block as dominant pieces; nu~ first."""
    P = newton_partition(nu)
    target = kappa_levi(nu, P)
    first = tuple(levi_minuscule_lift(nu, P))
    seen = set()
    out = []
    cands = [first] + [tuple(x) for x in integral_points_of_hull(mu)]
    for lam in cands:
        lam = Coweight(lam)
        if kappa_levi(lam, P) != target:
            continue
        pieces = [tuple(sorted(p, reverse=True)) for p in split_at_blocks(lam, P)]
        key = tuple(pieces)
        if key in seen:
            continue
        seen.add(key)
        out.append(pieces)
    return out


def _unipotent_positions(nu, n):
    """Off-diagonal positions in the order: block upper, block lower, rest."""
    blocks = _blocks_of(nu)
    blk = []
    for b, (off, m) in enumerate(blocks):
        blk.extend([b] * m)
    upper = [(i, j) for i in range(n) for j in range(n) if blk[i] < blk[j]]
    lower = [(i, j) for i in range(n) for j in range(n) if blk[i] > blk[j]]
    inner = [(i, j) for i in range(n) for j in range(n) if i != j and blk[i] == blk[j]]
    return [upper, lower, inner]


def _search_unipotent(X, nu, mu, cfg, F, clock):
    n = len(nu)
    a = cfg.a
    lam_list = _lambda_candidates(nu, mu)
    groups = _unipotent_positions(nu, n)
    coeffs = [c for c in F.nonzero()]
    # stage: (number of entries, allowed position classes)
    stages = []
    for k in (1, 2):
        stages.append((k, groups[0]))
        stages.append((k, groups[0] + groups[1]))
        stages.append((k, groups[0] + groups[1] + groups[2]))
    for pieces in lam_list:
        H0 = lm.diag_monomial(F, block_witness_exponents(nu, pieces))
        for k, positions in stages:
            if not positions:
                continue
            found = []
            for pos in combinations(positions, k):
                for exps in product(range(-a, a + 1), repeat=k):
                    for cs in product(coeffs, repeat=k):
                        clock.check("construct_lattice")
                        U = lm.identity(F, n)
                        for (i, j), e, c in zip(pos, exps, cs):
                            U[i][j] = LaurentPoly(F, {e: c})
                        if k > 1 and lm.det(U).is_zero():
                            continue
                        M = Lattice(lm.mul(U, H0))
                        if tuple(hodge(M, X)) == tuple(mu):
                            found.append(M)
            if found:
                return min(found, key=lambda L: L.sort_key())
    return None


def enumerate_lattices(F, n, a, shift_free=False):
    """List of all canonical forms in the window (see iter_lattices)."""
    return list(iter_lattices(F, n, a, shift_free))


def iter_lattices(F, n, a, shift_free=True):
    """Canonical forms with diagonal and off-diagonal exponents in [-a, a].

    With shift_free, one representative per class M ~ t^k M instead
    (diagonal exponents in [0, 2a] with minimum 0)."""
    Q = F.Q
    if shift_free:
        diags = [d for d in product(range(0, 2 * a + 1), repeat=n) if min(d) == 0]
        lo = -a
    else:
        diags = list(product(range(-a, a + 1), repeat=n))
        lo = -a
    for d in diags:
        slots = []
        for j in range(n):
            for i in range(j + 1, n):
                for e in range(lo, d[i]):
                    slots.append((i, j, e))
        for code in range(Q ** len(slots)):
            B = lm.diag_monomial(F, d)
            c = code
            for (i, j, e) in slots:
                v = c % Q
                c //= Q
                if v:
                    B[i][j] = B[i][j] + LaurentPoly(F, {e: v})
            yield Lattice(B, _canonical=True, _diag=tuple(d))


def _search_exhaustive(X, mu, cfg, F, clock):
    n = X.n
    for a in range(0, cfg.a + 1):
        found = []
        for M in iter_lattices(F, n, a, shift_free=False):
            clock.check("construct_lattice")
            if tuple(hodge(M, X)) == tuple(mu):
                found.append(M)
        if found:
            return min(found, key=lambda L: L.sort_key())
    return None


def construct_lattice(nu, mu, cfg: SearchConfig = DEFAULT,
                      field: Optional[FieldTower] = None, transcript=None) -> Lattice:
    """Lattice M in standard_isocrystal(nu) with relative_position(M, FM) = mu."""
    nu, mu = _prepare(nu, mu)
    base = field or FieldTower(2)
    X = standard_isocrystal(nu, base)
    P = newton_partition(nu)
    log = transcript if transcript is not None else []
    if decomposable_wrt(mu, nu, P):
        pieces = split_at_blocks(mu, P)
        M = Lattice.diagonal(base, block_witness_exponents(nu, pieces))
        log.append({"step": "decomposable", "pieces": [p.strings() for p in pieces]})
        return _verify(X, M, mu)
    clock = cfg.clock()
    m = base.m
    while m <= max(cfg.m_max, base.m):
        F = FieldTower(base.p, base.e, m)
        Xm = X.to_field(F)
        M = _search_unipotent(Xm, nu, mu, cfg, F, clock)
        if M is not None:
            log.append({"step": "unipotent", "field_degree": m})
            return _verify(Xm, M, mu)
        m += base.m
    m = base.m
    while m <= max(cfg.m_max, base.m):
        F = FieldTower(base.p, base.e, m)
        Xm = X.to_field(F)
        M = _search_exhaustive(Xm, mu, cfg, F, clock)
        if M is not None:
            log.append({"step": "exhaustive", "field_degree": m})
            return _verify(Xm, M, mu)
        m += base.m
    raise BudgetExhausted(f"witness not found within budget (a = {cfg.a}, m_max = {cfg.m_max})")


# --- GSp ---------------------------------------------------------------------------

def selfdual_scalar(M: Lattice, form: SymplecticForm):
    """k with M^perp = t^k M, or None."""
    D = dual(M, form)
    diff = D.volume - M.volume
    if diff % M.n:
        return None
    k = diff // M.n
    return k if D == M.shift(k) else None


def selfdual_lattice(S, nu):
    """Selfdual M with M > FM > tM and (FM)^perp = t^{-1} FM, for a standard
    symplectic isocrystal S of weight n (defect 1) and Newton vector nu."""
    nu = as_coweight(nu)
    F = S.iso.field
    n2 = S.iso.n
    half = Fraction(1, 2)
    high = [x for x in nu if x > half]
    h = len(high)
    exps = [0] * n2
    if h:
        # minuscule piece on the high part: a standard chain lattice per block
        r_blocks = []
        for s, m in _parts(high):
            r_blocks.extend(staircase_exponents([1] * int(s * m) + [0] * (m - int(s * m))))
        for i in range(h):
            exps[i] = r_blocks[i]
            # dual partner on the low side
            exps[n2 - 1 - i] = -r_blocks[i]
    return Lattice.diagonal(F, exps)


def _parts(vec):
    out = []
    for x in vec:
        if out and out[-1][0] == x:
            out[-1][1] += 1
        else:
            out.append([x, 1])
    return [(s, m) for s, m in out]


def selfdual_conditions(S, M):
    """M > FM > tM and (FM)^perp = t^{-1} FM."""
    FM = twist_apply(S.iso, M, 1)
    ok1 = M.contains(FM) and FM.contains(M.shift(1))
    ok2 = dual(FM, S.form) == FM.shift(-1)
    return ok1 and ok2


def construct_lattice_gsp(nu, mu, form: Optional[SymplecticForm] = None,
                          cfg: SearchConfig = DEFAULT, field=None, transcript=None):
    """Selfdual-up-to-scalar lattice M in the standard symplectic isocrystal of
    nu with relative_position(M, FM) = mu."""
    nu = GSpCoweight(nu)
    mu = GSpCoweight(mu)
    _prepare(nu, mu)
    if nu.d != mu.d:
        raise MazurViolation(f"Mazur violation: similitude degrees {nu.d} != {mu.d}")
    base = field or FieldTower(2)
    S = standard_symplectic_isocrystal(nu, base)
    form = form or S.form
    X = S.iso
    n2 = len(nu)
    n = n2 // 2
    log = transcript if transcript is not None else []
    d = int(mu.d)
    # weight n up to central twist: mu = omega_n + k
    k0 = min(mu)
    shifted = [int(x - k0) for x in mu]
    if shifted == [1] * n + [0] * n:
        if k0 == 0:
            M = selfdual_lattice(S, nu)
            log.append({"step": "selfdual block lattice"})
        else:
            M = _search_gsp(S, mu, cfg, base, form)
    elif len(set(mu)) == 1:
        # central mu: F = t^{mu_1} F0 with F0 of slope 0, middle block only
        M = Lattice.standard(base, n2)
        if tuple(hodge(M, X)) != tuple(mu):
            M = _search_gsp(S, mu, cfg, base, form)
        log.append({"step": "central"})
    else:
        M = _search_gsp(S, mu, cfg, base, form)
        log.append({"step": "search"})
    _verify(S.iso.to_field(M.field), M, mu)
    if selfdual_scalar(M, form) is None:
        raise AssertionError("GSp witness is not selfdual up to scalar")
    return M


def _symplectic_unipotents(F, n2, a, coeffs):
    """Elementary symplectic unipotents for the standard form (i <-> n2-1-i)."""
    n = n2 // 2
    out = []
    for i in range(n2):
        for j in range(n2):
            if i == j:
                continue
            ip, jp = n2 - 1 - i, n2 - 1 - j
            for e in range(-a, a + 1):
                for c in coeffs:
                    U = lm.identity(F, n2)
                    if j == ip:
                        # long root: I + c t^e E_{i, i'}
                        if i < j:
                            U[i][j] = LaurentPoly(F, {e: c})
                            out.append(U)
                        continue
                    if (i, j) > (jp, ip):
                        continue
                    U[i][j] = LaurentPoly(F, {e: c})
                    # <Ux, Uy> preserved: entry at (j', i') with sign
                    sgn = (1 if i < n else -1) * (1 if j < n else -1)
                    U[jp][ip] = LaurentPoly(F, {e: F.neg(c) if sgn > 0 else c})
                    out.append(U)
    return out


def _search_gsp(S, mu, cfg, base, form):
    X = S.iso
    n2 = X.n
    n = n2 // 2
    clock = cfg.clock()
    degrees = list(range(base.m, max(cfg.m_max, base.m) + 1, base.m))
    for pairs in (False, True):
        for m in degrees:
            F = FieldTower(base.p, base.e, m)
            Xm = X.to_field(F)
            us = _symplectic_unipotents(F, n2, cfg.a, list(F.nonzero()))
            if pairs:
                mats = [lm.mul(U1, U2) for U1, U2 in combinations(us, 2)]
            else:
                mats = [lm.identity(F, n2)] + us
            for c in product(range(-cfg.a, cfg.a + 1), repeat=n):
                for k in range(-cfg.a, cfg.a + 1):
                    H0 = lm.diag_monomial(F, list(c) + [k - x for x in reversed(c)])
                    found = []
                    for U in mats:
                        clock.check("construct_lattice_gsp")
                        M = Lattice(lm.mul(U, H0))
                        if tuple(hodge(M, Xm)) == tuple(mu) and selfdual_scalar(M, form) is not None:
                            found.append(M)
                    if found:
                        return min(found, key=lambda L: L.sort_key())
    raise BudgetExhausted(f"witness not found within budget (a = {cfg.a}, m_max = {cfg.m_max})")


# --- enumeration -------------------------------------------------------------------

@dataclass
class HodgeSetReport:
    enumerated: set
    predicted: set
    window: int
    lattices_seen: int
    complete: bool = True

    @property
    def equal(self):
        return self.enumerated == self.predicted


def predicted_hodge_set(nu, a):
    nu = as_coweight(nu)
    n = len(nu)
    return {tuple(m) for m in dominant_integral_vectors(n, -a, a, total=nu.total)
            if dominance_leq(nu, m)}


def enumerate_hodge_set(X: Isocrystal, window: SearchConfig = DEFAULT,
                        field: Optional[FieldTower] = None) -> HodgeSetReport:
    """{relative_position(M, FM)} over all canonical lattices in the window,
    restricted to |mu_i| <= a, against the dominance prediction."""
    a = window.a
    F = field or X.field
    Y = X.to_field(F) if F is not X.field else X
    npt = newton_point(X, window)
    seen = set()
    count = 0
    clock = window.clock()
    for M in iter_lattices(F, X.n, a, shift_free=False):
        clock.check("enumerate_hodge_set")
        count += 1
        mu = hodge(M, Y)
        if all(abs(x) <= a for x in mu):
            seen.add(tuple(mu))
    return HodgeSetReport(seen, predicted_hodge_set(npt.nu, a), a, count)
