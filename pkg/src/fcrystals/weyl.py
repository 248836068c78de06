"""Extended affine Weyl groups of GL_n and GSp_2n, Bruhat order and
admissible sets.

An element is the monomial matrix t^lam P_w (P_w e_j = e_{w(j)}), stored as
the affine permutation f of Z with f(j + n) = f(j) + n obtained from its
action on the vectors t^a e_i, labelled by i - n a.  Then
f(j) = w(j) - n lam_{w(j)} for 1 <= j <= n, and the standard chain
Lambda_i corresponds to the integers <= n + i.

GSp_2n elements (for the form pairing e_i with e_{2n+1-i}) are the affine
permutations of Z with f(a) + f(2n + 1 - a) constant.  Their simple
reflections are s_0, s_n and the products s_i s_{2n-i} of GL_2n reflections.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import permutations, product
from typing import FrozenSet, Optional

from . import laurentmat as lm
from .arith import FieldTower, LaurentPoly
from .coweight import (Coweight, CoweightError, as_coweight, dominance_leq,
                       is_minuscule, weyl_orbit)
from .lattice import (ChainError, Lattice, LatticeChain, relative_position,
                      standard_chain_lattice)


class WeylError(ValueError):
    pass


def _ev(win, j):
    """f(j) for any integer j."""
    n = len(win)
    q, r = divmod(j - 1, n)
    return win[r] + q * n


@dataclass(frozen=True)
class ExtAffineWeylElem:
    """Element of the extended affine Weyl group; ``win`` = (f(1), ..., f(n))."""
    win: tuple
    group: str = "GL"

    def __post_init__(self):
        n = len(self.win)
        if sorted(x % n for x in self.win) != list(range(n)):
            raise WeylError(f"{self.win} is not an affine permutation window")
        if self.group == "GSp":
            if n % 2:
                raise WeylError("GSp elements act on an even number of coordinates")
            c = {_ev(self.win, a) + _ev(self.win, n + 1 - a) for a in range(1, n + 1)}
            if len(c) != 1:
                raise WeylError(f"{self.win} does not preserve the symplectic pairing")

    # --- conversions ---
    @classmethod
    def from_lam_w(cls, lam, w, group="GL"):
        """t^lam P_w; w is a one-line permutation of 1..n (or 0..n-1)."""
        n = len(lam)
        w = tuple(w)
        if min(w) == 0:
            w = tuple(x + 1 for x in w)
        win = tuple(w[j] - n * int(lam[w[j] - 1]) for j in range(n))
        return cls(win, group)

    @classmethod
    def translation(cls, lam, group="GL"):
        return cls.from_lam_w(lam, range(1, len(lam) + 1), group)

    @classmethod
    def identity(cls, n, group="GL"):
        return cls(tuple(range(1, n + 1)), group)

    @property
    def n(self):
        return len(self.win)

    @property
    def w(self):
        n = self.n
        return tuple((x - 1) % n + 1 for x in self.win)

    @property
    def lam(self):
        n = self.n
        lam = [0] * n
        for x in self.win:
            wj = (x - 1) % n + 1
            lam[wj - 1] = (wj - x) // n
        return tuple(lam)

    def __call__(self, j):
        return _ev(self.win, j)

    # --- group structure ---
    def __mul__(self, other):
        if self.n != other.n:
            raise WeylError("rank mismatch")
        return ExtAffineWeylElem(tuple(self(other(j)) for j in range(1, self.n + 1)),
                                 self.group if self.group == other.group else "GL")

    def inverse(self):
        n = self.n
        inv = [0] * n
        for j in range(1, n + 1):
            v = self(j)
            q, r = divmod(v - 1, n)
            inv[r] = j - q * n
        return ExtAffineWeylElem(tuple(inv), self.group)

    @property
    def kappa(self):
        """val det of t^lam P_w."""
        return sum(self.lam)

    def length(self):
        return length(self)

    def matrix(self, F):
        """The monomial matrix t^lam P_w over L."""
        n = self.n
        lam, w = self.lam, self.w
        M = lm.zeros(F, n)
        for j in range(n):
            i = w[j] - 1
            M[i][j] = LaurentPoly.monomial(F, lam[i])
        return M

    def to_json(self):
        return {"lambda": list(self.lam), "w": list(self.w), "group": self.group}

    def __repr__(self):
        return f"W({self.group}: lam={self.lam}, w={self.w})"


# --- simple reflections, length, descents ----------------------------------------

def _swap_right(win, i):
    """x s_i for the GL simple reflection s_i (i in 0..n-1)."""
    n = len(win)
    w = list(win)
    if i == 0:
        a, b = _ev(win, 0), _ev(win, 1)
        w[0] = a
        w[n - 1] = b + n
    else:
        w[i - 1], w[i] = w[i], w[i - 1]
    return tuple(w)


def _swap_left(win, i):
    """s_i x: exchange the values congruent to i and i + 1."""
    n = len(win)
    out = []
    for v in win:
        r = v % n
        if r == i % n:
            out.append(v + 1)
        elif r == (i + 1) % n:
            out.append(v - 1)
        else:
            out.append(v)
    return tuple(out)


def simple_reflections(n, group="GL"):
    """Labels of the simple reflections: GL 0..n-1, GSp (rank n/2) 0..n/2."""
    if group == "GL":
        return list(range(n))
    return list(range(n // 2 + 1))


def _gl_parts(label, n, group):
    """GL simple reflections making up a simple reflection of the group."""
    if group == "GL":
        return (label,)
    h = n // 2
    if label in (0, h):
        return (label,)
    return (label, n - label)


def right_mul_simple(x: ExtAffineWeylElem, label) -> ExtAffineWeylElem:
    win = x.win
    for i in _gl_parts(label, x.n, x.group):
        win = _swap_right(win, i)
    return ExtAffineWeylElem(win, x.group)


def left_mul_simple(x: ExtAffineWeylElem, label) -> ExtAffineWeylElem:
    win = x.win
    for i in _gl_parts(label, x.n, x.group):
        win = _swap_left(win, i)
    return ExtAffineWeylElem(win, x.group)


def is_right_descent(x: ExtAffineWeylElem, label) -> bool:
    """x s < x: f(i) > f(i + 1) at the (first) GL position of s."""
    i = _gl_parts(label, x.n, x.group)[0]
    return x(i) > x(i + 1)


def gl_length(win):
    """Number of inversions: sum over i < j of |floor((f(j) - f(i)) / n)|."""
    n = len(win)
    tot = 0
    for i in range(n):
        for j in range(i + 1, n):
            tot += abs((win[j] - win[i]) // n)
    return tot


@lru_cache(maxsize=None)
def _reduce(win, group):
    """(length, length-zero part) by greedy right descent."""
    x = ExtAffineWeylElem(win, group)
    steps = 0
    labels = simple_reflections(x.n, group)
    while True:
        for s in labels:
            if is_right_descent(x, s):
                x = right_mul_simple(x, s)
                steps += 1
                break
        else:
            return steps, x.win


def length(x: ExtAffineWeylElem) -> int:
    if x.group == "GL":
        return gl_length(x.win)
    return _reduce(x.win, x.group)[0]


def omega_part(x: ExtAffineWeylElem) -> ExtAffineWeylElem:
    """The length-zero element in the coset x W_a."""
    return ExtAffineWeylElem(_reduce(x.win, x.group)[1], x.group)


def reduced_word(x: ExtAffineWeylElem):
    """(word, tau) with x = tau s_{word[0]} s_{word[1]} ..."""
    word = []
    labels = simple_reflections(x.n, x.group)
    while True:
        for s in labels:
            if is_right_descent(x, s):
                x = right_mul_simple(x, s)
                word.append(s)
                break
        else:
            return list(reversed(word)), x


# --- Bruhat order ---------------------------------------------------------------

def bruhat_leq(x: ExtAffineWeylElem, y: ExtAffineWeylElem) -> bool:
    """Bruhat order: same length-zero part and the subword property."""
    if x.n != y.n or x.group != y.group:
        return False
    if x.kappa != y.kappa:
        return False
    return _leq(x.win, y.win, x.group)


@lru_cache(maxsize=None)
def _leq(xw, yw, group):
    x, y = ExtAffineWeylElem(xw, group), ExtAffineWeylElem(yw, group)
    lx, ly = length(x), length(y)
    if lx > ly:
        return False
    if ly == 0:
        return xw == yw
    for s in simple_reflections(y.n, group):
        if is_right_descent(y, s):
            ys = right_mul_simple(y, s)
            if is_right_descent(x, s):
                return _leq(right_mul_simple(x, s).win, ys.win, group)
            return _leq(xw, ys.win, group)
    raise AssertionError("positive length without descent")


# --- enumeration -------------------------------------------------------------------

def gsp_weyl_orbit(mu):
    """Orbit of mu (length 2n, symmetric) under the signed permutations."""
    mu = as_coweight(mu)
    n2 = len(mu)
    n = n2 // 2
    out = set()
    for perm in permutations(range(n)):
        for signs in product((False, True), repeat=n):
            v = [None] * n2
            for i in range(n):
                a, b = mu[perm[i]], mu[n2 - 1 - perm[i]]
                if signs[i]:
                    a, b = b, a
                v[i], v[n2 - 1 - i] = a, b
            out.add(Coweight(v))
    return sorted(out)


def _is_gsp_perm(w):
    n = len(w)
    return all(w[n - 1 - j] == n + 1 - w[j] for j in range(n))


def elements_in_window(n, lo, hi, group="GL", kappa=None):
    """All elements with translation part in [lo, hi]^n."""
    out = []
    for w in permutations(range(1, n + 1)):
        if group == "GSp" and not _is_gsp_perm(w):
            continue
        for lam in product(range(lo, hi + 1), repeat=n):
            if kappa is not None and sum(lam) != kappa:
                continue
            if group == "GSp" and len({lam[i] + lam[n - 1 - i] for i in range(n)}) != 1:
                continue
            out.append(ExtAffineWeylElem.from_lam_w(lam, w, group))
    return out


def parabolic_subgroup(n, I, group="GL"):
    """Elements of the finite group generated by the simple reflections whose
    label is not in I (I nonempty; labels as in simple_reflections, and for
    GSp the label j stands for the symmetric pair {j, -j})."""
    labels = [s for s in simple_reflections(n, group) if s not in _labels_of_type(I, n, group)]
    e = ExtAffineWeylElem.identity(n, group)
    seen = {e.win}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for s in labels:
                y = right_mul_simple(x, s)
                if y.win not in seen:
                    seen.add(y.win)
                    nxt.append(y)
        frontier = nxt
        if len(seen) > 100000:
            raise WeylError("parabolic subgroup is not finite (empty type?)")
    return [ExtAffineWeylElem(w, group) for w in sorted(seen)]


def _labels_of_type(I, n, group):
    I = {int(i) % n for i in I}
    if not I:
        raise WeylError("type must be nonempty")
    if group == "GL":
        return I
    if any((-i) % n not in I for i in I):
        raise WeylError("GSp type must be symmetric")
    return {i for i in I if i <= n // 2}


def _elem_key(x):
    return (length(x), x.win)


def double_coset_rep(x: ExtAffineWeylElem, I, W_I=None) -> ExtAffineWeylElem:
    """Minimal representative (by length, then window) of W_I x W_I."""
    W_I = W_I if W_I is not None else parabolic_subgroup(x.n, I, x.group)
    best = None
    for u in W_I:
        ux = u * x
        for v in W_I:
            y = ux * v
            if best is None or _elem_key(y) < _elem_key(best):
                best = y
    return best


@dataclass
class AdmissibleSet:
    mu: Coweight
    group: str
    elements: FrozenSet[ExtAffineWeylElem]
    type: Optional[tuple] = None
    flags: list = dc_field(default_factory=list)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return x in self.elements

    def __iter__(self):
        return iter(sorted(self.elements, key=_elem_key))


def _translations(mu, group):
    orbit = gsp_weyl_orbit(mu) if group == "GSp" else weyl_orbit(mu)
    return [ExtAffineWeylElem.translation(v.ints(), group) for v in orbit]


def _adm_direct(mu, group):
    n = len(mu)
    lo, hi = int(min(mu)), int(max(mu))
    tops = _translations(mu, group)
    kappa = int(mu.total)
    return frozenset(x for x in elements_in_window(n, lo, hi, group, kappa)
                     if any(bruhat_leq(x, t) for t in tops))


def adm_set(mu, group: str = "GL", I=None) -> AdmissibleSet:
    """Adm(mu) = {x : x <= t_mu' for some mu' in W mu}, or its image in the
    double cosets W_I \\ W / W_I when a type I is given.

    Candidates are the elements with translation part in [min mu, max mu]^n
    (all of Adm(mu) lies there).  For GSp and minuscule mu the set is also
    computed as (GL_2n admissible set) intersected with the GSp elements and
    the two results are compared.
    """
    group = _norm_group(group)
    mu = as_coweight(mu)
    if not mu.is_integral or not mu.is_dominant():
        raise CoweightError("mu must be dominant integral")
    flags = []
    elems = _adm_direct(mu, group)
    if group == "GSp":
        if is_minuscule(mu):
            gl = _adm_direct(mu, "GL")
            inter = frozenset(ExtAffineWeylElem(x.win, "GSp") for x in gl if _is_gsp_elem(x))
            if inter != elems:
                raise AssertionError("GSp admissible set differs from the GL_2n intersection")
            flags.append("intersection rule verified")
        else:
            flags.append("non-minuscule: direct Bruhat definition only")
    if I is None:
        return AdmissibleSet(mu, group, elems, None, flags)
    I = tuple(sorted({int(i) % len(mu) for i in I}))
    W_I = parabolic_subgroup(len(mu), I, group)
    reps = frozenset(double_coset_rep(x, I, W_I) for x in elems)
    return AdmissibleSet(mu, group, reps, I, flags)


def _is_gsp_elem(x):
    n = x.n
    if n % 2:
        return False
    return len({x(a) + x(n + 1 - a) for a in range(1, n + 1)}) == 1


def _norm_group(group):
    g = group.upper()
    if g == "GL":
        return "GL"
    if g == "GSP":
        return "GSp"
    raise WeylError(f"unknown group {group}")


# --- lattice chains ----------------------------------------------------------------

def chain_inv_admissible(chainA: LatticeChain, chainB: LatticeChain, mu) -> bool:
    """inv(M_i, M'_i) <= mu for every index of the common type (equality
    when mu is minuscule)."""
    mu = as_coweight(mu)
    if chainA.type != chainB.type:
        raise ChainError("chains of different type")
    for i in chainA.type:
        rp = relative_position(chainA.lattices[i], chainB.lattices[i])
        if is_minuscule(mu):
            if tuple(rp) != tuple(mu):
                return False
        elif not dominance_leq(rp, mu):
            return False
    return True


def standard_chain_of_type(F, n, I):
    I = tuple(sorted({int(i) % n for i in I}))
    return LatticeChain(I, {i: standard_chain_lattice(F, n, i) for i in I})


def perm_set_by_chains(mu, group: str = "GL", I=None, a: int = 1,
                       field: Optional[FieldTower] = None) -> AdmissibleSet:
    """Double cosets W_I x W_I (x in the window [-a, a]) for which the chain
    pair (Lambda_I, x Lambda_I) satisfies inv(Lambda_i, x Lambda_i) <= mu at
    every index of I."""
    group = _norm_group(group)
    mu = as_coweight(mu)
    n = len(mu)
    F = field or FieldTower(2)
    I = tuple(range(n)) if I is None else tuple(sorted({int(i) % n for i in I}))
    base = standard_chain_of_type(F, n, I)
    W_I = parabolic_subgroup(n, I, group)
    found = set()
    for x in elements_in_window(n, -a, a, group, int(mu.total)):
        g = x.matrix(F)
        moved = base.map(lambda M: Lattice(lm.mul(g, M.basis)))
        ok = True
        for i in I:
            rp = relative_position(base.lattices[i], moved.lattices[i])
            if not dominance_leq(rp, mu):
                ok = False
                break
        if ok:
            found.add(double_coset_rep(x, I, W_I))
    return AdmissibleSet(mu, group, frozenset(found), I, ["chain pairs, window %d" % a])
