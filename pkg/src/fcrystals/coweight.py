"""Dominant coweights, dominance order, Levi blocks and block degrees.

Vectors are tuples of Fractions.  A vector is dominant when its entries are
non-increasing.  Levi partitions are tuples of positive block sizes.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product


class CoweightError(ValueError):
    pass


def _frac(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


class Coweight(tuple):
    """Immutable vector of rationals."""

    def __new__(cls, entries):
        return super().__new__(cls, (_frac(x) for x in entries))

    @property
    def n(self):
        return len(self)

    @property
    def is_integral(self):
        return all(x.denominator == 1 for x in self)

    @property
    def total(self):
        return sum(self, Fraction(0))

    def is_dominant(self):
        return all(self[i] >= self[i + 1] for i in range(len(self) - 1))

    def dominant(self):
        return Coweight(sorted(self, reverse=True))

    def ints(self):
        if not self.is_integral:
            raise CoweightError(f"{self} is not integral")
        return tuple(int(x) for x in self)

    def __add__(self, other):
        return Coweight(a + b for a, b in zip(self, other))

    def __neg__(self):
        return Coweight(-a for a in self)

    def __sub__(self, other):
        return Coweight(a - b for a, b in zip(self, other))

    def scale(self, c):
        return Coweight(_frac(c) * a for a in self)

    def __repr__(self):
        return "(" + ", ".join(str(x) for x in self) + ")"

    def strings(self):
        return [str(x) for x in self]


LeviPartition = tuple
KappaValue = tuple


def as_coweight(x) -> Coweight:
    return x if isinstance(x, Coweight) else Coweight(x)


def parse_coweight(s: str) -> Coweight:
    """Parse '1/2,1/2,0' (or a list of strings/numbers)."""
    if isinstance(s, str):
        parts = [p for p in s.replace(" ", "").split(",") if p]
        return Coweight(parts)
    return Coweight(s)


def omega(r: int, n: int) -> Coweight:
    """The minuscule coweight (1^r, 0^(n-r))."""
    if not 0 <= r <= n:
        raise CoweightError("need 0 <= r <= n")
    return Coweight([1] * r + [0] * (n - r))


def _require_dominant(x, name):
    if not x.is_dominant():
        raise CoweightError(f"{name} = {x} is not dominant")


def prefix_sums(x):
    out = []
    s = Fraction(0)
    for a in x:
        s += a
        out.append(s)
    return out


def dominance_leq(nu, mu) -> bool:
    """nu <= mu: prefix sums of nu bounded by those of mu, equal totals."""
    nu, mu = as_coweight(nu), as_coweight(mu)
    if len(nu) != len(mu):
        raise CoweightError("length mismatch")
    _require_dominant(nu, "nu")
    _require_dominant(mu, "mu")
    a, b = prefix_sums(nu), prefix_sums(mu)
    if not a:
        return True
    return a[-1] == b[-1] and all(x <= y for x, y in zip(a, b))


def in_weyl_hull(nu, mu) -> bool:
    """Membership of nu in the convex hull of the W-orbit of mu (any order)."""
    return dominance_leq(as_coweight(nu).dominant(), as_coweight(mu).dominant())


def is_minuscule_weight_r(nu, r: int) -> bool:
    nu = as_coweight(nu)
    _require_dominant(nu, "nu")
    if not 0 <= r <= len(nu):
        raise CoweightError("need 0 <= r <= n")
    return all(0 <= x <= 1 for x in nu) and nu.total == r


def is_minuscule(mu) -> bool:
    """Dominant integral with entries differing by at most one."""
    mu = as_coweight(mu)
    return mu.is_integral and (not mu or max(mu) - min(mu) <= 1)


def kappa_levi(x, P) -> tuple:
    """Block sums of x for the Levi partition P."""
    x = as_coweight(x)
    P = tuple(P)
    if sum(P) != len(x) or any(m <= 0 for m in P):
        raise CoweightError(f"partition {P} incompatible with length {len(x)}")
    out = []
    off = 0
    for m in P:
        out.append(sum(x[off:off + m], Fraction(0)))
        off += m
    return tuple(int(s) if s.denominator == 1 else s for s in out)


def newton_partition(nu) -> tuple:
    """Coarsest partition on whose blocks nu is constant (blocks in order)."""
    nu = as_coweight(nu)
    if not nu:
        return ()
    parts = []
    run = 1
    for i in range(1, len(nu)):
        if nu[i] == nu[i - 1]:
            run += 1
        else:
            parts.append(run)
            run = 1
    parts.append(run)
    return tuple(parts)


def check_newton_vector(nu, P=None) -> tuple:
    """Validate the integrality condition; returns the partition used."""
    nu = as_coweight(nu)
    _require_dominant(nu, "nu")
    if P is None:
        P = newton_partition(nu)
    off = 0
    for m in P:
        block = nu[off:off + m]
        if any(x != block[0] for x in block):
            raise CoweightError(f"nu = {nu} is not constant on the blocks of {tuple(P)}")
        if (m * block[0]).denominator != 1:
            raise CoweightError(f"not a Newton vector: {m} * {block[0]} is not integral")
        off += m
    if off != len(nu):
        raise CoweightError("partition does not match length")
    return tuple(P)


def is_newton_vector(nu) -> bool:
    try:
        check_newton_vector(nu)
        return True
    except CoweightError:
        return False


def levi_minuscule_lift(nu, P=None) -> Coweight:
    """The per-block minuscule vector nu~ (unsorted, block by block)."""
    nu = as_coweight(nu)
    P = check_newton_vector(nu, P)
    out = []
    off = 0
    for m in P:
        v = nu[off]
        total = int(m * v)
        fl = total // m
        ups = total - m * fl
        out.extend([fl + 1] * ups + [fl] * (m - ups))
        off += m
    return Coweight(out)


def minimal_dominant_above(nu, P=None) -> Coweight:
    """The dominant sort [nu~] of the per-block minuscule lift of nu."""
    try:
        return levi_minuscule_lift(nu, P).dominant()
    except CoweightError as exc:
        if "not a Newton vector" in str(exc):
            raise
        raise CoweightError(f"not a Newton vector: {exc}") from exc


def decomposable_wrt(mu, nu, P=None) -> bool:
    """Do the prefix sums of mu and nu agree at every block boundary of P?"""
    mu, nu = as_coweight(mu), as_coweight(nu)
    if P is None:
        P = newton_partition(nu)
    if not dominance_leq(nu, mu):
        raise CoweightError(f"nu = {nu} is not below mu = {mu}")
    a, b = prefix_sums(mu), prefix_sums(nu)
    k = 0
    for m in P:
        k += m
        if a[k - 1] != b[k - 1]:
            return False
    return True


def levi_leq(nu, mu, P) -> bool:
    """nu <=^M mu: nu <= mu and equal block degrees (both taken dominant)."""
    nu, mu = as_coweight(nu), as_coweight(mu)
    return dominance_leq(nu, mu) and kappa_levi(nu, P) == kappa_levi(mu, P)


def split_at_blocks(mu, P):
    """Cut mu into consecutive pieces of sizes P."""
    mu = as_coweight(mu)
    out = []
    off = 0
    for m in P:
        out.append(Coweight(mu[off:off + m]))
        off += m
    return out


def dominant_integral_vectors(n, lo, hi, total=None):
    """All dominant integral vectors with entries in [lo, hi]."""
    out = []

    def rec(prefix, upper, remaining):
        if remaining == 0:
            if total is None or sum(prefix) == total:
                out.append(Coweight(prefix))
            return
        for v in range(upper, lo - 1, -1):
            rec(prefix + [v], v, remaining - 1)

    rec([], hi, n)
    return out


def integral_points_of_hull(mu):
    """Integral points of Conv(W mu): all integral vectors whose dominant
    sort is <= mu (finite set, any order)."""
    mu = as_coweight(mu).dominant()
    n = len(mu)
    if n == 0:
        return [Coweight([])]
    lo, hi = int(min(mu)), int(max(mu))
    out = []
    for lam in dominant_integral_vectors(n, lo, hi, total=mu.total):
        if dominance_leq(lam, mu):
            out.extend(distinct_permutations(lam))
    return sorted(set(out))


def distinct_permutations(x):
    from itertools import permutations
    return sorted({Coweight(p) for p in permutations(x)})


def weyl_orbit(mu):
    return distinct_permutations(as_coweight(mu))


def newton_vectors(n, max_den, lo=0, hi=1, total=None):
    """All Newton vectors (dominant, integrality condition) with entries in
    [lo, hi] and denominators <= max_den."""
    vals = sorted({Fraction(a, d) for d in range(1, max_den + 1)
                   for a in range(lo * d, hi * d + 1)}, reverse=True)
    out = []

    def rec(prefix, start):
        if len(prefix) == n:
            c = Coweight(prefix)
            if (total is None or c.total == total) and is_newton_vector(c):
                out.append(c)
            return
        for i in range(start, len(vals)):
            rec(prefix + [vals[i]], i)

    rec([], 0)
    return out


# --- GSp coweights -----------------------------------------------------------

class GSpCoweight(Coweight):
    """Vector of length 2n with x_i + x_{2n+1-i} constant (the defect d)."""

    def __new__(cls, entries, d=None):
        obj = super().__new__(cls, entries)
        n2 = len(obj)
        if n2 % 2:
            raise CoweightError("GSp coweights have even length")
        sums = {obj[i] + obj[n2 - 1 - i] for i in range(n2 // 2)}
        if len(sums) > 1:
            raise CoweightError(f"{tuple(obj)} violates the symplectic symmetry")
        dd = sums.pop() if sums else Fraction(0)
        if d is not None and _frac(d) != dd:
            raise CoweightError(f"defect {d} does not match {dd}")
        obj.d = dd
        return obj

    def __reduce__(self):
        return (GSpCoweight, (tuple(self), self.d))


def gsp_defect(x):
    return GSpCoweight(x).d


def is_gsp_coweight(x) -> bool:
    try:
        GSpCoweight(x)
        return True
    except CoweightError:
        return False


def gsp_minuscule_weights(n):
    """omega_0, omega_n, omega_2n inside Z^(2n)."""
    return [omega(0, 2 * n), omega(n, 2 * n), omega(2 * n, 2 * n)]


def simple_coroot_combination(diff):
    """Coefficients c with diff = sum c_i (e_i - e_{i+1}), or None if diff
    has nonzero total."""
    diff = as_coweight(diff)
    if diff.total != 0:
        return None
    return prefix_sums(diff)[:-1]


def box(n, lo, hi):
    return [Coweight(v) for v in product(range(lo, hi + 1), repeat=n)]
