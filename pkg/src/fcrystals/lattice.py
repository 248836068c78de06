"""Lattices in L^n, relative position, duality and periodic lattice chains.

A lattice is stored through its column Hermite form over O = k[[t]]: lower
triangular, diagonal entries t^{a_i}, and each entry below the diagonal in
row i reduced to exponents < a_i.  Two lattices are equal exactly when these
matrices agree, so lattices can be hashed and collected in sets.

Relative position: for lattices M, M' with M' = gM, ``relative_position``
returns the dominant vector mu with g in GL_n(O) diag(t^mu) GL_n(O), read off
from the minimal valuations d_k of the k x k minors.  Positive entries mean
M' is deep inside M.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations
from typing import Optional

from . import laurentmat as lm
from .arith import INF, FieldTower, LaurentPoly, common_field, unit_inverse_mod
from .coweight import Coweight


class LatticeError(ValueError):
    pass


def _col_truncate(col, N):
    return [x.truncate(N) for x in col]


def _col_sub(a, b):
    return [x - y for x, y in zip(a, b)]


def _col_scale(col, c):
    return [x * c for x in col]


def _hermite(gens, n, F):
    """Column Hermite form of the O-module spanned by the columns ``gens``
    (a list of column vectors, spanning L^n)."""
    v = min((x.val() for col in gens for x in col), default=INF)
    if v == INF:
        raise LatticeError("singular matrix")
    gens = [[x.shift(-v) for x in col] for col in gens]
    # an invertible n x n subfamily bounds the index: t^K O^n lies in the span
    K = None
    if len(gens) == n:
        d = lm.det(lm.from_columns(gens))
        if not d.is_zero():
            K = d.val()
    else:
        for sub in combinations(range(len(gens)), n):
            d = lm.det(lm.from_columns([gens[j] for j in sub]))
            if not d.is_zero():
                k = d.val()
                K = k if K is None else min(K, k)
                if K == 0:
                    break
    if K is None:
        raise LatticeError("singular matrix")
    N = K + 1
    work = [_col_truncate(c, N) for c in gens]
    for i in range(n):
        col = [LaurentPoly(F) for _ in range(n)]
        col[i] = LaurentPoly.monomial(F, K)
        work.append(col)
    pivots = []
    for i in range(n):
        best, besti = INF, None
        for idx, c in enumerate(work):
            a = c[i].val()
            if a < best:
                best, besti = a, idx
        if besti is None or best > K:
            raise LatticeError("internal: no pivot found")
        a = best
        c = work.pop(besti)
        u = c[i].shift(-a)
        w = unit_inverse_mod(u, N - a)
        c = _col_truncate(_col_scale(c, w), N)
        assert c[i].is_monomial() and c[i].coeff(a) == 1
        new = []
        for col in work:
            e = col[i]
            if e.terms:
                q = e.shift(-a)
                col = _col_truncate(_col_sub(col, _col_scale(c, q)), N)
            if any(x.terms for x in col):
                new.append(col)
        work = new
        pivots.append((a, c))
    total = sum(a for a, _ in pivots)
    if total != K:
        raise LatticeError("internal: Hermite index mismatch")
    H = [c for _, c in pivots]
    diag = [a for a, _ in pivots]
    for j in range(n):
        for i in range(j + 1, n):
            e = H[j][i]
            hp = e.high_part(diag[i])
            if hp.terms:
                q = hp.shift(-diag[i])
                H[j] = _col_sub(H[j], _col_scale(H[i], q))
    H = [[x.shift(v) for x in col] for col in H]
    return lm.from_columns(H), tuple(a + v for a in diag)


class Lattice:
    """Full-rank O-lattice in L^n, held in canonical column Hermite form."""

    __slots__ = ("basis", "n", "field", "diag", "_hash")

    def __init__(self, cols, _canonical=False, _diag=None):
        if isinstance(cols, Lattice):
            cols = cols.basis
            _canonical = True
        n = len(cols)
        F = lm.field_of(cols)
        cols = lm.to_field(cols, F)
        if _canonical:
            self.basis = cols
            self.diag = _diag if _diag is not None else tuple(
                cols[i][i].val() for i in range(n))
        else:
            gens = lm.columns(cols)
            self.basis, self.diag = _hermite(gens, n, F)
        self.n = n
        self.field = F
        self._hash = None

    # --- constructors ---------------------------------------------------
    @classmethod
    def from_generators(cls, gens, n=None, F=None):
        """Lattice spanned by column vectors (any number >= n)."""
        n = n if n is not None else len(gens[0])
        F = F or common_field(*[x.field for col in gens for x in col])
        gens = [[x.to_field(F) for x in col] for col in gens]
        H, d = _hermite(gens, n, F)
        return cls(H, _canonical=True, _diag=d)

    @classmethod
    def standard(cls, F, n, shift=0):
        return cls(lm.diag_monomial(F, [shift] * n), _canonical=True)

    @classmethod
    def diagonal(cls, F, exps):
        return cls(lm.diag_monomial(F, list(exps)), _canonical=True)

    # --- basic structure ------------------------------------------------
    def key(self):
        return tuple(tuple(x.key() for x in row) for row in self.basis)

    def to_field(self, F):
        if F is self.field:
            return self
        return Lattice(lm.to_field(self.basis, F), _canonical=True, _diag=self.diag)

    def __eq__(self, other):
        if not isinstance(other, Lattice):
            return NotImplemented
        if self.n != other.n or self.diag != other.diag:
            return False
        if self.field is other.field:
            return self.key() == other.key()
        F = common_field(self.field, other.field)
        return self.to_field(F).key() == other.to_field(F).key()

    def __hash__(self):
        if self._hash is None:
            # field independent: diagonal and support pattern
            pat = tuple(tuple(tuple(sorted(x.terms)) for x in row) for row in self.basis)
            self._hash = hash((self.n, self.diag, pat))
        return self._hash

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def sort_key(self):
        return (self.diag, self.key())

    def __repr__(self):
        return f"Lattice(n={self.n}, diag={self.diag}, basis={self.basis})"

    @property
    def volume(self):
        """val det of a basis (the index relative to the standard lattice)."""
        return sum(self.diag)

    def shift(self, k):
        """t^k M."""
        return Lattice(lm.shift(self.basis, k), _canonical=True,
                       _diag=tuple(a + k for a in self.diag))

    def frob(self, k=1):
        """sigma^k(M); the canonical form is preserved entrywise."""
        return Lattice(lm.frob(self.basis, k), _canonical=True, _diag=self.diag)

    def apply(self, g):
        """g M for a matrix g over L."""
        return Lattice(lm.mul(g, self.basis))

    def contains(self, other: "Lattice") -> bool:
        """other subset of self."""
        g = lm.mul(_inverse_hermite(self), other.basis)
        return lm.min_val(g) >= 0

    def __contains__(self, vec):
        col = [[x] for x in vec]
        g = lm.mul(_inverse_hermite(self), col)
        return lm.min_val(g) >= 0

    def colength_in(self, bigger: "Lattice") -> int:
        """length(bigger/self), assuming self subset of bigger."""
        return self.volume - bigger.volume

    def coordinates(self, vec):
        """Coordinates of vec in the canonical basis (over L)."""
        return [r[0] for r in lm.mul(_inverse_hermite(self), [[x] for x in vec])]

    def columns(self):
        return lm.columns(self.basis)

    def __add__(self, other):
        return Lattice.from_generators(self.columns() + other.columns(), self.n)


def _inverse_hermite(M: Lattice):
    """Exact inverse of the canonical basis (triangular, monomial diagonal)."""
    B = M.basis
    n = M.n
    F = M.field
    # forward substitution column by column: solve B X = I
    X = lm.zeros(F, n)
    for j in range(n):
        for i in range(n):
            acc = LaurentPoly.one(F) if i == j else LaurentPoly(F)
            for k in range(i):
                if B[i][k].terms and X[k][j].terms:
                    acc = acc - B[i][k] * X[k][j]
            X[i][j] = acc.shift(-M.diag[i])
    return X


def normalize(cols) -> Lattice:
    """Canonical Hermite form of the lattice spanned by the columns."""
    return Lattice(cols)


def transition_matrix(M: Lattice, M2: Lattice):
    """g with M2 = g M expressed in M's basis: A^{-1} B (exact)."""
    A, B = M, M2
    if A.field is not B.field:
        F = common_field(A.field, B.field)
        A, B = A.to_field(F), B.to_field(F)
    return lm.mul(_inverse_hermite(A), B.basis)


def elementary_divisors(g):
    """Dominant exponent vector of g in GL_n(O) diag(t^mu) GL_n(O)."""
    d = lm.minor_valuations(g)
    n = len(d)
    if d[-1] == INF:
        raise LatticeError("singular transition matrix")
    mu = [0] * n
    prev = 0
    for k in range(1, n + 1):
        mu[n - k] = d[k - 1] - prev
        prev = d[k - 1]
    return Coweight(mu)


def relative_position(M: Lattice, M2: Lattice) -> Coweight:
    if M.n != M2.n:
        raise LatticeError("lattices of different rank")
    return elementary_divisors(transition_matrix(M, M2))


# --- symplectic forms and duality -----------------------------------------

class SymplecticForm:
    """Constant alternating form on L^{2n} given by its Gram matrix (ints of
    the prime field).  The default pairs e_i with e_{2n+1-i}:
    <e_i, e_{2n+1-j}> = delta_ij for i, j <= n."""

    def __init__(self, gram, p=None):
        self.gram = [list(r) for r in gram]
        self.dim = len(gram)
        self.p = p

    @classmethod
    def standard(cls, n2):
        if n2 % 2:
            raise LatticeError("symplectic space must have even dimension")
        n = n2 // 2
        J = [[0] * n2 for _ in range(n2)]
        for i in range(n):
            J[i][n2 - 1 - i] = 1
            J[n2 - 1 - i][i] = -1
        return cls(J)

    def matrix(self, F):
        return [[LaurentPoly.const(F, F.from_int(c)) for c in row] for row in self.gram]

    def pair(self, x, y):
        F = common_field(*[a.field for a in x], *[a.field for a in y])
        J = self.matrix(F)
        acc = LaurentPoly(F)
        for i in range(self.dim):
            if x[i].terms:
                for j in range(self.dim):
                    if J[i][j].terms and y[j].terms:
                        acc = acc + x[i] * J[i][j] * y[j]
        return acc

    def check(self, F):
        J = self.gram
        n = self.dim
        for i in range(n):
            if F.from_int(J[i][i]):
                raise LatticeError("form is not alternating")
            for j in range(n):
                if F.from_int(J[i][j] + J[j][i]):
                    raise LatticeError("form is not alternating")
        if lm.det(self.matrix(F)).is_zero():
            raise LatticeError("form is degenerate")


class StandardPairing(SymplecticForm):
    """The symmetric pairing with identity Gram matrix."""

    def __init__(self, n):
        super().__init__([[1 if i == j else 0 for j in range(n)] for i in range(n)])


def dual(M: Lattice, form: Optional[SymplecticForm] = None) -> Lattice:
    """M^perp = {x : <x, M> in O}: spanned by the columns of (A^T J^T)^{-1}."""
    if form is None:
        form = StandardPairing(M.n)
    J = form.matrix(M.field)
    AtJt = lm.transpose(lm.mul(J, M.basis))
    return Lattice(lm.lattice_inverse(AtJt))


# --- lattice chains ---------------------------------------------------------

class ChainError(LatticeError):
    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


@dataclass
class LatticeChain:
    """Periodic chain of type I: representatives i in I, 0 <= i < period.

    ``period`` is n (GL_n) or 2n (GSp_2n, acting on L^{2n}); it always equals
    the rank of the lattices.  M_{i + period} = t^{-1} M_i.
    """
    type: tuple
    lattices: dict
    defect: Optional[int] = None

    def __post_init__(self):
        self.type = tuple(sorted(set(int(i) for i in self.type)))
        if not self.type:
            raise ChainError("chain type must be nonempty")
        self.lattices = {int(i): M for i, M in self.lattices.items()}
        if set(self.lattices) != set(self.type):
            raise ChainError("lattices do not match the chain type")

    @classmethod
    def single(cls, M: Lattice, index=0):
        return cls((index,), {index: M})

    @property
    def n(self):
        return next(iter(self.lattices.values())).n

    @property
    def period(self):
        return self.n

    def member(self, i: int) -> Lattice:
        n = self.period
        k, r = divmod(i, n)
        if r not in self.lattices:
            raise ChainError(f"index {i} not in the chain type")
        return self.lattices[r].shift(-k)

    def restrict(self, J):
        J = tuple(sorted(set(j % self.period for j in J)))
        return LatticeChain(J, {j: self.lattices[j] for j in J}, self.defect)

    def map(self, fn):
        return LatticeChain(self.type, {i: fn(M) for i, M in self.lattices.items()}, self.defect)

    def __eq__(self, other):
        return (isinstance(other, LatticeChain) and self.type == other.type
                and all(self.lattices[i] == other.lattices[i] for i in self.type))

    def __hash__(self):
        return hash((self.type, tuple(self.lattices[i] for i in self.type)))


@dataclass
class ChainReport:
    ok: bool
    defect: Optional[int] = None
    failure: Optional[tuple] = None
    message: str = ""
    checks: list = dc_field(default_factory=list)

    def __bool__(self):
        return self.ok


def chain_validate(chain: LatticeChain, form: Optional[SymplecticForm] = None,
                   raise_on_failure=False) -> ChainReport:
    """Check inclusions, colengths, periodicity and (with a form) selfduality."""
    n = chain.period
    idx = list(chain.type)
    rep = ChainReport(ok=True)

    def fail(msg, pair):
        rep.ok = False
        rep.failure = pair
        rep.message = msg
        if raise_on_failure:
            raise ChainError(msg, pair)
        return rep

    for i in idx:
        if not 0 <= i < n:
            return fail(f"representative {i} outside [0, {n})", (i, i))
    seq = idx + [idx[0] + n]
    for a, b in zip(seq, seq[1:]):
        Ma, Mb = chain.member(a), chain.member(b)
        if not Mb.contains(Ma):
            return fail(f"M_{a} is not contained in M_{b}", (a, b))
        if Ma.colength_in(Mb) != b - a:
            return fail(f"length(M_{b}/M_{a}) = {Ma.colength_in(Mb)} != {b - a}", (a, b))
        rep.checks.append(("inclusion", a, b))
    if form is not None:
        for i in idx:
            if (-i) % n not in chain.lattices:
                return fail(f"type is not symmetric at {i}", (i, -i))
        i0 = idx[0]
        D = dual(chain.member(i0), form)
        target = chain.member(-i0)
        # M_i^perp = t^{-d} M_{-i}
        diff = target.volume - D.volume
        if diff % n:
            return fail(f"M_{i0}^perp is not a translate of M_{-i0}", (i0, -i0))
        d = diff // n
        for i in idx:
            Di = dual(chain.member(i), form)
            if Di != chain.member(-i + d * n):
                return fail(f"M_{i}^perp != M_{{-{i}+{d}*{n}}}", (i, -i))
        rep.defect = d
        if chain.defect is not None and chain.defect != d:
            return fail(f"stored defect {chain.defect} != computed {d}", (i0, -i0))
    return rep


def standard_chain_lattice(F, n, i):
    """Lambda_i = span(t^{-1} e_1, ..., t^{-1} e_i, e_{i+1}, ..., e_n), 0 <= i <= n."""
    return Lattice.diagonal(F, [-1] * i + [0] * (n - i))


def standard_chain(F, n, I=None):
    I = range(n) if I is None else I
    return LatticeChain(tuple(I), {i % n: standard_chain_lattice(F, n, i % n) for i in I})
