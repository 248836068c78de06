"""Finite-field towers with Frobenius and Laurent polynomials over them.

The working model of the coefficient field is ``L = F_{q^m}((t))`` with
``q = p^e``.  Frobenius ``sigma`` raises coefficients to the ``q``-th power
and fixes ``t``.  Elements of ``F_{p^N}`` are stored as plain ints whose
base-``p`` digits are the coordinates in the power basis of a fixed
Conway-style defining polynomial; multiplication goes through log tables.

Defining polynomials are chosen compatibly: the root of the degree ``N``
polynomial raised to ``(p^N - 1)/(p^d - 1)`` is the root of the degree
``d`` polynomial for every ``d | N``.  Embeddings are then a rescaling of
discrete logarithms.
"""
from __future__ import annotations

import math
from functools import lru_cache

MAX_FIELD_SIZE = 1 << 22


class FieldError(ArithmeticError):
    pass


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _is_prime(p):
    return p >= 2 and all(p % d for d in range(2, math.isqrt(p) + 1))


# --- polynomials over F_p as coefficient lists (low degree first) -------

def _pmod(a, f, p):
    a = list(a)
    df = len(f) - 1
    inv_lead = pow(f[-1], -1, p)
    while len(a) - 1 >= df and any(a):
        c = a[-1] * inv_lead % p
        if c:
            shift = len(a) - 1 - df
            for i, fc in enumerate(f):
                a[shift + i] = (a[shift + i] - c * fc) % p
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmulmod(a, b, f, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _pmod(out, f, p)


def _ppowmod(a, k, f, p):
    result = [1]
    base = _pmod(a, f, p)
    while k:
        if k & 1:
            result = _pmulmod(result, base, f, p)
        base = _pmulmod(base, base, f, p)
        k >>= 1
    return result


def _peval(g, alpha, f, p):
    """Evaluate g (over F_p) at alpha (a residue mod f), Horner."""
    acc = []
    for c in reversed(g):
        acc = _pmulmod(acc, alpha, f, p) if acc else []
        if c:
            acc = list(acc) + [0] * max(0, 1 - len(acc))
            acc[0] = (acc[0] + c) % p
            while acc and acc[-1] == 0:
                acc.pop()
    return acc


@lru_cache(maxsize=None)
def conway_polynomial(p: int, N: int) -> tuple:
    """Compatible primitive defining polynomial of degree N over F_p.

    Candidates are scanned with the coefficient of x^{N-1} most significant;
    the first primitive one whose root is compatible with every proper
    divisor degree is returned (coefficients low degree first, monic).
    """
    if not _is_prime(p):
        raise FieldError(f"p = {p} is not prime")
    Q = p ** N
    if Q > MAX_FIELD_SIZE:
        raise FieldError(f"field of size {p}^{N} exceeds the supported cap")
    order = Q - 1
    primes = _prime_factors(order) if order > 1 else []
    divisors = [d for d in range(1, N) if N % d == 0]
    maximal = [d for d in divisors if not any(d2 != d and d2 % d == 0 for d2 in divisors)]
    sub = {d: conway_polynomial(p, d) for d in maximal}
    x = [0, 1]
    for code in range(p ** N):
        # code's most significant digit is the x^{N-1} coefficient
        digits = []
        c = code
        for _ in range(N):
            digits.append(c % p)
            c //= p
        coeffs = list(reversed(digits)) + [1]   # c_0 .. c_{N-1}, 1
        if coeffs[0] == 0:
            continue
        f = coeffs
        if N == 1:
            root = (-f[0]) % p
            if p == 2:
                ok = root == 1
            else:
                ok = all(pow(root, order // l, p) != 1 for l in primes)
            if ok:
                return tuple(f)
            continue
        if _ppowmod(x, order, f, p) != [1]:
            continue
        if any(_ppowmod(x, order // l, f, p) == [1] for l in primes):
            continue
        good = True
        for d, fd in sub.items():
            alpha = _ppowmod(x, order // (p ** d - 1), f, p)
            if _peval(list(fd), alpha, f, p):
                good = False
                break
        if good:
            return tuple(f)
    raise FieldError(f"no compatible primitive polynomial for p={p}, N={N}")


class _Tables:
    """Log/antilog tables of F_{p^N} for the compatible defining polynomial."""

    def __init__(self, p, N):
        self.p, self.N = p, N
        self.Q = p ** N
        self.order = self.Q - 1
        f = conway_polynomial(p, N)
        self.poly = f
        Q, order = self.Q, self.order
        exp = [0] * (2 * order + 2)
        log = [-1] * Q
        v = 1
        if N == 1:
            g = (-f[0]) % p
            for i in range(order):
                exp[i] = v
                log[v] = i
                v = v * g % p
        elif p == 2:
            fcode = sum(c << i for i, c in enumerate(f))
            top = 1 << N
            for i in range(order):
                exp[i] = v
                log[v] = i
                v <<= 1
                if v & top:
                    v ^= fcode
        else:
            lead = p ** (N - 1)
            for i in range(order):
                exp[i] = v
                log[v] = i
                hi = v // lead
                v = (v - hi * lead) * p
                if hi:
                    # x^N = -(f_0 + ... + f_{N-1} x^{N-1})
                    w = 0
                    pw = 1
                    vv = v
                    for j in range(N):
                        dj = (vv % p - hi * f[j]) % p
                        w += dj * pw
                        vv //= p
                        pw *= p
                    v = w
        for i in range(order, 2 * order + 2):
            exp[i] = exp[i % order] if order else 1
        self.exp = exp
        self.log = log
        self.zech = None
        if p != 2:
            # zech[k] = log(1 + g^k), or -1 when 1 + g^k = 0
            zech = [0] * order
            for k in range(order):
                a = exp[k]
                c0 = a % p
                b = a - c0 + (c0 + 1) % p
                zech[k] = log[b] if b else -1
            self.zech = zech


@lru_cache(maxsize=None)
def _tables(p, N):
    return _Tables(p, N)


class FieldTower:
    """The working field F_{q^m} inside the tower over F_q, q = p^e.

    Elements are ints in ``range(q^m)``; 0 and 1 are the field's zero and one.
    """

    _cache: dict = {}

    def __new__(cls, p: int, e: int = 1, m: int = 1):
        key = (p, e, m)
        obj = cls._cache.get(key)
        if obj is None:
            if e < 1 or m < 1:
                raise FieldError("degrees must be positive")
            obj = super().__new__(cls)
            obj._setup(p, e, m)
            cls._cache[key] = obj
        return obj

    def __getnewargs__(self):
        return (self.p, self.e, self.m)

    def _setup(self, p, e, m):
        self.p, self.e, self.m = p, e, m
        self.q = p ** e
        self.N = e * m
        T = _tables(p, self.N)
        self.tables = T
        self.Q = T.Q
        self.order = T.order
        self._exp = T.exp
        self._log = T.log
        self._zech = T.zech
        self._neg_one_log = T.order // 2 if p != 2 else 0

    def __repr__(self):
        return f"FieldTower(p={self.p}, e={self.e}, m={self.m})"

    def __reduce__(self):
        return (FieldTower, (self.p, self.e, self.m))

    @property
    def size(self):
        return self.Q

    # --- arithmetic on ints -------------------------------------------------
    def add(self, a, b):
        if self.p == 2:
            return a ^ b
        if not a:
            return b
        if not b:
            return a
        la, lb = self._log[a], self._log[b]
        z = self._zech[(lb - la) % self.order]
        if z < 0:
            return 0
        return self._exp[la + z]

    def neg(self, a):
        if self.p == 2 or not a:
            return a
        return self._exp[self._log[a] + self._neg_one_log]

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if not a or not b:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("division by zero")
        return self._exp[(self.order - self._log[a]) % self.order] if self.order else 1

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, k):
        if not a:
            if k <= 0:
                raise ZeroDivisionError("division by zero")
            return 0
        if not self.order:
            return 1
        return self._exp[(self._log[a] * k) % self.order]

    def gen(self):
        """The fixed multiplicative generator."""
        return self._exp[1] if self.order else 1

    def element_from_log(self, k):
        return self._exp[k % self.order] if self.order else 1

    def log(self, a):
        if not a:
            raise ValueError("log of zero")
        return self._log[a]

    def from_int(self, c):
        """Image of the integer c in the prime field."""
        return c % self.p

    def frob(self, a, k=1):
        """sigma^k(a) = a^(q^k); negative k allowed."""
        if not a or not self.order:
            return a
        k %= self.m
        if not k:
            return a
        return self._exp[(self._log[a] * pow(self.q, k, self.order)) % self.order]

    def elements(self):
        return range(self.Q)

    def nonzero(self):
        return range(1, self.Q)

    def coords(self, a):
        """Coordinates over F_p in the power basis."""
        out = []
        for _ in range(self.N):
            out.append(a % self.p)
            a //= self.p
        return out

    def from_coords(self, cs):
        if len(cs) > self.N:
            raise FieldError("too many coordinates")
        v = 0
        for c in reversed(list(cs)):
            v = v * self.p + (int(c) % self.p)
        return v

    def degree_of(self, a):
        """Smallest d | m with a in F_{q^d}."""
        for d in range(1, self.m + 1):
            if self.m % d == 0 and self.frob(a, d) == a:
                return d
        return self.m

    def extension(self, k):
        return FieldTower(self.p, self.e, self.m * k)

    def embed(self, a, other: "FieldTower"):
        """Image of a under the compatible embedding into other."""
        if other is self:
            return a
        if other.p != self.p or other.e != self.e or other.m % self.m:
            raise FieldError(f"cannot embed {self} into {other}")
        if not a:
            return 0
        if not self.order:
            return 1
        scale = other.order // self.order
        return other._exp[self._log[a] * scale]

    def restrict(self, a, sub: "FieldTower"):
        """Inverse of embed for elements that lie in the subfield."""
        if sub is self:
            return a
        if not a:
            return 0
        scale = self.order // sub.order
        la = self._log[a]
        if la % scale:
            raise FieldError("element does not lie in the subfield")
        return sub._exp[la // scale]

    def random(self, rng, nonzero=False):
        if nonzero:
            return rng.randrange(1, self.Q)
        return rng.randrange(self.Q)


def common_field(*fields):
    """Smallest field of the tower containing all given fields."""
    base = fields[0]
    m = base.m
    for F in fields[1:]:
        if F.p != base.p or F.e != base.e:
            raise FieldError("fields from different towers")
        m = m * F.m // math.gcd(m, F.m)
    return FieldTower(base.p, base.e, m)


class FieldElem:
    """Boxed element of a FieldTower with operator overloading."""

    __slots__ = ("field", "value")

    def __init__(self, field, value):
        self.field = field
        self.value = value

    def _lift(self, other):
        if isinstance(other, FieldElem):
            F = common_field(self.field, other.field)
            return F, self.field.embed(self.value, F), other.field.embed(other.value, F)
        if isinstance(other, int):
            return self.field, self.value, self.field.from_int(other)
        return None

    def __add__(self, other):
        r = self._lift(other)
        if r is None:
            return NotImplemented
        F, a, b = r
        return FieldElem(F, F.add(a, b))

    __radd__ = __add__

    def __sub__(self, other):
        r = self._lift(other)
        if r is None:
            return NotImplemented
        F, a, b = r
        return FieldElem(F, F.sub(a, b))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return FieldElem(self.field, self.field.neg(self.value))

    def __mul__(self, other):
        r = self._lift(other)
        if r is None:
            return NotImplemented
        F, a, b = r
        return FieldElem(F, F.mul(a, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        r = self._lift(other)
        if r is None:
            return NotImplemented
        F, a, b = r
        return FieldElem(F, F.div(a, b))

    def __pow__(self, k):
        return FieldElem(self.field, self.field.pow(self.value, k))

    def inverse(self):
        return FieldElem(self.field, self.field.inv(self.value))

    def __eq__(self, other):
        if isinstance(other, int):
            other = FieldElem(self.field, self.field.from_int(other))
        if not isinstance(other, FieldElem):
            return NotImplemented
        F, a, b = self._lift(other)
        return a == b

    def __hash__(self):
        # hash through the smallest subfield so that embedded copies agree
        F = self.field
        d = F.degree_of(self.value)
        return hash((F.p, F.e, d, F.restrict(self.value, FieldTower(F.p, F.e, d))))

    def __bool__(self):
        return self.value != 0

    def coords(self):
        return self.field.coords(self.value)

    def __repr__(self):
        return f"FieldElem({self.coords()} in F_{self.field.Q})"


INF = math.inf


class LaurentPoly:
    """Finite Laurent polynomial sum c_k t^k over a FieldTower.

    ``terms`` maps exponent -> nonzero int coefficient.  ``prec`` is None for
    exact values, otherwise the value is only known modulo t^prec.
    """

    __slots__ = ("field", "terms", "prec")

    def __init__(self, field, terms=None, prec=None):
        self.field = field
        if terms:
            self.terms = {k: c for k, c in terms.items() if c}
        else:
            self.terms = {}
        self.prec = prec
        if prec is not None:
            self.terms = {k: c for k, c in self.terms.items() if k < prec}

    # constructors
    @classmethod
    def zero(cls, field):
        return cls(field)

    @classmethod
    def one(cls, field):
        return cls(field, {0: 1})

    @classmethod
    def monomial(cls, field, k, c=1):
        return cls(field, {k: c})

    @classmethod
    def const(cls, field, c):
        return cls(field, {0: c})

    @classmethod
    def from_pairs(cls, field, pairs):
        terms = {}
        for k, c in pairs:
            if isinstance(c, FieldElem):
                c = c.field.embed(c.value, field)
            elif isinstance(c, (list, tuple)):
                c = field.from_coords(c)
            else:
                c = field.from_int(int(c))
            if c:
                terms[int(k)] = field.add(terms.get(int(k), 0), c)
        return cls(field, terms)

    # basic queries
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def val(self):
        return min(self.terms) if self.terms else INF

    def degree(self):
        return max(self.terms) if self.terms else -INF

    def coeff(self, k):
        return self.terms.get(k, 0)

    def is_monomial(self):
        return len(self.terms) == 1

    def is_exact(self):
        return self.prec is None

    def key(self):
        return tuple(sorted(self.terms.items()))

    def pairs(self):
        return sorted(self.terms.items())

    # field movement
    def to_field(self, F):
        if F is self.field:
            return self
        emb = self.field.embed
        return LaurentPoly(F, {k: emb(c, F) for k, c in self.terms.items()}, self.prec)

    def _common(self, other):
        if other.field is self.field:
            return self, other
        F = common_field(self.field, other.field)
        return self.to_field(F), other.to_field(F)

    @staticmethod
    def _minprec(a, b):
        if a is None:
            return b
        if b is None:
            return a
        return min(a, b)

    # arithmetic
    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(self.field, self.field.from_int(other))
        a, b = self._common(other)
        F = a.field
        out = dict(a.terms)
        for k, c in b.terms.items():
            v = F.add(out.get(k, 0), c)
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return LaurentPoly(F, out, self._minprec(a.prec, b.prec))

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return LaurentPoly(F, {k: F.neg(c) for k, c in self.terms.items()}, self.prec)

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(self.field, self.field.from_int(other))
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            c = self.field.from_int(other)
            return self.scale(c)
        a, b = self._common(other)
        F = a.field
        if not a.terms or not b.terms:
            prec = None
            if a.prec is not None or b.prec is not None:
                prec = self._minprec(
                    None if a.prec is None else a.prec + (b.val() if b.terms else 0),
                    None if b.prec is None else b.prec + (a.val() if a.terms else 0))
            return LaurentPoly(F, {}, prec)
        mul, add = F.mul, F.add
        out = {}
        for i, x in a.terms.items():
            for j, y in b.terms.items():
                k = i + j
                v = add(out.get(k, 0), mul(x, y))
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
        prec = None
        if a.prec is not None:
            prec = a.prec + b.val()
        if b.prec is not None:
            prec = self._minprec(prec, b.prec + a.val())
        return LaurentPoly(F, out, prec)

    __rmul__ = __mul__

    def scale(self, c):
        """Multiply by a field element given as int of self.field."""
        if not c:
            return LaurentPoly(self.field, {}, self.prec)
        F = self.field
        return LaurentPoly(F, {k: F.mul(v, c) for k, v in self.terms.items()}, self.prec)

    def shift(self, k):
        """Multiply by t^k."""
        return LaurentPoly(self.field, {e + k: c for e, c in self.terms.items()},
                           None if self.prec is None else self.prec + k)

    def truncate(self, N):
        """Drop terms of exponent >= N (exact result, no precision marker)."""
        return LaurentPoly(self.field, {k: c for k, c in self.terms.items() if k < N})

    def high_part(self, N):
        """Terms of exponent >= N."""
        return LaurentPoly(self.field, {k: c for k, c in self.terms.items() if k >= N})

    def frob(self, k=1):
        F = self.field
        if k % F.m == 0:
            return self
        return LaurentPoly(F, {e: F.frob(c, k) for e, c in self.terms.items()}, self.prec)

    def __pow__(self, k):
        if k < 0:
            if self.is_monomial():
                (e, c), = self.terms.items()
                return LaurentPoly(self.field, {e * k: self.field.pow(c, k)})
            raise FieldError("negative power of a non-monomial")
        r = LaurentPoly.one(self.field)
        base = self
        while k:
            if k & 1:
                r = r * base
            base = base * base
            k >>= 1
        return r

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(self.field, self.field.from_int(other))
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        a, b = self._common(other)
        return a.terms == b.terms and a.prec == b.prec

    def __hash__(self):
        return hash((self.field.p, self.field.e, self.key(), self.prec))

    def __repr__(self):
        if not self.terms:
            s = "0"
        else:
            parts = []
            F = self.field
            for k, c in sorted(self.terms.items()):
                cs = str(c) if F.N == 1 else "g^%d" % F.log(c) if c != 1 else "1"
                parts.append(cs if k == 0 else f"{cs}*t^{k}")
            s = " + ".join(parts)
        if self.prec is not None:
            s += f" + O(t^{self.prec})"
        return s


def frobenius_apply(x, k: int = 1):
    """Apply sigma^k coefficientwise (fixing t); k may be negative."""
    if isinstance(x, FieldElem):
        return FieldElem(x.field, x.field.frob(x.value, k))
    if isinstance(x, LaurentPoly):
        return x.frob(k)
    raise TypeError(f"cannot apply Frobenius to {type(x).__name__}")


def valuation(f: LaurentPoly):
    """t-adic valuation; math.inf for zero."""
    return f.val()


def series_invert(f: LaurentPoly, N: int) -> LaurentPoly:
    """Inverse of f, truncated so that f*g - 1 has valuation >= N.

    Monomials are inverted exactly.  Otherwise f = t^v u with u a unit and
    g = t^{-v} (u^{-1} mod t^N), returned with precision N - v.
    """
    if f.is_zero():
        raise ZeroDivisionError("division by zero")
    F = f.field
    v = f.val()
    if f.is_monomial() and f.prec is None:
        c = f.terms[v]
        return LaurentPoly(F, {-v: F.inv(c)})
    u = {k - v: c for k, c in f.terms.items()}
    N_eff = N if f.prec is None else min(N, f.prec - v)
    inv0 = F.inv(u[0])
    g = {}
    # g_j = -inv0 * sum_{i=1..j} u_i g_{j-i}
    for j in range(N_eff):
        if j == 0:
            g[0] = inv0
            continue
        acc = 0
        for i in range(1, j + 1):
            ui = u.get(i)
            if ui:
                gj = g.get(j - i)
                if gj:
                    acc = F.add(acc, F.mul(ui, gj))
        if acc:
            g[j] = F.neg(F.mul(inv0, acc))
    return LaurentPoly(F, {k - v: c for k, c in g.items()}, N_eff - v)


def unit_inverse_mod(u: LaurentPoly, N: int) -> LaurentPoly:
    """For u with val 0, the exact polynomial w of degree < N with u*w = 1 mod t^N."""
    g = series_invert(u, N)
    return LaurentPoly(u.field, g.terms)
