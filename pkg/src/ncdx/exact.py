"""Exact coefficient tower: sparse polynomials over Q and rational functions.

All polynomials live in Q[x, u, z, t].  ``u`` stands for ``exp(x/m)`` and is
differentiated by ``d/dx u = u/m``; negative powers of ``u`` are carried in
denominators.  Monomials are compared lexicographically with ``t > z > u > x``.
Values are immutable once built.
"""

import math
from functools import lru_cache, reduce

from ._scalar import Q, Rat, RAT_TYPES, rat_text
from .errors import UnknownVariable, ZeroDenominator

VARIABLES = ("x", "u", "z", "t")
_INDEX = {name: i for i, name in enumerate(VARIABLES)}
_ZERO_EXP = (0, 0, 0, 0)
_ONE = Rat(1)


def _key(e):
    return (e[3], e[2], e[1], e[0])


def _unit_exp(i, k=1):
    e = [0, 0, 0, 0]
    e[i] = k
    return tuple(e)


class MPoly:
    """Sparse multivariate polynomial with rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for e, c in terms.items():
                e = tuple(int(k) for k in e)
                if len(e) != 4 or min(e) < 0:
                    raise ValueError("bad exponent vector %r" % (e,))
                c = Q(c)
                if c:
                    clean[e] = clean.get(e, 0) + c
                    if not clean[e]:
                        del clean[e]
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms):
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c):
        c = Q(c)
        return cls._raw({_ZERO_EXP: c} if c else {})

    @classmethod
    def var(cls, name, power=1):
        if name not in _INDEX:
            raise UnknownVariable("unknown variable %r" % (name,))
        return cls._raw({_unit_exp(_INDEX[name], power): _ONE})

    @classmethod
    def coerce(cls, v):
        if isinstance(v, MPoly):
            return v
        if isinstance(v, RAT_TYPES) or isinstance(v, str):
            return cls.const(v)
        raise TypeError("cannot make a polynomial from %r" % (v,))

    # -- inspection ---------------------------------------------------------
    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self):
        return not self._terms

    def is_constant(self):
        t = self._terms
        return not t or (len(t) == 1 and _ZERO_EXP in t)

    def is_one(self):
        t = self._terms
        return len(t) == 1 and t.get(_ZERO_EXP) == 1

    def is_monomial(self):
        return len(self._terms) == 1

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self._terms.get(_ZERO_EXP, Rat(0))

    def variables(self):
        found = set()
        for e in self._terms:
            for i in range(4):
                if e[i]:
                    found.add(VARIABLES[i])
        return found

    def degree(self, name):
        i = _INDEX[name]
        return max((e[i] for e in self._terms), default=-1)

    def min_degree(self, name):
        i = _INDEX[name]
        return min((e[i] for e in self._terms), default=0)

    def leading_exp(self):
        return max(self._terms, key=_key)

    def leading_coeff(self):
        return self._terms[self.leading_exp()]

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, MPoly):
            try:
                other = MPoly.coerce(other)
            except TypeError:
                return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return MPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, MPoly):
            try:
                other = MPoly.coerce(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = Q(c)
        if not c:
            return MPoly._raw({})
        if c == 1:
            return self
        return MPoly._raw({e: v * c for e, v in self._terms.items()})

    def mul_term(self, exp, c):
        if not c:
            return MPoly._raw({})
        a0, a1, a2, a3 = exp
        return MPoly._raw({(e[0] + a0, e[1] + a1, e[2] + a2, e[3] + a3): v * c
                           for e, v in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            if isinstance(other, RAT_TYPES):
                return self.scale(other)
            return NotImplemented
        a, b = self._terms, other._terms
        if not a or not b:
            return MPoly._raw({})
        if len(a) > len(b):
            a, b = b, a
        out = {}
        get = out.get
        for ea, ca in a.items():
            a0, a1, a2, a3 = ea
            for eb, cb in b.items():
                e = (a0 + eb[0], a1 + eb[1], a2 + eb[2], a3 + eb[3])
                s = get(e)
                out[e] = ca * cb if s is None else s + ca * cb
        return MPoly._raw({e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        result = MPoly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self._terms == other._terms
        if isinstance(other, RAT_TYPES):
            return self._terms == ({_ZERO_EXP: Q(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def diff(self, name):
        """Partial derivative with respect to ``name``."""
        i = _INDEX[name]
        out = {}
        for e, c in self._terms.items():
            k = e[i]
            if k:
                f = list(e)
                f[i] = k - 1
                out[tuple(f)] = c * k
        return MPoly._raw(out)

    def evaluate(self, **values):
        """Substitute rationals for some variables; returns an MPoly."""
        idx = [(_INDEX[k], Q(v)) for k, v in values.items()]
        out = MPoly._raw({})
        for e, c in self._terms.items():
            f = list(e)
            for i, v in idx:
                c = c * v ** f[i]
                f[i] = 0
            out = out + MPoly._raw({tuple(f): c} if c else {})
        return out

    # -- rendering ----------------------------------------------------------
    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda it: _key(it[0]), reverse=True)

    def __str__(self):
        return poly_text(self)

    def __repr__(self):
        return "MPoly(%r)" % poly_text(self)


def _monomial_text(e, sep="*", power="^"):
    parts = []
    for i in (0, 1, 2, 3):
        k = e[i]
        if k == 1:
            parts.append(VARIABLES[i])
        elif k:
            parts.append("%s%s%d" % (VARIABLES[i], power, k))
    return sep.join(parts)


def poly_text(p):
    if p.is_zero():
        return "0"
    out = []
    for e, c in p.sorted_terms():
        mono = _monomial_text(e)
        neg = c < 0
        a = -c if neg else c
        if not mono:
            body = rat_text(a)
        elif a == 1:
            body = mono
        else:
            body = rat_text(a) + "*" + mono
        if not out:
            out.append("-" + body if neg else body)
        else:
            out.append(("- " if neg else "+ ") + body)
    return " ".join(out)


# ---------------------------------------------------------------------------
# Exact division and gcd
# ---------------------------------------------------------------------------

class _NotDivisible(ArithmeticError):
    pass


def divexact(a, b):
    """Return ``a / b``; raise ArithmeticError unless ``b`` divides ``a``."""
    if b.is_zero():
        raise ZeroDenominator("division by the zero polynomial")
    if a.is_zero():
        return a
    if b.is_constant():
        return a.scale(1 / b.constant_value())
    lb = b.leading_exp()
    lc = b._terms[lb]
    rest = [(e, c) for e, c in b._terms.items() if e != lb]
    r = dict(a._terms)
    quot = {}
    while r:
        le = max(r, key=_key)
        q = (le[0] - lb[0], le[1] - lb[1], le[2] - lb[2], le[3] - lb[3])
        if min(q) < 0:
            raise _NotDivisible("%s does not divide %s" % (b, a))
        c = r.pop(le) / lc
        quot[q] = c
        for e, v in rest:
            f = (e[0] + q[0], e[1] + q[1], e[2] + q[2], e[3] + q[3])
            s = r.get(f, 0) - c * v
            if s:
                r[f] = s
            else:
                r.pop(f, None)
    return MPoly._raw(quot)


def _integer_primitive_factor(p):
    """Rational s with s*p integral, primitive, positive leading coefficient."""
    coeffs = list(p._terms.values())
    den = reduce(lambda acc, c: acc * int(c.denominator) // math.gcd(acc, int(c.denominator)),
                 coeffs, 1)
    num = reduce(math.gcd, (int(c.numerator) * (den // int(c.denominator)) for c in coeffs), 0)
    s = Rat(den, num)
    if p.leading_coeff() < 0:
        s = -s
    return s


def primitive_normalize(p):
    """Scale ``p`` to integer coefficients with content 1 and positive lead."""
    if p.is_zero():
        return p
    return p.scale(_integer_primitive_factor(p))


def _to_uni(p, i):
    """View ``p`` as a dense list of coefficients in variable index ``i``."""
    deg = max(e[i] for e in p._terms)
    parts = [dict() for _ in range(deg + 1)]
    for e, c in p._terms.items():
        f = list(e)
        k = f[i]
        f[i] = 0
        parts[k][tuple(f)] = c
    return [MPoly._raw(d) for d in parts]


def _from_uni(coeffs, i):
    out = {}
    for k, c in enumerate(coeffs):
        for e, v in c._terms.items():
            f = list(e)
            f[i] = k
            out[tuple(f)] = v
    return MPoly._raw(out)


def _trim(coeffs):
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    return coeffs


def _prem(a, b):
    """Pseudo-remainder of dense univariate lists (degrees len-1)."""
    r = list(a)
    db = len(b) - 1
    lcb = b[-1]
    e = len(a) - len(b) + 1
    while r and len(r) - 1 >= db:
        lcr = r[-1]
        shift = len(r) - 1 - db
        r = [c * lcb for c in r]
        for k in range(db + 1):
            r[k + shift] = r[k + shift] - lcr * b[k]
        _trim(r)
        e -= 1
    if e > 0 and r:
        f = lcb ** e
        r = [c * f for c in r]
    return r


def _content(coeffs):
    g = MPoly.const(0)
    for c in coeffs:
        g = poly_gcd(g, c)
        if g.is_one():
            break
    return g


def _subresultant_gcd(a, b):
    """GCD of primitive univariate (dense list) polynomials, degree a >= b."""
    g = MPoly.const(1)
    h = MPoly.const(1)
    while True:
        delta = len(a) - len(b)
        r = _prem(a, b)
        if not r:
            break
        if len(r) == 1:
            return [MPoly.const(1)]
        a = b
        div = g * h ** delta
        b = [divexact(c, div) for c in r]
        g = a[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = divexact(g ** delta, h ** (delta - 1))
    cont = _content(b)
    return [divexact(c, cont) for c in b]


def _dense(p, i):
    out = [Rat(0)] * (p.degree(VARIABLES[i]) + 1)
    for e, c in p._terms.items():
        out[e[i]] = c
    return out


def _is_prime(n):
    # Miller-Rabin with these bases is deterministic below 3.3e24
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, r = n - 1, 0
    while d % 2 == 0:
        d, r = d // 2, r + 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


_PRIMES = []


def _primes():
    k = 0
    while True:
        if k == len(_PRIMES):
            c = (_PRIMES[-1] if _PRIMES else (1 << 62) + 1) - 2
            while not _is_prime(c):
                c -= 2
            _PRIMES.append(c)
        yield _PRIMES[k]
        k += 1


def _itrim(coeffs):
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return coeffs


def _gcd_mod(a, b, p):
    """Monic gcd of dense integer lists modulo ``p``."""
    a = [c % p for c in a]
    b = [c % p for c in b]
    _itrim(a)
    _itrim(b)
    while b:
        inv = pow(b[-1], -1, p)
        db = len(b) - 1
        while len(a) - 1 >= db:
            f = a[-1] * inv % p
            shift = len(a) - 1 - db
            for k in range(db):
                a[k + shift] = (a[k + shift] - f * b[k]) % p
            a.pop()
            _itrim(a)
            if not a:
                break
        a, b = b, a
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def _int_primitive(coeffs):
    den = 1
    for c in coeffs:
        den = math.lcm(den, int(c.denominator))
    out = [int(c.numerator) * (den // int(c.denominator)) for c in coeffs]
    g = reduce(math.gcd, out)
    return tuple(c // g for c in out)


def _int_divides(d, a):
    """Exact division test in Z[x]; ``d`` primitive (Gauss: same answer as over Q)."""
    r = list(a)
    ld, dd = d[-1], len(d) - 1
    while len(r) - 1 >= dd:
        q, m = divmod(r[-1], ld)
        if m:
            return False
        shift = len(r) - 1 - dd
        for k in range(dd + 1):
            r[k + shift] -= q * d[k]
        _itrim(r)
        if not r:
            return True
    return not r


@lru_cache(maxsize=1 << 14)
def _modular_gcd(a, b):
    """GCD of primitive integer polynomials (tuples): images mod large primes, CRT, trial division."""
    gl = math.gcd(a[-1], b[-1])
    best = min(len(a), len(b)) + 1
    acc, mod, last = None, 1, None
    for p in _primes():
        if a[-1] % p == 0 or b[-1] % p == 0:
            continue
        gp = _gcd_mod(a, b, p)
        if len(gp) == 1:
            return (1,)
        if len(gp) > best:
            continue  # unlucky prime
        gp = [c * gl % p for c in gp]
        if len(gp) < best:
            best, acc, mod, last = len(gp), gp, p, None
        else:
            f = pow(mod, -1, p)
            acc = [x + mod * ((y - x) * f % p) for x, y in zip(acc, gp)]
            mod *= p
        half = mod // 2
        cand = [c - mod if c > half else c for c in acc]
        g = reduce(math.gcd, cand)
        cand = [c // g for c in cand]
        if cand == last and _int_divides(cand, a) and _int_divides(cand, b):
            return tuple(cand)
        last = cand


def _uni_gcd(a, b, i):
    """GCD of two polynomials in the single variable ``VARIABLES[i]``."""
    za, zb = _int_primitive(_dense(a, i)), _int_primitive(_dense(b, i))
    if za > zb:
        za, zb = zb, za
    g = _modular_gcd(za, zb)
    return primitive_normalize(MPoly._raw({_unit_exp(i, k): Rat(c) for k, c in enumerate(g) if c}))


def _monomial_gcd(mono, p):
    (e0,) = mono._terms
    low = list(e0)
    for e in p._terms:
        for i in range(4):
            if e[i] < low[i]:
                low[i] = e[i]
    return MPoly._raw({tuple(low): _ONE})


def poly_gcd(a, b):
    """Greatest common divisor, normalized to content 1 and positive lead.

    ``gcd(0, 0) = 0``.  Uses content extraction and a subresultant remainder
    sequence on the recursive view in the highest variable present.
    """
    if a.is_zero():
        return primitive_normalize(b)
    if b.is_zero():
        return primitive_normalize(a)
    if a.is_constant() or b.is_constant():
        return MPoly.const(1)
    if a.is_monomial():
        return _monomial_gcd(a, b)
    if b.is_monomial():
        return _monomial_gcd(b, a)
    va, vb = a.variables(), b.variables()
    if len(va) == 1 and va == vb:
        return _uni_gcd(a, b, _INDEX[next(iter(va))])
    for i in (3, 2, 1, 0):
        name = VARIABLES[i]
        ina, inb = name in va, name in vb
        if ina and not inb:
            return poly_gcd(_content(_to_uni(a, i)), b)
        if inb and not ina:
            return poly_gcd(a, _content(_to_uni(b, i)))
    i = max(_INDEX[v] for v in va)
    ua, ub = _to_uni(a, i), _to_uni(b, i)
    ca, cb = _content(ua), _content(ub)
    ua = [divexact(c, ca) for c in ua]
    ub = [divexact(c, cb) for c in ub]
    pa, pb = _from_uni(ua, i), _from_uni(ub, i)
    if pa.variables() != pb.variables():
        # a variable left only one primitive part: reduce by content instead
        return primitive_normalize(poly_gcd(pa, pb) * poly_gcd(ca, cb))
    if len(ua) < len(ub):
        ua, ub = ub, ua
    g = _from_uni(_subresultant_gcd(ua, ub), i) * poly_gcd(ca, cb)
    return primitive_normalize(g)


def poly_lcm(a, b):
    if a.is_zero() or b.is_zero():
        return MPoly.const(0)
    return primitive_normalize(divexact(a * b, poly_gcd(a, b)))


def squarefree_part(p, name):
    """Squarefree part of a polynomial in the single variable ``name``."""
    if p.is_constant():
        return MPoly.const(1)
    return primitive_normalize(divexact(p, poly_gcd(p, p.diff(name))))


# ---------------------------------------------------------------------------
# Rational functions
# ---------------------------------------------------------------------------

_P_ZERO = MPoly._raw({})
_P_ONE = MPoly._raw({_ZERO_EXP: _ONE})


def ratfunc_normalize(num, den):
    """Cancel ``num/den`` to lowest terms with a canonical denominator."""
    num, den = MPoly.coerce(num), MPoly.coerce(den)
    if den.is_zero():
        raise ZeroDenominator("zero denominator")
    if num.is_zero():
        return RatFunc._make(_P_ZERO, _P_ONE)
    if den.is_constant():
        return RatFunc._make(num.scale(1 / den.constant_value()), _P_ONE)
    g = poly_gcd(num, den)
    if not g.is_one():
        num, den = divexact(num, g), divexact(den, g)
    s = _integer_primitive_factor(den)
    if s != 1:
        num, den = num.scale(s), den.scale(s)
    if den.is_one():
        den = _P_ONE
    return RatFunc._make(num, den)


def _canonical(num, den):
    """Fix the unit of an already coprime pair."""
    if num.is_zero():
        return RatFunc._make(_P_ZERO, _P_ONE)
    if den.is_constant():
        return RatFunc._make(num.scale(1 / den.constant_value()), _P_ONE)
    s = _integer_primitive_factor(den)
    if s != 1:
        num, den = num.scale(s), den.scale(s)
    return RatFunc._make(num, den)


class RatFunc:
    """Element of Q(x, u, z, t) kept in lowest terms.

    The denominator has integer coefficients with content 1 and a positive
    leading coefficient, so equality is componentwise.
    """

    __slots__ = ("num", "den", "_hash")

    def __new__(cls, num=0, den=1):
        if isinstance(num, RatFunc) and den == 1:
            return num
        if isinstance(num, RatFunc) or isinstance(den, RatFunc):
            return as_ratfunc(num) / as_ratfunc(den)
        return ratfunc_normalize(num, den)

    @classmethod
    def _make(cls, num, den):
        f = object.__new__(cls)
        f.num = num
        f.den = den
        f._hash = None
        return f

    @classmethod
    def var(cls, name, power=1):
        if power >= 0:
            return cls._make(MPoly.var(name, power), _P_ONE)
        return cls._make(_P_ONE, MPoly.var(name, -power))

    # -- predicates ---------------------------------------------------------
    def is_zero(self):
        return not self.num._terms

    def is_one(self):
        return self.den.is_one() and self.num.is_one()

    def is_polynomial(self):
        return self.den.is_one()

    def is_constant(self):
        return self.den.is_one() and self.num.is_constant()

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("%s is not constant" % self)
        return self.num.constant_value()

    def variables(self):
        return self.num.variables() | self.den.variables()

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, RatFunc):
            try:
                other = as_ratfunc(other)
            except TypeError:
                return NotImplemented
        if not other.num._terms:
            return self
        if not self.num._terms:
            return other
        if self.den.is_one() and other.den.is_one():
            return RatFunc._make(self.num + other.num, _P_ONE)
        if self.den == other.den:
            return ratfunc_normalize(self.num + other.num, self.den)
        if other.den.is_one():
            return RatFunc._make(self.num + other.num * self.den, self.den)
        if self.den.is_one():
            return RatFunc._make(self.num * other.den + other.num, other.den)
        # Henrici: only the gcd of the denominators can cancel
        g = poly_gcd(self.den, other.den)
        if g.is_one():
            return RatFunc._make(self.num * other.den + other.num * self.den,
                                 self.den * other.den)
        d1, d2 = divexact(self.den, g), divexact(other.den, g)
        t = self.num * d2 + other.num * d1
        if not t._terms:
            return ZERO
        h = poly_gcd(t, g)
        if not h.is_one():
            t, g = divexact(t, h), divexact(g, h)
        return _canonical(t, d1 * d2 * g)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._make(-self.num, self.den)

    def __sub__(self, other):
        if not isinstance(other, RatFunc):
            try:
                other = as_ratfunc(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, RatFunc):
            if isinstance(other, RAT_TYPES):
                if not other:
                    return ZERO
                return RatFunc._make(self.num.scale(other), self.den)
            if isinstance(other, MPoly):
                other = RatFunc._make(other, _P_ONE)
            else:
                return NotImplemented
        if not self.num._terms or not other.num._terms:
            return ZERO
        if self.den.is_one() and other.den.is_one():
            return RatFunc._make(self.num * other.num, _P_ONE)
        if self.num.is_constant() and other.num.is_constant() \
                and self.den.is_one() != other.den.is_one():
            c = self.num.constant_value() * other.num.constant_value()
            return RatFunc._make(MPoly.const(c), self.den * other.den)
        a, b, c, d = self.num, other.num, self.den, other.den
        g1 = poly_gcd(a, d)
        if not g1.is_one():
            a, d = divexact(a, g1), divexact(d, g1)
        g2 = poly_gcd(b, c)
        if not g2.is_one():
            b, c = divexact(b, g2), divexact(c, g2)
        return _canonical(a * b, c * d)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDenominator("inverse of zero")
        return ratfunc_normalize(self.den, self.num)

    def __truediv__(self, other):
        if not isinstance(other, RatFunc):
            try:
                other = as_ratfunc(other)
            except TypeError:
                return NotImplemented
        if other.is_zero():
            raise ZeroDenominator("division by zero")
        if other.is_constant():
            return RatFunc._make(self.num.scale(1 / other.constant_value()), self.den)
        return ratfunc_normalize(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return as_ratfunc(other) / self

    def __pow__(self, k):
        if not isinstance(k, int):
            raise ValueError("integer powers only")
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc._make(self.num ** k, self.den ** k)

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            try:
                other = as_ratfunc(other)
            except TypeError:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def evaluate(self, **values):
        return RatFunc(self.num.evaluate(**values), self.den.evaluate(**values))

    def __str__(self):
        return ratfunc_text(self)

    def __repr__(self):
        return "RatFunc(%r)" % ratfunc_text(self)


def _wrap(p, allow_sign):
    text = poly_text(p)
    if p.is_monomial() and (allow_sign or not text.startswith("-")):
        return text
    return "(" + text + ")"


def ratfunc_text(f):
    if f.den.is_one():
        return poly_text(f.num)
    return "%s/%s" % (_wrap(f.num, True), _wrap(f.den, False))


def as_ratfunc(v):
    if isinstance(v, RatFunc):
        return v
    if isinstance(v, MPoly):
        return RatFunc._make(v, _P_ONE)
    if isinstance(v, RAT_TYPES):
        return RatFunc._make(MPoly.const(v), _P_ONE)
    if isinstance(v, str):
        from .parse import parse_expr
        return parse_expr(v)
    raise TypeError("cannot coerce %r to a rational function" % (v,))


ZERO = RatFunc._make(_P_ZERO, _P_ONE)
ONE = RatFunc._make(_P_ONE, _P_ONE)
X = RatFunc.var("x")
U = RatFunc.var("u")
Z = RatFunc.var("z")
T = RatFunc.var("t")


# ---------------------------------------------------------------------------
# Derivations
# ---------------------------------------------------------------------------

class Derivation:
    """A derivation of Q(x, u, z, t).

    ``Derivation("x", m)`` sends x -> 1, u -> u/m, z, t -> 0; ``"z"`` and
    ``"t"`` are the plain partial derivatives.
    """

    __slots__ = ("var", "m")

    def __init__(self, var, m=1):
        if var not in ("x", "z", "t"):
            raise UnknownVariable("no derivation is defined for %r" % (var,))
        self.var = var
        self.m = int(m)
        if self.m < 1:
            raise ValueError("u-rate m must be a positive integer")

    def __eq__(self, other):
        return isinstance(other, Derivation) and (self.var, self.m) == (other.var, other.m)

    def __hash__(self):
        return hash((self.var, self.m))

    def __repr__(self):
        return "Derivation(%r, m=%d)" % (self.var, self.m)

    def poly(self, p):
        i = _INDEX[self.var]
        out = {}
        for e, c in p._terms.items():
            k = e[i]
            if k:
                f = list(e)
                f[i] = k - 1
                f = tuple(f)
                out[f] = out.get(f, 0) + c * k
            if i == 0 and e[1]:
                out[e] = out.get(e, 0) + c * Rat(e[1], self.m)
        return MPoly._raw({e: c for e, c in out.items() if c})

    def __call__(self, f):
        f = as_ratfunc(f)
        if f.den.is_one():
            return RatFunc._make(self.poly(f.num), _P_ONE)
        n, d = f.num, f.den
        dd = self.poly(d)
        if dd.is_zero():
            # d is constant along this derivation, but n' may still share factors with it
            t = self.poly(n)
            c = poly_gcd(t, d)
            if not c.is_one() and not t.is_zero():
                t, d = divexact(t, c), divexact(d, c)
            return _canonical(t, d)
        # with g = gcd(d, d'), d = g h and d' = g k: (n/d)' = (n' h - n k) / (g h^2),
        # and only factors of g can cancel
        g = poly_gcd(d, dd)
        h, k = (d, dd) if g.is_one() else (divexact(d, g), divexact(dd, g))
        t = self.poly(n) * h - n * k
        if t.is_zero():
            return ZERO
        c = poly_gcd(t, g)
        if not c.is_one():
            t, g = divexact(t, c), divexact(g, c)
        return _canonical(t, g * h * h)


def derive(f, v, m=1):
    """Derivative of ``f`` along variable ``v`` (``d/dx u = u/m``)."""
    return Derivation(v, m)(f)


def exp_generator(alpha, m):
    """Represent ``exp(alpha*x)`` as a power of ``u`` (requires alpha*m integral)."""
    k = Q(alpha) * m
    if k.denominator != 1:
        raise ValueError("alpha*m must be an integer")
    return RatFunc.var("u", int(k.numerator))
