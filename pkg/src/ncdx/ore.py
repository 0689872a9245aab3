"""Matrix differential operators ``sum_k A_k D^k`` and their actions.

Operators are stored in coefficient form (coefficients to the left of the
powers of ``D``).  ``D`` is d/dx (with ``d/dx u = u/m``) or d/dz.
"""

from math import comb
from typing import NamedTuple

from .errors import (ContextMismatch, NonPolynomialCoefficients,
                     SingularLeadingCoefficient)
from .exact import (ONE, ZERO, Derivation, MPoly, RatFunc, as_ratfunc,
                    divexact, poly_gcd, poly_lcm, primitive_normalize,
                    squarefree_part)
from .linalg import Mat, inverse, solve_left


class OreOp:
    """``sum_k coeffs[k] D^k`` with ``n x n`` matrix coefficients.

    ``var`` is ``"x"`` or ``"z"``; ``m`` is the rate of ``u`` under d/dx and
    is reset to 1 when no coefficient involves ``u``.
    """

    __slots__ = ("n", "var", "m", "coeffs")

    def __init__(self, n, coeffs, var="x", m=1):
        coeffs = list(coeffs)
        for c in coeffs:
            if c.shape != (n, n):
                raise ValueError("coefficient of shape %s in a %dx%d operator" % (c.shape, n, n))
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        if var not in ("x", "z"):
            raise ContextMismatch("operators act in x or z, not %r" % (var,))
        self.n = n
        self.var = var
        self.coeffs = tuple(coeffs)
        self.m = m if any("u" in c.variables() for c in coeffs) else 1

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, n, var="x"):
        return cls(n, [], var)

    @classmethod
    def identity(cls, n, var="x"):
        return cls(n, [Mat.identity(n)], var)

    @classmethod
    def multiplication(cls, mat, var="x", m=1):
        if not isinstance(mat, Mat):
            raise TypeError("expected a matrix")
        return cls(mat.rows, [mat], var, m)

    @classmethod
    def scalar(cls, n, f, var="x"):
        return cls(n, [Mat.scalar(n, f)], var)

    @classmethod
    def d(cls, n, var="x", power=1):
        return cls(n, [Mat.zeros(n, n)] * power + [Mat.identity(n)], var)

    @classmethod
    def from_scalar_coeffs(cls, n, coeffs, var="x"):
        """``sum_k c_k D^k I_n`` from scalar coefficients ``c_k``."""
        return cls(n, [Mat.scalar(n, c) for c in coeffs], var)

    # -- inspection ---------------------------------------------------------
    @property
    def order(self):
        return len(self.coeffs) - 1

    def coeff(self, k):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Mat.zeros(self.n, self.n)

    def leading(self):
        return self.coeffs[-1]

    def is_zero(self):
        return not self.coeffs

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1].is_identity()

    def is_constant_coefficient(self):
        return all(c.is_constant() for c in self.coeffs)

    def is_polynomial(self):
        """True when every coefficient is a polynomial in ``var`` alone."""
        for c in self.coeffs:
            for v in c.data:
                if not v.is_polynomial() or not v.variables() <= {self.var}:
                    return False
        return True

    def variables(self):
        out = set()
        for c in self.coeffs:
            out |= c.variables()
        return out

    def derivation(self):
        return Derivation(self.var, self.m)

    def _context(self, other):
        if self.n != other.n or self.var != other.var:
            raise ContextMismatch("operators over different contexts (%d, %s) and (%d, %s)"
                                  % (self.n, self.var, other.n, other.var))
        if self.m != other.m and "u" in self.variables() and "u" in other.variables():
            raise ContextMismatch("operators with different u-rates %d and %d" % (self.m, other.m))
        return self.m if "u" in self.variables() else other.m

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, OreOp):
            return NotImplemented
        m = self._context(other)
        k = max(len(self.coeffs), len(other.coeffs))
        return OreOp(self.n, [self.coeff(i) + other.coeff(i) for i in range(k)], self.var, m)

    def __neg__(self):
        return OreOp(self.n, [-c for c in self.coeffs], self.var, self.m)

    def __sub__(self, other):
        if not isinstance(other, OreOp):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, OreOp):
            return op_compose(self, other)
        return NotImplemented

    def __rmul__(self, other):
        """Left multiplication by a matrix or a scalar function."""
        if isinstance(other, Mat):
            return OreOp(self.n, [other * c for c in self.coeffs], self.var, self.m)
        try:
            f = as_ratfunc(other)
        except TypeError:
            return NotImplemented
        return OreOp(self.n, [c.scale(f) for c in self.coeffs], self.var, self.m)

    def __pow__(self, k):
        result = OreOp.identity(self.n, self.var)
        for _ in range(k):
            result = op_compose(result, self)
        return result

    def __eq__(self, other):
        if not isinstance(other, OreOp):
            return NotImplemented
        return (self.n, self.var, self.coeffs) == (other.n, other.var, other.coeffs)

    def __hash__(self):
        return hash((self.n, self.var, self.coeffs))

    def __repr__(self):
        from .render import op_text
        return "OreOp(%s)" % op_text(self)


# ---------------------------------------------------------------------------
# Waves: functions the operators act on
# ---------------------------------------------------------------------------

class Wave:
    """Matrix-valued function acted on by x-operators from the left and by
    z-operators from the right.

    Subclasses implement ``dx``, ``dz``, ``lmul``, ``rmul``, ``_combine`` and
    ``is_zero``.
    """

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.lmul(Mat.scalar(self.rows, -1))


class ExpWave(Wave):
    """``exp(x z) * M(x, z)``; only the matrix ``M`` is stored."""

    __slots__ = ("matrix",)

    def __init__(self, matrix):
        self.matrix = matrix

    @classmethod
    def identity(cls, n):
        return cls(Mat.identity(n))

    @property
    def rows(self):
        return self.matrix.rows

    def dx(self, derivation=None):
        z = RatFunc.var("z")
        return ExpWave(self.matrix.scale(z) + self.matrix.derivative(derivation or Derivation("x")))

    def dz(self):
        x = RatFunc.var("x")
        return ExpWave(self.matrix.scale(x) + self.matrix.derivative(Derivation("z")))

    def lmul(self, a):
        return ExpWave(a * self.matrix)

    def rmul(self, a):
        return ExpWave(self.matrix * a)

    def scale(self, f):
        return ExpWave(self.matrix.scale(f))

    def _combine(self, other, sign):
        if not isinstance(other, ExpWave):
            return NotImplemented
        return ExpWave(self.matrix + other.matrix if sign > 0 else self.matrix - other.matrix)

    def is_zero(self):
        return self.matrix.is_zero()

    def residual(self):
        return self.matrix

    def __eq__(self, other):
        return isinstance(other, ExpWave) and self.matrix == other.matrix

    def __repr__(self):
        return "ExpWave(%r)" % (self.matrix,)


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def op_compose(a, b):
    """The composition ``a o b`` (Leibniz rule moves D to the right)."""
    m = a._context(b)
    if a.is_zero() or b.is_zero():
        return OreOp.zero(a.n, a.var)
    der = Derivation(a.var, m)
    # derivs[j][s] = s-th derivative of b's j-th coefficient
    top = a.order
    derivs = []
    for c in b.coeffs:
        seq = [c]
        for _ in range(top):
            seq.append(seq[-1].derivative(der) if not seq[-1].is_zero() else seq[-1])
        derivs.append(seq)
    out = [Mat.zeros(a.n, a.n) for _ in range(a.order + b.order + 1)]
    for i, ai in enumerate(a.coeffs):
        if ai.is_zero():
            continue
        for j in range(len(b.coeffs)):
            for s in range(i + 1):
                d = derivs[j][s]
                if d.is_zero():
                    continue
                term = ai * d
                c = comb(i, s)
                if c != 1:
                    term = term.scale(c)
                out[i - s + j] = out[i - s + j] + term
    return OreOp(a.n, out, a.var, m)


def compose_all(ops):
    ops = list(ops)
    result = ops[0]
    for op in ops[1:]:
        result = op_compose(result, op)
    return result


def op_apply_left(p, f, m=None):
    """``P(f)`` for a matrix/column of functions or a :class:`Wave`.

    ``m`` overrides the u-rate, for u-free operators acting on functions of u.
    """
    if p.var != "x":
        raise ContextMismatch("left action needs an operator in x")
    der = Derivation("x", m) if m else p.derivation()
    if isinstance(f, Mat):
        if f.rows != p.n:
            raise ContextMismatch("function has %d rows, operator is %dx%d" % (f.rows, p.n, p.n))
        acc = Mat.zeros(f.rows, f.cols)
        g = f
        for k, a in enumerate(p.coeffs):
            if k:
                g = g.derivative(der)
            if not a.is_zero():
                acc = acc + a * g
        return acc
    if isinstance(f, Wave):
        if f.rows != p.n:
            raise ContextMismatch("wave has %d rows, operator is %dx%d" % (f.rows, p.n, p.n))
        acc = None
        g = f
        for k, a in enumerate(p.coeffs):
            if k:
                g = g.dx(der)
            if a.is_zero():
                continue
            term = g.lmul(a)
            acc = term if acc is None else acc + term
        return acc if acc is not None else f.lmul(Mat.zeros(p.n, p.n))
    raise TypeError("cannot apply an operator to %r" % (f,))


def op_apply_right(psi, s):
    """Right action ``psi . (a(z) D_z^k) = (-1)^k D_z^k (psi a)``."""
    if s.var != "z":
        raise ContextMismatch("right action needs an operator in z")
    acc = None
    for k, a in enumerate(s.coeffs):
        if a.is_zero():
            continue
        g = psi.rmul(a)
        for _ in range(k):
            g = g.dz()
        if k % 2:
            g = -g
        acc = g if acc is None else acc + g
    if acc is None:
        return psi.rmul(Mat.zeros(s.n, s.n))
    return acc


def op_right_divide(l, p):
    """Right Euclidean division: ``l = q o p + r`` with ``order(r) < order(p)``."""
    p._context(l)
    if p.is_zero():
        raise SingularLeadingCoefficient("division by the zero operator")
    try:
        lead_inv = inverse(p.leading())
    except Exception:
        raise SingularLeadingCoefficient("leading coefficient of the divisor is singular") from None
    n, var = p.n, p.var
    r = l
    q = OreOp.zero(n, var)
    while not r.is_zero() and r.order >= p.order:
        shift = r.order - p.order
        c = r.leading() * lead_inv
        t = OreOp(n, [Mat.zeros(n, n)] * shift + [c], var, r.m)
        q = q + t
        r = r - op_compose(t, p)
    return q, r


def op_normal_order(p):
    """Monomials ``(i, k, C)`` with ``P = sum var^i D^k C`` and constant ``C``."""
    if not p.is_polynomial():
        raise NonPolynomialCoefficients("coefficients must be polynomials in %s" % p.var)
    acc = {}
    for k, c in enumerate(p.coeffs):
        for pos, v in enumerate(c.data):
            for e, coef in v.num.items():
                i = e[0] if p.var == "x" else e[2]
                key = (i, k)
                if key not in acc:
                    acc[key] = [ZERO] * (p.n * p.n)
                acc[key][pos] = acc[key][pos] + as_ratfunc(coef)
    out = [(i, k, Mat(p.n, p.n, data)) for (i, k), data in acc.items()]
    out = [t for t in out if not t[2].is_zero()]
    out.sort(key=lambda t: (t[1], t[0]), reverse=True)
    return out


def from_normal_order(monomials, n, var="x"):
    """Reassemble ``sum var^i D^k C`` into coefficient form."""
    v = RatFunc.var(var)
    result = OreOp.zero(n, var)
    for i, k, c in monomials:
        result = result + OreOp(n, [Mat.zeros(n, n)] * k + [c.scale(v ** i)], var)
    return result


class ClearedFactorization(NamedTuple):
    p_prime: OreOp
    g: Mat
    q_prime: OreOp
    d: RatFunc


def common_denominator(ops):
    e = MPoly.const(1)
    for op in ops:
        for c in op.coeffs:
            for v in c.data:
                if not v.den.is_one():
                    e = poly_lcm(e, v.den)
    return e


def clear_denominators(p, q, multiplier=None):
    """Polynomial ``P' = d P``, ``Q' = Q o d`` and ``g = d^2 I``.

    ``d`` is the smallest power of the squarefree part of the common
    denominator of ``P`` and ``Q`` that makes both ``P'`` and ``Q'``
    polynomial, unless ``multiplier`` supplies it.  Then
    ``Q' g^-1 P' = Q P``.
    """
    p._context(q)
    n, var = p.n, p.var
    if multiplier is not None:
        d = as_ratfunc(multiplier)
        if d.is_zero():
            raise NonPolynomialCoefficients("multiplier must be nonzero")
        pp, qq = _cleared(p, q, d)
        if not (pp.is_polynomial() and qq.is_polynomial()):
            raise NonPolynomialCoefficients("multiplier %s does not clear denominators" % d)
    else:
        e = common_denominator([p, q])
        if e.is_constant():
            d = ONE
            pp, qq = _cleared(p, q, d)
        else:
            base = as_ratfunc(squarefree_part(e, var))
            d = base
            while True:
                pp, qq = _cleared(p, q, d)
                if pp.is_polynomial() and qq.is_polynomial():
                    break
                d = d * base
    return ClearedFactorization(pp, Mat.scalar(n, d * d), qq, d)


def _cleared(p, q, d):
    return d * p, op_compose(q, OreOp.scalar(q.n, d, q.var))


def with_inverse_weight(op, g):
    """``op o g^-1`` where ``g`` is a multiplication operator."""
    return op_compose(op, OreOp.multiplication(inverse(g), op.var))


# ---------------------------------------------------------------------------
# The rank-one b-map: D_x -> z, x -> -D_z
# ---------------------------------------------------------------------------

def b_map_rank1(p, direction="x->z"):
    """Image under ``b(D_x) = z, b(x) = -D_z`` (or its inverse for ``"z->x"``)."""
    n = p.n
    if direction == "x->z":
        if p.var != "x":
            raise ContextMismatch("b maps operators in x")
        target = "z"
        var_image = -OreOp.d(n, "z")                     # b(x) = -D_z
        d_image = OreOp.scalar(n, RatFunc.var("z"), "z")  # b(D_x) = z
    elif direction == "z->x":
        if p.var != "z":
            raise ContextMismatch("b^-1 maps operators in z")
        target = "x"
        var_image = OreOp.d(n, "x")                       # b^-1(z) = D_x
        d_image = OreOp.scalar(n, -RatFunc.var("x"), "x")  # b^-1(D_z) = -x
    else:
        raise ValueError("direction must be 'x->z' or 'z->x'")
    return map_monomials(p, var_image, d_image, target)


def map_monomials(p, var_image, d_image, target):
    """Apply a homomorphism given on the generators to each normal-ordered monomial."""
    n = p.n
    var_pows = [OreOp.identity(n, target)]
    d_pows = [OreOp.identity(n, target)]
    result = OreOp.zero(n, target)
    for i, k, c in op_normal_order(p):
        while len(var_pows) <= i:
            var_pows.append(op_compose(var_pows[-1], var_image))
        while len(d_pows) <= k:
            d_pows.append(op_compose(d_pows[-1], d_image))
        term = op_compose(op_compose(var_pows[i], d_pows[k]), OreOp.multiplication(c, target))
        result = result + term
    return result


def constant_symbol(l, var="z"):
    """``sum_k L_k s^k`` as a matrix over Q(s) for a constant-coefficient ``L``."""
    if not l.is_constant_coefficient():
        raise NonPolynomialCoefficients("operator does not have constant coefficients")
    s = RatFunc.var(var)
    acc = Mat.zeros(l.n, l.n)
    for k, c in enumerate(l.coeffs):
        acc = acc + c.scale(s ** k)
    return acc


__all__ = [
    "OreOp", "Wave", "ExpWave", "op_compose", "compose_all", "op_apply_left",
    "op_apply_right", "op_right_divide", "op_normal_order", "from_normal_order",
    "clear_denominators", "ClearedFactorization", "with_inverse_weight",
    "b_map_rank1", "map_monomials", "constant_symbol", "solve_left",
    "poly_gcd", "divexact", "primitive_normalize",
]
