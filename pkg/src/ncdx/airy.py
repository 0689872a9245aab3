"""Darboux transformations of the matrix Airy function ``phi(x + z) I_n``.

``phi`` is a generic solution of ``M phi = 0`` with
``M = D^N + sum_i alpha_i D^(N-i) + alpha_0 x``.  Expressions are kept as
``sum_j phi^(j)(y) A_j`` with ``j < N``; higher derivatives are rewritten
through the ODE.  ``y`` is ``x + z`` for the bivariate wave and
``x - lambda/alpha_0`` for a kernel element at spectral value ``lambda``.
"""

from dataclasses import dataclass
from math import factorial
from typing import Optional, Tuple

from ._scalar import Q
from .errors import (DegenerateKernel, KernelMismatch, NonzeroRemainder,
                     SchemaError, SingularMatrix)
from .exact import Derivation, RatFunc, as_ratfunc
from .linalg import Mat, hstack, inverse, solve_left, vstack
from .matpoly import MatPolynomial, all_jordan_chains
from .ore import (OreOp, Wave, clear_denominators, compose_all, map_monomials,
                  op_apply_left, op_apply_right, op_compose, op_right_divide)
from .report import VerificationReport, op_residual, wave_residual


@dataclass(frozen=True)
class AiryContext:
    """Order ``N``, lower coefficients ``alpha_1 .. alpha_(N-1)``, and ``alpha_0 != 0``."""
    N: int = 2
    alphas: Tuple = ()
    alpha0: object = -1

    def __post_init__(self):
        if self.N < 1:
            raise SchemaError("Airy order must be at least 1")
        alphas = tuple(Q(a) for a in self.alphas) or tuple(Q(0) for _ in range(self.N - 1))
        if len(alphas) != self.N - 1:
            raise SchemaError("expected %d lower coefficients alpha_1 .. alpha_%d"
                              % (self.N - 1, self.N - 1))
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "alpha0", Q(self.alpha0))
        if not self.alpha0:
            raise SchemaError("alpha_0 must be nonzero")

    def alpha(self, i):
        return self.alphas[i - 1]

    def shift(self, lam):
        """Argument shift of a kernel element at spectral value ``lam``."""
        return -Q(lam) / self.alpha0

    def w(self):
        """Eigenvalue ``w(z) = -alpha_0 z`` of ``M`` on ``phi(x + z)``."""
        return RatFunc.var("z") * (-self.alpha0)

    def operator(self, n=1):
        coeffs = [Mat.scalar(n, RatFunc.var("x") * self.alpha0)]
        for k in range(1, self.N):
            coeffs.append(Mat.scalar(n, self.alpha(self.N - k)))
        coeffs.append(Mat.identity(n))
        return OreOp(n, coeffs, "x")

    def dual_generator(self, n=1):
        """``b(x) = -(1/alpha_0)[(-D_z)^N + sum alpha_i (-D_z)^(N-i)] - z``."""
        c = -1 / self.alpha0
        coeffs = [Mat.scalar(n, -RatFunc.var("z"))]
        for k in range(1, self.N):
            coeffs.append(Mat.scalar(n, c * self.alpha(self.N - k) * (-1) ** k))
        coeffs.append(Mat.scalar(n, c * (-1) ** self.N))
        return OreOp(n, coeffs, "z")


def reduce_blocks(ctx, blocks, y):
    """Rewrite ``sum_j phi^(j)(y) C_j`` so that only ``j < N`` remain."""
    N = ctx.N
    c = list(blocks)
    shape = c[0].shape
    while len(c) < N:
        c.append(Mat.zeros(*shape))
    for j in range(len(c) - 1, N - 1, -1):
        cj = c[j]
        if cj.is_zero():
            continue
        for i in range(1, N):
            a = ctx.alpha(i)
            if a:
                c[j - i] = c[j - i] - cj.scale(a)
        c[j - N] = c[j - N] - cj.scale(y * ctx.alpha0)
        if j - N >= 1:
            c[j - N - 1] = c[j - N - 1] - cj.scale(ctx.alpha0 * (j - N))
    return c[:N]


class AiryWave(Wave):
    """``sum_j phi^(j)(y) A_j`` with ``j < N``; ``A_j`` matrices (or columns) over Q(x, z)."""

    __slots__ = ("ctx", "blocks", "y")

    def __init__(self, ctx, blocks, y):
        self.ctx = ctx
        self.y = as_ratfunc(y)
        self.blocks = tuple(reduce_blocks(ctx, blocks, self.y))

    @classmethod
    def identity(cls, ctx, n):
        """``phi(x + z) I_n``."""
        return cls(ctx, [Mat.identity(n)], RatFunc.var("x") + RatFunc.var("z"))

    @classmethod
    def element(cls, ctx, lam, columns):
        """A kernel element ``sum_j phi^(j)(x + shift) p_j`` at spectral value ``lam``."""
        return cls(ctx, columns, RatFunc.var("x") + ctx.shift(lam))

    @property
    def rows(self):
        return self.blocks[0].rows

    def _same(self, blocks):
        w = object.__new__(AiryWave)
        w.ctx, w.y, w.blocks = self.ctx, self.y, tuple(blocks)
        return w

    def _shift_derivative(self, der):
        N = self.ctx.N
        out = [b.derivative(der) for b in self.blocks] + [Mat.zeros(*self.blocks[0].shape)]
        for j in range(N):
            out[j + 1] = out[j + 1] + self.blocks[j]
        return self._same(reduce_blocks(self.ctx, out, self.y))

    def dx(self, derivation=None):
        return self._shift_derivative(Derivation("x"))

    def dz(self):
        return self._shift_derivative(Derivation("z"))

    def lmul(self, a):
        return self._same([a * b for b in self.blocks])

    def rmul(self, a):
        return self._same([b * a for b in self.blocks])

    def scale(self, f):
        return self._same([b.scale(f) for b in self.blocks])

    def _combine(self, other, sign):
        if not isinstance(other, AiryWave) or other.y != self.y:
            return NotImplemented
        if sign > 0:
            return self._same([a + b for a, b in zip(self.blocks, other.blocks)])
        return self._same([a - b for a, b in zip(self.blocks, other.blocks)])

    def is_zero(self):
        return all(b.is_zero() for b in self.blocks)

    def residual(self):
        return self.blocks

    def __eq__(self, other):
        return isinstance(other, AiryWave) and (self.y, self.blocks) == (other.y, other.blocks)

    def __repr__(self):
        return "AiryWave(y=%s, %r)" % (self.y, list(self.blocks))


# Names used for the two roles of the same representation.
AirySymbolExpr = AiryWave
AiryBivariateExpr = AiryWave


def airy_reduce(expr):
    """Reduced form (already maintained by construction; idempotent)."""
    return AiryWave(expr.ctx, expr.blocks, expr.y)


@dataclass(frozen=True)
class AiryOrbitSpec:
    """The orbit of ``sum_j psi_i^(j)(x, lam) p_j(x)`` over the kernel index ``i``."""
    lam: object
    ps: Tuple  # columns (Mat n x 1) of polynomials in x; any length, reduced on use

    def __post_init__(self):
        object.__setattr__(self, "lam", Q(self.lam))
        ps = tuple(p if isinstance(p, Mat) else Mat.column(p) for p in self.ps)
        if not ps:
            raise SchemaError("an orbit needs at least one coefficient column")
        n = ps[0].rows
        for p in ps:
            if p.shape != (n, 1):
                raise SchemaError("orbit coefficients must all be %dx1 columns" % n)
            for v in p.data:
                if not v.variables() <= {"x"}:
                    raise SchemaError("orbit coefficients must be functions of x, got %s" % v)
        object.__setattr__(self, "ps", ps)

    @property
    def n(self):
        return self.ps[0].rows

    def wave(self, ctx):
        return AiryWave.element(ctx, self.lam, self.ps)

    def reduced(self, ctx):
        return AiryOrbitSpec(self.lam, self.wave(ctx).blocks)


@dataclass(frozen=True)
class OrbitElement:
    """Copy ``index`` (0-based kernel index) of an orbit; the data is index-free."""
    index: int
    spec: AiryOrbitSpec


def sigma(element, ctx):
    """The cyclic action: move to the next kernel index."""
    return OrbitElement((element.index + 1) % ctx.N, element.spec)


def sigma_orbit(spec, ctx):
    """The ``N`` elements of the orbit of ``spec``."""
    return [OrbitElement(i, spec) for i in range(ctx.N)]


def kernel_check(q, ctx, wave):
    """``q(M) f`` reduced, for a kernel element ``f``."""
    m = ctx.operator(q.n)
    return op_apply_left(q.of_operator(m), wave)


def airy_kernel_basis(q, ctx):
    """Orbit specs spanning the vector kernel of ``q(M)`` (``n d`` orbits, ``n d N`` elements).

    Each Jordan chain ``v_0 .. v_k`` of ``q`` at ``lam`` gives the elements
    ``sum_r (-1/alpha_0)^r phi^(r)(x + shift) v_(j-r) / r!`` for ``j = 0 .. k``.
    """
    specs = []
    c = -1 / ctx.alpha0
    for chains in all_jordan_chains(q):
        for chain in chains.chains:
            for j in range(len(chain)):
                cols = [Mat.column([v * (c ** r / factorial(r)) for v in chain[j - r]])
                        for r in range(j + 1)]
                spec = AiryOrbitSpec(chains.lam, tuple(cols)).reduced(ctx)
                if not kernel_check(q, ctx, spec.wave(ctx)).is_zero():
                    raise KernelMismatch("chain element is not annihilated by q(M)")
                specs.append(spec)
    return specs


def operator_from_kernel_airy(specs, ctx, q=None):
    """The monic operator of order ``len(specs) N / n`` annihilating every orbit.

    Coefficients come from one exact linear solve: applying the operator to
    each element and reducing, every ``phi^(j)`` coefficient must vanish.
    """
    specs = list(specs)
    if not specs:
        raise SchemaError("no kernel orbits given")
    n, N = specs[0].n, ctx.N
    if any(s.n != n for s in specs):
        raise SchemaError("orbit columns have different sizes")
    if (len(specs) * N) % n:
        raise SchemaError("%d orbits of size %d do not span a multiple of n = %d"
                          % (len(specs), N, n))
    k = len(specs) * N // n
    waves = [s.wave(ctx) for s in specs]
    if q is not None:
        for i, w in enumerate(waves):
            if not kernel_check(q, ctx, w).is_zero():
                raise KernelMismatch("orbit %d is not annihilated by q(M)" % i)
    levels = []  # levels[l] = n x (#specs * N) matrix of reduced D^l coefficients
    current = waves
    for l in range(k + 1):
        levels.append(hstack([b for w in current for b in w.blocks]))
        if l < k:
            current = [w.dx() for w in current]
    c = vstack(levels[:k])
    try:
        a = solve_left(c, -levels[k])
    except SingularMatrix:
        raise DegenerateKernel("the kernel orbits do not determine a unique operator") from None
    coeffs = [a.submatrix(range(n), range(l * n, (l + 1) * n)) for l in range(k)]
    return OreOp(n, coeffs + [Mat.identity(n)], "x")


def b_map_airy(p, ctx):
    """Image under ``b(x) = b_map generator``, ``b(D_x) = -D_z`` (monomial-wise)."""
    n = p.n
    return map_monomials(p, ctx.dual_generator(n), -OreOp.d(n, "z"), "z")


@dataclass
class AiryBundle:
    ctx: AiryContext
    q: MatPolynomial
    specs: list
    P: OreOp
    Q: OreOp
    L: OreOp
    Ltilde: OreOp
    P_prime: OreOp
    Q_prime: OreOp
    g: Mat
    d: RatFunc
    bP: OreOp
    bQ: OreOp
    qw: Mat
    dual: OreOp
    Phi: AiryWave
    Phi_prime: AiryWave
    report: Optional[VerificationReport] = None


def darboux_airy(q, specs, ctx=None, multiplier=None, verify=True):
    ctx = ctx or AiryContext()
    specs = list(specs)
    p = operator_from_kernel_airy(specs, ctx, q)
    L = q.of_operator(ctx.operator(q.n))
    qq, r = op_right_divide(L, p)
    if not r.is_zero():
        raise NonzeroRemainder("q(M) is not right-divisible by P")
    cf = clear_denominators(p, qq, multiplier)
    bp, bq = b_map_airy(cf.p_prime, ctx), b_map_airy(cf.q_prime, ctx)
    qw = q.at(ctx.w())
    dual = compose_all([OreOp.multiplication(inverse(qw), "z"), bq, bp])
    psi = AiryWave.identity(ctx, q.n)
    bundle = AiryBundle(
        ctx=ctx, q=q, specs=specs, P=p, Q=qq, L=L, Ltilde=op_compose(p, qq),
        P_prime=cf.p_prime, Q_prime=cf.q_prime, g=cf.g, d=cf.d, bP=bp, bQ=bq,
        qw=qw, dual=dual, Phi=op_apply_left(p, psi), Phi_prime=op_apply_left(cf.p_prime, psi))
    if verify:
        bundle.report = verify_airy(bundle)
    return bundle


def _left_chain(ops, f):
    for op in reversed(ops):
        f = op_apply_left(op, f)
    return f


def _right_chain(f, ops):
    for op in ops:
        f = op_apply_right(f, op)
    return f


def verify_airy(bundle):
    """Both spectral identities on the bivariate wave, with exact residuals."""
    b = bundle
    rep = VerificationReport()
    n = b.P.n
    for i, s in enumerate(b.specs):
        rep.add("kernel[%d]" % i, "P f_%d = 0" % (i + 1), op_apply_left(b.P, s.wave(b.ctx)).residual())
    rep.add("factorization", "q(M) = Q P", op_residual(b.L, op_compose(b.Q, b.P)))
    ginv = OreOp.multiplication(inverse(b.g))
    rep.add("cleared_factorization", "q(M) = Q' g^-1 P'",
            op_residual(b.L, compose_all([b.Q_prime, ginv, b.P_prime])))
    psi = AiryWave.identity(b.ctx, n)
    qw = OreOp.multiplication(b.qw, "z")
    qw_inv = OreOp.multiplication(inverse(b.qw), "z")
    rep.add("intertwining_P", "P' Psi = Psi b(P')",
            wave_residual(b.Phi_prime, op_apply_right(psi, b.bP)))
    lhs = _left_chain([b.P_prime, b.Q_prime, ginv], b.Phi_prime)
    rep.add("spectral", "(P' Q' g^-1) Phi' = Phi' q(w)",
            wave_residual(lhs, op_apply_right(b.Phi_prime, qw)))
    rhs = _right_chain(b.Phi_prime, [qw_inv, b.bQ, b.bP])
    rep.add("dual_spectral", "g Phi' = Phi' (q(w)^-1 b(Q') b(P'))",
            wave_residual(b.Phi_prime.lmul(b.g), rhs))
    rep.add("spectral_Phi", "(P Q) Phi = Phi q(w)",
            wave_residual(_left_chain([b.P, b.Q], b.Phi), op_apply_right(b.Phi, qw)))
    rhs = _right_chain(b.Phi, [qw_inv, b.bQ, b.bP])
    rep.add("dual_spectral_Phi", "d^2 Phi = Phi (q(w)^-1 b(Q') b(P'))",
            wave_residual(b.Phi.scale(b.d * b.d), rhs))
    return rep


__all__ = [
    "AiryContext", "AiryWave", "AirySymbolExpr", "AiryBivariateExpr", "AiryOrbitSpec",
    "OrbitElement", "reduce_blocks", "airy_reduce", "sigma", "sigma_orbit",
    "airy_kernel_basis", "kernel_check", "operator_from_kernel_airy", "b_map_airy",
    "darboux_airy", "verify_airy", "AiryBundle",
]
