"""Darboux transformations of ``exp(x z) I_n`` from quasipolynomial kernels.

A kernel is spanned by columns ``exp(alpha x) p(x)``.  With ``m`` the lcm of
the denominators of the exponents, ``exp(alpha x)`` is ``u^(alpha m)`` in
Q(x, u), so every intermediate stays inside an exact differential field.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Optional, Tuple

from ._scalar import Q
from .errors import (DegenerateKernel, InternalMismatch, NonzeroRemainder,
                     SchemaError, SingularLeadingCoefficient)
from .exact import ZERO, Derivation, RatFunc, as_ratfunc, exp_generator
from .linalg import (BlockMat, Mat, det, hstack, inverse, quasideterminant,
                     rref, solve_left, vstack)
from .ore import (ExpWave, OreOp, b_map_rank1, clear_denominators,
                  compose_all, constant_symbol, op_apply_left, op_apply_right,
                  op_compose, op_right_divide)
from .report import VerificationReport, op_residual, wave_residual


@dataclass(frozen=True)
class KernelEntry:
    """The column ``exp(alpha x) p(x)``."""
    alpha: object
    p: Tuple[RatFunc, ...]

    def __post_init__(self):
        object.__setattr__(self, "alpha", Q(self.alpha))
        p = tuple(as_ratfunc(v) for v in self.p)
        for v in p:
            if not v.is_polynomial() or not v.variables() <= {"x"}:
                raise SchemaError("kernel entries need polynomials in x, got %s" % v)
        object.__setattr__(self, "p", p)


@dataclass(frozen=True)
class QuasiKernelSpec:
    n: int
    entries: Tuple[KernelEntry, ...]

    def __post_init__(self):
        entries = tuple(e if isinstance(e, KernelEntry) else KernelEntry(*e) for e in self.entries)
        object.__setattr__(self, "entries", entries)
        if self.n < 1:
            raise SchemaError("matrix size must be positive")
        if len(entries) % self.n:
            raise SchemaError("%d kernel entries is not a multiple of n = %d" % (len(entries), self.n))
        for e in entries:
            if len(e.p) != self.n:
                raise SchemaError("kernel entry has %d components, expected %d" % (len(e.p), self.n))

    @classmethod
    def from_columns(cls, mat, alpha=0):
        """The columns of a polynomial matrix, all with the same exponent."""
        return cls(mat.rows, tuple(KernelEntry(alpha, mat.col(j)) for j in range(mat.cols)))

    @property
    def k(self):
        return len(self.entries) // self.n

    @property
    def m(self):
        return lcm(1, *(int(Fraction(str(e.alpha)).denominator) for e in self.entries))

    def derivation(self):
        return Derivation("x", self.m)

    def column(self, e):
        w = exp_generator(e.alpha, self.m)
        return Mat.column([w * v for v in e.p])

    def columns(self):
        return [self.column(e) for e in self.entries]

    def permuted(self, order):
        return QuasiKernelSpec(self.n, tuple(self.entries[i] for i in order))


def wronski(columns, rows, derivation):
    """``rows`` successive derivatives (levels 0 .. rows-1) of the given columns, stacked."""
    columns = list(columns)
    f = hstack(columns)
    levels = [f]
    for _ in range(rows - 1):
        levels.append(levels[-1].derivative(derivation))
    return vstack(levels)


def _derivative_levels(f, count, derivation):
    levels = [f]
    for _ in range(count - 1):
        levels.append(levels[-1].derivative(derivation))
    return levels


def nondegenerate_arrange(spec):
    """Order the basis so that ``F_1 .. F_m`` is nondegenerate for every ``m``.

    Greedy block elimination: at derivative level ``l`` pick the first ``n``
    remaining columns whose reduced rows are independent.  Keeps the given
    order when it already works.  Returns ``(arranged_spec, order)``.
    """
    n, k = spec.n, spec.k
    if k == 0:
        return spec, []
    w = wronski(spec.columns(), k, spec.derivation())
    rows = [list(w.row(i)) for i in range(w.rows)]
    remaining = list(range(w.cols))
    chosen = []
    done_rows = []  # (row vector, pivot column) of reduced rows already used
    for level in range(k):
        block = []
        for r in range(level * n, (level + 1) * n):
            v = rows[r][:]
            for prow, pc in done_rows:
                if not v[pc].is_zero():
                    f = v[pc]
                    v = [a - f * b for a, b in zip(v, prow)]
            block.append(v)
        sub = Mat.from_rows([[v[c] for c in remaining] for v in block])
        red, piv = rref(sub)
        if len(piv) < n:
            raise DegenerateKernel("the Wronskian of the kernel basis is singular")
        picks = [remaining[p] for p in piv]
        # reduce this level's rows to pivot form on the picked columns for later levels
        full = Mat.from_rows(block)
        r2, _ = rref(full.columns(picks + [c for c in range(w.cols) if c not in picks]))
        order_cols = picks + [c for c in range(w.cols) if c not in picks]
        for i in range(n):
            vec = [ZERO] * w.cols
            for pos, c in enumerate(order_cols):
                vec[c] = r2[i, pos]
            done_rows.append((vec, picks[i]))
        chosen.extend(picks)
        remaining = [c for c in remaining if c not in picks]
    return spec.permuted(chosen), chosen


def _wronskian_solve(spec):
    """Route 1: the coefficients of the monic operator from ``A W = -F^(k)``."""
    n, k, der = spec.n, spec.k, spec.derivation()
    levels = _derivative_levels(hstack(spec.columns()), k + 1, der)
    w = vstack(levels[:k])
    if det(w).is_zero():
        raise DegenerateKernel("the Wronskian of the kernel basis is singular")
    a = solve_left(w, -levels[k])
    coeffs = [a.submatrix(range(n), range(l * n, (l + 1) * n)) for l in range(k)]
    return OreOp(n, coeffs + [Mat.identity(n)], "x", spec.m)


def _quasideterminant_product(spec):
    """Route 2: ``(D - b_k) .. (D - b_1)`` with ``b_j = W_j' W_j^-1``."""
    n, k, der = spec.n, spec.k, spec.derivation()
    cols = spec.columns()
    blocks = [hstack(cols[i * n:(i + 1) * n]) for i in range(k)]
    derivs = [_derivative_levels(b, k, der) for b in blocks]
    factors = []
    for j in range(1, k + 1):
        x = BlockMat([[derivs[c][r] for c in range(j)] for r in range(j)])
        wj = quasideterminant(x, j - 1, j - 1)
        bj = wj.derivative(der) * inverse(wj)
        factors.append(OreOp(n, [-bj, Mat.identity(n)], "x", spec.m))
    return compose_all(reversed(factors))


def operator_from_kernel_rank1(spec, arranged=False):
    """The monic operator of order ``k`` whose vector kernel is spanned by ``spec``.

    Built twice, by a Wronskian solve and as a product of first-order
    factors from quasideterminants; the two must agree and be free of ``u``.
    """
    n = spec.n
    if spec.k == 0:
        return OreOp.identity(n)
    if not arranged:
        spec, _ = nondegenerate_arrange(spec)
    p1 = _wronskian_solve(spec)
    p2 = _quasideterminant_product(spec)
    if p1 != p2:
        raise InternalMismatch("Wronskian solve and quasideterminant product disagree")
    if "u" in p1.variables():
        raise InternalMismatch("operator coefficients still depend on the exponential")
    return OreOp(n, p1.coeffs, "x")


def _poly_mul(a, b):
    out = [Q(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def annihilating_polynomial(spec):
    """Coefficients (low to high) of ``h = prod (T - alpha)^(1 + max deg)``."""
    degs = {}
    for e in spec.entries:
        d = max((v.num.degree("x") for v in e.p if not v.is_zero()), default=0)
        degs[e.alpha] = max(degs.get(e.alpha, -1), d)
    h = [Q(1)]
    for alpha in sorted(degs):
        for _ in range(degs[alpha] + 1):
            h = _poly_mul(h, [-alpha, Q(1)])
    return h


def minimal_constant_annihilator(spec):
    """``h(D) I_n``; it kills every ``exp(alpha x) p`` in the kernel."""
    return OreOp.from_scalar_coeffs(spec.n, annihilating_polynomial(spec))


def apply_to_entries(op, spec):
    """``op`` applied to each kernel column (values in Q(x, u))."""
    return [op_apply_left(op, c, spec.m) for c in spec.columns()]


def _check_constant_operator(l, spec):
    if l.n != spec.n or l.var != "x":
        raise SchemaError("L must be an operator in x of size %d" % spec.n)
    if not l.is_constant_coefficient():
        raise SchemaError("L must have constant coefficients")
    if l.is_zero() or det(l.leading()).is_zero():
        raise SingularLeadingCoefficient("L has a singular leading coefficient")
    for r in apply_to_entries(l, spec):
        if not r.is_zero():
            raise NonzeroRemainder("the kernel is not contained in the vector kernel of L")


@dataclass
class Rank1Bundle:
    spec: QuasiKernelSpec
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
    bL: Mat
    dual: OreOp
    Phi: ExpWave
    Phi_prime: ExpWave
    report: Optional[VerificationReport] = None


def darboux_rank1(spec, L=None, multiplier=None, verify=True):
    """Full rank-one pipeline: ``P``, ``L = Q P``, cleared factorization, dual operator."""
    arranged, _ = nondegenerate_arrange(spec)
    p = operator_from_kernel_rank1(arranged, arranged=True)
    if L is None:
        L = minimal_constant_annihilator(spec)
    else:
        _check_constant_operator(L, spec)
    q, r = op_right_divide(L, p)
    if not r.is_zero():
        raise NonzeroRemainder("L is not right-divisible by P")
    cf = clear_denominators(p, q, multiplier)
    bp = b_map_rank1(cf.p_prime)
    bq = b_map_rank1(cf.q_prime)
    bl = constant_symbol(L)
    if det(bl).is_zero():
        raise SingularLeadingCoefficient("the symbol of L is singular")
    dual = compose_all([OreOp.multiplication(inverse(bl), "z"), bq, bp])
    psi = ExpWave.identity(spec.n)
    bundle = Rank1Bundle(
        spec=arranged, P=p, Q=q, L=L, Ltilde=op_compose(p, q),
        P_prime=cf.p_prime, Q_prime=cf.q_prime, g=cf.g, d=cf.d,
        bP=bp, bQ=bq, bL=bl, dual=dual,
        Phi=op_apply_left(p, psi), Phi_prime=op_apply_left(cf.p_prime, psi))
    if verify:
        bundle.report = verify_rank1(bundle)
    return bundle


def _left_chain(ops, f, m=None):
    """``(A_1 A_2 .. A_r) f`` applied factor by factor, innermost first."""
    for op in reversed(ops):
        f = op_apply_left(op, f, m)
    return f


def _right_chain(f, ops):
    """``f . (S_1 S_2 .. S_r)`` applied factor by factor."""
    for op in ops:
        f = op_apply_right(f, op)
    return f


def verify_rank1(bundle):
    """Check both spectral identities (and the factorizations behind them) exactly.

    Products of operators act one factor at a time; this is equivalent by
    the module property of both actions and avoids composing high-order
    rational operators.
    """
    rep = VerificationReport()
    b = bundle
    n = b.P.n
    for i, r in enumerate(apply_to_entries(b.P, b.spec)):
        rep.add("kernel[%d]" % i, "P f_%d = 0" % (i + 1), r)
    rep.add("factorization", "L = Q P", op_residual(b.L, op_compose(b.Q, b.P)))
    ginv = OreOp.multiplication(inverse(b.g))
    rep.add("cleared_factorization", "L = Q' g^-1 P'",
            op_residual(b.L, compose_all([b.Q_prime, ginv, b.P_prime])))
    bl = OreOp.multiplication(b.bL, "z")
    bl_inv = OreOp.multiplication(inverse(b.bL), "z")
    psi = ExpWave.identity(n)
    rep.add("intertwining_P", "P' Psi = Psi b(P')",
            wave_residual(b.Phi_prime, op_apply_right(psi, b.bP)))
    lhs = _left_chain([b.P_prime, b.Q_prime, ginv], b.Phi_prime)
    rep.add("spectral", "(P' Q' g^-1) Phi' = Phi' b(L)",
            wave_residual(lhs, op_apply_right(b.Phi_prime, bl)))
    rhs = _right_chain(b.Phi_prime, [bl_inv, b.bQ, b.bP])
    rep.add("dual_spectral", "g Phi' = Phi' (b(L)^-1 b(Q') b(P'))",
            wave_residual(b.Phi_prime.lmul(b.g), rhs))
    rep.add("spectral_Phi", "(P Q) Phi = Phi b(L)",
            wave_residual(_left_chain([b.P, b.Q], b.Phi), op_apply_right(b.Phi, bl)))
    rhs = _right_chain(b.Phi, [bl_inv, b.bQ, b.bP])
    rep.add("dual_spectral_Phi", "d^2 Phi = Phi (b(L)^-1 b(Q') b(P'))",
            wave_residual(b.Phi.scale(b.d * b.d), rhs))
    return rep


__all__ = [
    "KernelEntry", "QuasiKernelSpec", "wronski", "nondegenerate_arrange",
    "operator_from_kernel_rank1", "minimal_constant_annihilator",
    "annihilating_polynomial", "b_map_rank1", "darboux_rank1", "verify_rank1",
    "Rank1Bundle", "apply_to_entries",
]
