"""Monic matrix polynomials ``q(t) = sum a_j t^j`` with constant rational coefficients."""

from dataclasses import dataclass
from math import factorial, lcm
from typing import List, Tuple

from ._scalar import Q
from .errors import IrrationalSpectrum, NotAnEigenvalue, SchemaError
from .exact import RatFunc, as_ratfunc
from .linalg import Mat, det, hstack, nullspace, rank
from .ore import OreOp, op_compose


class MatPolynomial:
    """``q(t) = a_0 + a_1 t + ... + a_d t^d`` with ``a_d = I_n``."""

    __slots__ = ("n", "coeffs")

    def __init__(self, coeffs):
        coeffs = list(coeffs)
        if not coeffs:
            raise SchemaError("a matrix polynomial needs at least one coefficient")
        n = coeffs[0].rows
        for a in coeffs:
            if a.shape != (n, n):
                raise SchemaError("all coefficients must be %dx%d" % (n, n))
            if not a.is_constant():
                raise SchemaError("matrix polynomial coefficients must be constant")
        if not coeffs[-1].is_identity():
            raise SchemaError("matrix polynomial must be monic")
        self.n = n
        self.coeffs = tuple(coeffs)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __eq__(self, other):
        return isinstance(other, MatPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        from .render import mat_text
        return "MatPolynomial(%s)" % ", ".join(mat_text(a) for a in self.coeffs)

    def at(self, value):
        """``q(value)`` for a scalar or a rational function (Horner)."""
        v = as_ratfunc(value)
        acc = Mat.zeros(self.n, self.n)
        for a in reversed(self.coeffs):
            acc = acc.scale(v) + a
        return acc

    def derivative_at(self, lam, r):
        """``q^(r)(lam)``."""
        lam = Q(lam)
        acc = Mat.zeros(self.n, self.n)
        for j in range(r, len(self.coeffs)):
            c = Q(factorial(j) // factorial(j - r)) * lam ** (j - r)
            acc = acc + self.coeffs[j].scale(c)
        return acc

    def symbol(self, var="t"):
        return self.at(RatFunc.var(var))

    def of_operator(self, m):
        """``q(M)`` for a scalar-shaped operator ``M`` (Horner, constant matrices commute)."""
        n = self.n
        if m.n == 1 and n > 1:
            m = OreOp(n, [Mat.scalar(n, c[0, 0]) for c in m.coeffs], m.var)
        acc = OreOp.zero(n, m.var)
        for a in reversed(self.coeffs):
            acc = op_compose(acc, m) + OreOp.multiplication(a, m.var)
        return acc


def char_det(q):
    """``det q(t)``, a monic polynomial of degree ``n d`` in ``t``."""
    return det(q.symbol("t")).num


def companion(q):
    """Block companion matrix: identity superdiagonal, last block row ``-a_0 .. -a_{d-1}``."""
    n, d = q.n, q.degree
    size = n * d
    data = [[0] * size for _ in range(size)]
    for b in range(d - 1):
        for i in range(n):
            data[b * n + i][(b + 1) * n + i] = 1
    for j in range(d):
        a = q.coeffs[j]
        for r in range(n):
            for c in range(n):
                data[(d - 1) * n + r][j * n + c] = -a[r, c]
    return Mat.from_rows(data)


def _dense_t(p):
    """Coefficients of a polynomial in ``t`` (low to high)."""
    if not p.variables() <= {"t"}:
        raise SchemaError("expected a polynomial in t, got %s" % p)
    deg = p.degree("t") if not p.is_zero() else 0
    out = [Q(0)] * (deg + 1)
    for e, c in p.items():
        out[e[3]] = c
    return out


def _divisors(k):
    k = abs(int(k))
    out = set()
    i = 1
    while i * i <= k:
        if k % i == 0:
            out.add(i)
            out.add(k // i)
        i += 1
    return sorted(out)


def _deflate(coeffs, r):
    """Divide by ``(t - r)``; returns (quotient, remainder)."""
    acc = Q(0)
    out = []
    for c in reversed(coeffs):
        acc = acc * r + c
        out.append(acc)
    rem = out.pop()
    return list(reversed(out)), rem


def rational_roots(chi):
    """All rational roots of ``chi`` with multiplicities, ascending.

    Raises IrrationalSpectrum when a nonconstant factor without rational
    roots remains after deflation.
    """
    if isinstance(chi, RatFunc):
        chi = chi.num
    coeffs = _dense_t(chi)
    while len(coeffs) > 1 and not coeffs[-1]:
        coeffs.pop()
    if len(coeffs) == 1:
        return []
    roots = {}
    while len(coeffs) > 1 and not coeffs[0]:
        coeffs = coeffs[1:]
        roots[Q(0)] = roots.get(Q(0), 0) + 1
    # integer coefficients for the candidate search
    den = lcm(*(int(c.denominator) for c in coeffs))
    ints = [int(c * den) for c in coeffs]
    cands = set()
    for p in _divisors(ints[0]):
        for s in _divisors(ints[-1]):
            cands.add(Q(p, s))
            cands.add(Q(-p, s))
    for r in sorted(cands):
        while len(coeffs) > 1:
            quo, rem = _deflate(coeffs, r)
            if rem:
                break
            coeffs = quo
            roots[r] = roots.get(r, 0) + 1
    if len(coeffs) > 1:
        raise IrrationalSpectrum("characteristic polynomial has a factor of degree %d "
                                 "without rational roots" % (len(coeffs) - 1))
    return sorted(roots.items())


@dataclass
class JordanChainSet:
    lam: object
    chains: List[List[Tuple]]  # each chain: vectors v_0 .. v_k as tuples of Rat
    multiplicity: int

    @property
    def lengths(self):
        return [len(c) for c in self.chains]

    def leading_vectors(self):
        return [c[0] for c in self.chains]


def _column(v):
    return Mat.column(list(v))


def _independent_extension(existing, candidates):
    """Candidates (in order) that extend ``existing`` to a larger independent set."""
    picked = []
    current = list(existing)
    base = rank(hstack(current)) if current else 0
    for c in candidates:
        trial = current + [c]
        rk = rank(hstack(trial))
        if rk > base:
            current = trial
            base = rk
            picked.append(c)
    return picked


def jordan_chains(q, lam):
    """Canonical Jordan chains of ``q`` at ``lam`` from the companion matrix.

    Chain tops are picked level by level (longest first) from the RREF
    nullspace bases of ``(C - lam)^j``, then projected to the first ``n``
    coordinates.
    """
    lam = Q(lam)
    n = q.n
    c = companion(q)
    size = c.rows
    nmat = c - Mat.scalar(size, lam)
    kernels = [[]]
    dims = [0]
    power = Mat.identity(size)
    while True:
        power = power * nmat
        basis = nullspace(power)
        if len(basis) == dims[-1]:
            break
        kernels.append(basis)
        dims.append(len(basis))
    if dims[-1] == 0:
        raise NotAnEigenvalue("%s is not a root of det q(t)" % lam)
    top = len(kernels) - 1
    tops = []  # (length, vector)
    for j in range(top, 0, -1):
        existing = list(kernels[j - 1])
        for length, w in tops:
            v = w
            for _ in range(length - j):
                v = nmat * v
            existing.append(v)
        for w in _independent_extension(existing, kernels[j]):
            tops.append((j, w))
    chains = []
    for length, w in tops:
        vecs = [w]
        for _ in range(length - 1):
            vecs.append(nmat * vecs[-1])
        vecs.reverse()  # v_0 = N^(length-1) w is the eigenvector
        chain = [tuple(v[i, 0].constant_value() for i in range(n)) for v in vecs]
        lead = next(a for a in chain[0] if a)
        chains.append([tuple(a / lead for a in v) for v in chain])
    # shorter chains after longer ones is the construction order; present by length then order
    chains.sort(key=len)
    return JordanChainSet(lam, chains, dims[-1])


def chain_residuals(q, lam, chain):
    """The left sides of ``sum_r q^(r)(lam) v_(j-r) / r! = 0`` for ``j = 0 .. k``."""
    lam = Q(lam)
    ders = [q.derivative_at(lam, r).scale(Q(1, factorial(r))) for r in range(len(chain))]
    out = []
    for j in range(len(chain)):
        acc = Mat.zeros(q.n, 1)
        for r in range(j + 1):
            acc = acc + ders[r] * _column(chain[j - r])
        out.append(acc)
    return out


def all_jordan_chains(q):
    """Chains at every root of ``det q``; IrrationalSpectrum if a root is not rational."""
    return [jordan_chains(q, lam) for lam, _ in rational_roots(char_det(q))]


__all__ = [
    "MatPolynomial", "char_det", "companion", "rational_roots", "jordan_chains",
    "JordanChainSet", "chain_residuals", "all_jordan_chains",
]
