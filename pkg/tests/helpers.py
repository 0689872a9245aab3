"""Shared builders and random generators for the test suite."""

import json
import random
from pathlib import Path

from ncdx._scalar import Q
from ncdx.exact import X, Z, as_ratfunc
from ncdx.linalg import Mat, inverse
from ncdx.matpoly import MatPolynomial
from ncdx.ore import OreOp
from ncdx.rank1 import KernelEntry, QuasiKernelSpec

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"

ALPHA_POOL = [Q(0), Q(1), Q(-1), Q(1, 2), Q(-1, 2)]
COEFF_POOL = [Q(c) for c in (-2, -1, 0, 1, 2)] + [Q(1, 2), Q(-1, 3)]


def load(name):
    return json.loads((FIXTURES / name).read_text())


def M(rows):
    return Mat.from_rows(rows)


def J(n):
    return Mat.from_rows([[1 if j == i + 1 else 0 for j in range(n)] for i in range(n)])


def I(n):
    return Mat.identity(n)


def D(n=1, var="x", power=1):
    return OreOp.d(n, var, power)


def mult(mat, var="x"):
    return OreOp.multiplication(mat, var)


def scalar_op(n, f, var="x"):
    return OreOp.scalar(n, as_ratfunc(f), var)


def shear_spec(a=1):
    return QuasiKernelSpec(2, (KernelEntry(0, (X, as_ratfunc(0))), KernelEntry(0, (as_ratfunc(a), X))))


def jordan3_spec():
    cols = [(X, 0, 0), (1, X, 0), (0, 1, X)]
    return QuasiKernelSpec(3, tuple(KernelEntry(0, tuple(as_ratfunc(v) for v in c)) for c in cols))


def given_L_spec():
    h = -X * X / 2
    cols = [(X, 0, 0), (h, X, 0), (h, 0, 1)]
    return QuasiKernelSpec(3, tuple(KernelEntry(0, tuple(as_ratfunc(v) for v in c)) for c in cols))


def given_L_operator():
    j = J(3)
    return OreOp(3, [j * j, j, I(3)], "x")


def square_block_q():
    return MatPolynomial([Mat.zeros(2, 2), J(2).scale(-2), I(2)])


# -- random data ------------------------------------------------------------

def rpoly(rng, deg, var=X):
    out = as_ratfunc(0)
    for i in range(deg + 1):
        out = out + as_ratfunc(rng.choice(COEFF_POOL)) * var ** i
    return out


def rspec(rng, n, k, deg, alphas=ALPHA_POOL):
    return QuasiKernelSpec(n, tuple(
        KernelEntry(rng.choice(alphas), tuple(rpoly(rng, rng.randint(0, deg)) for _ in range(n)))
        for _ in range(n * k)))


def rconst(rng, rows, cols=None):
    cols = rows if cols is None else cols
    return Mat.from_rows([[rng.choice(COEFF_POOL) for _ in range(cols)] for _ in range(rows)])


def rpolymat(rng, n, deg, var=X):
    return Mat.from_rows([[rpoly(rng, rng.randint(0, deg), var) for _ in range(n)] for _ in range(n)])


def rop(rng, n, order, deg, var="x", monic=False):
    v = X if var == "x" else Z
    coeffs = [rpolymat(rng, n, deg, v) for _ in range(order + 1)]
    if monic:
        coeffs[-1] = I(n)
    return OreOp(n, coeffs, var)


def invertible_const(rng, n):
    while True:
        s = rconst(rng, n)
        try:
            inverse(s)
            return s
        except Exception:
            continue


def triangular_with_spectrum(rng, n, spectrum):
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = rng.choice(spectrum)
        for j in range(i + 1, n):
            rows[i][j] = rng.choice(COEFF_POOL)
    return Mat.from_rows(rows)


def rmatpoly_rational(rng, n, d, spectrum=(0, 1, -1, 2, Q(1, 2))):
    """``S (tI - A_1) ... (tI - A_d) S^-1`` with triangular ``A_i``: rational spectrum by construction."""
    from ncdx.exact import T
    s = invertible_const(rng, n)
    sym = I(n).scale(as_ratfunc(1))
    for _ in range(d):
        a = triangular_with_spectrum(rng, n, spectrum)
        sym = sym * (I(n).scale(T) - a)
    sym = s * sym * inverse(s)
    coeffs = []
    for k in range(d + 1):
        coeffs.append(Mat.from_rows([[_t_coeff(sym[i, j], k) for j in range(n)] for i in range(n)]))
    return MatPolynomial(coeffs)


def _t_coeff(f, k):
    out = Q(0)
    for e, c in f.num.items():
        if e[3] == k:
            out += c
    return out


def seeded(seed):
    return random.Random(seed)
