"""Acceptance criteria 1-7, all at exact (zero residual) tolerance.

Run with ``pytest tests/test_acceptance.py`` or ``python tests/test_acceptance.py``;
the terminal summary prints one PASS/FAIL line per criterion.
"""

import json

import pytest

from conftest import record
from helpers import (FIXTURES, D, I, J, M, given_L_operator, given_L_spec, jordan3_spec, mult,
                     rmatpoly_rational, rop, rspec, scalar_op, seeded, shear_spec, square_block_q)
from ncdx import cli
from ncdx._scalar import Q
from ncdx.airy import (AiryContext, AiryOrbitSpec, AiryWave, airy_kernel_basis, b_map_airy,
                       darboux_airy, operator_from_kernel_airy)
from ncdx.errors import DegenerateKernel, IrrationalSpectrum, NonzeroRemainder
from ncdx.exact import MPoly, X, Z, as_ratfunc
from ncdx.linalg import BlockMat, Mat, det, inverse, quasideterminant
from ncdx.matpoly import MatPolynomial, all_jordan_chains, chain_residuals, char_det, rational_roots
from ncdx.ore import (ExpWave, OreOp, b_map_rank1, op_apply_left, op_apply_right, op_compose,
                      op_normal_order)
from ncdx.rank1 import (KernelEntry, QuasiKernelSpec, darboux_rank1, operator_from_kernel_rank1)

CTX = AiryContext()


def _passed(report, *names):
    got = {c.name: c.passed for c in report.checks}
    return all(got.get(n) for n in names)


def _check(criterion, ok, detail):
    record(criterion, ok, detail)
    assert ok, detail


# -- 1 ----------------------------------------------------------------------

def test_criterion_1_first_rank_one_example():
    b = darboux_rank1(shear_spec(1))
    A = M([[1 / X, -1 / X ** 2], [0, 1 / X]])
    Dz = D(2, "z")
    checks = {
        "P": b.P == D(2) - mult(A),
        "Q": b.Q == D(2) + mult(A),
        "Phi": b.Phi == ExpWave(M([[Z - 1 / X, 1 / X ** 2], [0, Z - 1 / X]])),
        "PQ": b.Ltilde == D(2, power=2) - mult(M([[2 / X ** 2, -4 / X ** 3], [0, 2 / X ** 2]])),
        "b(P')": b.bP == op_compose(Dz ** 2, scalar_op(2, Z, "z")) + Dz + mult(M([[0, 1], [0, 0]]), "z"),
        "g": b.g == I(2).scale(X ** 4),
        "identities": _passed(b.report, "spectral", "dual_spectral", "spectral_Phi", "dual_spectral_Phi"),
    }
    bad = [k for k, v in checks.items() if not v]
    _check(1, not bad, "mismatch: %s" % ", ".join(bad))


# -- 2 ----------------------------------------------------------------------

def test_criterion_2_jordan_block_example():
    b = darboux_rank1(jordan3_spec())
    j = J(3)
    A = I(3).scale(1 / X) - j.scale(1 / X ** 2) + (j * j).scale(1 / X ** 3)
    ginv = OreOp.multiplication(inverse(b.g))
    checks = {
        "P": b.P == D(3) - mult(A),
        "Q": b.Q == D(3) + mult(A),
        "PQ": b.Ltilde == D(3, power=2) - mult(I(3).scale(2 / X ** 2) - j.scale(4 / X ** 3)
                                               + (j * j).scale(6 / X ** 4)),
        "Q' g^-1 P' = Q P": op_compose(op_compose(b.Q_prime, ginv), b.P_prime) == op_compose(b.Q, b.P),
        "identities": _passed(b.report, "spectral", "dual_spectral", "spectral_Phi", "dual_spectral_Phi"),
    }
    bad = [k for k, v in checks.items() if not v]
    _check(2, not bad, "mismatch: %s" % ", ".join(bad))


# -- 3 ----------------------------------------------------------------------

def _given_L_bundle():
    return darboux_rank1(given_L_spec(), L=given_L_operator(), multiplier=X)


@pytest.mark.xfail(strict=True, reason="printed P(1,2) = -3/2 and Q(1,2) = -1/2 are not the "
                                       "values F1' F1^-1 produces (correct: -1/2 and +1/2)")
def test_criterion_3_printed_operators():
    b = _given_L_bundle()
    printed_p = D(3) - mult(M([[1 / X, Q(-3, 2), -X / 2], [0, 1 / X, 0], [0, 0, 0]]))
    printed_q = D(3) + mult(M([[1 / X, Q(-1, 2), -X / 2], [0, 1 / X, 1], [0, 0, 0]]))
    ok = b.P == printed_p and b.Q == printed_q
    record(3, ok, "printed P, Q not reproduced (entry (1,2) typo); corrected values verified")
    assert ok


def test_criterion_3_identities():
    b = _given_L_bundle()
    # the corrected operators are the exact kernel operator and quotient
    ok = (b.P == D(3) - mult(M([[1 / X, Q(-1, 2), -X / 2], [0, 1 / X, 0], [0, 0, 0]]))
          and b.Q == D(3) + mult(M([[1 / X, Q(1, 2), -X / 2], [0, 1 / X, 1], [0, 0, 0]]))
          and b.d * b.d == X ** 2
          and _passed(b.report, "kernel[0]", "kernel[1]", "kernel[2]", "factorization",
                      "spectral", "spectral_Phi", "dual_spectral", "dual_spectral_Phi"))
    _check(3, ok, "x^2 Phi = Phi Lambda or the first spectral identity failed")


# -- 4 ----------------------------------------------------------------------

def test_criterion_4_airy_example():
    q = square_block_q()
    chains = all_jordan_chains(q)
    lam0 = chains[0]
    lead = Mat.from_rows([list(v) for v in lam0.leading_vectors()])
    chain_ok = (len(chains) == 1 and lam0.lam == 0 and sum(lam0.lengths) == 4
                and det(lead) != 0
                and all(r.is_zero() for c in lam0.chains for r in chain_residuals(q, 0, c)))
    specs = [AiryOrbitSpec(0, ((1, 1), (1, 0))), AiryOrbitSpec(0, ((0, 0), (0, 1), (1, 0)))]
    b = darboux_airy(q, specs, CTX)
    s = 1 / (X - 1)
    B = M([[0, 1 - X], [1, -1]])
    printed_p = (D(2, power=2) + op_compose(mult(B.scale(s)), D(2))
                 - mult(M([[(X - 1) ** 2, 2 * X - 2], [0, X ** 2]]).scale(s)))
    printed_q = (D(2, power=2) - op_compose(D(2), mult(B.scale(s)))
                 + mult(M([[-X ** 2, 1], [0, -(X - 1) ** 2]]).scale(s)))
    zj = M([[Z, -1], [0, Z]])
    checks = {
        "jordan chains": chain_ok,
        "P": b.P == printed_p,
        "Q": b.Q == printed_q,
        "q(w)": b.qw == zj * zj,
        "identities": _passed(b.report, "factorization", "spectral", "dual_spectral",
                              "spectral_Phi", "dual_spectral_Phi"),
    }
    bad = [k for k, v in checks.items() if not v]
    _check(4, not bad, "mismatch: %s" % ", ".join(bad))


# -- 5 ----------------------------------------------------------------------

def _airy_round_trip(q):
    p = operator_from_kernel_airy(airy_kernel_basis(q, CTX), CTX, q)
    return op_normal_order(p) == op_normal_order(q.of_operator(CTX.operator(q.n)))


def test_criterion_5_airy_round_trip():
    qs = [MatPolynomial([Mat.zeros(2, 2), I(2)]), square_block_q()]
    rng = seeded(501)
    qs += [rmatpoly_rational(rng, 2, rng.choice((1, 2))) for _ in range(6)]
    bad = [i for i, q in enumerate(qs) if not _airy_round_trip(q)]
    _check(5, not bad, "airy round trip failed for cases %s" % bad)


def _h_kernel(n, roots):
    entries = []
    for alpha, mult_ in roots:
        for j in range(mult_):
            for i in range(n):
                p = [as_ratfunc(0)] * n
                p[i] = X ** j
                entries.append(KernelEntry(alpha, tuple(p)))
    return QuasiKernelSpec(n, tuple(entries))


def test_criterion_5_rank_one_round_trip():
    rng = seeded(502)
    bad = []
    for case in range(8):
        n = rng.choice((1, 2))
        pool = [Q(0), Q(1), Q(-1), Q(1, 2), Q(-1, 2)]
        rng.shuffle(pool)
        roots = [(a, rng.randint(1, 2)) for a in pool[:rng.randint(1, 2)]]
        h = [Q(1)]
        for a, m in roots:
            for _ in range(m):
                h = [(h[k - 1] if k else 0) - a * (h[k] if k < len(h) else 0) for k in range(len(h) + 1)]
        expected = OreOp.from_scalar_coeffs(n, h)
        got = operator_from_kernel_rank1(_h_kernel(n, roots))
        if op_normal_order(got) != op_normal_order(expected):
            bad.append(case)
    _check(5, not bad, "rank-one round trip failed for cases %s" % bad)


# -- 6 ----------------------------------------------------------------------

CASES = {}


def _count(name, k):
    CASES[name] = CASES.get(name, 0) + k


def test_criterion_6_rank_one_pipelines():
    rng = seeded(601)
    done = fails = 0
    while done < 70:
        n = rng.choice((1, 2))
        k = rng.choice((1, 2)) if n == 1 else 1
        if n == 2 and rng.random() < 0.3:
            k = 2
        spec = rspec(rng, n, k, 2)
        try:
            b = darboux_rank1(spec)
        except DegenerateKernel:
            continue
        # the report covers P f = 0, L = Q P, L = Q' g^-1 P', intertwining and both dual identities
        names = {c.name for c in b.report.checks}
        assert {"factorization", "cleared_factorization", "intertwining_P", "dual_spectral"} <= names
        fails += not b.report.passed
        done += 1
    _count("rank1 pipelines", done)
    _check(6, fails == 0, "%d rank-one pipelines failed" % fails)


def test_criterion_6_airy_pipelines():
    rng = seeded(602)
    done = fails = 0
    while done < 12:
        n = rng.choice((1, 2))
        q = rmatpoly_rational(rng, n, rng.choice((1, 2)))
        basis = airy_kernel_basis(q, CTX)
        size = 1 if n == 1 else 2
        if len(basis) < size:
            continue
        specs = rng.sample(basis, size)
        try:
            b = darboux_airy(q, specs, CTX)
        except DegenerateKernel:
            continue
        fails += not b.report.passed
        done += 1
    _count("airy pipelines", done)
    _check(6, fails == 0, "%d Airy pipelines failed" % fails)


def test_criterion_6_b_maps_are_homomorphisms():
    rng = seeded(603)
    fails = 0
    for _ in range(30):
        n = rng.choice((1, 2))
        a, c = rop(rng, n, rng.randint(0, 2), 2), rop(rng, n, rng.randint(0, 2), 2)
        fails += b_map_rank1(op_compose(a, c)) != op_compose(b_map_rank1(a), b_map_rank1(c))
    for _ in range(20):
        n = rng.choice((1, 2))
        a, c = rop(rng, n, rng.randint(0, 2), 1), rop(rng, n, rng.randint(0, 2), 1)
        fails += b_map_airy(op_compose(a, c), CTX) != op_compose(b_map_airy(a, CTX), b_map_airy(c, CTX))
    _count("b-map homomorphism", 50)
    _check(6, fails == 0, "%d b-map homomorphism cases failed" % fails)


def test_criterion_6_right_action_composition():
    rng = seeded(604)
    fails = 0
    for _ in range(30):
        n = rng.choice((1, 2))
        s1, s2 = rop(rng, n, rng.randint(0, 2), 2, var="z"), rop(rng, n, rng.randint(0, 2), 2, var="z")
        f = Mat.from_rows([[as_ratfunc(rng.randint(-2, 2)) * X ** rng.randint(0, 2) + Z * rng.randint(-2, 2)
                            for _ in range(n)] for _ in range(n)])
        psi = ExpWave(f)
        fails += op_apply_right(psi, op_compose(s1, s2)) != op_apply_right(op_apply_right(psi, s1), s2)
    for _ in range(10):
        s1, s2 = rop(rng, 2, rng.randint(0, 2), 1, var="z"), rop(rng, 2, rng.randint(0, 2), 1, var="z")
        psi = AiryWave.identity(CTX, 2)
        fails += op_apply_right(psi, op_compose(s1, s2)) != op_apply_right(op_apply_right(psi, s1), s2)
    _count("right action", 40)
    _check(6, fails == 0, "%d right-action composition cases failed" % fails)


def test_criterion_6_quasideterminant_ratio():
    rng = seeded(605)
    done = fails = 0
    while done < 30:
        size = rng.choice((2, 3))
        rows = [[as_ratfunc(rng.choice((-2, -1, 0, 1, 2, 3))) + (X if rng.random() < 0.3 else 0)
                 for _ in range(size)] for _ in range(size)]
        i, j = rng.randrange(size), rng.randrange(size)
        flat = Mat.from_rows(rows)
        minor = flat.submatrix([r for r in range(size) if r != i], [c for c in range(size) if c != j])
        if det(minor).is_zero():
            continue
        x = BlockMat([[Mat.from_rows([[v]]) for v in r] for r in rows])
        expected = det(flat) * (-1) ** (i + j) / det(minor)
        fails += quasideterminant(x, i, j) != Mat.from_rows([[expected]])
        done += 1
    _count("quasideterminant", done)
    _check(6, fails == 0, "%d quasideterminant cases failed" % fails)


def _split_by_exponential(f):
    """``{a: r_a}`` with ``f = sum u^a r_a`` and every ``r_a`` free of ``u``."""
    den_u = {e[1] for e, _ in f.den.items()}
    assert len(den_u) == 1, "denominator must be a monomial in u times a function of x"
    b = den_u.pop()
    parts = {}
    for e, c in f.num.items():
        parts.setdefault(e[1] - b, MPoly())
        parts[e[1] - b] = parts[e[1] - b] + MPoly({e: c})
    return {a: as_ratfunc(p) / as_ratfunc(f.den) for a, p in parts.items()}


def test_criterion_6_exponential_splitting():
    rng = seeded(606)
    done = fails = 0
    while done < 25:
        alphas = rng.sample([Q(0), Q(1), Q(-1), Q(1, 2), Q(-1, 2)], 2)
        spec = rspec(rng, 2, 2, 1, alphas=alphas)
        try:
            p = operator_from_kernel_rank1(spec)
        except DegenerateKernel:
            continue
        coeffs = [Q(rng.choice((-2, -1, 1, 2))) for _ in spec.entries]
        f = Mat.zeros(2, 1)
        for c, col in zip(coeffs, spec.columns()):
            f = f + col.scale(c)
        comps = {}
        for i in range(2):
            for a, r in _split_by_exponential(f[i, 0]).items():
                comps.setdefault(a, [as_ratfunc(0), as_ratfunc(0)])[i] = r
        ok = op_apply_left(p, f, spec.m).is_zero() and len(comps) >= 1
        for a, col in comps.items():
            ok = ok and op_apply_left(p, Mat.column(col), spec.m).is_zero()
        ok = ok and "u" not in p.variables()
        fails += not ok
        done += 1
    _count("exponential splitting", done)
    _check(6, fails == 0, "%d splitting cases failed" % fails)


def test_criterion_6_chain_lengths_sum_to_multiplicity():
    rng = seeded(607)
    fails = 0
    for _ in range(30):
        n, d = rng.choice(((1, 2), (2, 1), (2, 2), (3, 1)))
        q = rmatpoly_rational(rng, n, d)
        mults = dict(rational_roots(char_det(q)))
        for cs in all_jordan_chains(q):
            ok = (sum(cs.lengths) == mults[cs.lam]
                  and all(r.is_zero() for c in cs.chains for r in chain_residuals(q, cs.lam, c)))
            fails += not ok
    _count("jordan chains", 30)
    _check(6, fails == 0, "%d chain-length cases failed" % fails)


def test_criterion_6_case_count():
    expected = {"rank1 pipelines", "airy pipelines", "b-map homomorphism", "right action",
                "quasideterminant", "exponential splitting", "jordan chains"}
    if set(CASES) != expected:
        pytest.skip("run the whole criterion 6 group to count cases")
    total = sum(CASES.values())
    _check(6, total >= 200, "only %d randomized cases" % total)


# -- 7 ----------------------------------------------------------------------

def test_criterion_7_api_errors():
    degenerate = QuasiKernelSpec(2, (KernelEntry(0, (X, 0)), KernelEntry(0, (2 * X, 0))))
    with pytest.raises(DegenerateKernel):
        darboux_rank1(degenerate)
    with pytest.raises(IrrationalSpectrum):
        all_jordan_chains(MatPolynomial([M([[0, -2], [-1, 0]]), I(2)]))
    with pytest.raises(NonzeroRemainder):
        darboux_rank1(given_L_spec(), L=D(3, power=2))
    with pytest.raises(DegenerateKernel):
        darboux_airy(square_block_q(), [AiryOrbitSpec(0, ((0, 1),)), AiryOrbitSpec(0, ((0, 1),))], CTX)
    record(7, True)


@pytest.mark.parametrize("mode,name", [
    ("rank1", "degenerate_kernel.json"),
    ("rank1", "not_in_kernel.json"),
    ("jordan", "irrational_spectrum.json"),
    ("airy", "irrational_spectrum.json"),
    ("airy", "airy_degenerate.json"),
])
def test_criterion_7_cli_exit_3(capsys, mode, name):
    code = cli.main([mode, "--input", str(FIXTURES / "negative" / name)])
    doc = json.loads(capsys.readouterr().out)
    _check(7, code == 3 and "error" in doc and "P" not in doc,
           "%s %s exited %s" % (mode, name, code))


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
