import pytest
from hypothesis import given, settings, strategies as st

from helpers import I, J, M, rconst, seeded
from ncdx._scalar import Q
from ncdx.errors import NotSquare, SingularMatrix, SingularSubmatrix
from ncdx.exact import X, as_ratfunc
from ncdx.linalg import (BlockMat, Mat, det, hstack, inverse, nullspace, quasideterminant, rank,
                         rref, solve, solve_left, vstack)


def test_det_examples():
    assert det(M([[X, Q(3, 2)], [0, X]])) == X ** 2
    assert det(M([[X, 1, 0], [0, X, 1], [0, 0, X]])) == X ** 3
    assert det(I(3)) == 1
    assert det(M([[1, 2], [2, 4]])) == 0


def test_det_matches_cofactor_expansion():
    rng = seeded(7)
    for _ in range(10):
        a = rconst(rng, 3).scale(as_ratfunc(1)) + M([[X, 0, 0], [0, 0, 0], [0, 1, X * X]])
        cof = sum((a[0, j] * (-1) ** j * det(a.submatrix([1, 2], [c for c in range(3) if c != j]))
                   for j in range(3)), as_ratfunc(0))
        assert det(a) == cof


def test_solve_inverse_nullspace():
    a = M([[X, 1], [0, X]])
    assert a * inverse(a) == I(2)
    b = M([[1], [X]])
    assert a * solve(a, b) == b
    w = M([[1, 2, 3], [2, 4, 6]])
    assert rank(w) == 1
    for v in nullspace(w):
        assert (w * v).is_zero()
    assert len(nullspace(w)) == 2
    y = solve_left(a, M([[1, X]]))
    assert y * a == M([[1, X]])
    with pytest.raises(SingularMatrix):
        inverse(M([[1, 1], [1, 1]]))


def test_rref_pivots_first_nonzero_in_column_order():
    r, piv = rref(M([[0, 2, 4], [0, 1, 3]]))
    assert piv == [1, 2]
    assert r == M([[0, 1, 0], [0, 0, 1]])


def test_stack_and_blocks():
    a, b = M([[1, 2], [3, 4]]), M([[5, 6], [7, 8]])
    flat = vstack([hstack([a, b]), hstack([b, a])])
    bm = BlockMat.from_flat(flat, 2)
    assert bm[0, 1] == b and bm[1, 1] == a
    assert bm.flatten() == flat


def test_quasideterminant_single_block_and_errors():
    x = BlockMat([[M([[X, 1], [0, X]])]])
    assert quasideterminant(x, 0, 0) == M([[X, 1], [0, X]])
    with pytest.raises(NotSquare):
        quasideterminant(BlockMat([[I(1), I(1)]]), 0, 0)
    sing = BlockMat([[I(2), I(2)], [I(2), Mat.zeros(2, 2)]])
    with pytest.raises(SingularSubmatrix):
        quasideterminant(sing, 0, 0)


def test_quasideterminant_of_wronskian_is_P_applied():
    # W(F_1, F) for the 2x2 kernel (x, 0), (1, x) and F = diag(x^2, x^3)
    f1 = M([[X, 1], [0, X]])
    f = M([[X ** 2, 0], [0, X ** 3]])
    w = BlockMat([[f1, f], [f1.derivative(_dx()), f.derivative(_dx())]])
    p_of_f = f.derivative(_dx()) - f1.derivative(_dx()) * inverse(f1) * f
    assert quasideterminant(w, 1, 1) == p_of_f
    assert p_of_f == M([[X, X], [0, 2 * X ** 2]])


def _dx():
    from ncdx.exact import Derivation
    return Derivation("x")


def test_block_inverse_relation():
    rng = seeded(11)
    checked = 0
    while checked < 3:
        flat = rconst(rng, 4) + M([[X, 0, 0, 0], [0, 1, 0, 0], [0, 0, X, 0], [0, 0, 0, 1]])
        if det(flat).is_zero():
            continue
        a = BlockMat.from_flat(flat, 2)
        inv = inverse(flat)
        for i in range(2):
            for j in range(2):
                block = inv.submatrix(range(2 * j, 2 * j + 2), range(2 * i, 2 * i + 2))
                if det(block).is_zero():
                    continue
                assert quasideterminant(a, i, j) * block == I(2)
                checked += 1


entry = st.sampled_from([Q(c) for c in (-2, -1, 0, 1, 2, 3)] + [Q(1, 2)])


@settings(max_examples=40, deadline=None)
@given(st.lists(entry, min_size=9, max_size=9), st.integers(0, 2), st.integers(0, 2),
       st.sampled_from([0, 1]))
def test_quasideterminant_matches_determinant_ratio(vals, i, j, use_x):
    rows = [[as_ratfunc(vals[3 * r + c]) for c in range(3)] for r in range(3)]
    if use_x:
        rows[0][0] = rows[0][0] + X
    flat = Mat.from_rows(rows)
    minor = flat.submatrix([r for r in range(3) if r != i], [c for c in range(3) if c != j])
    if det(minor).is_zero():
        return
    x = BlockMat([[Mat.from_rows([[rows[r][c]]]) for c in range(3)] for r in range(3)])
    expected = det(flat) * (-1) ** (i + j) / det(minor)
    assert quasideterminant(x, i, j) == Mat.from_rows([[expected]])


def test_mat_shape_errors():
    with pytest.raises(ValueError):
        M([[1, 2]]) + M([[1], [2]])
    assert J(3) * J(3) * J(3) == Mat.zeros(3, 3)
