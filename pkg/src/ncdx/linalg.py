"""Dense exact linear algebra over Q(x, u, z, t), plus block quasideterminants."""

from .errors import NotSquare, SingularMatrix, SingularSubmatrix
from .exact import ONE, ZERO, as_ratfunc


class Mat:
    """Immutable dense matrix of :class:`~ncdx.exact.RatFunc` entries."""

    __slots__ = ("rows", "cols", "_data", "_hash")

    def __init__(self, rows, cols, data):
        data = tuple(as_ratfunc(v) for v in data)
        if rows < 0 or cols < 0 or len(data) != rows * cols:
            raise ValueError("expected %d entries, got %d" % (rows * cols, len(data)))
        self.rows = rows
        self.cols = cols
        self._data = data
        self._hash = None

    @classmethod
    def _raw(cls, rows, cols, data):
        m = cls.__new__(cls)
        m.rows, m.cols, m._data, m._hash = rows, cols, tuple(data), None
        return m

    @classmethod
    def from_rows(cls, rows):
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix rows")
        return cls(len(rows), ncols, [v for r in rows for v in r])

    @classmethod
    def zeros(cls, rows, cols):
        return cls._raw(rows, cols, [ZERO] * (rows * cols))

    @classmethod
    def identity(cls, n):
        return cls.scalar(n, ONE)

    @classmethod
    def scalar(cls, n, value):
        value = as_ratfunc(value)
        return cls._raw(n, n, [value if i == j else ZERO for i in range(n) for j in range(n)])

    @classmethod
    def column(cls, values):
        values = list(values)
        return cls(len(values), 1, values)

    # -- access -------------------------------------------------------------
    def __getitem__(self, ij):
        i, j = ij
        return self._data[i * self.cols + j]

    @property
    def data(self):
        return self._data

    @property
    def shape(self):
        return (self.rows, self.cols)

    def row(self, i):
        return self._data[i * self.cols:(i + 1) * self.cols]

    def col(self, j):
        return self._data[j::self.cols]

    def to_rows(self):
        return [list(self.row(i)) for i in range(self.rows)]

    def submatrix(self, rows, cols):
        rows, cols = list(rows), list(cols)
        return Mat._raw(len(rows), len(cols), [self[i, j] for i in rows for j in cols])

    def columns(self, cols):
        return self.submatrix(range(self.rows), cols)

    def is_square(self):
        return self.rows == self.cols

    def is_zero(self):
        return all(v.is_zero() for v in self._data)

    def is_identity(self):
        return self.is_square() and all(
            (v.is_one() if k % (self.cols + 1) == 0 else v.is_zero())
            for k, v in enumerate(self._data))

    def is_constant(self):
        return all(v.is_constant() for v in self._data)

    def variables(self):
        out = set()
        for v in self._data:
            out |= v.variables()
        return out

    # -- arithmetic ---------------------------------------------------------
    def _check_shape(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch %s vs %s" % (self.shape, other.shape))

    def __add__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        self._check_shape(other)
        return Mat._raw(self.rows, self.cols, [a + b for a, b in zip(self._data, other._data)])

    def __sub__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        self._check_shape(other)
        return Mat._raw(self.rows, self.cols, [a - b for a, b in zip(self._data, other._data)])

    def __neg__(self):
        return Mat._raw(self.rows, self.cols, [-a for a in self._data])

    def scale(self, c):
        c = as_ratfunc(c)
        if c.is_one():
            return self
        return Mat._raw(self.rows, self.cols, [c * a for a in self._data])

    def __mul__(self, other):
        if isinstance(other, Mat):
            if self.cols != other.rows:
                raise ValueError("cannot multiply %s by %s" % (self.shape, other.shape))
            n, m, p = self.rows, self.cols, other.cols
            a, b = self._data, other._data
            out = []
            for i in range(n):
                arow = a[i * m:(i + 1) * m]
                nz = [(k, v) for k, v in enumerate(arow) if not v.is_zero()]
                for j in range(p):
                    acc = ZERO
                    for k, v in nz:
                        w = b[k * p + j]
                        if not w.is_zero():
                            acc = acc + v * w
                    out.append(acc)
            return Mat._raw(n, p, out)
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __rmul__(self, other):
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def transpose(self):
        return Mat._raw(self.cols, self.rows, [self[i, j] for j in range(self.cols)
                                               for i in range(self.rows)])

    @property
    def T(self):
        return self.transpose()

    def map(self, fn):
        return Mat._raw(self.rows, self.cols, [as_ratfunc(fn(v)) for v in self._data])

    def derivative(self, derivation):
        return Mat._raw(self.rows, self.cols,
                        [ZERO if v.is_constant() else derivation(v) for v in self._data])

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self._data))
        return self._hash

    def __repr__(self):
        return "Mat(%s)" % [[str(v) for v in r] for r in self.to_rows()]


def hstack(mats):
    mats = list(mats)
    rows = mats[0].rows
    if any(m.rows != rows for m in mats):
        raise ValueError("row count mismatch in hstack")
    data = []
    for i in range(rows):
        for m in mats:
            data.extend(m.row(i))
    return Mat._raw(rows, sum(m.cols for m in mats), data)


def vstack(mats):
    mats = list(mats)
    cols = mats[0].cols
    if any(m.cols != cols for m in mats):
        raise ValueError("column count mismatch in vstack")
    data = []
    for m in mats:
        data.extend(m.data)
    return Mat._raw(sum(m.rows for m in mats), cols, data)


# ---------------------------------------------------------------------------
# Elimination
# ---------------------------------------------------------------------------

def _rows_of(m):
    return [list(m.row(i)) for i in range(m.rows)]


def det(a):
    """Determinant by Gaussian elimination over the field (first nonzero pivot)."""
    if not a.is_square():
        raise NotSquare("determinant of a %dx%d matrix" % a.shape)
    n = a.rows
    if n == 0:
        return ONE
    r = _rows_of(a)
    result = ONE
    for c in range(n):
        p = next((i for i in range(c, n) if not r[i][c].is_zero()), None)
        if p is None:
            return ZERO
        if p != c:
            r[c], r[p] = r[p], r[c]
            result = -result
        piv = r[c][c]
        result = result * piv
        inv = piv.inverse()
        for i in range(c + 1, n):
            if r[i][c].is_zero():
                continue
            f = r[i][c] * inv
            row_i, row_c = r[i], r[c]
            for j in range(c + 1, n):
                if not row_c[j].is_zero():
                    row_i[j] = row_i[j] - f * row_c[j]
    return result


def rref(a):
    """Reduced row echelon form; returns ``(R, pivot_columns)``."""
    r = _rows_of(a)
    nrows, ncols = a.rows, a.cols
    pivots = []
    row = 0
    for c in range(ncols):
        if row >= nrows:
            break
        p = next((i for i in range(row, nrows) if not r[i][c].is_zero()), None)
        if p is None:
            continue
        r[row], r[p] = r[p], r[row]
        inv = r[row][c].inverse()
        r[row] = [v * inv for v in r[row]]
        for i in range(nrows):
            if i != row and not r[i][c].is_zero():
                f = r[i][c]
                r[i] = [v - f * w for v, w in zip(r[i], r[row])]
        pivots.append(c)
        row += 1
    return Mat._raw(nrows, ncols, [v for rr in r for v in rr]), pivots


def rank(a):
    return len(rref(a)[1])


def nullspace(a):
    """Canonical basis of the right kernel: one vector per free column."""
    r, pivots = rref(a)
    free = [c for c in range(a.cols) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * a.cols
        v[f] = ONE
        for k, pc in enumerate(pivots):
            v[pc] = -r[k, f]
        basis.append(Mat.column(v))
    return basis


def solve(a, b):
    """Return ``X`` with ``a X = b`` for square nonsingular ``a``."""
    if not a.is_square():
        raise NotSquare("solve needs a square matrix, got %dx%d" % a.shape)
    if b.rows != a.rows:
        raise ValueError("right-hand side has %d rows, expected %d" % (b.rows, a.rows))
    n, m = a.rows, b.cols
    r = [list(a.row(i)) + list(b.row(i)) for i in range(n)]
    for c in range(n):
        p = next((i for i in range(c, n) if not r[i][c].is_zero()), None)
        if p is None:
            raise SingularMatrix("matrix is singular")
        r[c], r[p] = r[p], r[c]
        inv = r[c][c].inverse()
        r[c] = [v * inv for v in r[c]]
        for i in range(n):
            if i != c and not r[i][c].is_zero():
                f = r[i][c]
                r[i] = [v - f * w for v, w in zip(r[i], r[c])]
    return Mat._raw(n, m, [r[i][n + j] for i in range(n) for j in range(m)])


def inverse(a):
    return solve(a, Mat.identity(a.rows))


def solve_left(w, b):
    """Return ``A`` with ``A w = b`` (``w`` square and nonsingular)."""
    if not w.is_square():
        raise NotSquare("solve_left needs a square matrix, got %dx%d" % w.shape)
    return solve(w.transpose(), b.transpose()).transpose()


# ---------------------------------------------------------------------------
# Block matrices and quasideterminants
# ---------------------------------------------------------------------------

class BlockMat:
    """A ``block_rows x block_cols`` matrix of ``n x n`` blocks."""

    __slots__ = ("block_rows", "block_cols", "n", "blocks")

    def __init__(self, blocks):
        blocks = [list(r) for r in blocks]
        if not blocks or not blocks[0]:
            raise ValueError("empty block matrix")
        self.block_rows = len(blocks)
        self.block_cols = len(blocks[0])
        self.n = blocks[0][0].rows
        for r in blocks:
            if len(r) != self.block_cols:
                raise ValueError("ragged block matrix")
            for b in r:
                if b.shape != (self.n, self.n):
                    raise ValueError("every block must be %dx%d" % (self.n, self.n))
        self.blocks = tuple(tuple(r) for r in blocks)

    @classmethod
    def from_flat(cls, m, n):
        if m.rows % n or m.cols % n:
            raise ValueError("matrix size is not a multiple of the block size")
        return cls([[m.submatrix(range(i * n, (i + 1) * n), range(j * n, (j + 1) * n))
                     for j in range(m.cols // n)] for i in range(m.rows // n)])

    def __getitem__(self, ij):
        return self.blocks[ij[0]][ij[1]]

    def flatten(self):
        return vstack([hstack(r) for r in self.blocks])


def quasideterminant(x, i, j):
    """The ``(i, j)`` quasideterminant of a square block matrix (0-based).

    ``|X|_ij = x_ij - r_i^(j) (X^ij)^-1 c_j^(i)``; the minor ``X^ij`` is
    inverted through its flattened scalar matrix.
    """
    if x.block_rows != x.block_cols:
        raise NotSquare("quasideterminant of a non-square block matrix")
    k = x.block_rows
    if k == 1:
        return x[0, 0]
    others_r = [a for a in range(k) if a != i]
    others_c = [b for b in range(k) if b != j]
    minor = BlockMat([[x[a, b] for b in others_c] for a in others_r]).flatten()
    row = hstack([x[i, b] for b in others_c])
    col = vstack([x[a, j] for a in others_r])
    try:
        y = solve(minor, col)
    except SingularMatrix:
        raise SingularSubmatrix("block minor (%d, %d) is not invertible" % (i, j)) from None
    return x[i, j] - row * y
