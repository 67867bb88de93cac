"""Dense exact matrices over the Gaussian rationals.

A matrix is stored as a pair of rational matrices ``re + i*im`` backed by
FLINT's ``fmpq_mat``.  Kernels are computed on the real block embedding
``[[re, -im], [im, re]]`` and then reduced to a complex basis.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from flint import fmpq, fmpq_mat

from .scalar import Scalar, _frac_str


class DimensionMismatch(ValueError):
    pass


def _to_fmpq(x: Fraction) -> fmpq:
    return fmpq(x.numerator, x.denominator)


def _to_frac(x: fmpq) -> Fraction:
    return Fraction(int(x.p), int(x.q))


class Matrix:
    """Immutable ``rows x cols`` matrix with entries in Q(i)."""

    __slots__ = ("rows", "cols", "re", "im")

    def __init__(self, re: fmpq_mat, im: fmpq_mat):
        self.re = re
        self.im = im
        self.rows = re.nrows()
        self.cols = re.ncols()

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "Matrix":
        cols = rows if cols is None else cols
        return cls(fmpq_mat(rows, cols), fmpq_mat(rows, cols))

    @classmethod
    def identity(cls, dim: int) -> "Matrix":
        re = fmpq_mat(dim, dim)
        for i in range(dim):
            re[i, i] = 1
        return cls(re, fmpq_mat(dim, dim))

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: dict) -> "Matrix":
        """Build from a sparse ``{(i, j): value}`` map."""
        re = fmpq_mat(rows, cols)
        im = fmpq_mat(rows, cols)
        for (i, j), value in entries.items():
            s = Scalar.of(value)
            if s.re:
                re[i, j] = _to_fmpq(s.re)
            if s.im:
                im[i, j] = _to_fmpq(s.im)
        return cls(re, im)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "Matrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        return cls.from_entries(
            r, c, {(i, j): v for i, row in enumerate(rows) for j, v in enumerate(row)}
        )

    @classmethod
    def diagonal(cls, values: Sequence) -> "Matrix":
        return cls.from_entries(len(values), len(values), {(i, i): v for i, v in enumerate(values)})

    @classmethod
    def column(cls, values: Sequence) -> "Matrix":
        return cls.from_entries(len(values), 1, {(i, 0): v for i, v in enumerate(values)})

    @classmethod
    def hstack(cls, blocks: Sequence["Matrix"]) -> "Matrix":
        rows = blocks[0].rows
        entries = {}
        offset = 0
        for b in blocks:
            if b.rows != rows:
                raise DimensionMismatch("hstack row mismatch")
            for (i, j), v in b.nonzero_items():
                entries[(i, j + offset)] = v
            offset += b.cols
        return cls.from_entries(rows, offset, entries)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, key) -> Scalar:
        i, j = key
        return Scalar(_to_frac(self.re[i, j]), _to_frac(self.im[i, j]))

    def nonzero_items(self):
        re = self.re.entries()
        im = self.im.entries()
        c = self.cols
        for idx, (a, b) in enumerate(zip(re, im)):
            if a != 0 or b != 0:
                yield (idx // c, idx % c), Scalar(_to_frac(a), _to_frac(b))

    def to_rows(self) -> list[list[Scalar]]:
        out = [[Scalar() for _ in range(self.cols)] for _ in range(self.rows)]
        for (i, j), v in self.nonzero_items():
            out[i][j] = v
        return out

    def column_vector(self, j: int) -> "Matrix":
        entries = {(i, 0): v for (i, jj), v in self.nonzero_items() if jj == j}
        return Matrix.from_entries(self.rows, 1, entries)

    def columns(self) -> list["Matrix"]:
        return [self.column_vector(j) for j in range(self.cols)]

    def _check_same(self, other: "Matrix"):
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} vs {other.shape}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "Matrix":
        return Matrix(-self.re, -self.im)

    def scale(self, c) -> "Matrix":
        if isinstance(c, (int, Fraction)):
            a = fmpq(c) if isinstance(c, int) else _to_fmpq(c)
            return Matrix(self.re * a, self.im * a)
        s = Scalar.of(c)
        a, b = _to_fmpq(s.re), _to_fmpq(s.im)
        if b == 0:
            return Matrix(self.re * a, self.im * a)
        return Matrix(self.re * a - self.im * b, self.im * a + self.re * b)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.shape} @ {other.shape}")
        a, b, c, d = self.re, self.im, other.re, other.im
        if _is_zero_mat(b):
            if _is_zero_mat(d):
                return Matrix(a * c, fmpq_mat(self.rows, other.cols))
            return Matrix(a * c, a * d)
        if _is_zero_mat(d):
            return Matrix(a * c, b * c)
        return Matrix(a * c - b * d, a * d + b * c)

    def __mul__(self, other):
        if isinstance(other, Matrix):
            return self @ other
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.rows, self.cols, str(self.re), str(self.im)))

    def is_zero(self) -> bool:
        return _is_zero_mat(self.re) and _is_zero_mat(self.im)

    def is_scalar_multiple_of_identity(self):
        """Return the scalar ``c`` if ``self == c * 1``, otherwise ``None``."""
        if self.rows != self.cols:
            return None
        c = self[0, 0] if self.rows else Scalar()
        if self == Matrix.identity(self.rows).scale(c):
            return c
        return None

    def trace(self) -> Scalar:
        tr = Scalar()
        for i in range(min(self.rows, self.cols)):
            tr = tr + self[i, i]
        return tr

    def transpose(self) -> "Matrix":
        return Matrix(self.re.transpose(), self.im.transpose())

    def max_entry(self):
        """``((i, j), value)`` of the nonzero entry with the largest height, or ``None``."""
        best = None
        for idx, (a, b) in enumerate(zip(self.re.entries(), self.im.entries())):
            if a == 0 and b == 0:
                continue
            h = max(abs(a.p), a.q, abs(b.p), b.q)
            if best is None or h > best[0]:
                best = (h, idx, a, b)
        if best is None:
            return None
        _, idx, a, b = best
        return (idx // self.cols, idx % self.cols), Scalar(_to_frac(a), _to_frac(b))

    def real_embedding(self) -> fmpq_mat:
        """The ``2r x 2c`` rational matrix ``[[re, -im], [im, re]]``."""
        r, c = self.rows, self.cols
        re = self.re.entries()
        im = self.im.entries()
        flat = []
        for i in range(r):
            row_re = re[i * c:(i + 1) * c]
            row_im = im[i * c:(i + 1) * c]
            flat.extend(row_re)
            flat.extend(-x for x in row_im)
        for i in range(r):
            row_re = re[i * c:(i + 1) * c]
            row_im = im[i * c:(i + 1) * c]
            flat.extend(row_im)
            flat.extend(row_re)
        return fmpq_mat(2 * r, 2 * c, flat)

    def rank(self) -> int:
        if self.rows == 0 or self.cols == 0:
            return 0
        return self.real_embedding().rank() // 2

    def to_json(self) -> list:
        return [[v.to_json() for v in row] for row in self.to_rows()]

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols})"

    def pretty(self) -> str:
        return "\n".join("[" + ", ".join(str(v) for v in row) + "]" for row in self.to_rows())


def _is_zero_mat(m: fmpq_mat) -> bool:
    return m.nrows() == 0 or m.ncols() == 0 or m == fmpq_mat(m.nrows(), m.ncols())


def commutator(a: Matrix, b: Matrix) -> Matrix:
    return a @ b - b @ a


def _real_kernel(e: fmpq_mat) -> list[list[fmpq]]:
    rows, cols = e.nrows(), e.ncols()
    if rows == 0:
        basis = []
        for f in range(cols):
            v = [fmpq(0)] * cols
            v[f] = fmpq(1)
            basis.append(v)
        return basis
    red, rank = e.rref()
    pivots = []
    row = 0
    for col in range(cols):
        if row < rank and red[row, col] != 0:
            pivots.append(col)
            row += 1
    pivot_set = set(pivots)
    basis = []
    for f in range(cols):
        if f in pivot_set:
            continue
        v = [fmpq(0)] * cols
        v[f] = fmpq(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r, f]
        basis.append(v)
    return basis


def independent_columns(vectors: Iterable[list[Scalar]], dim: int) -> list[list[Scalar]]:
    """Greedy maximal complex-linearly independent subset (order preserving)."""
    chosen: list[list[Scalar]] = []
    echelon: list[tuple[int, list[Scalar]]] = []
    for vec in vectors:
        w = list(vec)
        for piv, row in echelon:
            if w[piv]:
                factor = w[piv]
                w = [a - factor * b for a, b in zip(w, row)]
        lead = next((i for i in range(dim) if w[i]), None)
        if lead is None:
            continue
        inv = 1 / w[lead]
        # rows are reduced against all earlier pivots, so one forward pass suffices
        echelon.append((lead, [x * inv for x in w]))
        chosen.append(list(vec))
    return chosen


def nullspace(m: Matrix) -> Matrix:
    """Basis of the complex kernel of ``m`` as the columns of a matrix."""
    c = m.cols
    real = _real_kernel(m.real_embedding()) if m.rows else _real_kernel(fmpq_mat(0, 2 * c))
    candidates = (
        [Scalar(_to_frac(v[i]), _to_frac(v[c + i])) for i in range(c)] for v in real
    )
    need = len(real) // 2
    basis = []
    for vec in independent_columns(candidates, c):
        basis.append(vec)
        if len(basis) == need:
            break
    if not basis:
        return Matrix.zeros(c, 0)
    return Matrix.from_entries(
        c, len(basis), {(i, j): v for j, vec in enumerate(basis) for i, v in enumerate(vec) if v}
    )


def solve(a: Matrix, b: Matrix):
    """A solution ``x`` of ``a @ x == b`` for a single column ``b``, or ``None``."""
    if b.cols != 1 or b.rows != a.rows:
        raise DimensionMismatch("solve expects a column right-hand side")
    aug = Matrix.hstack([a, -b])
    ker = nullspace(aug)
    last = a.cols
    for j in range(ker.cols):
        t = ker[last, j]
        if t:
            col = ker.column_vector(j).scale(1 / t)
            entries = {(i, 0): v for (i, _), v in col.nonzero_items() if i < last}
            return Matrix.from_entries(last, 1, entries)
    return None


def column_space_basis(m: Matrix) -> Matrix:
    rows = m.to_rows()
    cols = [[rows[i][j] for i in range(m.rows)] for j in range(m.cols)]
    chosen = independent_columns(cols, m.rows)
    return Matrix.from_entries(
        m.rows, len(chosen), {(i, j): v for j, vec in enumerate(chosen) for i, v in enumerate(vec) if v}
    )


def span_contains(basis: Matrix, v: Matrix) -> bool:
    if v.is_zero():
        return True
    if basis.cols == 0:
        return False
    return Matrix.hstack([basis, v]).rank() == basis.rank()


def intersect_spaces(a: Matrix, b: Matrix) -> Matrix:
    """Basis of the intersection of two column spaces."""
    if a.cols == 0 or b.cols == 0:
        return Matrix.zeros(a.rows, 0)
    ker = nullspace(Matrix.hstack([a, -b]))
    if ker.cols == 0:
        return Matrix.zeros(a.rows, 0)
    top = Matrix.from_entries(
        a.cols, ker.cols, {(i, j): v for (i, j), v in ker.nonzero_items() if i < a.cols}
    )
    return column_space_basis(a @ top)


def inverse(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise DimensionMismatch("inverse of non-square matrix")
    d = m.rows
    e = m.real_embedding().inv()
    # inverse of the embedding is the embedding of the inverse
    re = fmpq_mat(d, d, [e[i, j] for i in range(d) for j in range(d)])
    im = fmpq_mat(d, d, [e[d + i, j] for i in range(d) for j in range(d)])
    return Matrix(re, im)


def matrix_json_entry(v: Scalar) -> dict:
    return {"re": _frac_str(v.re), "im": _frac_str(v.im)}


def is_diagonal(m: Matrix) -> bool:
    return all(i == j for (i, j), _ in m.nonzero_items())


def intertwiner_space(left: Sequence[Matrix], right: Sequence[Matrix]) -> list[Matrix]:
    """Basis of ``{X : A_j X = X B_j for all j}`` with ``A = left``, ``B = right``.

    Pairs of diagonal ``A_j, B_j`` are used first to zero out entries of ``X``
    whose row and column eigenvalues differ, which keeps the system small.
    """
    if len(left) != len(right):
        raise DimensionMismatch("intertwiner needs matching generator lists")
    d1 = left[0].rows
    d2 = right[0].rows
    allowed = [[True] * d2 for _ in range(d1)]
    for a, b in zip(left, right):
        if is_diagonal(a) and is_diagonal(b):
            da = [a[i, i] for i in range(d1)]
            db = [b[i, i] for i in range(d2)]
            for i in range(d1):
                for j in range(d2):
                    if da[i] != db[j]:
                        allowed[i][j] = False
    unknowns = [(i, j) for i in range(d1) for j in range(d2) if allowed[i][j]]
    if not unknowns:
        return []
    col = {u: n for n, u in enumerate(unknowns)}
    by_row: dict = {}
    by_col: dict = {}
    for (i, j) in unknowns:
        by_row.setdefault(i, []).append(j)
        by_col.setdefault(j, []).append(i)
    eqs: dict = {}
    for a, b in zip(left, right):
        rows: dict = {}
        # (A X)[r, j] = sum_c A[r, c] X[c, j]
        for (r, c), v in a.nonzero_items():
            for j in by_row.get(c, ()):
                e = rows.setdefault((r, j), {})
                u = col[(c, j)]
                e[u] = e.get(u, Scalar()) + v
        # (X B)[i, s] = sum_c X[i, c] B[c, s]
        for (c, s), v in b.nonzero_items():
            for i in by_col.get(c, ()):
                e = rows.setdefault((i, s), {})
                u = col[(i, c)]
                e[u] = e.get(u, Scalar()) - v
        for eq in rows.values():
            eq = {u: v for u, v in eq.items() if v}
            if eq:
                eqs[len(eqs)] = eq
    system = Matrix.from_entries(
        len(eqs), len(unknowns), {(r, u): v for r, eq in eqs.items() for u, v in eq.items()}
    )
    ker = nullspace(system) if eqs else Matrix.identity(len(unknowns))
    out = []
    for t in range(ker.cols):
        entries = {unknowns[u]: v for (u, tt), v in ker.nonzero_items() if tt == t}
        out.append(Matrix.from_entries(d1, d2, entries))
    return out
