"""Exact rational linear algebra on sparse matrices.

Everything here works over :class:`fractions.Fraction`; there is no floating
point anywhere. Elimination is fraction-free: rows are scaled to primitive
integer vectors and combined by cross-multiplication, so intermediate entries
stay integral and the row content is divided out after every update.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

Scalar = Fraction


def to_scalar(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a reduced Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational literal")
        return Fraction(text)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_scalar(value) -> str:
    q = to_scalar(value)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_scalar(text: str) -> Fraction:
    return to_scalar(text)


class Matrix:
    """Sparse ``rows x cols`` matrix of Fractions.

    Entries are kept as one dict per row (column -> nonzero value). Instances
    are treated as immutable once built.
    """

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, entries=None):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        self.rows = rows
        self.cols = cols
        data: list[dict[int, Fraction]] = [{} for _ in range(rows)]
        if entries:
            for (r, c), v in entries.items():
                if not (0 <= r < rows and 0 <= c < cols):
                    raise IndexError(f"entry ({r}, {c}) outside {rows}x{cols}")
                v = to_scalar(v)
                if v:
                    data[r][c] = v
        self._data = data

    @classmethod
    def _from_row_dicts(cls, rows: int, cols: int, data) -> "Matrix":
        m = cls.__new__(cls)
        m.rows = rows
        m.cols = cols
        m._data = data
        return m

    @classmethod
    def from_rows(cls, dense: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        nrows = len(dense)
        if cols is None:
            cols = len(dense[0]) if nrows else 0
        data = []
        for row in dense:
            if len(row) != cols:
                raise ValueError("ragged rows")
            data.append({c: to_scalar(v) for c, v in enumerate(row) if v})
        return cls._from_row_dicts(nrows, cols, data)

    @classmethod
    def from_row_dicts(cls, rows: int, cols: int, row_dicts) -> "Matrix":
        data = []
        for d in row_dicts:
            clean = {}
            for c, v in d.items():
                if not 0 <= c < cols:
                    raise IndexError(f"column {c} outside 0..{cols - 1}")
                v = to_scalar(v)
                if v:
                    clean[c] = v
            data.append(clean)
        if len(data) != rows:
            raise ValueError("row count mismatch")
        return cls._from_row_dicts(rows, cols, data)

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[Sequence]) -> "Matrix":
        data: list[dict[int, Fraction]] = [{} for _ in range(rows)]
        for c, col in enumerate(columns):
            if len(col) != rows:
                raise ValueError("column length mismatch")
            for r, v in enumerate(col):
                if v:
                    data[r][c] = to_scalar(v)
        return cls._from_row_dicts(rows, len(columns), data)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls._from_row_dicts(n, n, [{i: Fraction(1)} for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls._from_row_dicts(rows, cols, [{} for _ in range(rows)])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def entries(self) -> dict[tuple[int, int], Fraction]:
        return {(r, c): v for r, row in enumerate(self._data) for c, v in row.items()}

    def nnz(self) -> int:
        return sum(len(row) for row in self._data)

    def row(self, r: int) -> dict[int, Fraction]:
        return dict(self._data[r])

    def __getitem__(self, key) -> Fraction:
        r, c = key
        if not (0 <= r < self.rows and 0 <= c < self.cols):
            raise IndexError(key)
        return self._data[r].get(c, Fraction(0))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(tuple(sorted(r.items())) for r in self._data)))

    def __repr__(self) -> str:
        return f"Matrix({self.rows}x{self.cols}, nnz={self.nnz()})"

    def to_dense(self) -> list[list[Fraction]]:
        out = []
        for row in self._data:
            dense = [Fraction(0)] * self.cols
            for c, v in row.items():
                dense[c] = v
            out.append(dense)
        return out

    def transpose(self) -> "Matrix":
        data: list[dict[int, Fraction]] = [{} for _ in range(self.cols)]
        for r, row in enumerate(self._data):
            for c, v in row.items():
                data[c][r] = v
        return Matrix._from_row_dicts(self.cols, self.rows, data)

    def column(self, c: int) -> list[Fraction]:
        return [row.get(c, Fraction(0)) for row in self._data]

    def matvec(self, vec: Sequence) -> list[Fraction]:
        if len(vec) != self.cols:
            raise ValueError(f"vector of length {len(vec)} for {self.cols} columns")
        out = []
        for row in self._data:
            s = Fraction(0)
            for c, v in row.items():
                x = vec[c]
                if x:
                    s += v * x
            out.append(s)
        return out

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        data = []
        for row in self._data:
            acc: dict[int, Fraction] = {}
            for k, v in row.items():
                for c, w in other._data[k].items():
                    acc[c] = acc.get(c, 0) + v * w
            data.append({c: x for c, x in acc.items() if x})
        return Matrix._from_row_dicts(self.rows, other.cols, data)

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        shift = self.cols
        data = []
        for a, b in zip(self._data, other._data):
            row = dict(a)
            for c, v in b.items():
                row[c + shift] = v
            data.append(row)
        return Matrix._from_row_dicts(self.rows, self.cols + other.cols, data)

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols:
            raise ValueError("column count mismatch")
        data = [dict(r) for r in self._data] + [dict(r) for r in other._data]
        return Matrix._from_row_dicts(self.rows + other.rows, self.cols, data)

    def is_zero(self) -> bool:
        return not any(self._data)


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {c: v // g for c, v in row.items()}
    return row


def _integer_rows(m: Matrix) -> list[dict[int, int]]:
    out = []
    for row in m._data:
        if not row:
            continue
        den = 1
        for v in row.values():
            den = lcm(den, v.denominator)
        out.append(_primitive({c: int(v * den) for c, v in row.items()}))
    return out


def _forward_eliminate(int_rows: list[dict[int, int]], ncols: int):
    """Fraction-free forward elimination.

    Columns are processed left to right. Among rows still active that have a
    nonzero in the current column, the sparsest one becomes the pivot (ties go
    to the lowest row position), which keeps fill-in down on the very sparse
    differentials. Returns ``[(pivot_col, row), ...]`` in column order; every
    returned row has its leading entry in its pivot column.
    """
    rows = [dict(r) for r in int_rows]
    colmap: dict[int, set[int]] = {}
    for i, r in enumerate(rows):
        for c in r:
            colmap.setdefault(c, set()).add(i)
    active = set(range(len(rows)))
    pivots = []
    for c in sorted(colmap):
        cand = [i for i in colmap.get(c, ()) if i in active]
        if not cand:
            continue
        p = min(cand, key=lambda i: (len(rows[i]), i))
        prow = rows[p]
        pv = prow[c]
        active.discard(p)
        for i in cand:
            if i == p:
                continue
            r = rows[i]
            rv = r[c]
            g = gcd(pv, rv)
            a, b = pv // g, rv // g
            new: dict[int, int] = {}
            if a == 1:
                new.update(r)
            else:
                for cc, v in r.items():
                    new[cc] = a * v
            for cc, v in prow.items():
                x = new.get(cc, 0) - b * v
                if x:
                    new[cc] = x
                else:
                    new.pop(cc, None)
            new = _primitive(new)
            for cc in r:
                if cc not in new:
                    s = colmap.get(cc)
                    if s is not None:
                        s.discard(i)
            for cc in new:
                if cc not in r:
                    colmap.setdefault(cc, set()).add(i)
            rows[i] = new
        pivots.append((c, prow))
    return pivots


def rank(m: Matrix) -> int:
    """Rank over the rationals."""
    return len(_forward_eliminate(_integer_rows(m), m.cols))


def _reduced_echelon(pivots) -> list[tuple[int, dict[int, Fraction]]]:
    # back-substitution, last pivot first; each row normalised to leading 1
    reduced: list[tuple[int, dict[int, Fraction]]] = []
    by_col: dict[int, dict[int, Fraction]] = {}
    for c, row in reversed(pivots):
        lead = row[c]
        r = {cc: Fraction(v, lead) for cc, v in row.items()}
        for pc in sorted(k for k in r if k != c and k in by_col):
            f = r.get(pc)
            if not f:
                continue
            for cc, v in by_col[pc].items():
                x = r.get(cc, 0) - f * v
                if x:
                    r[cc] = x
                else:
                    r.pop(cc, None)
        by_col[c] = r
        reduced.append((c, r))
    reduced.reverse()
    return reduced


def reduced_row_echelon(m: Matrix) -> list[tuple[int, dict[int, Fraction]]]:
    """Nonzero rows of the (unique) reduced row echelon form with their pivot columns."""
    return _reduced_echelon(_forward_eliminate(_integer_rows(m), m.cols))


def kernel_basis(m: Matrix) -> list[list[Fraction]]:
    """Basis of the right null space, one vector per free column in increasing order."""
    rref = reduced_row_echelon(m)
    pivot_cols = {c for c, _ in rref}
    basis = []
    for f in range(m.cols):
        if f in pivot_cols:
            continue
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for c, row in rref:
            x = row.get(f)
            if x:
                v[c] = -x
        basis.append(v)
    return basis


def solve(a: Matrix, b: Sequence) -> list[Fraction] | None:
    """One solution of ``a x = b`` (free variables zero), or None if inconsistent."""
    if len(b) != a.rows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {a.rows}")
    aug = a.hstack(Matrix.from_columns(a.rows, [[to_scalar(x) for x in b]]))
    rref = reduced_row_echelon(aug)
    x = [Fraction(0)] * a.cols
    for c, row in rref:
        if c == a.cols:
            return None
        x[c] = row.get(a.cols, Fraction(0))
    return x


def echelon_basis(vectors: Iterable[Sequence], dim: int) -> list[list[Fraction]]:
    """Reduced echelon basis of the span of ``vectors`` (canonical per subspace)."""
    vecs = [list(v) for v in vectors]
    if not vecs:
        return []
    m = Matrix.from_rows(vecs, cols=dim)
    out = []
    for _, row in reduced_row_echelon(m):
        v = [Fraction(0)] * dim
        for c, x in row.items():
            v[c] = x
        out.append(v)
    return out


def span_rank(vectors: Iterable[Sequence], dim: int) -> int:
    vecs = [list(v) for v in vectors]
    if not vecs:
        return 0
    return rank(Matrix.from_rows(vecs, cols=dim))


def inverse(m: Matrix) -> Matrix:
    """Inverse of a square nonsingular matrix."""
    if m.rows != m.cols:
        raise ValueError("inverse of a non-square matrix")
    n = m.rows
    rref = reduced_row_echelon(m.hstack(Matrix.identity(n)))
    if len(rref) < n or any(c != i for i, (c, _) in enumerate(rref[:n])):
        raise ValueError("matrix is singular")
    data = [{c - n: v for c, v in row.items() if c >= n} for _, row in rref[:n]]
    return Matrix._from_row_dicts(n, n, data)
