"""Chevalley-Eilenberg complex of a Lie algebra with coefficients in the adjoint module.

Cochains of degree k are alternating k-linear maps g^k -> g. Coordinates on
C^k are ordered by increasing index tuple ``i_1 < ... < i_k`` (lexicographic)
and then by target coordinate, so coordinate ``t*n + m`` of a cochain is the
``Y_m`` component of its value on the ``t``-th tuple.

The differential is

    (d phi)(x_0..x_k) = sum_i (-1)^i [x_i, phi(..x_i omitted..)]
                      + sum_{i<j} (-1)^(i+j) phi([x_i, x_j], ..x_i, x_j omitted..)

whose degree-1 kernel is exactly the derivation algebra.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Mapping, Sequence

from .exactlin import Matrix, rank
from .liecore import LieAlgebra, require_lie


def cochain_dim(n: int, k: int) -> int:
    if not 0 <= k <= n:
        raise ValueError(f"cochain degree {k} outside 0..{n}")
    return n * comb(n, k)


@lru_cache(maxsize=64)
def _tuples(n: int, k: int):
    tl = list(combinations(range(n), k))
    return tl, {t: i for i, t in enumerate(tl)}


def _sort_with_sign(items):
    """Sort a tuple of distinct indices; returns (sorted tuple, permutation sign) or (None, 0)."""
    lst = list(items)
    if len(set(lst)) != len(lst):
        return None, 0
    sign = 1
    for a in range(len(lst)):
        for b in range(len(lst) - 1 - a):
            if lst[b] > lst[b + 1]:
                lst[b], lst[b + 1] = lst[b + 1], lst[b]
                sign = -sign
    return tuple(lst), sign


@dataclass(frozen=True)
class ComplexSlice:
    degree: int
    matrix: Matrix
    dims: tuple[int, int]

    @property
    def rank(self) -> int:
        return _slice_rank(self)


_rank_cache: dict[int, int] = {}


def _slice_rank(s: ComplexSlice) -> int:
    key = id(s.matrix)
    cached = _rank_cache.get(key)
    if cached is None or cached[0] is not s.matrix:
        cached = (s.matrix, rank(s.matrix))
        _rank_cache[key] = cached
    return cached[1]


@lru_cache(maxsize=32)
def differential_matrix(g: LieAlgebra, k: int) -> ComplexSlice:
    """Matrix of d_k : C^k -> C^(k+1) (rows index C^(k+1))."""
    require_lie(g)
    n = g.dim
    if not 0 <= k < n:
        if k == n:
            return ComplexSlice(k, Matrix.zeros(0, cochain_dim(n, k)), (cochain_dim(n, k), 0))
        raise ValueError(f"degree {k} outside 0..{n}")
    src, src_index = _tuples(n, k)
    dst, _ = _tuples(n, k + 1)
    struct = {(i, j): g.structure(i, j) for i in range(n) for j in range(n) if i != j}
    rows = []
    for s in dst:
        block: list[dict[int, Fraction]] = [{} for _ in range(n)]

        def add(m, col, c):
            row = block[m]
            x = row.get(col, 0) + c
            if x:
                row[col] = x
            else:
                row.pop(col, None)

        for a in range(k + 1):
            sign = -1 if a % 2 else 1
            rest = s[:a] + s[a + 1:]
            t = src_index[rest]
            xa = s[a]
            # sign * [Y_xa, phi(rest)] for phi = e_{t, q}
            for q in range(n):
                for m, c in struct.get((xa, q), {}).items():
                    add(m, t * n + q, sign * c)
        for a in range(k + 1):
            for b in range(a + 1, k + 1):
                sign = -1 if (a + b) % 2 else 1
                rest = s[:a] + s[a + 1:b] + s[b + 1:]
                for q, c in struct.get((s[a], s[b]), {}).items():
                    tup, perm_sign = _sort_with_sign((q,) + rest)
                    if tup is None:
                        continue
                    t = src_index[tup]
                    coef = sign * perm_sign * c
                    for m in range(n):
                        add(m, t * n + m, coef)
        rows.extend(block)
    mat = Matrix.from_row_dicts(len(rows), cochain_dim(n, k), rows)
    return ComplexSlice(k, mat, (cochain_dim(n, k), cochain_dim(n, k + 1)))


def differential_rank(g: LieAlgebra, k: int) -> int:
    if k < 0 or k >= g.dim:
        return 0
    return differential_matrix(g, k).rank


def cohomology_dim(g: LieAlgebra, k: int) -> int:
    """dim H^k(g, g) = dim C^k - rank d_k - rank d_(k-1)."""
    if k not in (0, 1, 2):
        raise ValueError("only degrees 0, 1 and 2 are supported")
    n = g.dim
    if k > n:
        return 0
    return cochain_dim(n, k) - differential_rank(g, k) - differential_rank(g, k - 1)


def cohomology_report(g: LieAlgebra, label: str | None = None, top: int = 2) -> dict:
    """JSON-ready record with cochain dims, differential ranks and H^0..H^top."""
    n = g.dim
    dims = {f"C{k}": cochain_dim(n, k) if k <= n else 0 for k in range(top + 2)}
    ranks = {f"d{k}": differential_rank(g, k) for k in range(top + 1)}
    hs = {f"H{k}": cohomology_dim(g, k) for k in range(top + 1)}
    return {"algebra": label or g.name or "", "dims": dims, "ranks": ranks, "H": hs}


class Cochain2:
    """Alternating 2-cochain with values in g, stored on pairs i < j."""

    __slots__ = ("algebra", "values")

    def __init__(self, algebra: LieAlgebra, values: Mapping | None = None):
        n = algebra.dim
        self.algebra = algebra
        clean: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (i, j), vec in (values or {}).items():
            if not (0 <= i < j < n):
                raise ValueError(f"cochain key ({i}, {j}) must satisfy 0 <= i < j < {n}")
            if isinstance(vec, Mapping):
                terms = {k: Fraction(c) for k, c in vec.items() if c}
            else:
                if len(vec) != n:
                    raise ValueError("cochain values must have length dim g")
                terms = {k: Fraction(c) for k, c in enumerate(vec) if c}
            if any(not 0 <= k < n for k in terms):
                raise ValueError("cochain target out of range")
            if terms:
                clean[(i, j)] = terms
        self.values = clean

    def __call__(self, i: int, j: int) -> list[Fraction]:
        n = self.algebra.dim
        out = [Fraction(0)] * n
        if i == j:
            return out
        sign = 1
        if i > j:
            i, j, sign = j, i, -1
        for k, c in self.values.get((i, j), {}).items():
            out[k] = sign * c
        return out

    def vector(self) -> list[Fraction]:
        n = self.algebra.dim
        _, index = _tuples(n, 2)
        v = [Fraction(0)] * cochain_dim(n, 2)
        for pair, terms in self.values.items():
            t = index[pair]
            for k, c in terms.items():
                v[t * n + k] = c
        return v

    @classmethod
    def from_vector(cls, algebra: LieAlgebra, vec: Sequence) -> "Cochain2":
        n = algebra.dim
        tl, _ = _tuples(n, 2)
        values = {}
        for t, pair in enumerate(tl):
            terms = {m: vec[t * n + m] for m in range(n) if vec[t * n + m]}
            if terms:
                values[pair] = terms
        return cls(algebra, values)


def coboundary(g: LieAlgebra, phi: Matrix) -> Cochain2:
    """d_1 of a linear map (given as a matrix acting on coordinates)."""
    n = g.dim
    vec = [Fraction(0)] * cochain_dim(n, 1)
    for (r, c), x in phi.entries.items():
        vec[c * n + r] = x
    return Cochain2.from_vector(g, differential_matrix(g, 1).matrix.matvec(vec))


def is_cocycle(c: Cochain2) -> bool:
    g = c.algebra
    if g.dim < 3:
        return True
    return not any(differential_matrix(g, 2).matrix.matvec(c.vector()))


class NotACocycle(ValueError):
    pass


def classes_rank(g: LieAlgebra, cocycles: Sequence[Cochain2]) -> int:
    """Dimension of the span of ``cocycles`` in H^2 = Z^2 / B^2."""
    for pos, c in enumerate(cocycles):
        if c.algebra is not g and not c.algebra.same_table(g):
            raise ValueError(f"cochain {pos} lives on a different algebra")
        if not is_cocycle(c):
            raise NotACocycle(f"cochain {pos} is not a 2-cocycle")
    if not cocycles:
        return 0
    b2 = differential_matrix(g, 1).matrix
    base = rank(b2)
    extra = Matrix.from_columns(b2.rows, [c.vector() for c in cocycles])
    return rank(b2.hstack(extra)) - base
