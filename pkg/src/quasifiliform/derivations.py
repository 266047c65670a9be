"""Derivations, inner derivations, diagonal tori and the completeness test."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .exactlin import Matrix, echelon_basis, kernel_basis, span_rank, to_scalar
from .liecore import LieAlgebra, ad_matrix, center, require_lie


@dataclass(frozen=True)
class DerivationSpace:
    algebra: LieAlgebra
    basis: tuple[Matrix, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.basis)


def _flatten(m: Matrix) -> list[Fraction]:
    n = m.cols
    v = [Fraction(0)] * (m.rows * n)
    for (r, c), x in m.entries.items():
        v[c * m.rows + r] = x
    return v


def _unflatten(v: Sequence[Fraction], n: int) -> Matrix:
    # column-major: v[i*n + k] is the Y_k coefficient of D(Y_i)
    return Matrix(n, n, {(idx % n, idx // n): x for idx, x in enumerate(v) if x})


def derivation_system(g: LieAlgebra) -> Matrix:
    """Linear constraints on the n^2 entries of D expressing D[x,y] = [Dx,y] + [x,Dy].

    Unknown ``i*n + k`` is the ``Y_k`` coefficient of ``D(Y_i)``.
    """
    n = g.dim
    struct = {(i, j): g.structure(i, j) for i in range(n) for j in range(n) if i != j}
    rows = []
    for i in range(n):
        for j in range(i + 1, n):
            eq: dict[int, dict[int, Fraction]] = {}

            def add(m, var, c):
                row = eq.setdefault(m, {})
                x = row.get(var, 0) + c
                if x:
                    row[var] = x
                else:
                    row.pop(var, None)

            for k, c in struct.get((i, j), {}).items():
                for m in range(n):
                    add(m, k * n + m, c)
            # -[D Y_i, Y_j] - [Y_i, D Y_j]
            for l in range(n):
                for m, c in struct.get((l, j), {}).items():
                    add(m, i * n + l, -c)
                for m, c in struct.get((i, l), {}).items():
                    add(m, j * n + l, -c)
            rows.extend(r for _, r in sorted(eq.items()) if r)
    return Matrix.from_row_dicts(len(rows), n * n, rows)


def is_derivation(g: LieAlgebra, d: Matrix) -> bool:
    n = g.dim
    v = _flatten(d)
    return not any(derivation_system(g).matvec(v)) if n else True


def derivation_space(g: LieAlgebra) -> DerivationSpace:
    require_lie(g)
    n = g.dim
    basis = kernel_basis(derivation_system(g))
    return DerivationSpace(g, tuple(_unflatten(v, n) for v in basis))


def inner_derivations(g: LieAlgebra) -> DerivationSpace:
    require_lie(g)
    n = g.dim
    flats = [_flatten(ad_matrix(g, i)) for i in range(n)]
    basis = echelon_basis(flats, n * n)
    return DerivationSpace(g, tuple(_unflatten(v, n) for v in basis))


@dataclass(frozen=True)
class DiagonalDerivationSpec:
    """Diagonal derivation family: ``weights[m][p]`` is the coefficient of
    parameter ``p`` in the eigenvalue on ``Y_m``."""

    weights: tuple[tuple[Fraction, ...], ...]
    nparams: int

    @classmethod
    def from_forms(cls, forms: Sequence[Sequence], nparams: int | None = None) -> "DiagonalDerivationSpec":
        rows = tuple(tuple(to_scalar(x) for x in f) for f in forms)
        if nparams is None:
            nparams = len(rows[0]) if rows else 0
        if any(len(r) != nparams for r in rows):
            raise ValueError("every weight form needs one coefficient per parameter")
        return cls(rows, nparams)

    @classmethod
    def from_generators(cls, diagonals: Sequence[Sequence]) -> "DiagonalDerivationSpec":
        """One parameter per diagonal vector."""
        if not diagonals:
            return cls((), 0)
        n = len(diagonals[0])
        return cls.from_forms([[d[m] for d in diagonals] for m in range(n)], len(diagonals))

    @property
    def dim(self) -> int:
        return len(self.weights)

    @property
    def rank(self) -> int:
        return span_rank(self.generators(), self.dim)

    def generators(self) -> list[list[Fraction]]:
        """Diagonal of the derivation attached to each parameter."""
        return [[w[p] for w in self.weights] for p in range(self.nparams)]

    def instantiate(self, params: Sequence) -> list[Fraction]:
        if len(params) != self.nparams:
            raise ValueError(f"{len(params)} parameter values for {self.nparams} parameters")
        vals = [to_scalar(x) for x in params]
        return [sum((a * b for a, b in zip(w, vals)), Fraction(0)) for w in self.weights]

    def contains(self, other: "DiagonalDerivationSpec") -> bool:
        mine = self.generators()
        r = span_rank(mine, self.dim)
        return span_rank(mine + other.generators(), self.dim) == r

    def same_space(self, other: "DiagonalDerivationSpec") -> bool:
        return self.contains(other) and other.contains(self)


def diagonal_matrix(diag: Sequence) -> Matrix:
    return Matrix(len(diag), len(diag), {(i, i): x for i, x in enumerate(diag) if x})


def diagonal_constraints(g: LieAlgebra) -> Matrix:
    rows = []
    for (i, j), terms in sorted(g.brackets.items()):
        for k in sorted(terms):
            row: dict[int, Fraction] = {}
            for idx, c in ((k, 1), (i, -1), (j, -1)):
                row[idx] = row.get(idx, 0) + c
            rows.append({a: b for a, b in row.items() if b})
    return Matrix.from_row_dicts(len(rows), g.dim, rows)


def diagonal_derivation_space(g: LieAlgebra) -> DiagonalDerivationSpec:
    """All derivations that are diagonal in the given basis.

    Its dimension is the diagonal rank in this basis: a lower bound for the
    rank of ``g``, and equal to it when the basis is a torus eigenbasis.
    """
    require_lie(g)
    gens = kernel_basis(diagonal_constraints(g))
    return DiagonalDerivationSpec.from_generators(gens) if gens else DiagonalDerivationSpec(
        tuple(() for _ in range(g.dim)), 0)


def diagonal_rank(g: LieAlgebra) -> int:
    return diagonal_derivation_space(g).nparams


class Completeness(NamedTuple):
    complete: bool
    center_dim: int
    der_dim: int
    ad_dim: int


def is_complete(g: LieAlgebra) -> Completeness:
    z = center(g).dim
    der = derivation_space(g).dim
    ad = inner_derivations(g).dim
    return Completeness(z == 0 and der == ad, z, der, ad)
