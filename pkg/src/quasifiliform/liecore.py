"""Lie algebras given by structure constants, and their filtration invariants."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .exactlin import (
    Matrix,
    echelon_basis,
    format_scalar,
    inverse,
    kernel_basis,
    span_rank,
    to_scalar,
)


class AlgebraError(ValueError):
    """Malformed structure-constant data."""


class NotALieAlgebra(ValueError):
    """Raised when an operation needs the Jacobi identity and it fails."""


class NotNilpotent(ValueError):
    pass


def _clean_terms(terms: Mapping[int, object], n: int) -> dict[int, Fraction]:
    out = {}
    for k, c in terms.items():
        if not isinstance(k, int) or not 0 <= k < n:
            raise AlgebraError(f"target index {k!r} out of range 0..{n - 1}")
        c = to_scalar(c)
        if c:
            out[k] = c
    return out


class LieAlgebra:
    """Finite-dimensional algebra with antisymmetric bracket on a fixed basis.

    ``brackets`` maps ``(i, j)`` with ``i < j`` to ``{k: c_ij^k}``. Only the
    upper triangle is stored; ``[Y_j, Y_i] = -[Y_i, Y_j]`` is implied. The
    Jacobi identity is *not* enforced here, see :func:`jacobi_defect`.
    """

    __slots__ = ("dim", "labels", "_brackets", "name", "_hash")

    def __init__(self, dim: int, brackets: Mapping | None = None,
                 labels: Sequence[str] | None = None, name: str | None = None):
        if dim < 0:
            raise AlgebraError("dimension must be nonnegative")
        self.dim = dim
        if labels is None:
            labels = [f"Y{i}" for i in range(dim)]
        labels = tuple(labels)
        if len(labels) != dim:
            raise AlgebraError(f"{len(labels)} labels for dimension {dim}")
        self.labels = labels
        table: dict[tuple[int, int], dict[int, Fraction]] = {}
        for key, terms in (brackets or {}).items():
            i, j = key
            if not (0 <= i < dim and 0 <= j < dim):
                raise AlgebraError(f"bracket index ({i}, {j}) out of range")
            if i >= j:
                raise AlgebraError(f"only i < j bracket keys are allowed, got ({i}, {j})")
            clean = _clean_terms(terms, dim)
            if clean:
                table[(i, j)] = clean
        self._brackets = table
        self.name = name
        self._hash = None

    @property
    def brackets(self) -> dict[tuple[int, int], dict[int, Fraction]]:
        return {key: dict(v) for key, v in self._brackets.items()}

    def structure(self, i: int, j: int) -> dict[int, Fraction]:
        """``[Y_i, Y_j]`` as a sparse ``{k: coefficient}`` dict."""
        if i == j:
            return {}
        if i < j:
            return dict(self._brackets.get((i, j), {}))
        return {k: -c for k, c in self._brackets.get((j, i), {}).items()}

    def nonzero_pairs(self):
        return sorted(self._brackets)

    def basis_vector(self, i: int) -> list[Fraction]:
        v = [Fraction(0)] * self.dim
        v[i] = Fraction(1)
        return v

    def _key(self):
        return (self.dim, tuple(sorted((k, tuple(sorted(v.items()))) for k, v in self._brackets.items())))

    def same_table(self, other: "LieAlgebra") -> bool:
        return self._key() == other._key()

    def __eq__(self, other):
        if not isinstance(other, LieAlgebra):
            return NotImplemented
        return self._key() == other._key() and self.labels == other.labels

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._key(), self.labels))
        return self._hash

    def __repr__(self):
        tag = f" {self.name}" if self.name else ""
        return f"<LieAlgebra{tag} dim={self.dim} brackets={len(self._brackets)}>"

    def describe(self) -> list[str]:
        lines = []
        for (i, j), terms in sorted(self._brackets.items()):
            rhs = " + ".join(
                (f"{format_scalar(c)}*" if c != 1 else "") + self.labels[k]
                for k, c in sorted(terms.items())
            )
            lines.append(f"[{self.labels[i]}, {self.labels[j]}] = {rhs}")
        return lines

    # JSON document: {"dim", "labels", "brackets": [{"i", "j", "terms": [{"k", "c"}]}]}
    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "labels": list(self.labels),
            "brackets": [
                {"i": i, "j": j,
                 "terms": [{"k": k, "c": format_scalar(c)} for k, c in sorted(terms.items())]}
                for (i, j), terms in sorted(self._brackets.items())
            ],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, doc: Mapping) -> "LieAlgebra":
        if not isinstance(doc, Mapping):
            raise AlgebraError("algebra document must be a JSON object")
        if "dim" not in doc:
            raise AlgebraError("missing field 'dim'")
        dim = doc["dim"]
        if not isinstance(dim, int) or isinstance(dim, bool) or dim < 0:
            raise AlgebraError("field 'dim' must be a nonnegative integer")
        labels = doc.get("labels")
        if labels is not None and (not isinstance(labels, list) or len(labels) != dim):
            raise AlgebraError("field 'labels' must list one name per basis vector")
        table: dict[tuple[int, int], dict[int, Fraction]] = {}
        for pos, entry in enumerate(doc.get("brackets", [])):
            where = f"brackets[{pos}]"
            try:
                i, j, terms = entry["i"], entry["j"], entry["terms"]
            except (KeyError, TypeError):
                raise AlgebraError(f"{where}: needs fields 'i', 'j', 'terms'") from None
            for name, idx in (("i", i), ("j", j)):
                if not isinstance(idx, int) or isinstance(idx, bool) or not 0 <= idx < dim:
                    raise AlgebraError(f"{where}.{name}: index {idx!r} out of range")
            if i >= j:
                raise AlgebraError(f"{where}: only i < j entries are permitted")
            if (i, j) in table:
                raise AlgebraError(f"{where}: duplicate bracket ({i}, {j})")
            row: dict[int, Fraction] = {}
            for tpos, term in enumerate(terms):
                try:
                    k, c = term["k"], term["c"]
                except (KeyError, TypeError):
                    raise AlgebraError(f"{where}.terms[{tpos}]: needs fields 'k', 'c'") from None
                if not isinstance(k, int) or isinstance(k, bool) or not 0 <= k < dim:
                    raise AlgebraError(f"{where}.terms[{tpos}].k: index {k!r} out of range")
                if k in row:
                    raise AlgebraError(f"{where}.terms[{tpos}]: duplicate target {k}")
                try:
                    row[k] = to_scalar(c)
                except (TypeError, ValueError, ZeroDivisionError):
                    raise AlgebraError(f"{where}.terms[{tpos}].c: bad rational {c!r}") from None
            table[(i, j)] = row
        return cls(dim, table, labels=labels, name=doc.get("name"))

    @classmethod
    def from_json(cls, text: str) -> "LieAlgebra":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise AlgebraError(f"invalid JSON: {exc}") from None
        return cls.from_dict(doc)


def abelian(n: int) -> LieAlgebra:
    return LieAlgebra(n, {}, name=f"abelian{n}")


def _check_vec(g: LieAlgebra, v: Sequence, what: str):
    if len(v) != g.dim:
        raise ValueError(f"{what} has length {len(v)}, expected {g.dim}")


def bracket(g: LieAlgebra, x: Sequence, y: Sequence) -> list[Fraction]:
    _check_vec(g, x, "x")
    _check_vec(g, y, "y")
    out = [Fraction(0)] * g.dim
    for (i, j), terms in g._brackets.items():
        coef = x[i] * y[j] - x[j] * y[i]
        if coef:
            for k, c in terms.items():
                out[k] += coef * c
    return out


def _bracket_sparse(g: LieAlgebra, x: Mapping[int, Fraction], j: int) -> dict[int, Fraction]:
    out: dict[int, Fraction] = {}
    for i, a in x.items():
        for k, c in g.structure(i, j).items():
            out[k] = out.get(k, 0) + a * c
    return {k: v for k, v in out.items() if v}


def ad_matrix(g: LieAlgebra, x) -> Matrix:
    """Matrix of ``ad x``; ``x`` is a basis index or a coordinate vector."""
    if isinstance(x, int):
        xs = {x: Fraction(1)}
    else:
        _check_vec(g, x, "x")
        xs = {i: a for i, a in enumerate(x) if a}
    cols = [_bracket_sparse(g, xs, j) for j in range(g.dim)]
    entries = {(k, j): c for j, col in enumerate(cols) for k, c in col.items()}
    return Matrix(g.dim, g.dim, entries)


def jacobi_defect(g: LieAlgebra) -> list[tuple[int, int, int, list[Fraction]]]:
    """Triples ``i<j<k`` where the Jacobi sum is nonzero, with the defect vector."""
    n = g.dim
    bad = []
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                acc: dict[int, Fraction] = {}
                for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                    for m, v in _bracket_sparse(g, g.structure(a, b), c).items():
                        acc[m] = acc.get(m, 0) + v
                if any(acc.values()):
                    vec = [Fraction(0)] * n
                    for m, v in acc.items():
                        vec[m] = Fraction(v)
                    bad.append((i, j, k, vec))
    return bad


def is_lie(g: LieAlgebra) -> bool:
    return not jacobi_defect(g)


def require_lie(g: LieAlgebra):
    defects = jacobi_defect(g)
    if defects:
        i, j, k, _ = defects[0]
        raise NotALieAlgebra(
            f"Jacobi identity fails at {len(defects)} triple(s), first ({i}, {j}, {k})"
        )


@dataclass(frozen=True)
class Subspace:
    """Subspace of an algebra, stored by its reduced echelon basis."""

    dim_ambient: int
    basis: tuple[tuple[Fraction, ...], ...] = ()

    @classmethod
    def span(cls, vectors, n: int) -> "Subspace":
        return cls(n, tuple(tuple(v) for v in echelon_basis(vectors, n)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, other: "Subspace") -> bool:
        if other.dim == 0:
            return True
        return span_rank(list(self.basis) + list(other.basis), self.dim_ambient) == self.dim

    def contains_vector(self, v) -> bool:
        return span_rank(list(self.basis) + [list(v)], self.dim_ambient) == self.dim

    def is_coordinate(self) -> bool:
        return all(sum(1 for x in v if x) == 1 for v in self.basis)

    def support(self) -> list[int]:
        return sorted({i for v in self.basis for i, x in enumerate(v) if x})


def center(g: LieAlgebra) -> Subspace:
    require_lie(g)
    return Subspace.span(kernel_basis(adjoint_stack(g)), g.dim)


def adjoint_stack(g: LieAlgebra) -> Matrix:
    """``n^2 x n`` matrix sending x to the stacked coordinates of [x, Y_j]."""
    n = g.dim
    entries = {}
    for j in range(n):
        for i in range(n):
            for k, c in g.structure(i, j).items():
                entries[(j * n + k, i)] = c
    return Matrix(n * n, n, entries)


def derived_product(g: LieAlgebra, a: Subspace, b: Subspace | None = None) -> Subspace:
    """``[a, b]``; ``b`` defaults to the whole algebra."""
    vecs = []
    for v in a.basis:
        xs = {i: x for i, x in enumerate(v) if x}
        if b is None:
            for j in range(g.dim):
                w = _bracket_sparse(g, xs, j)
                if w:
                    vec = [Fraction(0)] * g.dim
                    for k, c in w.items():
                        vec[k] = c
                    vecs.append(vec)
        else:
            for u in b.basis:
                vecs.append(bracket(g, list(v), list(u)))
    return Subspace.span(vecs, g.dim)


def whole(g: LieAlgebra) -> Subspace:
    return Subspace.span([g.basis_vector(i) for i in range(g.dim)], g.dim)


def lower_central_series(g: LieAlgebra):
    """``([g_1, g_2, ...], nilindex)``; nilindex is None if the series stalls above 0.

    For a nilpotent algebra the list ends with the zero subspace.
    """
    require_lie(g)
    series = [whole(g)]
    while series[-1].dim:
        nxt = derived_product(g, series[-1])
        if nxt.basis == series[-1].basis:
            return series, None
        series.append(nxt)
    return series, len(series) - 1 if g.dim else 0


def nilindex(g: LieAlgebra) -> int | None:
    return lower_central_series(g)[1]


def type_of(g: LieAlgebra) -> int:
    require_lie(g)
    return g.dim - derived_product(g, whole(g)).dim


def psequence(g: LieAlgebra) -> tuple[int, ...]:
    series, m = lower_central_series(g)
    if m is None:
        raise NotNilpotent("p-sequence needs a nilpotent algebra")
    return tuple(series[i].dim - series[i + 1].dim for i in range(m))


@dataclass
class GradedAlgebra:
    """Associated graded algebra gr(g) on a filtration-adapted basis."""

    pieces: list[Subspace]
    psequence: tuple[int, ...]
    algebra: LieAlgebra
    basis: list[list[Fraction]] = field(default_factory=list)
    degrees: list[int] = field(default_factory=list)

    def permutation(self) -> list[int] | None:
        """Original index of each adapted basis vector, if they are all coordinate vectors."""
        perm = []
        for v in self.basis:
            nz = [i for i, x in enumerate(v) if x]
            if len(nz) != 1 or v[nz[0]] != 1:
                return None
            perm.append(nz[0])
        return perm

    def in_original_order(self) -> LieAlgebra:
        perm = self.permutation()
        if perm is None:
            raise ValueError("adapted basis is not a permutation of the original basis")
        table: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (a, b), terms in self.algebra._brackets.items():
            i, j = perm[a], perm[b]
            mapped = {perm[k]: c for k, c in terms.items()}
            if i > j:
                i, j = j, i
                mapped = {k: -c for k, c in mapped.items()}
            table[(i, j)] = mapped
        labels = [None] * len(perm)
        for a, i in enumerate(perm):
            labels[i] = self.algebra.labels[a]
        return LieAlgebra(len(perm), table, labels=labels, name=self.algebra.name)


def change_basis(g: LieAlgebra, new_basis: Sequence[Sequence], labels: Sequence[str] | None = None) -> LieAlgebra:
    """The same algebra written on ``new_basis`` (vectors in old coordinates)."""
    n = g.dim
    if len(new_basis) != n or any(len(v) != n for v in new_basis):
        raise AlgebraError(f"need {n} basis vectors of length {n}")
    vecs = [[to_scalar(x) for x in v] for v in new_basis]
    change = Matrix.from_columns(n, vecs)
    if span_rank(vecs, n) < n:
        raise AlgebraError("new basis vectors are linearly dependent")
    back = inverse(change)
    table = {}
    for a in range(n):
        for b in range(a + 1, n):
            coords = back.matvec(bracket(g, vecs[a], vecs[b]))
            terms = {c: x for c, x in enumerate(coords) if x}
            if terms:
                table[(a, b)] = terms
    return LieAlgebra(n, table, labels=labels, name=g.name)


def _vector_label(g: LieAlgebra, v) -> str:
    nz = [(i, x) for i, x in enumerate(v) if x]
    if len(nz) == 1 and nz[0][1] == 1:
        return g.labels[nz[0][0]]
    return "+".join(f"{format_scalar(x)}*{g.labels[i]}" for i, x in nz)


def associated_graded(g: LieAlgebra) -> GradedAlgebra:
    series, m = lower_central_series(g)
    if m is None:
        raise NotNilpotent("associated graded algebra needs a nilpotent algebra")
    n = g.dim
    basis: list[list[Fraction]] = []
    degrees: list[int] = []
    pieces: list[Subspace] = []
    for d in range(m):
        upper, lower = series[d], series[d + 1]
        chosen: list[list[Fraction]] = []
        current = [list(v) for v in lower.basis]
        r = len(current)
        # echelon vectors of g_d sorted by leading index keep label order
        for v in upper.basis:
            trial = current + [list(v)]
            if span_rank(trial, n) > r:
                current = trial
                r += 1
                chosen.append(list(v))
        basis.extend(chosen)
        degrees.extend([d + 1] * len(chosen))
        pieces.append(Subspace.span(chosen, n))
    p = tuple(s.dim for s in pieces)
    change = Matrix.from_columns(n, basis) if n else Matrix.zeros(0, 0)
    to_adapted = inverse(change) if n else change
    table: dict[tuple[int, int], dict[int, Fraction]] = {}
    for a in range(n):
        for b in range(a + 1, n):
            target = degrees[a] + degrees[b]
            if target > m:
                continue
            coords = to_adapted.matvec(bracket(g, basis[a], basis[b]))
            terms = {c: x for c, x in enumerate(coords) if x and degrees[c] == target}
            if terms:
                table[(a, b)] = terms
    labels = [_vector_label(g, v) for v in basis]
    gr = LieAlgebra(n, table, labels=labels, name=f"gr({g.name})" if g.name else None)
    return GradedAlgebra(pieces=pieces, psequence=p, algebra=gr, basis=basis, degrees=degrees)
