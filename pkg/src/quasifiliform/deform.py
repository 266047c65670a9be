"""Linear deformations of the completed A^k_{n-1}(1, 0, ..., 0) (+) C family.

Moving the seed alpha = (1, 0, ..., 0) along the l-th coordinate perturbs the
bracket by a cochain whose values are the gamma coefficients: the a_{i,j} of
the unit seed e_l. Those cochains are 2-cocycles of the completed algebra and
stay independent modulo coboundaries, which bounds dim H^2 from below.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .catalog import FamilySpec, SpecError, completion, default_alphas, structure_table
from .cohomology import Cochain2, classes_rank, cohomology_dim, is_cocycle
from .liecore import LieAlgebra


def _check_range(n: int, k: int):
    if not 2 <= k <= n - 4:
        raise SpecError(f"field 'k': needs 2 <= k <= n-4, got n={n}, k={k}")


def family_t(n: int, k: int) -> int:
    """t = [(n - k) / 2]; the seed has t - 1 alphas."""
    return (n - k) // 2


@dataclass(frozen=True)
class GammaTable:
    n: int
    k: int
    gamma: dict  # (l, i, j) -> Fraction, i < j

    @property
    def t(self) -> int:
        return family_t(self.n, self.k)

    def __call__(self, l: int, i: int, j: int) -> Fraction:
        if i == j:
            return Fraction(0)
        if i > j:
            return -self.gamma.get((l, j, i), Fraction(0))
        return self.gamma.get((l, i, j), Fraction(0))

    def combine(self, alphas) -> dict[tuple[int, int], Fraction]:
        """a_{i,j} = sum_l gamma^l_{i,j} alpha_l."""
        out: dict[tuple[int, int], Fraction] = {}
        for (l, i, j), g in self.gamma.items():
            if l <= len(alphas):
                out[(i, j)] = out.get((i, j), Fraction(0)) + g * Fraction(alphas[l - 1])
        return out


def gamma_coefficients(n: int, k: int) -> GammaTable:
    _check_range(n, k)
    t = family_t(n, k)
    bound = n - k - 1
    gamma = {}
    for l in range(1, t):
        unit = [Fraction(int(m == l)) for m in range(1, t)]
        for (i, j), a in structure_table(unit, bound).items():
            gamma[(l, i, j)] = a
    return GammaTable(n, k, gamma)


def deformation_base(n: int, k: int) -> LieAlgebra:
    """Completion of A^k_{n-1}(1, 0, ..., 0) (+) C by its printed rank-2 torus."""
    _check_range(n, k)
    spec = FamilySpec("A+C", n, k=k, alphas=default_alphas(family_t(n, k) - 1))
    return completion(spec)


def _torus_dim(base: LieAlgebra) -> int:
    return sum(1 for lab in base.labels if lab[:1] == "T" and lab[1:].isdigit())


def deformation_cocycle(base: LieAlgebra, l: int, k: int, torus_dim: int | None = None) -> Cochain2:
    """The cochain (Y_i, Y_j) -> gamma^l_{i,j} Y_{i+j+k-1}, zero on torus directions."""
    h = _torus_dim(base) if torus_dim is None else torus_dim
    n = base.dim - h
    _check_range(n, k)
    t = family_t(n, k)
    if not 2 <= l <= t - 1:
        raise SpecError(f"field 'l': needs 2 <= l <= t-1 = {t - 1}, got {l}")
    table = gamma_coefficients(n, k)
    values = {}
    for i in range(1, n):
        for j in range(i + 1, n):
            if i + j > n - k - 1:
                break
            g = table(l, i, j)
            if g:
                values[(h + i, h + j)] = {h + i + j + k - 1: g}
    return Cochain2(base, values)


@dataclass(frozen=True)
class H2BoundRow:
    n: int
    k: int
    t: int
    bound: int
    classes: int
    H2: int
    non_cocycles: tuple[int, ...] = ()

    @property
    def holds(self) -> bool:
        return not self.non_cocycles and self.classes == self.bound and self.H2 >= self.classes

    def to_dict(self) -> dict:
        row = {"n": self.n, "k": self.k, "t": self.t, "bound": self.bound,
               "classes": self.classes, "H2": self.H2}
        if self.non_cocycles:
            row["non_cocycles"] = list(self.non_cocycles)
        return row


def h2_bound_check(n: int, k: int) -> H2BoundRow:
    """Rank of the deformation classes F^l (2 <= l <= t-1) in H^2, next to dim H^2 itself.

    Cochains F^l that fail to be closed are listed in ``non_cocycles`` and left
    out of the class count.
    """
    _check_range(n, k)
    t = family_t(n, k)
    base = deformation_base(n, k)
    closed, broken = [], []
    for l in range(2, t):
        c = deformation_cocycle(base, l, k)
        if is_cocycle(c):
            closed.append(c)
        else:
            broken.append(l)
    classes = classes_rank(base, closed)
    return H2BoundRow(n, k, t, max(t - 2, 0), classes, cohomology_dim(base, 2), tuple(broken))
