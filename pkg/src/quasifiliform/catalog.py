"""Quasi-filiform Lie algebras of nonzero rank: generators, tori and completions.

Every family is emitted on its torus eigenbasis ``Y_0..Y_{n-1}``. A family
spec is a family identifier plus integer parameters ``n, r, k, l`` and, for
the deformable families, a list of rational ``alpha`` parameters. The alphas
must satisfy polynomial Jacobi relations that are not solved here; the
defect checker in :mod:`liecore` decides for each concrete choice.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Sequence

from .derivations import (
    DiagonalDerivationSpec,
    diagonal_derivation_space,
    diagonal_matrix,
    is_derivation,
)
from .exactlin import format_scalar, to_scalar
from .liecore import LieAlgebra, change_basis, jacobi_defect, lower_central_series, type_of


class SpecError(ValueError):
    """Invalid family identifier, parameter or parameter range."""


# ---------------------------------------------------------------------------
# a_{i,j} recurrence

def structure_table(alphas: Sequence, bound: int) -> dict[tuple[int, int], Fraction]:
    """Constants ``a_{i,j}`` for ``1 <= i < j`` and ``i + j <= bound``.

    ``a_{i,i} = 0``, ``a_{i,i+1} = alpha_i`` and ``a_{i,j} = a_{i+1,j} + a_{i,j+1}``,
    filled by increasing ``j - i`` through ``a_{i,j+1} = a_{i,j} - a_{i+1,j}``.
    Missing alphas (index beyond the list) count as zero.
    """
    al = [to_scalar(a) for a in alphas]

    def alpha(i):
        return al[i - 1] if 1 <= i <= len(al) else Fraction(0)

    a: dict[tuple[int, int], Fraction] = {}
    for i in range(1, bound + 1):
        a[(i, i)] = Fraction(0)
    for gap in range(1, bound):
        for i in range(1, bound):
            j = i + gap
            if i + j > bound:
                break
            if gap == 1:
                a[(i, j)] = alpha(i)
            else:
                a[(i, j)] = a[(i, j - 1)] - a[(i + 1, j - 1)]
    return {key: v for key, v in a.items() if key[0] < key[1]}


# ---------------------------------------------------------------------------
# family parameters

@dataclass(frozen=True)
class FamilySpec:
    family: str
    n: int
    r: int | None = None
    k: int | None = None
    l: int | None = None
    alphas: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        fam = canonical_family(self.family)
        object.__setattr__(self, "family", fam)
        if self.alphas is not None:
            object.__setattr__(self, "alphas", tuple(to_scalar(a) for a in self.alphas))
        info = FAMILIES[fam]
        for name in ("r", "k", "l"):
            val = getattr(self, name)
            if name in info.params and val is None:
                raise SpecError(f"{fam}: parameter '{name}' is required")
            if name not in info.params and val is not None:
                raise SpecError(f"{fam}: parameter '{name}' is not used by this family")
        if info.alpha_count is None and self.alphas is not None:
            raise SpecError(f"{fam}: family takes no alpha parameters")
        info.validate(self)
        if info.alpha_count is not None:
            need = info.alpha_count(self)
            if self.alphas is None:
                object.__setattr__(self, "alphas",
                                   shipped_alphas(fam, self.n, self.r, self.k, self.l, need))
            elif len(self.alphas) != need:
                raise SpecError(f"{fam}: expected {need} alpha values (t-1), got {len(self.alphas)}")

    @property
    def t(self) -> int | None:
        info = FAMILIES[self.family]
        return None if info.alpha_count is None else info.alpha_count(self) + 1

    def __str__(self):
        parts = [f"n={self.n}"]
        for name in ("r", "k", "l"):
            v = getattr(self, name)
            if v is not None:
                parts.append(f"{name}={v}")
        if self.alphas is not None and len(self.alphas):
            parts.append("alpha=" + ",".join(format_scalar(a) for a in self.alphas))
        return f"{self.family}:" + ",".join(parts)


def default_alphas(count: int) -> tuple[Fraction, ...]:
    """The seed (1, 0, ..., 0)."""
    return tuple(Fraction(1 if i == 0 else 0) for i in range(count))


# Jacobi-consistent alphas for the instances (n <= 10) where (1, 0, ..., 0)
# violates the Jacobi relations. Keys: (family, n, r, k, l).
SHIPPED_SEEDS: dict[tuple, tuple[Fraction, ...]] = {
    ("B+C", 9, None, 2, None): (Fraction(1), Fraction(-2)),
    ("B_sd_a", 9, None, 2, 3): (Fraction(1), Fraction(-2)),
    ("B_sd_a", 9, None, 2, 5): (Fraction(1), Fraction(-2)),
    ("B_sd_c", 9, None, 2, None): (Fraction(1), Fraction(-2)),
    ("Cnr_k", 9, 7, 2, None): (Fraction(1), Fraction(-2)),
    ("Cnr_k", 10, 3, 2, None): (Fraction(1), Fraction(-1), Fraction(2)),
    ("Cnr_k", 10, 5, 2, None): (Fraction(1), Fraction(-1), Fraction(4)),
    ("Cnr_k", 10, 7, 2, None): (Fraction(0), Fraction(0), Fraction(1)),
    ("Enr_k", 9, 3, 2, None): (Fraction(1), Fraction(-2)),
    ("Enr_k", 9, 5, 2, None): (Fraction(1), Fraction(-2)),
    ("Gn_k", 9, None, 2, None): (Fraction(-1, 5),),
    ("Hn_k", 10, None, 2, None): (Fraction(1), Fraction(-2)),
    ("Hn_k", 10, None, 3, None): (Fraction(1), Fraction(-1)),
}


def shipped_alphas(family: str, n: int, r=None, k=None, l=None, count: int = 0) -> tuple[Fraction, ...]:
    return SHIPPED_SEEDS.get((family, n, r, k, l), default_alphas(count))


_SPEC_RE = re.compile(r"^\s*([^:\s]+)\s*(?::(.*))?$")


def parse_spec(text: str) -> FamilySpec:
    """Parse ``FAMILY:key=value,...``; alpha takes the comma-separated values after it."""
    m = _SPEC_RE.match(text)
    if not m:
        raise SpecError(f"cannot parse family spec {text!r}")
    fam, rest = m.group(1), m.group(2) or ""
    kwargs: dict = {}
    alphas: list | None = None
    current = None
    for tok in (t.strip() for t in rest.split(",")):
        if not tok:
            continue
        if "=" in tok:
            key, val = (s.strip() for s in tok.split("=", 1))
            current = key
            if key == "alpha":
                alphas = [val] if val else []
                continue
            if key not in ("n", "r", "k", "l"):
                raise SpecError(f"unknown key {key!r} in spec {text!r}")
            if key in kwargs:
                raise SpecError(f"duplicate key {key!r} in spec {text!r}")
            try:
                kwargs[key] = int(val)
            except ValueError:
                raise SpecError(f"field {key!r}: expected an integer, got {val!r}") from None
        elif current == "alpha" and alphas is not None:
            alphas.append(tok)
        else:
            raise SpecError(f"stray token {tok!r} in spec {text!r}")
    if "n" not in kwargs:
        fam_c = canonical_family(fam)
        fixed = FAMILIES[fam_c].fixed_n
        if fixed is None:
            raise SpecError(f"field 'n' is required in spec {text!r}")
        kwargs["n"] = fixed
    if alphas is not None:
        try:
            kwargs["alphas"] = tuple(to_scalar(a) for a in alphas)
        except (ValueError, ZeroDivisionError):
            raise SpecError(f"field 'alpha': bad rational in {alphas!r}") from None
    return FamilySpec(fam, **kwargs)


# ---------------------------------------------------------------------------
# bracket tables

class _Table:
    def __init__(self, n):
        self.n = n
        self.data: dict[tuple[int, int], dict[int, Fraction]] = {}

    def add(self, i, j, k, c=1):
        c = Fraction(c)
        if not c:
            return
        if not (0 <= i < self.n and 0 <= j < self.n and 0 <= k < self.n) or i == j:
            raise AssertionError(f"bad bracket [{i},{j}] -> {k} in dim {self.n}")
        if i > j:
            i, j, c = j, i, -c
        row = self.data.setdefault((i, j), {})
        row[k] = row.get(k, 0) + c
        if not row[k]:
            del row[k]

    def chain(self, top):
        for i in range(1, top + 1):
            self.add(0, i, i + 1)

    def a_rule(self, alphas, k, bound, skip_sum=None):
        for (i, j), a in structure_table(alphas, bound).items():
            if skip_sum is not None and i + j == skip_sum:
                continue
            self.add(i, j, i + j + k - 1, a)

    def pairs(self, s, target, imax, sign_start=1, coef=None, imin=1):
        for i in range(imin, imax + 1):
            c = (-1) ** (i - 1) if coef is None else coef(i)
            self.add(i, s - i, target, c)


def _sign(i):
    return (-1) ** (i - 1)


# weight forms are dicts over parameter names "l0", "l1", "ln"

def _lin(a=0, b=0):
    return {"l0": Fraction(a), "l1": Fraction(b)}


def _only(name, c=1):
    return {name: Fraction(c)}


def _L_weights(n, last: int):
    """Y_0 -> l0, Y_i -> (i-1) l0 + l1 for 1 <= i <= last."""
    w = [_lin(1, 0)]
    w += [_lin(i - 1, 1) for i in range(1, last + 1)]
    return w


def _k_weights(k, last: int):
    """Y_0 -> l0, Y_i -> (k+i-1) l0 for 1 <= i <= last."""
    return [_lin(1)] + [_lin(k + i - 1) for i in range(1, last + 1)]


# each builder returns (table, weights)

def _b_LC(s):
    n = s.n
    t = _Table(n)
    t.chain(n - 3)
    return t, _L_weights(n, n - 2) + [_only("ln")]


def _b_AC(s):
    n, k = s.n, s.k
    t = _Table(n)
    t.chain(n - 3)
    t.a_rule(s.alphas, k, n - k - 1)
    return t, _k_weights(k, n - 2) + [_only("ln")]


def _b_L_sd_l(s):
    n, l = s.n, s.l
    t = _Table(n)
    t.chain(n - 3)
    for i in range(1, n - l - 1):
        t.add(i, n - 1, i + l)
    return t, _L_weights(n, n - 2) + [_lin(l)]


def _b_A_sd_l(s):
    n, k, l = s.n, s.k, s.l
    t = _Table(n)
    t.chain(n - 3)
    t.a_rule(s.alphas, k, n - k - 1)
    for i in range(1, n - l - 1):
        t.add(i, n - 1, i + l)
    return t, _k_weights(k, n - 2) + [_lin(l)]


def _q_core(n):
    t = _Table(n)
    t.chain(n - 4)
    for i in range(1, (n - 3) // 2 + 1):
        t.add(i, n - 2 - i, n - 2, _sign(i))
    return t


def _Q_weights(n):
    return _L_weights(n, n - 3) + [_lin(n - 4, 2)]


def _B_weights(n, k):
    return _k_weights(k, n - 3) + [_lin(n - 4 + 2 * k)]


def _b_QC(s):
    return _q_core(s.n), _Q_weights(s.n) + [_only("ln")]


def _b_BC(s):
    n, k = s.n, s.k
    t = _q_core(n)
    t.a_rule(s.alphas, k, n - k - 2)
    return t, _B_weights(n, k) + [_only("ln")]


def _b_Q_sd_a(s):
    n, l = s.n, s.l
    t = _q_core(n)
    for i in range(1, n - l - 2):
        t.add(i, n - 1, i + l)
    return t, _Q_weights(n) + [_lin(l)]


def _b_B_sd_a(s):
    n, k, l = s.n, s.k, s.l
    t = _q_core(n)
    t.a_rule(s.alphas, k, n - k - 2)
    for i in range(1, n - l - 2):
        t.add(i, n - 1, i + l)
    return t, _B_weights(n, k) + [_lin(l)]


def _b_Q_sd_b(s):
    n, l = s.n, s.l
    t = _q_core(n)
    t.add(0, n - 1, n - 2)
    for i in range(1, n - l - 2):
        t.add(i, n - 1, i + l)
    beta = Fraction(l - n + 5, 2)
    w = [_lin(1)] + [_lin(i - 1 + beta) for i in range(1, n - 2)]
    w += [_lin(n - 4 + 2 * beta), _lin(n - 5 + 2 * beta)]
    return t, w


def _b_Q_sd_c(s):
    n = s.n
    t = _q_core(n)
    t.add(0, n - 1, n - 2)
    return t, _Q_weights(n) + [_lin(n - 5, 2)]


def _b_B_sd_c(s):
    n, k = s.n, s.k
    t = _q_core(n)
    t.a_rule(s.alphas, k, n - k - 2)
    t.add(0, n - 1, n - 2)
    return t, _B_weights(n, k) + [_lin(n - 5 + 2 * k)]


def _lnr_core(n, r):
    t = _Table(n)
    t.chain(n - 3)
    for i in range(1, (r - 1) // 2 + 1):
        t.add(i, r - i, n - 1, _sign(i))
    return t


def _b_Lnr(s):
    n, r = s.n, s.r
    return _lnr_core(n, r), _L_weights(n, n - 2) + [_lin(r - 2, 2)]


def _b_Cnr_k(s):
    n, r, k = s.n, s.r, s.k
    t = _lnr_core(n, r)
    t.a_rule(s.alphas, k, n - k - 1)
    for i in range(1, n - r - 2 * k + 1):
        t.add(i, n - 1, 2 * k + r + i - 2)
    return t, _k_weights(k, n - 2) + [_lin(r - 2 + 2 * k)]


def _b_Dnr_k(s):
    n, r, k = s.n, s.r, s.k
    t = _lnr_core(n, r)
    for i in range(1, n - r - 2 * k):
        t.add(i, n - 1, 2 * k + r + i - 1)
    w = [_lin(1)] + [_lin(k + Fraction(2 * i - 1, 2)) for i in range(1, n - 1)]
    return t, w + [_lin(r - 1 + 2 * k)]


def _qnr_core(n, r):
    t = _q_core(n)
    for i in range(1, (r - 1) // 2 + 1):
        t.add(i, r - i, n - 1, _sign(i))
    return t


def _b_Qnr(s):
    n, r = s.n, s.r
    return _qnr_core(n, r), _Q_weights(n) + [_lin(r - 2, 2)]


def _b_Enr_k(s):
    n, r, k = s.n, s.r, s.k
    t = _qnr_core(n, r)
    t.a_rule(s.alphas, k, n - k - 2)
    for i in range(1, n - r - 2 * k):
        t.add(i, n - 1, 2 * k + r + i - 2)
    return t, _B_weights(n, k) + [_lin(r - 2 + 2 * k)]


def _b_Fnr_k(s):
    n, r, k = s.n, s.r, s.k
    t = _qnr_core(n, r)
    for i in range(1, n - r - 2 * k - 1):
        t.add(i, n - 1, 2 * k + r + i - 1)
    w = [_lin(1)] + [_lin(k + Fraction(2 * i - 1, 2)) for i in range(1, n - 2)]
    return t, w + [_lin(n + 2 * k - 3), _lin(r + 2 * k - 1)]


def _t4_core(n, last_coef):
    t = _Table(n)
    t.chain(n - 5)
    t.add(0, n - 3, n - 2)
    t.add(0, n - 1, n - 3)
    for i in range(1, (n - 5) // 2 + 1):
        t.add(i, n - 4 - i, n - 1, _sign(i))
        t.add(i, n - 3 - i, n - 3, _sign(i) * Fraction(n - 3 - 2 * i, 2))
    for i in range(2, (n - 3) // 2 + 1):
        t.add(i, n - 2 - i, n - 2, (-1) ** i * last_coef(i))
    return t


def t4_coefficient(n: int, i: int) -> Fraction:
    """Coefficient magnitude (i-1)(n-3-i)/2 of [Y_i, Y_{n-2-i}] in T_{n,n-4}."""
    return Fraction((i - 1) * (n - 3 - i), 2)


def _b_Tn_n4(s):
    n = s.n
    t = _t4_core(n, lambda i: t4_coefficient(n, i))
    w = _L_weights(n, n - 4) + [_lin(n - 5, 2), _lin(n - 4, 2), _lin(n - 6, 2)]
    return t, w


def _b_Gn_k(s):
    n, k = s.n, s.k
    t = _t4_core(n, lambda i: t4_coefficient(n, i))
    if k == 2:
        t.add(1, n - 1, n - 2)
    t.a_rule(s.alphas, k, n - k - 3)
    w = _k_weights(k, n - 4) + [_lin(n - 5 + 2 * k), _lin(n - 4 + 2 * k), _lin(n - 6 + 2 * k)]
    return t, w


def _t3_core(n):
    t = _Table(n)
    t.chain(n - 4)
    t.add(0, n - 1, n - 2)
    for i in range(1, (n - 4) // 2 + 1):
        t.add(i, n - 3 - i, n - 1, _sign(i))
        t.add(i, n - 2 - i, n - 2, _sign(i) * Fraction(n - 2 - 2 * i, 2))
    return t


def _b_Tn_n3(s):
    n = s.n
    return _t3_core(n), _Q_weights(n) + [_lin(n - 5, 2)]


def _b_Hn_k(s):
    n, k = s.n, s.k
    t = _t3_core(n)
    t.a_rule(s.alphas, k, n - k - 2)
    return t, _B_weights(n, k) + [_lin(n - 5 + 2 * k)]


def _fixed(rows, weights):
    def build(s):
        t = _Table(s.n)
        for i, j, k, c in rows:
            t.add(i, j, k, c)
        return t, [dict(w) for w in weights]
    return build


_E951 = [(0, 1, 2, 1), (0, 2, 3, 1), (0, 3, 4, 1), (0, 4, 5, 1), (0, 8, 6, 1),
         (1, 4, 8, 1), (1, 5, 6, 2), (1, 6, 7, 3), (2, 3, 8, -1), (2, 4, 6, -1),
         (2, 8, 7, -3)]
_E952 = [(0, 1, 2, 1), (0, 2, 3, 1), (0, 3, 4, 1), (0, 4, 5, 1), (0, 5, 6, 1), (0, 6, 7, 1),
         (0, 8, 6, 1), (1, 4, 8, 1), (1, 5, 6, 2), (1, 6, 7, 1), (2, 3, 8, -1),
         (2, 4, 6, -1), (2, 5, 7, 1), (2, 8, 7, -1), (3, 4, 7, -2)]
_E953 = [(0, 1, 2, 1), (0, 2, 3, 1), (0, 3, 4, 1), (0, 4, 5, 1), (0, 6, 7, 1), (0, 8, 6, 1),
         (1, 4, 8, 1), (1, 5, 6, 2), (2, 3, 8, -1), (2, 4, 6, -1), (2, 5, 7, 2), (3, 4, 7, -3)]
_E73 = [(0, 1, 2, 1), (0, 2, 3, 1), (0, 3, 4, 1), (0, 4, 5, 1), (0, 6, 4, 1),
        (1, 2, 6, 1), (1, 3, 4, 1), (1, 4, 5, 1), (2, 6, 5, -1)]
# the graded-list presentations of E951 and E953 (chain through Y_7); this basis
# is not a torus eigenbasis, so these tables only feed the gradedness checks
_E951_GRADED = [(0, i, i + 1, 1) for i in range(1, 7)] + [
    (0, 8, 6, 1), (1, 4, 8, 1), (1, 5, 6, 2), (1, 6, 7, 3), (2, 3, 8, -1), (2, 4, 6, -1),
    (2, 5, 7, -1), (2, 8, 7, -3)]
_E953_GRADED = [(0, i, i + 1, 1) for i in range(1, 7)] + [
    (0, 8, 6, 1), (1, 4, 8, 1), (1, 5, 6, 2), (2, 3, 8, -1), (2, 4, 6, -1), (2, 5, 7, 2),
    (3, 4, 7, -3)]
_W_E951 = [_lin(1), _lin(0, 1), _lin(1, 1), _lin(2, 1), _lin(3, 1), _lin(4, 1),
           _lin(4, 2), _lin(4, 3), _lin(3, 2)]
_W_E952 = [_lin(c) for c in (1, 1, 2, 3, 4, 5, 6, 7, 5)]
_W_E953 = [_lin(1), _lin(0, 1), _lin(1, 1), _lin(2, 1), _lin(3, 1), _lin(4, 1),
           _lin(4, 2), _lin(5, 2), _lin(3, 2)]
_W_E73 = [_lin(c) for c in (1, 1, 2, 3, 4, 5, 3)]


# ---------------------------------------------------------------------------
# registry

def _odd(x):
    return x % 2 == 1


def _need(cond, msg):
    if not cond:
        raise SpecError(msg)


def _v_base_L(s):
    _need(s.n >= 4, f"{s.family}: needs n >= 4")


def _v_A(s):
    _need(s.n >= 6 and 2 <= s.k <= s.n - 4, f"{s.family}: needs 2 <= k <= n-4")


def _v_l(hi):
    def check(s):
        _need(2 <= s.l <= s.n - hi, f"{s.family}: needs 2 <= l <= n-{hi}")
    return check


def _v_Q(s):
    _need(s.n >= 7 and _odd(s.n), f"{s.family}: needs n >= 7 odd")


def _v_B(s):
    _v_Q(s)
    _need(2 <= s.k <= s.n - 5, f"{s.family}: needs 2 <= k <= n-5")


def _v_Lnr(s):
    _need(s.n >= 5, f"{s.family}: needs n >= 5")
    _need(_odd(s.r) and 3 <= s.r <= 2 * ((s.n - 1) // 2) - 1,
          f"{s.family}: needs r odd, 3 <= r <= 2[(n-1)/2]-1")


def _v_Qnr(s):
    _v_Q(s)
    _need(_odd(s.r) and 3 <= s.r <= s.n - 4, f"{s.family}: needs r odd, 3 <= r <= n-4")


def _all(*checks):
    def check(s):
        for c in checks:
            c(s)
    return check


def _v_k_range(lo, hi: Callable[[FamilySpec], int], text):
    def check(s):
        _need(lo <= s.k <= hi(s), f"{s.family}: needs {text}")
    return check


def _v_fixed(n):
    def check(s):
        _need(s.n == n, f"{s.family}: dimension is fixed at n={n}")
    return check


@dataclass(frozen=True)
class FamilyInfo:
    ident: str
    params: tuple[str, ...]
    builder: Callable
    validate: Callable
    rank: int
    type: int
    alpha_count: Callable[[FamilySpec], int] | None = None
    graded_as: str = ""
    fixed_n: int | None = None
    aliases: tuple[str, ...] = ()


def _t_minus_1(offset):
    return lambda s: (s.n - s.k - offset) // 2 - 1


FAMILIES: dict[str, FamilyInfo] = {}


def _register(*infos):
    for info in infos:
        FAMILIES[info.ident] = info


_register(
    FamilyInfo("L+C", (), _b_LC, _v_base_L, 3, 3, graded_as="L+C", aliases=("L⊕C",)),
    FamilyInfo("A+C", ("k",), _b_AC, _all(_v_base_L, _v_A), 2, 3, _t_minus_1(0),
               graded_as="L+C", aliases=("A⊕C",)),
    FamilyInfo("L_sd_l", ("l",), _b_L_sd_l, _all(_v_base_L, _v_l(3)), 2, 3, graded_as="L+C"),
    FamilyInfo("A_sd_l", ("k", "l"), _b_A_sd_l, _all(_v_base_L, _v_A, _v_l(3)), 1, 3,
               _t_minus_1(0), graded_as="L+C"),
    FamilyInfo("Q+C", (), _b_QC, _v_Q, 3, 3, graded_as="Q+C", aliases=("Q⊕C",)),
    FamilyInfo("B+C", ("k",), _b_BC, _v_B, 2, 3, _t_minus_1(1), graded_as="Q+C",
               aliases=("B⊕C",)),
    FamilyInfo("Q_sd_a", ("l",), _b_Q_sd_a, _all(_v_Q, _v_l(4)), 2, 3, graded_as="Q+C"),
    FamilyInfo("B_sd_a", ("k", "l"), _b_B_sd_a, _all(_v_B, _v_l(4)), 1, 3, _t_minus_1(1),
               graded_as="Q+C"),
    FamilyInfo("Q_sd_b", ("l",), _b_Q_sd_b, _all(_v_Q, _v_l(4)), 1, 3, graded_as="Q+C"),
    FamilyInfo("Q_sd_c", (), _b_Q_sd_c, _v_Q, 2, 3, graded_as="Q+C"),
    FamilyInfo("B_sd_c", ("k",), _b_B_sd_c, _v_B, 1, 3, _t_minus_1(1), graded_as="Q+C"),
    FamilyInfo("Lnr", ("r",), _b_Lnr, _v_Lnr, 2, 2, graded_as="Lnr"),
    FamilyInfo("Cnr_k", ("r", "k"), _b_Cnr_k,
               _all(_v_Lnr, _v_k_range(2, lambda s: s.n - 4, "2 <= k <= n-4")), 1, 2,
               _t_minus_1(0), graded_as="Lnr"),
    FamilyInfo("Dnr_k", ("r", "k"), _b_Dnr_k,
               _all(_v_Lnr, _v_k_range(1, lambda s: (s.n - s.r - 2) // 2, "1 <= k <= [(n-r-2)/2]")),
               1, 2, graded_as="Lnr"),
    FamilyInfo("Qnr", ("r",), _b_Qnr, _v_Qnr, 2, 2, graded_as="Qnr"),
    FamilyInfo("Enr_k", ("r", "k"), _b_Enr_k,
               _all(_v_Qnr, _v_k_range(2, lambda s: s.n - 5, "2 <= k <= n-5")), 1, 2,
               _t_minus_1(1), graded_as="Qnr"),
    FamilyInfo("Fnr_k", ("r", "k"), _b_Fnr_k,
               _all(_v_Qnr, _v_k_range(1, lambda s: (s.n - s.r - 4) // 2, "1 <= k <= [(n-r-4)/2]")),
               1, 2, graded_as="Qnr"),
    FamilyInfo("Tn_n4", (), _b_Tn_n4, _v_Q, 2, 2, graded_as="Tn_n4"),
    FamilyInfo("Gn_k", ("k",), _b_Gn_k,
               _all(_v_Q, _v_k_range(2, lambda s: s.n - 6, "2 <= k <= n-6")), 1, 2,
               _t_minus_1(2), graded_as="Tn_n4"),
    FamilyInfo("Tn_n3", (), _b_Tn_n3,
               lambda s: _need(s.n >= 6 and s.n % 2 == 0, f"{s.family}: needs n >= 6 even"),
               2, 2, graded_as="Tn_n3"),
    FamilyInfo("Hn_k", ("k",), _b_Hn_k,
               _all(lambda s: _need(s.n >= 6 and s.n % 2 == 0, f"{s.family}: needs n >= 6 even"),
                    _v_k_range(2, lambda s: s.n - 5, "2 <= k <= n-5")),
               1, 2, _t_minus_1(1), graded_as="Tn_n3"),
    FamilyInfo("E951", (), _fixed(_E951, _W_E951), _v_fixed(9), 2, 2, graded_as="E951", fixed_n=9),
    FamilyInfo("E952", (), _fixed(_E952, _W_E952), _v_fixed(9), 1, 2, graded_as="E952", fixed_n=9),
    FamilyInfo("E953", (), _fixed(_E953, _W_E953), _v_fixed(9), 2, 2, graded_as="E953", fixed_n=9),
    FamilyInfo("E73", (), _fixed(_E73, _W_E73), _v_fixed(7), 1, 2, graded_as="E73", fixed_n=7),
)

_ALIASES = {a: info.ident for info in FAMILIES.values() for a in info.aliases}

#: families whose rank equals their type (maximal rank)
MAXIMAL_RANK_FAMILIES = frozenset(f for f, i in FAMILIES.items() if i.rank == i.type)


def canonical_family(name: str) -> str:
    name = name.strip()
    if name in FAMILIES:
        return name
    if name in _ALIASES:
        return _ALIASES[name]
    raise SpecError(f"unknown family {name!r}; known: {', '.join(FAMILIES)}")


def build_family(spec: FamilySpec) -> LieAlgebra:
    """Bracket table of the family on its eigenbasis. Jacobi is not checked here."""
    info = FAMILIES[spec.family]
    table, _ = info.builder(spec)
    return LieAlgebra(spec.n, table.data, name=str(spec))


_PARAMS = ("l0", "l1", "ln")


def torus_spec(spec: FamilySpec) -> DiagonalDerivationSpec:
    """The family's diagonal torus as weight forms in (l0, l1, ln), unused parameters dropped."""
    info = FAMILIES[spec.family]
    _, weights = info.builder(spec)
    used = [p for p in _PARAMS if any(w.get(p) for w in weights)]
    forms = [[Fraction(w.get(p, 0)) for p in used] for w in weights]
    return DiagonalDerivationSpec.from_forms(forms, len(used))


def parameter_names(spec: FamilySpec) -> list[str]:
    info = FAMILIES[spec.family]
    _, weights = info.builder(spec)
    return [p for p in _PARAMS if any(w.get(p) for w in weights)]


# ---------------------------------------------------------------------------
# semidirect sums

class NotADerivation(ValueError):
    pass


def semidirect_sum(n_alg: LieAlgebra, torus: DiagonalDerivationSpec) -> LieAlgebra:
    """``t (+)-> n`` with basis: one vector per torus parameter, then the basis of n.

    Torus generator ``p`` acts on ``Y_m`` by ``weights[m][p]``; the torus is abelian.
    """
    if torus.nparams == 0:
        return n_alg
    if torus.dim != n_alg.dim:
        raise ValueError("torus weights do not match the algebra dimension")
    gens = torus.generators()
    for p, diag in enumerate(gens):
        if not is_derivation(n_alg, diagonal_matrix(diag)):
            raise NotADerivation(f"torus generator {p} is not a derivation")
    h = len(gens)
    dim = h + n_alg.dim
    table: dict[tuple[int, int], dict[int, Fraction]] = {}
    for p, diag in enumerate(gens):
        for m, w in enumerate(diag):
            if w:
                table[(p, h + m)] = {h + m: w}
    for (i, j), terms in n_alg.brackets.items():
        table[(h + i, h + j)] = {h + k: c for k, c in terms.items()}
    labels = [f"T{p}" for p in range(h)] + list(n_alg.labels)
    name = f"t{h}+{n_alg.name}" if n_alg.name else None
    return LieAlgebra(dim, table, labels=labels, name=name)


def completion(spec: FamilySpec) -> LieAlgebra:
    return semidirect_sum(build_family(spec), torus_spec(spec))


# ---------------------------------------------------------------------------
# enumeration

def instances(n_min: int = 5, n_max: int = 10, families: Sequence[str] | None = None) -> Iterator[FamilySpec]:
    """Every valid spec with ``n_min <= n <= n_max`` (alphas at the shipped seed)."""
    fams = list(FAMILIES) if families is None else [canonical_family(f) for f in families]
    for fam in fams:
        info = FAMILIES[fam]
        for n in range(n_min, n_max + 1):
            rs = range(3, n + 1) if "r" in info.params else [None]
            ks = range(1, n + 1) if "k" in info.params else [None]
            ls = range(2, n + 1) if "l" in info.params else [None]
            for r in rs:
                for k in ks:
                    for l in ls:
                        try:
                            yield FamilySpec(fam, n, r=r, k=k, l=l)
                        except SpecError:
                            continue


# ---------------------------------------------------------------------------
# naturally graded list

GRADED_FAMILIES = ("L+C", "Q+C", "Lnr", "Qnr", "Tn_n4", "Tn_n3", "E951", "E952", "E953", "E73")

_GRADED_OVERRIDES = {"E951": _E951_GRADED, "E953": _E953_GRADED}


def naturally_graded(family: str, n: int | None = None, r: int | None = None) -> tuple[LieAlgebra, tuple[int, ...]]:
    """A naturally graded quasi-filiform algebra and its expected p-sequence."""
    fam = canonical_family(family)
    if fam not in GRADED_FAMILIES:
        raise SpecError(f"{fam} is not in the naturally graded list")
    info = FAMILIES[fam]
    if n is None:
        if info.fixed_n is None:
            raise SpecError(f"{fam}: field 'n' is required")
        n = info.fixed_n
    spec = FamilySpec(fam, n, r=r) if "r" in info.params else FamilySpec(fam, n)
    if fam in _GRADED_OVERRIDES:
        table, _ = _fixed(_GRADED_OVERRIDES[fam], [])(spec)
        g = LieAlgebra(n, table.data, name=f"{fam}:graded")
    else:
        g = build_family(spec)
    if fam in ("L+C", "Q+C"):
        p = (3,) + (1,) * (n - 3)
    else:
        rr = {"Lnr": r, "Qnr": r, "Tn_n4": n - 4, "Tn_n3": n - 3,
              "E951": 5, "E952": 5, "E953": 5, "E73": 3}[fam]
        p = tuple(2 if i in (1, rr) else 1 for i in range(1, n - 1))
    return g, p


def graded_instances(n_max: int = 9) -> Iterator[tuple[str, int, int | None]]:
    """(family, n, r) for every graded-list entry with n <= n_max."""
    for fam in GRADED_FAMILIES:
        info = FAMILIES[fam]
        if info.fixed_n is not None:
            if info.fixed_n <= n_max:
                yield fam, info.fixed_n, None
            continue
        for n in range(4, n_max + 1):
            for r in (range(3, n + 1) if "r" in info.params else [None]):
                try:
                    FamilySpec(fam, n, r=r) if r is not None else FamilySpec(fam, n)
                except SpecError:
                    continue
                yield fam, n, r


# ---------------------------------------------------------------------------
# completability

# places where the generator departs from a literal transcription of the
# printed table; each report for the family carries the note
TRANSCRIPTION_NOTES: dict[str, str] = {
    "Q+C": "pairing [Y_i, Y_{n-2-i}] (weight-consistent index, not n-1-i)",
    "B+C": "alpha brackets target Y_{i+j+k-1}, i.e. Y_{2i+k} on adjacent pairs",
    "Q_sd_b": "Y_{n-1} weight (n-5+2*beta) l0, not (k+1) l0",
    "Gn_k": "[Y_i, Y_{n-2-i}] coefficient (i-1)(n-3-i)/2 as in the graded T_{n,n-4}",
    "E951": "chain [Y_0, Y_i] = Y_{i+1} stops at i=4 (eigenbasis presentation)",
    "E953": "includes [Y_1, Y_5] = 2 Y_6, needed for the Jacobi identity",
}


def _generic_weights(space: DiagonalDerivationSpec) -> list[Fraction]:
    # distinct primes as parameter values separate the weights of a generic torus element
    primes = [101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163]
    return space.instantiate([Fraction(p) for p in primes[:space.nparams]])


def enlarge_torus(g: LieAlgebra) -> tuple[LieAlgebra, list[list[Fraction]], DiagonalDerivationSpec]:
    """Search shears ``Y_a -> Y_a +- Y_b`` inside weight spaces that enlarge the diagonal torus.

    Greedy: accept any shear that raises the diagonal rank, repeat until none does.
    Returns the rewritten algebra, its basis in original coordinates and its diagonal space.
    """
    n = g.dim
    basis = _unit_rows(n)
    current, space = g, diagonal_derivation_space(g)
    improved = True
    while improved:
        improved = False
        weights = _generic_weights(space)
        for a in range(n):
            for b in range(n):
                if a == b or weights[a] != weights[b]:
                    continue
                for c in (1, -1):
                    shear = _unit_rows(n)
                    shear[a][b] = Fraction(c)
                    trial = change_basis(current, shear)
                    trial_space = diagonal_derivation_space(trial)
                    if trial_space.nparams > space.nparams:
                        basis[a] = [x + c * y for x, y in zip(basis[a], basis[b])]
                        current, space, improved = trial, trial_space, True
                        break
                if improved:
                    break
            if improved:
                break
    return current, basis, space


def _unit_rows(n):
    return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]


@dataclass
class CompletabilityReport:
    spec: str
    jacobi: bool
    defects: list = field(default_factory=list)
    dim: int | None = None
    nilindex: int | None = None
    type: int | None = None
    rank: int | None = None
    printed_type: int | None = None
    printed_rank: int | None = None
    torus_inside: bool | None = None
    printed_torus_H: tuple[int, int] | None = None
    torus_rank: int | None = None
    shears: list = field(default_factory=list)
    H0: int | None = None
    H1: int | None = None
    H2: int | None = None
    complete: bool | None = None
    notes: list = field(default_factory=list)

    @property
    def matches_printed(self) -> bool:
        return (self.jacobi and self.dim is not None and self.nilindex == self.dim - 2
                and self.type == self.printed_type and self.rank == self.printed_rank)

    @property
    def ok(self) -> bool:
        return bool(self.matches_printed and self.torus_inside and self.complete)

    def to_dict(self) -> dict:
        return {
            "spec": self.spec,
            "jacobi": self.jacobi,
            "dim": self.dim,
            "defects": [{"triple": list(t), "vector": [format_scalar(x) for x in v]}
                        for *t, v in self.defects],
            "nilindex": self.nilindex,
            "type": self.type,
            "rank": self.rank,
            "printed": {"type": self.printed_type, "rank": self.printed_rank},
            "torus_inside": self.torus_inside,
            "printed_torus_H": (None if self.printed_torus_H is None else
                                {"H0": self.printed_torus_H[0], "H1": self.printed_torus_H[1]}),
            "torus_rank": self.torus_rank,
            "shears": list(self.shears),
            "H": {"H0": self.H0, "H1": self.H1, **({"H2": self.H2} if self.H2 is not None else {})},
            "complete": self.complete,
            "notes": list(self.notes),
        }


def completability_report(spec: FamilySpec, with_h2: bool = False) -> CompletabilityReport:
    """Invariants of the family instance and H^0, H^1 of its completion by the printed torus."""
    from .cohomology import cohomology_dim
    info = FAMILIES[spec.family]
    g = build_family(spec)
    defects = jacobi_defect(g)
    rep = CompletabilityReport(str(spec), not defects, defects, dim=spec.n,
                               printed_type=info.type, printed_rank=info.rank)
    if spec.family in TRANSCRIPTION_NOTES:
        rep.notes.append(TRANSCRIPTION_NOTES[spec.family])
    if defects:
        return rep
    _, rep.nilindex = lower_central_series(g)
    rep.type = type_of(g)
    space = diagonal_derivation_space(g)
    rep.rank = space.nparams
    torus = torus_spec(spec)
    rep.torus_inside = space.contains(torus) and torus.rank == torus.nparams
    full = semidirect_sum(g, torus)
    h0, h1 = cohomology_dim(full, 0), cohomology_dim(full, 1)
    rep.printed_torus_H = (h0, h1)
    rep.torus_rank = torus.nparams
    if h0 or h1:
        # the printed torus may fail to be maximal when two weights collide
        rebased, basis, space2 = enlarge_torus(g)
        if space2.nparams > torus.nparams:
            full = semidirect_sum(rebased, space2)
            h0, h1 = cohomology_dim(full, 0), cohomology_dim(full, 1)
            rep.torus_rank = space2.nparams
            rep.shears = [f"Y{j} -> {_describe_vector(v)}" for j, v in enumerate(basis)
                          if sum(1 for x in v if x) > 1]
            rep.notes.append(f"printed torus is not maximal: rank >= {space2.nparams} after shears")
    rep.H0, rep.H1 = h0, h1
    if with_h2:
        rep.H2 = cohomology_dim(full, 2)
    rep.complete = h0 == 0 and h1 == 0
    return rep


def _describe_vector(v) -> str:
    return " + ".join((f"{format_scalar(x)}*" if x != 1 else "") + f"Y{i}" for i, x in enumerate(v) if x)
