from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from algebras import heisenberg
from quasifiliform.catalog import (
    FAMILIES,
    GRADED_FAMILIES,
    FamilySpec,
    NotADerivation,
    SpecError,
    build_family,
    completability_report,
    completion,
    enlarge_torus,
    graded_instances,
    instances,
    naturally_graded,
    parse_spec,
    semidirect_sum,
    structure_table,
    torus_spec,
)
from quasifiliform.derivations import DiagonalDerivationSpec, diagonal_rank, is_complete
from quasifiliform.liecore import LieAlgebra, associated_graded, is_lie, jacobi_defect, nilindex, type_of


def table_of(g):
    return {key: dict(v) for key, v in g.brackets.items()}


# --- structure constants

def test_structure_table_hand_expansion():
    a1, a2, a3 = Fraction(2), Fraction(-3), Fraction(5)
    a = structure_table([a1, a2, a3], 9)
    assert a[(1, 2)] == a1
    assert a[(1, 3)] == a1               # a_{1,3} = a_{1,2} - a_{2,2}
    assert a[(1, 4)] == a1 - a2          # a_{1,3} - a_{2,3}
    assert a[(1, 5)] == a1 - 2 * a2      # a_{1,4} - a_{2,4}
    assert a[(2, 3)] == a2 and a[(3, 4)] == a3


def test_structure_table_is_the_jacobi_solution():
    # oracle: impose Jacobi on (Y0, Yi, Yj) for [Y0,Yi]=Y_{i+1}, [Yi,Yj]=a_ij Y_{i+j} symbolically
    bound = 8
    syms = {(i, j): sp.Symbol(f"a_{i}_{j}") for i in range(1, bound) for j in range(i + 1, bound) if i + j <= bound}

    def coef(i, j):
        if i == j:
            return 0
        if i > j:
            return -coef(j, i)
        return syms.get((i, j), 0)

    alphas = [sp.Integer(7), sp.Integer(-2), sp.Integer(3)]
    eqs = [syms[(i, i + 1)] - (alphas[i - 1] if i <= 3 else 0) for i in range(1, bound) if (i, i + 1) in syms]
    for i in range(1, bound):
        for j in range(i + 1, bound):
            if i + j + 1 <= bound and (i, j) in syms:
                eqs.append(coef(i, j) - coef(i + 1, j) - coef(i, j + 1))
    solution = sp.solve(eqs, list(syms.values()), dict=True)[0]
    ours = structure_table([7, -2, 3], bound)
    for key, sym in syms.items():
        assert Fraction(str(solution.get(sym, sym))) == ours[key]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=5), min_size=1, max_size=5),
       st.integers(4, 14))
def test_structure_table_recurrence(alphas, bound):
    a = structure_table(alphas, bound)
    for (i, j), v in a.items():
        if j == i + 1:
            assert v == (alphas[i - 1] if i <= len(alphas) else 0)
        if (i + 1, j) in a and (i, j + 1) in a:
            assert v == a[(i + 1, j)] + a[(i, j + 1)] or j == i + 1


# --- spec strings

def test_parse_spec_basic():
    s = parse_spec("Lnr:n=6,r=3")
    assert (s.family, s.n, s.r, s.k, s.l) == ("Lnr", 6, 3, None, None)


def test_parse_spec_alphas():
    s = parse_spec("A+C:n=8,k=2,alpha=1/2,-3")
    assert s.alphas == (Fraction(1, 2), Fraction(-3))


def test_parse_spec_fixed_dimension_and_alias():
    assert parse_spec("E952").n == 9
    assert parse_spec("L⊕C:n=6").family == "L+C"


def test_default_alpha_seed():
    assert parse_spec("A+C:n=8,k=2").alphas == (1, 0)


@pytest.mark.parametrize("text, fragment", [
    ("Nope:n=6", "Nope"),
    ("Lnr:r=3", "'n'"),
    ("Lnr:n=6,r=x", "'r'"),
    ("Lnr:n=6,r=4", "r"),
    ("Lnr:n=6,r=3,k=1", "'k'"),
    ("A+C:n=8,k=2,alpha=1,0,0", "alpha"),
    ("A+C:n=8,k=2,alpha=1,q", "alpha"),
    ("Lnr:n=6,r=3,z=1", "z"),
    ("Dnr_k:n=8,r=3,k=2", "k"),
])
def test_parse_spec_errors_name_the_field(text, fragment):
    with pytest.raises(SpecError, match=fragment):
        parse_spec(text)


def test_spec_string_round_trip():
    for spec in instances(5, 8):
        assert parse_spec(str(spec)) == spec


# --- bracket tables

def test_lnr_6_3_table():
    g = build_family(FamilySpec("Lnr", 6, r=3))
    one = Fraction(1)
    assert table_of(g) == {(0, 1): {2: one}, (0, 2): {3: one}, (0, 3): {4: one}, (1, 2): {5: one}}
    assert is_lie(g)


def test_e73_table():
    g = build_family(parse_spec("E73"))
    assert g.brackets[(1, 2)] == {6: 1}
    assert g.brackets[(2, 6)] == {5: -1}
    assert jacobi_defect(g) == []


def test_a_plus_c_seed_is_lie():
    g = build_family(parse_spec("A+C:n=8,k=2,alpha=1,0"))
    assert jacobi_defect(g) == []
    assert nilindex(g) == 6 and type_of(g) == 3


def test_bad_alpha_reports_defects():
    # Cnr_k at n=10, r=7, k=2 only admits alpha_1 = alpha_2 = 0
    g = build_family(parse_spec("Cnr_k:n=10,r=7,k=2,alpha=1,0,0"))
    assert jacobi_defect(g)


# --- tori

def test_torus_l_plus_c():
    t = torus_spec(FamilySpec("L+C", 6))
    expected = DiagonalDerivationSpec.from_forms(
        [[1, 0, 0], [0, 1, 0], [1, 1, 0], [2, 1, 0], [3, 1, 0], [0, 0, 1]])
    assert t.nparams == 3 and t.weights == expected.weights


def test_torus_dnr_k():
    t = torus_spec(FamilySpec("Dnr_k", 8, r=3, k=1))
    half = Fraction(1, 2)
    # (l0, (k+1/2) l0, (k+3/2) l0, ..., (k+(2n-5)/2) l0, (r-1+2k) l0) with k=1, r=3, n=8
    chain = [1 + half + m for m in range(6)]
    assert [w[0] for w in t.weights] == [1] + chain + [4]
    assert chain[-1] == 1 + Fraction(2 * 8 - 5, 2)


def test_torus_e952():
    t = torus_spec(parse_spec("E952"))
    assert [w[0] for w in t.weights] == [1, 1, 2, 3, 4, 5, 6, 7, 5] and t.nparams == 1


def test_printed_rank_is_parameter_count():
    for spec in instances(5, 8):
        assert torus_spec(spec).nparams == FAMILIES[spec.family].rank, str(spec)


# --- semidirect sums

def test_semidirect_heisenberg():
    g = semidirect_sum(heisenberg(), DiagonalDerivationSpec.from_generators([[1, 1, 2]]))
    assert g.dim == 4 and is_lie(g)
    assert g.labels[0] == "T0"


def test_semidirect_empty_torus():
    h = heisenberg()
    assert semidirect_sum(h, DiagonalDerivationSpec.from_forms([[]] * 3, 0)) is h


def test_semidirect_rejects_non_derivation():
    with pytest.raises(NotADerivation):
        semidirect_sum(heisenberg(), DiagonalDerivationSpec.from_generators([[1, 1, 1]]))


@pytest.mark.parametrize("text", ["Lnr:n=7,r=5", "E73", "A+C:n=8,k=2", "Qnr:n=9,r=3"])
def test_semidirect_restriction_and_abelian_torus(text):
    spec = parse_spec(text)
    g, full = build_family(spec), completion(spec)
    h = full.dim - g.dim
    shifted = {(i - h, j - h): {k - h: c for k, c in terms.items()}
               for (i, j), terms in full.brackets.items() if i >= h}
    assert shifted == table_of(g)
    assert not any(i < h and j < h for i, j in full.brackets)


def test_l_plus_c_completion_is_complete():
    full = completion(FamilySpec("L+C", 6))
    assert full.dim == 9 and is_complete(full).complete


# --- completability

def test_report_lnr():
    rep = completability_report(parse_spec("Lnr:n=6,r=3"))
    assert (rep.type, rep.rank, rep.nilindex, rep.H0, rep.H1) == (2, 2, 4, 0, 0)
    assert rep.complete and rep.ok


def test_report_e73():
    rep = completability_report(parse_spec("E73"))
    assert (rep.type, rep.rank, rep.H0, rep.H1) == (2, 1, 0, 0) and rep.complete


def test_report_a_plus_c():
    rep = completability_report(parse_spec("A+C:n=8,k=2,alpha=1,0"))
    assert rep.rank == 2 and rep.complete and rep.shears == []


def test_report_non_lie_stops_early():
    rep = completability_report(parse_spec("Q_sd_a:n=9,l=4"))
    assert not rep.jacobi and rep.defects and rep.H0 is None and not rep.ok
    assert rep.to_dict()["defects"]


@pytest.mark.parametrize("text, shear", [
    ("A_sd_l:n=6,k=2,l=2", "Y1 -> Y1 + Y5"),
    ("Cnr_k:n=6,r=3,k=2", "Y5 -> Y4 + Y5"),
])
def test_colliding_weights_get_a_larger_torus(text, shear):
    rep = completability_report(parse_spec(text))
    assert rep.printed_torus_H == (0, 1)
    assert rep.torus_rank == 2 and rep.shears == [shear]
    assert rep.H0 == rep.H1 == 0 and rep.complete


def test_enlarge_torus_keeps_the_algebra():
    g = build_family(parse_spec("A_sd_l:n=7,k=3,l=3"))
    rebased, basis, space = enlarge_torus(g)
    assert space.nparams == 2 == diagonal_rank(rebased)
    assert is_lie(rebased) and type_of(rebased) == type_of(g)


def test_h2_in_report():
    rep = completability_report(parse_spec("Lnr:n=6,r=3"), with_h2=True)
    assert rep.H2 is not None and rep.to_dict()["H"]["H2"] == rep.H2


# --- family-wide properties

def test_lie_instances_are_quasi_filiform_with_printed_type():
    for spec in instances(5, 8):
        g = build_family(spec)
        if not is_lie(g):
            continue
        assert nilindex(g) == spec.n - 2, str(spec)
        assert type_of(g) == FAMILIES[spec.family].type, str(spec)


def test_rank_of_a_families():
    for spec in instances(5, 9, families=["A+C", "A_sd_l"]):
        g = build_family(spec)
        assert is_lie(g)
        assert diagonal_rank(g) == {"A+C": 2, "A_sd_l": 1}[spec.family], str(spec)


def test_graded_entries_reproduce_their_tables():
    seen = set()
    for fam, n, r in graded_instances(9):
        seen.add(fam)
        g, p = naturally_graded(fam, n, r)
        gr = associated_graded(g)
        assert gr.psequence == p
        assert gr.in_original_order().same_table(g)
    assert seen == set(GRADED_FAMILIES)


def test_naturally_graded_rejects_deformed_families():
    with pytest.raises(SpecError):
        naturally_graded("A+C", 8)


def test_graded_e951_is_a_different_presentation():
    graded, _ = naturally_graded("E951")
    catalog = build_family(parse_spec("E951"))
    assert is_lie(graded) and is_lie(catalog)
    assert not graded.same_table(catalog)


def test_json_document_of_a_family():
    g = build_family(parse_spec("Qnr:n=9,r=5"))
    assert LieAlgebra.from_json(g.to_json()).same_table(g)
