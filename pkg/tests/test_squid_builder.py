import itertools
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from hecurve.errors import DuplicatePoints, EndNotDivision, MalformedInput, NotDivision, UnknownKind
from hecurve.findim_algebra import cartan_matrix, coxeter_polynomial, hom_space
from hecurve.quiver_relations import squid_quiver, standard_points, to_algebra
from hecurve.squid_builder import (
    SquidSpec,
    base_bimodule,
    build_canonical,
    build_squid,
    classify_type,
    expected_squid_dim,
    load_qt_fixtures,
    rational_squid_spec,
    regular_simple,
    squid_path_algebra,
)

import oracles


def coxeter_from_cartan(C):
    # Euler form is the inverse transpose of the Cartan matrix
    M = oracles.to_int_matrix(C)
    return oracles.coxeter_poly_from_euler(M.T.inv())


# bases ---------------------------------------------------------------------------


def test_base_dimensions(reference_doc):
    oracles.assert_in_reference(reference_doc, r"is the path algebra of the Kronecker quiver")
    assert base_bimodule("re").algebra.dim == 1 + 2 + 1
    assert base_bimodule("co").algebra.dim == 2 + 4 + 2
    assert base_bimodule("qt").algebra.dim == 1 + 4 + 4


def test_base_validation():
    with pytest.raises(UnknownKind):
        base_bimodule("octonion")
    with pytest.raises(NotDivision):
        base_bimodule("qt", (1, 5))
    for kind in ("re", "co", "qt"):
        base_bimodule(kind).algebra.validate(full=True)


# regular simples -----------------------------------------------------------------


def test_rational_point_simple():
    base = base_bimodule("re")
    p = regular_simple(base, {"label": "x", "weight": 2, "coords": [1, 1]})
    assert p.end_dim == 1 and p.module.dim == 2
    assert p.module.idempotent_dims() == [1, 1]
    idems = [set(e) for e in base.algebra.idempotents]
    arrows = [k for k in range(base.algebra.dim) if {k} not in idems]
    assert len(arrows) == 2
    for k in arrows:
        # each arrow acts by 1 from the source line to the sink line
        entries = [x for row in p.module.actions[k] for x in row if x]
        assert entries == [1]


def test_complex_point_on_real_line():
    base = base_bimodule("re")
    p = regular_simple(base, {"label": "i", "weight": 2, "form": [1, 0, 1]})
    assert p.module.dim == 4 and p.end_dim == 2
    # oracle: the endomorphisms commuting with the companion matrix of u^2 + v^2
    C = sympy.Matrix([[0, -1], [1, 0]])
    X = sympy.Matrix(2, 2, sympy.symbols("a b c d"))
    sol = sympy.solve(list(X * C - C * X), list(X), dict=True)[0]
    assert len(X.subs(sol).free_symbols) == 2


def test_reducible_form_rejected():
    with pytest.raises(MalformedInput):
        regular_simple(base_bimodule("re"), {"weight": 2, "form": [-1, 0, 1]})


def test_distinct_points_have_no_homs():
    base = base_bimodule("alg_closed")
    p = regular_simple(base, {"label": "0", "weight": 2, "coords": [0, 1]})
    q = regular_simple(base, {"label": "inf", "weight": 2, "coords": [1, 0]})
    assert hom_space(p.module, q.module) == [] and hom_space(q.module, p.module) == []


def test_duplicate_points_rejected():
    spec = rational_squid_spec([(1, 2), (2, 4)], [2, 2])
    with pytest.raises(DuplicatePoints):
        build_squid(spec)


def test_qt_fixture_points():
    base = base_bimodule("qt")
    names = sorted(load_qt_fixtures()["points"])
    points = [regular_simple(base, {"label": n, "weight": 2, "fixture": n}) for n in names]
    assert all(p.end_dim == 2 for p in points)
    spec = SquidSpec(base, points)
    A = build_squid(spec)
    assert A.dim == expected_squid_dim(spec)
    A.validate()


# squids ------------------------------------------------------------------------------


def test_no_points_gives_base():
    base = base_bimodule("alg_closed")
    A = build_squid(SquidSpec(base, []))
    assert A.dim == base.algebra.dim == 4
    assert coxeter_polynomial(A) == coxeter_polynomial(base.algebra)


def test_tubular_squid_matches_quiver_squid():
    spec = rational_squid_spec(standard_points(4, 2), [2, 2, 2, 2])
    Pi = build_squid(spec)
    assert len(Pi.idempotents) == 2 + 4
    quiver_form = squid_path_algebra(spec)
    assert cartan_matrix(Pi) == cartan_matrix(quiver_form)
    assert coxeter_polynomial(Pi) == coxeter_polynomial(quiver_form)
    assert list(coxeter_polynomial(Pi).coeffs) == coxeter_from_cartan(cartan_matrix(Pi))


def test_real_squid_shape():
    spec = rational_squid_spec(standard_points(3), [2, 3, 6], kind="re")
    assert all(p.bar for p in spec.points)
    A = build_squid(spec)
    assert len(A.idempotents) == 1 + 2 + 5 + 2


@given(st.lists(st.integers(1, 5), min_size=0, max_size=4))
def test_dimension_formula(weights):
    spec = rational_squid_spec(standard_points(len(weights), 2), weights)
    A = build_squid(spec)
    # block count: m(m+1)/2 residue blocks and m copies of V per point, plus the base
    count = 4 + sum((w - 1) * w // 2 + (w - 1) * 2 for w in weights)
    assert A.dim == expected_squid_dim(spec) == count
    A.validate()


@given(st.lists(st.integers(1, 4), min_size=1, max_size=4))
def test_block_squid_agrees_with_quiver_squid(weights):
    spec = rational_squid_spec(standard_points(len(weights), 3), weights)
    Pi, Q = build_squid(spec), squid_path_algebra(spec)
    assert cartan_matrix(Pi) == cartan_matrix(Q)
    assert coxeter_polynomial(Pi) == coxeter_polynomial(Q)


def test_canonical_2222_relations():
    spec = rational_squid_spec(standard_points(4, 2), [2, 2, 2, 2])
    C = build_canonical(spec)
    assert C.rank == 6
    assert coxeter_polynomial(C) == coxeter_polynomial(build_squid(spec))


def test_canonical_236_shape():
    assert build_canonical(rational_squid_spec(standard_points(3), [2, 3, 6])).rank == 10


@pytest.mark.parametrize("weights", [(2, 3, 3), (2, 4, 4), (2, 3, 6), (2, 2, 2, 2), (3, 3, 3), (2, 2, 5)])
def test_canonical_and_squid_share_coxeter_polynomial(weights):
    spec = rational_squid_spec(standard_points(len(weights), 2), list(weights))
    canonical, squid = build_canonical(spec), build_squid(spec)
    assert coxeter_polynomial(canonical) == coxeter_polynomial(squid)
    assert list(coxeter_polynomial(canonical).coeffs) == coxeter_from_cartan(cartan_matrix(canonical))


def test_canonical_needs_rational_residues():
    from hecurve.errors import UnsupportedResidue
    base = base_bimodule("qt")
    p = regular_simple(base, {"label": "o", "weight": 2, "fixture": "span_1_i"})
    with pytest.raises(UnsupportedResidue):
        build_canonical(SquidSpec(base, [p]))


# classification ----------------------------------------------------------------------


def kind_of(weights):
    return classify_type(build_squid(rational_squid_spec(standard_points(len(weights)), list(weights)))).kind


def test_named_types():
    assert kind_of((2, 3, 6)) == "tubular"
    assert kind_of((2, 3, 5)) == "domestic"
    assert kind_of((2, 3, 7)) == "wild_candidate"
    assert kind_of((2, 2, 2, 2)) == "tubular"


@pytest.mark.parametrize("triple", list(itertools.combinations_with_replacement(range(1, 7), 3)))
def test_domestic_exactly_for_dynkin_triples(triple):
    a, b, c = triple
    is_dynkin = Fraction(1, a) + Fraction(1, b) + Fraction(1, c) > 1
    assert (kind_of(triple) == "domestic") == is_dynkin


def test_spec_from_json():
    data = {"base": {"kind": "alg_closed"},
            "points": [{"label": f"x{k}", "weight": 2, "coords": list(p)} for k, p in enumerate(standard_points(4, 2))]}
    spec = SquidSpec.from_json(data)
    assert build_squid(spec).dim == expected_squid_dim(spec) == 4 + 4 * 3
    with pytest.raises(MalformedInput):
        SquidSpec.from_json({"points": []})
