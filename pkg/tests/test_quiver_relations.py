import json
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from hecurve.errors import MalformedInput, UnknownType
from hecurve.findim_algebra import cartan_matrix, coxeter_polynomial, radical_power_dims
from hecurve.hereditary_orders import build_standard_order, order_spec
from hecurve.quiver_relations import (
    Arrow,
    Quiver,
    QuiverAlgebraSpec,
    RelationElement,
    canonical_quiver,
    cyclic_quiver,
    enumerate_basis,
    euclidean_for_triple,
    euclidean_quiver,
    kronecker_quiver,
    linear_quiver,
    parse_euclidean_type,
    squid_quiver,
    standard_points,
    to_algebra,
)

import oracles


def arrow_pairs(spec):
    return [(a.source, a.target) for a in spec.quiver.arrows]


def test_small_quivers():
    A2 = enumerate_basis(linear_quiver(2))
    assert A2.dim == 3 and len(A2.basis_paths) == 3
    assert to_algebra(kronecker_quiver()).dim == 4
    assert to_algebra(QuiverAlgebraSpec(Quiver(1, []))).dim == 1


def test_a2_cartan_is_path_count():
    spec = linear_quiver(2)
    assert oracles.to_int_matrix(cartan_matrix(to_algebra(spec))) == oracles.path_count_matrix(2, arrow_pairs(spec))


def test_conductor_scales_dimension():
    assert to_algebra(kronecker_quiver(4)).dim == 8


def _relation_rank(spec) -> int:
    """Rank of the relation vectors inside the span of the source-to-sink paths."""
    label_paths = sorted({labels for rel in spec.relations for _, labels in rel.terms})
    rows = []
    for rel in spec.relations:
        coeff = {labels: c for c, labels in rel.terms}
        row = []
        for labels in label_paths:
            c = coeff.get(labels, 0)
            c = c.to_rational() if hasattr(c, "to_rational") else Fraction(c)
            row.append(sympy.Rational(c.numerator, c.denominator))
        rows.append(row)
    return sympy.Matrix(rows).rank()


@pytest.mark.parametrize("weights", [(2, 2, 2, 2), (2, 3, 6), (3, 3, 3), (2, 2, 3)])
def test_canonical_dimension_is_paths_minus_relations(weights):
    spec = canonical_quiver(standard_points(len(weights), 2), list(weights))
    # every relation runs from source to sink, so the ideal is spanned by the relations
    paths = sum(oracles.path_count_matrix(spec.quiver.vertices, arrow_pairs(spec)))
    assert to_algebra(spec).dim == paths - _relation_rank(spec)


def test_canonical_2222_shape():
    spec = canonical_quiver(standard_points(4, 2), [2, 2, 2, 2])
    assert spec.quiver.vertices == 6
    assert len(spec.relations) == 4


def test_canonical_236_vertex_count():
    assert canonical_quiver(standard_points(3), [2, 3, 6]).quiver.vertices == 2 + (1 + 2 + 5)


def test_squid_vertex_counts():
    assert squid_quiver(standard_points(3), [2, 3, 6]).quiver.vertices == 10
    plain = squid_quiver(standard_points(1), [1])
    assert plain.quiver.vertices == 2 and to_algebra(plain).dim == 4


@pytest.mark.parametrize("weights", [(2, 2, 2, 2), (2, 3, 6), (2, 4, 4), (1, 3), (3, 3, 3)])
def test_squid_dimension_oracle(weights):
    spec = squid_quiver(standard_points(len(weights), 2), list(weights))
    paths = sum(oracles.path_count_matrix(spec.quiver.vertices, arrow_pairs(spec)))
    # the relation on arm i times each arm path out of its first vertex spans the ideal
    ideal = sum(w - 1 for w in weights)
    assert to_algebra(spec).dim == paths - ideal


def test_cyclic_quiver_matches_order_model():
    for L in range(1, 5):
        quiver_alg = to_algebra(cyclic_quiver(3, L))
        order_alg = build_standard_order(order_spec([1, 1, 1], N=L, radical_cut=L))
        assert quiver_alg.dim == order_alg.dim == 3 * L
        assert radical_power_dims(quiver_alg) == radical_power_dims(order_alg)


def test_cyclic_quiver_without_kill_length_is_infinite():
    from hecurve.errors import NotFiniteDimensional
    spec = QuiverAlgebraSpec(Quiver(2, [Arrow(0, 1, "a"), Arrow(1, 0, "b")]))
    with pytest.raises(NotFiniteDimensional):
        enumerate_basis(spec)


def test_euclidean_shapes():
    assert euclidean_quiver("E~6").quiver.vertices == 7
    d4 = euclidean_quiver("D~4")
    assert d4.quiver.vertices == 5
    assert sorted(a.target for a in d4.quiver.arrows) == [0, 0, 0, 0]  # arrows into the center
    out = euclidean_quiver("D~4", "outward")
    assert sorted(a.source for a in out.quiver.arrows) == [0, 0, 0, 0]
    assert euclidean_quiver("A~(2,3)").quiver.vertices == 5


def test_parse_euclidean_rejects_garbage():
    for bad in ("F~4", "E~9", "A~3", "D~3", "nonsense"):
        with pytest.raises(UnknownType):
            parse_euclidean_type(bad)
    assert parse_euclidean_type("A~(1,4)") == ("A", 1, 4)


DYNKIN_TRIPLES = [(2, 2, n) for n in range(2, 7)] + [(2, 3, 3), (2, 3, 4), (2, 3, 5)] + \
    [(1, p, q) for p in range(1, 5) for q in range(p, 5)]


@pytest.mark.parametrize("weights", DYNKIN_TRIPLES)
def test_squid_matches_euclidean_quiver(weights):
    assert sum(Fraction(1, w) for w in weights) > 1
    kind = euclidean_for_triple(weights)
    eu_spec = euclidean_quiver(kind)
    squid = to_algebra(squid_quiver(standard_points(3), list(weights)))
    # oracle: the Euclidean quiver has no relations, so its Euler form is combinatorial
    E = oracles.hereditary_euler(eu_spec.quiver.vertices, arrow_pairs(eu_spec))
    assert list(coxeter_polynomial(squid).coeffs) == oracles.coxeter_poly_from_euler(E)


def test_euclidean_for_triple_rejects_wild():
    with pytest.raises(UnknownType):
        euclidean_for_triple([2, 3, 7])


@given(oracles.acyclic_quivers())
def test_relation_free_dimension_is_path_count(q):
    n, arrows = q
    spec = oracles.quiver_spec(n, arrows)
    basis = enumerate_basis(spec)
    A = to_algebra(spec)
    assert A.dim == len(basis.basis_paths) == sum(oracles.path_count_matrix(n, arrows))
    for i, e in enumerate(A.idempotents):
        for j, f in enumerate(A.idempotents):
            assert A.mul(e, f) == (e if i == j else {})


@given(st.sampled_from([(2, 2, 2, 2), (2, 3, 4), (3, 3, 3)]), st.randoms(use_true_random=False))
def test_basis_enumeration_ignores_arrow_order(weights, rnd):
    spec = canonical_quiver(standard_points(len(weights), 2), list(weights))
    arrows = list(spec.quiver.arrows)
    rnd.shuffle(arrows)
    shuffled = QuiverAlgebraSpec(Quiver(spec.quiver.vertices, arrows), spec.relations, spec.conductor)
    a, b = enumerate_basis(spec), enumerate_basis(shuffled)
    labels = lambda s, basis: sorted(
        tuple(s.quiver.arrows[k].label for k in path) for _, path in basis.basis_paths)
    assert labels(spec, a) == labels(shuffled, b)
    assert coxeter_polynomial(to_algebra(shuffled)) == coxeter_polynomial(to_algebra(spec))


def test_relation_validation():
    q = Quiver(3, [Arrow(0, 1, "a"), Arrow(1, 2, "b"), Arrow(0, 2, "c")])
    with pytest.raises(MalformedInput):
        to_algebra(QuiverAlgebraSpec(q, [RelationElement([(1, ("b", "a"))])]))  # not composable
    with pytest.raises(MalformedInput):
        to_algebra(QuiverAlgebraSpec(q, [RelationElement([(1, ("a",)), (1, ("c",))])]))  # not parallel
    with pytest.raises(MalformedInput):
        Quiver(2, [Arrow(0, 1, "a"), Arrow(0, 1, "a")])


def test_commutative_square_dimension():
    q = Quiver(4, [Arrow(0, 1, "a"), Arrow(1, 3, "b"), Arrow(0, 2, "c"), Arrow(2, 3, "d")])
    spec = QuiverAlgebraSpec(q, [RelationElement([(1, ("a", "b")), (-1, ("c", "d"))])])
    assert to_algebra(spec).dim == 4 + 4 + 1


def test_spec_json_round_trip():
    spec = canonical_quiver(standard_points(4, 3), [2, 2, 2, 2])
    again = QuiverAlgebraSpec.from_json(json.loads(json.dumps(spec.to_json())))
    assert to_algebra(again).products == to_algebra(spec).products


def test_duplicate_points_rejected():
    from hecurve.errors import DuplicatePoints
    with pytest.raises(DuplicatePoints):
        canonical_quiver([(1, 0), (2, 0), (0, 1)], [2, 2, 2])
