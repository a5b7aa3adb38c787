import itertools

import pytest
from hypothesis import given, strategies as st

from hecurve.errors import IndexOutOfRange, MalformedInput
from hecurve.exact_linear import totient
from hecurve.findim_algebra import center, radical, simple_top
from hecurve.hereditary_orders import (
    allowed_powers,
    ar_duality_holds,
    build_standard_order,
    expected_hom_ext,
    hom_ext_table,
    morita_profile,
    order_basis,
    order_report,
    order_spec,
    radical_pattern,
    rotate_table,
    simple_resolution,
    tau_on_simples,
)

import oracles

weights_st = st.lists(st.integers(1, 3), min_size=1, max_size=3)
specs_st = st.builds(order_spec, weights_st, st.sampled_from([2, 3]), st.sampled_from([1, 4]))


def entry_count(weights, N, conductor) -> int:
    """Block-by-block count: blocks on or below the diagonal hold A = F[z]/z^N, blocks above hold J."""
    total = 0
    for bu, pu in enumerate(weights):
        for bv, pv in enumerate(weights):
            total += pu * pv * (N if bu >= bv else N - 1)
    return total * totient(conductor)


def test_single_block_is_the_truncated_ring():
    for N in (1, 2, 5):
        for c in (1, 3, 4):
            assert build_standard_order(order_spec([1], N, c)).dim == N * totient(c)


def test_two_blocks_dimension():
    assert build_standard_order(order_spec([1, 1], 2)).dim == 7 == entry_count([1, 1], 2, 1)


def test_weights_21_pattern(reference_doc):
    oracles.assert_in_reference(reference_doc, r"A & J & \dots & J \\", r"A & A & \dots & J\\")
    spec = order_spec([2, 1], 2)
    # rows/cols 0-1 form block 0, row/col 2 block 1: J exactly above the block diagonal
    for u in range(3):
        for v in range(3):
            low = allowed_powers(spec, u, v).start
            assert low == (1 if u < 2 <= v else 0)
    assert build_standard_order(spec).dim == entry_count([2, 1], 2, 1)


@given(specs_st)
def test_dimension_matches_block_count(spec):
    A = build_standard_order(spec)
    assert A.dim == entry_count(spec.weights, spec.base.N, spec.base.conductor)
    A.validate()


def test_semisimple_quotients(reference_doc):
    oracles.assert_in_reference(reference_doc, r"H/\mathsf{rad}(H) \cong M_{p_1}(D) \times \dots \times M_{p_r}(D)")
    assert radical_pattern(order_spec([1, 1], 2)).quotient_dim == 2
    assert radical_pattern(order_spec([1, 1], 2, 4)).quotient_dim == 4
    assert radical_pattern(order_spec([2], 2)).quotient_dim == 4
    for N in (2, 3, 4):
        assert len(radical(build_standard_order(order_spec([1], N)))) == N - 1


@given(specs_st)
def test_radical_pattern_and_quotient_identity(spec):
    rep = radical_pattern(spec)
    assert rep.verified
    assert rep.quotient_dim == spec.base.residue_dim * sum(p * p for p in spec.weights)


def test_center_is_the_series_ring():
    for weights in ([1, 1], [2, 1], [1, 2, 1]):
        A = build_standard_order(order_spec(weights, N=3, radical_cut=3 * len(weights)))
        assert len(center(A)) == 3


def test_single_block_resolution():
    res = simple_resolution(order_spec([1], 3), 0)
    assert res.cokernel_dim == 1 and res.exact


def test_three_block_resolutions(reference_doc):
    oracles.assert_in_reference(reference_doc, r"0 \longrightarrow P_{j+1} \stackrel{\varepsilon_j}\longrightarrow P_j")
    spec = order_spec([1, 1, 1], 2)
    for j in range(3):
        res = simple_resolution(spec, j)
        assert res.exact and res.cokernel_dim == 1
    last = simple_resolution(spec, 2)
    assert last.multiplier.startswith("z*")  # right multiplication by the generator of J
    assert last.image_is_expected


def test_resolution_index_checked():
    with pytest.raises(IndexOutOfRange):
        simple_resolution(order_spec([1, 1], 2), 2)


def test_two_block_tables(reference_doc):
    oracles.assert_in_reference(reference_doc, r"D^\circ & \mbox{\rm if} \; j = i+1", "S_{r+1} = S_1")
    table = hom_ext_table(order_spec([1, 1], 2))
    assert table.hom == [[1, 0], [0, 1]]
    assert table.ext1 == [[0, 1], [1, 0]]


def test_self_extension_for_one_block():
    table = hom_ext_table(order_spec([1], 2, 4))
    assert table.ext1 == [[2]]


def test_complex_residue_field_doubles_hom():
    # oracle: restriction of scalars from Q(i) to Q doubles every dimension
    spec_q, spec_c = order_spec([1, 2], 2, 1), order_spec([1, 2], 2, 4)
    tq, tc = hom_ext_table(spec_q), hom_ext_table(spec_c)
    assert [[2 * x for x in row] for row in tq.hom] == tc.hom
    assert all(tc.hom[i][i] == 2 for i in range(2))


@given(specs_st)
def test_tables_match_pattern(spec):
    table = hom_ext_table(spec)
    expected = expected_hom_ext(spec)
    assert table.hom == expected.hom and table.ext1 == expected.ext1
    assert ar_duality_holds(spec, table)


def test_tau_permutations(reference_doc):
    oracles.assert_in_reference(reference_doc, r"\tau(S_i) \cong S_{i+1}")
    assert tau_on_simples(order_spec([1], 2)) == [0]
    assert tau_on_simples(order_spec([1, 1, 1], 2)) == [1, 2, 0]


def test_ar_duality_two_blocks():
    spec = order_spec([1, 1], 2)
    table = hom_ext_table(spec)
    assert table.hom[0][0] == table.ext1[0][1]
    assert ar_duality_holds(spec, table)


@given(st.lists(st.integers(1, 3), min_size=2, max_size=3), st.integers(1, 2), st.sampled_from([2, 3]))
def test_cyclic_shift_rotates_tables(weights, shift, N):
    shift %= len(weights)
    shifted = weights[shift:] + weights[:shift]
    t0 = hom_ext_table(order_spec(weights, N))
    t1 = hom_ext_table(order_spec(shifted, N))
    rotated = rotate_table(t0, shift)
    assert rotated.hom == t1.hom and rotated.ext1 == t1.ext1


def test_morita_profiles(reference_doc):
    oracles.assert_in_reference(reference_doc, r"$\vec{p}'$ is a cyclic shift of $\vec{p}$")
    assert morita_profile(order_spec([2, 1], 2)) == morita_profile(order_spec([1, 1], 2))
    assert morita_profile(order_spec([3], 2)) == morita_profile(order_spec([1], 2))
    assert morita_profile(order_spec([1, 1], 2)) != morita_profile(order_spec([1, 1, 1], 2))


def test_top_dimension_is_residue_dimension():
    A = build_standard_order(order_spec([1, 1], 2, 4))
    assert simple_top(A, 1).dim == totient(4)


def test_report_is_consistent():
    rep = order_report(order_spec([1, 2], 2))
    assert rep["matches_pattern"] and rep["ar_duality"]
    assert all(r["exact"] for r in rep["resolutions"])


def test_malformed_specs():
    with pytest.raises(MalformedInput):
        order_spec([], 2)
    with pytest.raises(MalformedInput):
        order_spec([1, 0], 2)
    with pytest.raises(MalformedInput):
        order_spec([1], 0)


@pytest.mark.parametrize("weights", list(itertools.product([1, 2], repeat=2)))
def test_basis_levels_are_nonnegative(weights):
    ob = order_basis(order_spec(list(weights), 3))
    assert all(ob.level(e) >= 0 for e in ob.entries)
