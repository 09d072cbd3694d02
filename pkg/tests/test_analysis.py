import numpy as np
import pytest

from braces import trivial_brace
from braces import analysis as an
from braces.errors import HypothesisError, SizeGuardError
from braces.families import build_perfect_not_simple
from braces.products import augmentation_ideal, group_ring_semidirect, wreath_product

import oracles


def sizes(series):
    return [s.size for s in series]


# --------------------------------------------------------------------------
# left ideals and ideals


def test_zero_times_s_is_left_ideal_but_not_ideal(b24):
    # B24 = Gbar_2 x_o A with index g*2 + a, so {0} x A = {0, 1}
    s = an.Subset(b24, [0, 1])
    assert an.is_left_ideal(b24, s)
    assert not an.is_ideal(b24, s)


def test_whole_and_zero(b3):
    whole, zero = an.Subset.whole(b3), an.Subset.zero(b3)
    assert an.is_left_ideal(b3, whole) and an.is_ideal(b3, whole)
    assert an.is_ideal(b3, zero)


def test_non_subgroup_is_not_left_ideal():
    Z3 = trivial_brace([3])
    assert not an.is_left_ideal(Z3, an.Subset(Z3, [0, 1]))


def test_b3_square_is_ideal(b3):
    b2 = an.left_series(b3)[1]
    assert an.is_ideal(b3, b2) and b2.size == 4


# --------------------------------------------------------------------------
# closures and lattices


def test_closure_of_zero(b3):
    assert an.ideal_closure(b3, [0]).is_zero()


def test_simple_closures_are_whole(b24):
    for x in range(1, b24.order):
        assert an.ideal_closure(b24, [x]).is_whole()


def test_closure_in_non_simple_product(b3):
    ideal = an.ideal_closure(b3, [3])  # ((1,0),0)
    assert an.is_ideal(b3, ideal) and not ideal.is_whole()
    assert set(ideal.members.tolist()) == oracles.naive_ideal_closure(b3, [3])


def test_all_ideals_small():
    assert len(an.all_ideals(trivial_brace([5]))) == 2
    ideals = an.all_ideals(trivial_brace([4]))
    assert sorted(tuple(i.members.tolist()) for i in ideals) == [(0,), (0, 1, 2, 3), (0, 2)]


def test_simple_has_two_ideals(b24):
    assert len(an.all_ideals(b24)) == 2


def test_all_ideals_cap(b24):
    with pytest.raises(SizeGuardError):
        an.all_ideals(b24, cap=10)


def test_closure_is_minimal(b3, h8):
    """ideal_closure(seed) is the intersection of all ideals containing the seed."""
    for B in (b3, h8):
        lattice = an.all_ideals(B)
        for x in range(B.order):
            containing = [i for i in lattice if x in i]
            meet = containing[0]
            for i in containing[1:]:
                meet = meet & i
            assert an.ideal_closure(B, [x]) == meet


# --------------------------------------------------------------------------
# socle and series


def test_socle_examples(b3, b24):
    K = trivial_brace([2, 2])
    assert an.socle(K).is_whole()
    assert an.socle(b24).is_zero()
    soc = an.socle(b3)
    assert soc.size == 4 and set(soc.members.tolist()) == oracles.naive_socle(b3)
    assert set(soc.members.tolist()) == {0, 3, 6, 9}  # K x {0}


def test_b3_series(b3):
    assert sizes(an.right_series(b3)) == [12, 4, 1]
    left = an.left_series(b3)
    assert sizes(left) == [12, 4] and not left[-1].is_zero()
    for term in an.right_series(b3):
        assert an.is_ideal(b3, term)
    for term in left:
        assert an.is_left_ideal(b3, term)


def test_trivial_square_is_zero():
    assert an.square(trivial_brace([3, 3])).is_zero()


def test_predicates(b3, b24):
    assert an.is_right_nilpotent(b3) and not an.is_left_nilpotent(b3) and an.is_solvable(b3)
    assert an.is_simple(b24) and an.is_perfect(b24) and not an.is_solvable(b24)
    P = build_perfect_not_simple(b24)
    assert P.order == 72 and an.is_perfect(P) and not an.is_simple(P)


def test_simple_needs_order_above_one():
    assert not an.is_simple(trivial_brace([1]))
    assert an.is_simple(trivial_brace([7]))


def test_is_simple_matches_oracle(b3, h8, b24):
    for B in (b3, h8, b24, trivial_brace([2, 2])):
        assert an.is_simple(B) == oracles.naive_is_simple(B)


# --------------------------------------------------------------------------
# quotients


def test_quotient_by_zero(b3):
    q = an.quotient(b3, an.Subset.zero(b3))
    assert q.brace == b3
    assert np.array_equal(q.projection.image, np.arange(12))


def test_b3_modulo_square(b3):
    q = an.quotient(b3, an.square(b3))
    assert q.brace.order == 3 and q.brace.is_trivial()


def test_g2_modulo_n2():
    F2, F3 = trivial_brace([2]), trivial_brace([3])
    G2 = wreath_product(F2, F3)
    # constant maps x -> 1 on F_3: digits (1,1,1) in base 2, index 7 * 3 + 0
    N2 = an.ideal_closure(G2, [21])
    assert N2.size == 2
    q = an.quotient(G2, N2)
    assert q.brace.order == 12
    assert q.brace.meta["projection"] == q.projection.image.tolist()


def test_quotient_requires_ideal(b24):
    with pytest.raises(HypothesisError):
        an.quotient(b24, an.Subset(b24, [0, 1]))


# --------------------------------------------------------------------------
# second isomorphism theorem


def test_second_iso_trivial_case(b3):
    assert an.verify_second_iso(b3, an.Subset.whole(b3), an.Subset.zero(b3))


def test_second_iso_b3(b3):
    H = an.Subset(b3, [0, 1, 2])  # {((0,0), x)}
    N = an.socle(b3)  # K x {0}
    assert an.is_subbrace(b3, H)
    assert an.verify_second_iso(b3, H, N)
    assert an.product_set(b3, H, N).is_whole()


def test_second_iso_preconditions(b24):
    with pytest.raises(HypothesisError):
        an.verify_second_iso(b24, an.Subset.whole(b24), an.Subset(b24, [0, 1]))


# --------------------------------------------------------------------------
# multiplicative groups


def test_abelian_group_has_length_one():
    assert an.derived_length_mult(trivial_brace([2, 3])) == 1


def test_group_ring_semidirect_derived_series():
    E = group_ring_semidirect(2, trivial_brace([3]))
    assert E.order == 24
    assert an.derived_length_mult(E) == 2
    d1 = an.derived_series_mult(E)[1]
    assert d1.size == 4
    assert d1.members.tolist() == (augmentation_ideal(2, 3) * 3).tolist()


def test_b24_derived_length(b24):
    assert an.derived_length_mult(b24) == 3
    assert oracles.naive_derived_length(b24.mul.tolist()) == 3


def test_group_isomorphic_basic(b3):
    assert an.group_isomorphic(b3, b3)
    assert not an.group_isomorphic(trivial_brace([4]), trivial_brace([2, 2]))


def test_b24_multiplicative_group_is_s4(b24):
    # exploratory comparison with the symmetric group on four letters
    assert an.group_isomorphic(b24, an.symmetric_group_table(4))


def test_group_iso_cap(b24):
    with pytest.raises(SizeGuardError):
        an.group_isomorphic(b24, b24, cap=10)


def test_report_keys(b3):
    rep = an.analysis_report(b3, with_ideals=True)
    assert rep["right_nilpotent"] and not rep["left_nilpotent"] and rep["solvable"]
    assert rep["socle_size"] == 4 and "ideal_count" in rep
