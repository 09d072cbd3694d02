import numpy as np
import pytest

from braces import BraceMap, SizeGuardError, trivial_brace, verify_brace_axioms, verify_morphism
from braces import analysis as an
from braces.errors import HypothesisError
from braces.families import (
    GeneralizedData,
    MatchedData,
    MatchedFactor,
    build_b3,
    build_concrete,
    build_generalized,
    build_H,
    build_H_prime_and_phi,
    build_matched_and_phi_prime,
    build_perfect_not_simple,
    build_wreath_simple,
    concrete_data,
    cyclotomic_matrices,
    wreath_simple_parts,
)
from braces.modular import QuadraticFormSpec
from braces.products import validate_cocycle

import oracles
from conftest import ID2, XY, block_data, matched72_data


# --------------------------------------------------------------------------
# small examples


def test_b3(b3):
    assert b3.order == 12
    assert [s.size for s in an.right_series(b3)] == [12, 4, 1]
    assert len(oracles.naive_socle(b3)) == 4


def test_perfect_not_simple(b24):
    P = build_perfect_not_simple(b24)
    assert P.order == 72
    assert an.is_perfect(P) and not an.is_simple(P)
    ideal = an.ideal_closure(P, [24])  # (1, 0): a nonzero element of Z/3 x {0}
    assert ideal.members.tolist() == [0, 24, 48]
    assert an.is_ideal(P, ideal)


def test_perfect_not_simple_needs_sign(b3):
    with pytest.raises(HypothesisError) as err:
        build_perfect_not_simple(trivial_brace([3]))
    assert "abelianization" in err.value.condition
    with pytest.raises(HypothesisError):
        build_perfect_not_simple(b3)


# --------------------------------------------------------------------------
# iterated wreath construction


def test_wreath_simple_24(b24):
    assert b24.order == 24
    assert an.is_simple(b24)
    assert an.derived_length_mult(b24) == 3
    assert an.socle(b24).is_zero() and an.is_perfect(b24)
    assert b24.meta["gamma"] == 2


def test_wreath_simple_precondition():
    with pytest.raises(HypothesisError) as err:
        build_wreath_simple(2, 3)
    assert err.value.condition == "p2 divides p1 - 1"


def test_wreath_simple_160():
    B = build_wreath_simple(5, 2)
    assert B.order == 160 and B.meta["gamma"] == 4
    assert an.is_simple(B) and an.derived_length_mult(B) == 3


def test_wreath_simple_size_guard():
    with pytest.raises(SizeGuardError):
        build_wreath_simple(7, 3)


def test_wreath_internals(b24_parts):
    parts = b24_parts
    assert parts.G2.order == 24 and parts.N2.size == 2 and parts.Gbar.order == 12
    # b is invariant under alpha'(a) and under every lambda_x, checked in full
    assert validate_cocycle(parts.b, parts.alpha).valid
    assert validate_cocycle(parts.b, parts.alpha, general=True).valid
    lam = parts.Gbar.lam_table
    B = parts.b.table
    for x in range(parts.Gbar.order):
        assert np.array_equal(B[np.ix_(lam[x], lam[x])], B)


# --------------------------------------------------------------------------
# generalized and concrete constructions


def test_generalized_concrete_24():
    res = build_generalized(concrete_data(2, [3]))
    assert res.brace.order == 24 and res.predicted_simple
    assert an.is_simple(res.brace) and oracles.naive_is_simple(res.brace)
    assert res.ideal.is_whole()


def test_generalized_block():
    res = build_generalized(block_data())
    assert res.brace.order == 96 and not res.predicted_simple
    assert not an.is_simple(res.brace)
    assert an.is_ideal(res.brace, res.ideal) and not res.ideal.is_whole()
    assert not res.ideal.is_zero()


def test_generalized_gamma_hypothesis():
    c, f, b = cyclotomic_matrices(2, 15, 4)
    data = GeneralizedData(2, [15], [b], [c], [f], gamma=[4])
    with pytest.raises(HypothesisError) as err:
        build_generalized(data)
    assert err.value.condition == "gamma_i - 1 is invertible in Z/(l_i)"


def test_generalized_commutation_hypothesis():
    c, f, b = cyclotomic_matrices(2, 3, 2)
    data = GeneralizedData(2, [3], [b], [c], [np.eye(2, dtype=int)], gamma=[2])
    with pytest.raises(HypothesisError) as err:
        build_generalized(data)
    assert err.value.condition == "f_i has order p"


def test_concrete(b288):
    assert build_concrete(2, [3]).order == 24
    assert b288.order == 288 and an.is_simple(b288)


def test_concrete_size_guard():
    with pytest.raises(SizeGuardError):
        build_concrete(3, [7])


def test_concrete_precondition():
    with pytest.raises(HypothesisError):
        build_concrete(3, [5])  # 3 does not divide 5 - 1


@pytest.mark.parametrize("l", [[3], [3, 3], [7]])
def test_concrete_c_minus_id_invertible_predicts_simple(l):
    data = concrete_data(2, l)
    assert data.order() <= 4096 or l == [7]
    from braces.modular import is_invertible_mod, identity

    assert all(is_invertible_mod((c - identity(c.shape[0])) % 2, 2) for c in data.c)
    if data.order() <= 4096:
        assert build_generalized(data).predicted_simple


# --------------------------------------------------------------------------
# H braces


def test_h_brace_order_8(h8):
    assert h8.order == 8 and verify_brace_axioms(h8).valid
    assert oracles.naive_is_brace(*oracles.tables(h8))


def test_h_brace_zero_form_is_trivial():
    Q0 = QuadraticFormSpec(2, 1, 2, [[0, 0], [0, 0]])
    assert build_H(Q0, ID2).is_trivial()


def test_h_brace_rejects_non_orthogonal():
    with pytest.raises(HypothesisError) as err:
        build_H(XY, [[1, 1], [0, 1]])
    assert err.value.condition == "f is in the orthogonal group of Q"


def test_h_brace_prime_power():
    Q = QuadraticFormSpec(3, 2, 2, [[0, 1], [0, 0]])
    H = build_H(Q, [[4, 0], [0, 7]])  # 4 * 7 = 1 mod 9, so xy is preserved; 4 has order 3
    assert H.order == 9**2 * 9 and verify_brace_axioms(H).valid
    assert not H.is_trivial()


def test_h_brace_rejects_bad_order():
    Q = QuadraticFormSpec(3, 1, 1, [[1]])
    with pytest.raises(HypothesisError) as err:
        build_H(Q, [[2]])  # -1 has order 2, not a power of 3
    assert "order" in err.value.condition


def test_phi(h8):
    Hp, phi = build_H_prime_and_phi(XY, ID2)
    assert phi.source == h8 and Hp.order == 8
    assert verify_morphism(phi).is_isomorphism


def test_phi_zero_form_is_identity():
    Q0 = QuadraticFormSpec(2, 1, 2, [[0, 0], [0, 0]])
    _, phi = build_H_prime_and_phi(Q0, ID2)
    assert np.array_equal(phi.image, np.arange(8))


def test_phi_corrupted():
    _, phi = build_H_prime_and_phi(XY, ID2)
    image = phi.image.copy()
    image[3], image[5] = image[5], image[3]
    assert not verify_morphism(BraceMap(phi.source, phi.target, image)).is_isomorphism


# --------------------------------------------------------------------------
# matched products


def test_matched_72(matched72):
    assert matched72.matched.order == 72 and matched72.product.order == 72
    assert verify_morphism(matched72.phi).is_isomorphism
    assert matched72.predicted_simple
    assert an.is_simple(matched72.matched) and an.is_simple(matched72.product)


def test_matched_v_hypothesis():
    data = matched72_data()
    data.v = np.array([1, 0])
    with pytest.raises(HypothesisError) as err:
        build_matched_and_phi_prime(data)
    assert err.value.condition == "Q_s(c_s(x)) = Q_s(x) + v_s x^t"


def test_matched_single_factor_is_h(h8):
    res = build_matched_and_phi_prime(MatchedData([MatchedFactor(XY, ID2, ID2)], [0, 0]))
    assert res.matched == h8
    Hp, _ = build_H_prime_and_phi(XY, ID2)
    assert res.product == Hp


def test_matched_requires_distinct_primes():
    f = MatchedFactor(XY, ID2, ID2)
    with pytest.raises(HypothesisError) as err:
        build_matched_and_phi_prime(MatchedData([f, f], [0, 0]))
    assert "distinct" in err.value.condition


# --------------------------------------------------------------------------
# determinism


def test_builds_are_deterministic():
    from braces.core import dumps

    assert dumps(build_b3()) == dumps(build_b3())
    assert dumps(build_wreath_simple(3, 2)) == dumps(build_wreath_simple(3, 2))
