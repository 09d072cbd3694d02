"""Acceptance criteria, one test per criterion.

The conftest hook prints a ``criterion N: PASS/FAIL`` line for each test here
at the end of the pytest run.
"""
import time

import numpy as np

from braces import trivial_brace, verify_morphism
from braces import analysis as an
from braces.cli import FAMILIES, Config, build_family
from braces.core import dumps
from braces.families import (
    build_generalized,
    build_H_prime_and_phi,
    build_perfect_not_simple,
    build_wreath_simple,
    concrete_data,
    trivial_t_instances,
)
from braces.products import (
    augmentation_ideal,
    check_lambda_formula,
    check_socle_formula,
    group_ring_semidirect,
    simplicity_by_image_criterion,
)
from braces.ybe import solution_from_brace, verify_braid, verify_involutive, verify_nondegenerate

import oracles
from conftest import ID2, XY, block_data


def _subset_of(a, b):
    return not (a.mask & ~b.mask).any()


def _term(series, k):
    return series[min(k, len(series) - 1)]


def test_criterion_01_order_24_simple_brace():
    start = time.perf_counter()
    B = build_wreath_simple(3, 2)
    assert B.order == 3 * 2**3
    assert an.is_simple(B)
    assert an.derived_length_mult(B) == 3
    assert time.perf_counter() - start < 1.0


def test_criterion_02_generalized_prediction_matches_brute_force():
    start = time.perf_counter()
    instances = [concrete_data(2, [3]), concrete_data(2, [3, 3]), block_data()]
    outcomes = []
    for data in instances:
        res = build_generalized(data)
        assert res.predicted_simple == an.is_simple(res.brace)
        outcomes.append((res.brace.order, res.predicted_simple))
    assert outcomes == [(24, True), (288, True), (96, False)]
    assert time.perf_counter() - start < 30.0


def test_criterion_03_image_criterion_matches_brute_force(b24):
    instances = trivial_t_instances(b24)
    assert len(instances) >= 3
    seen_proper_image = False
    for inst in instances:
        predicted = simplicity_by_image_criterion(inst.T, inst.S, inst.b, inst.alpha)
        assert predicted == an.is_simple(inst.product())
        seen_proper_image |= not predicted
    assert seen_proper_image


def test_criterion_04_b3_nilpotency(b3):
    assert [s.size for s in an.right_series(b3)] == [12, 4, 1]
    left = an.left_series(b3)
    assert left[-1].size == 4
    assert not an.is_left_nilpotent(b3)
    assert not an.is_group_nilpotent(b3)


def test_criterion_05_perfect_not_simple(b24):
    P = build_perfect_not_simple(b24)
    assert P.order == 72
    assert an.square(P).is_whole()
    witness = an.proper_ideal_witness(P)
    assert witness is not None and not witness.is_zero() and not witness.is_whole()
    assert an.is_ideal(P, witness)


def test_criterion_06_group_ring_semidirect():
    E = group_ring_semidirect(2, trivial_brace([3]))
    assert an.derived_length_mult(E) == 2
    d1 = an.derived_series_mult(E)[1]
    assert d1.size == 4
    # omega(F_2[Z/3]) x {1}: the group ring element sits in the high digits
    assert d1.members.tolist() == (augmentation_ideal(2, 3) * 3).tolist()


def test_criterion_07_phi_isomorphisms(matched72):
    _, phi = build_H_prime_and_phi(XY, ID2)
    assert phi.source.order == 8 and verify_morphism(phi).is_isomorphism
    assert verify_morphism(matched72.phi).is_isomorphism
    assert matched72.predicted_simple
    assert an.is_simple(matched72.product) and oracles.naive_is_simple(matched72.product)


def test_criterion_08_ybe_property_suite(corpus):
    orders = sorted(B.order for B in corpus.values())
    assert orders[0] == 2 and orders[-1] == 288
    for name, B in corpus.items():
        start = time.perf_counter()
        sol = solution_from_brace(B)
        assert verify_braid(sol, force_full=True), name
        assert verify_involutive(sol), name
        assert verify_nondegenerate(sol), name
        if B.order == 288:
            assert time.perf_counter() - start < 60.0


def _product_instances(b24):
    out = []
    for data in (concrete_data(2, [3]), block_data()):
        res = build_generalized(data)
        out.append((res.T, trivial_brace([data.p]), res.cocycle, res.alpha, res.brace))
    for inst in trivial_t_instances(b24):
        out.append((inst.T, inst.S, inst.b, inst.alpha, inst.product()))
    return out


def test_criterion_09_invariant_suite(corpus, b24):
    for name, B in corpus.items():
        sq = an.square(B)
        assert an.is_ideal(B, sq), name
        assert an.quotient(B, sq).brace.is_trivial(), name
        assert _subset_of(an.derived_series_mult(B)[1], sq), name
        left, right, d = an.left_series(B), an.right_series(B), an.d_series(B)
        for n in range(len(d) + 1):
            meet = _term(left, n) & _term(right, n)
            assert _subset_of(_term(d, n), meet), (name, n)
        assert an.is_ideal(B, an.socle(B)), name

    for args in _product_instances(b24):
        assert check_lambda_formula(*args)
        assert check_socle_formula(*args)

    rng = np.random.default_rng(2024)
    checked = 0
    for name, B in corpus.items():
        if B.order > 96:
            continue
        for _ in range(4):
            H = an.subbrace_closure(B, rng.integers(0, B.order, size=rng.integers(1, 3)))
            N = an.ideal_closure(B, rng.integers(0, B.order, size=1))
            assert an.verify_second_iso(B, H, N), name
            checked += 1
    assert checked >= 40


def test_criterion_10_byte_identical_rebuilds():
    cfg = Config(max_order=4096)
    params = {
        "trivial": {"orders": [2, 3]},
        "b3": {},
        "wreath": {"p1": 3, "p2": 2},
        "wreath_simple": {"p1": 3, "p2": 2},
        "perfect_not_simple": {},
        "concrete": {"p": 2, "l": [3]},
        "generalized": concrete_data(2, [3]).to_dict(),
        "h_brace": {"p": 2, "n": 2, "Q": [[0, 1], [0, 0]], "f": [[1, 0], [0, 1]]},
        "matched": {
            "factors": [
                {"p": 3, "n": 1, "Q": [[1]], "f": [[1]], "c": [[2]]},
                {"p": 2, "n": 2, "Q": [[0, 1], [0, 0]], "f": [[1, 0], [0, 1]], "c": [[0, 1], [1, 1]]},
            ],
            "v": [0, 1],
        },
    }
    assert set(params) == set(FAMILIES)
    for family, p in params.items():
        first = dumps(build_family(family, p, cfg))
        second = dumps(build_family(family, p, cfg))
        assert first == second, family
