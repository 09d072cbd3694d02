"""Property-based tests over random small inputs."""
import numpy as np
import sympy
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from braces import AbelianGroupSpec, direct_product, trivial_brace, verify_brace_axioms
from braces import analysis as an
from braces.families import build_b3, build_H
from braces.modular import QuadraticFormSpec, is_invertible_mod, mat_order, rank_mod_p, smallest_unit_of_order, unit_order
from braces.ybe import solution_from_brace, verify_all

import oracles

PRIMES = st.sampled_from([2, 3, 5, 7])
SETTINGS = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])

moduli = st.lists(st.integers(1, 6), min_size=1, max_size=3).filter(lambda m: int(np.prod(m)) <= 60)

_B3 = build_b3()
_H8 = build_H(QuadraticFormSpec(2, 1, 2, [[0, 1], [0, 0]]), np.eye(2, dtype=int))
small_braces = st.one_of(
    moduli.map(trivial_brace),
    st.just(_B3),
    st.just(_H8),
)


@SETTINGS
@given(moduli)
def test_trivial_braces_are_valid_and_abelian(mods):
    B = trivial_brace(mods)
    assert verify_brace_axioms(B).valid
    assert B.is_trivial() and an.socle(B).is_whole() and an.square(B).is_zero()
    assert an.is_simple(B) == sympy.isprime(B.order)


@SETTINGS
@given(moduli, st.data())
def test_encoding_round_trip(mods, data):
    spec = AbelianGroupSpec(mods)
    i = data.draw(st.integers(0, spec.order - 1))
    digits = spec.decode(i)
    assert spec.encode(digits) == i
    assert all(0 <= d < m for d, m in zip(digits, mods))


@SETTINGS
@given(small_braces, small_braces)
def test_direct_products(b1, b2):
    if b1.order * b2.order > 150:
        return
    P = direct_product(b1, b2)
    assert P.order == b1.order * b2.order
    assert verify_brace_axioms(P).valid
    # the socle of a product is the product of the socles
    assert an.socle(P).size == an.socle(b1).size * an.socle(b2).size
    assert an.is_solvable(P) == (an.is_solvable(b1) and an.is_solvable(b2))
    assert all(r.ok for r in verify_all(solution_from_brace(P)).values())


@SETTINGS
@given(st.data())
def test_ideal_closure_matches_oracle(data):
    B = data.draw(st.sampled_from([_B3, _H8]))
    seed = data.draw(st.lists(st.integers(0, B.order - 1), max_size=3))
    closure = an.ideal_closure(B, seed)
    assert an.is_ideal(B, closure)
    assert set(seed) <= set(closure.members.tolist())
    assert set(closure.members.tolist()) == oracles.naive_ideal_closure(B, seed)


@SETTINGS
@given(st.data())
def test_quotients_are_braces(data):
    B = data.draw(st.sampled_from([_B3, _H8]))
    seed = data.draw(st.lists(st.integers(0, B.order - 1), max_size=2))
    ideal = an.ideal_closure(B, seed)
    q = an.quotient(B, ideal)
    assert q.brace.order * ideal.size == B.order
    assert verify_brace_axioms(q.brace).valid
    proj = q.projection.image
    # the projection is constant exactly on cosets of the ideal
    for x in range(B.order):
        same = proj == proj[x]
        coset = B.add[x, ideal.members]
        assert set(np.flatnonzero(same).tolist()) == set(coset.tolist())


@SETTINGS
@given(PRIMES, st.integers(1, 3), st.data())
def test_rank_and_invertibility_match_sympy(p, k, data):
    entries = data.draw(st.lists(st.integers(0, p - 1), min_size=k * k, max_size=k * k))
    a = np.array(entries, dtype=np.int64).reshape(k, k)
    det = int(sympy.Matrix(a.tolist()).det()) % p
    assert is_invertible_mod(a, p) == (det != 0)
    assert (rank_mod_p(a, p) == k) == (det != 0)
    if det:
        order = mat_order(a, p)
        m = sympy.Matrix(a.tolist())
        is_id = lambda e: (m**e).applyfunc(lambda x: x % p) == sympy.eye(k)
        assert is_id(order)
        assert not any(is_id(d) for d in sympy.divisors(order)[:-1])


@SETTINGS
@given(st.integers(2, 40), st.integers(1, 6))
def test_smallest_unit_of_order(mod, order):
    g = smallest_unit_of_order(order, mod)
    brute = [x for x in range(1, mod) if sympy.gcd(x, mod) == 1 and sympy.n_order(x, mod) == order] if mod > 1 else []
    assert g == (brute[0] if brute else None)
    if g is not None:
        assert unit_order(g, mod) == order
