"""Builders for the named brace families.

Encodings
---------
* ``build_b3``: ``K = (Z/2)^2`` (``y + 2z``) times ``Z/3``, index ``k*3 + x``.
* ``build_wreath_simple``: ``Gbar_2 x A`` with ``Gbar_2`` numbered by coset
  representatives of ``G_2 / N_2``, index ``g*p2 + a``.
* ``build_generalized``: ``((u, a), mu)`` with index ``(code(u)*|A| + code(a))*p + mu``.
* ``build_H`` and ``build_matched_and_phi_prime``: ``code(x)*|S| + code(mu)``
  so that the braces built from a lambda map and the asymmetric products
  share one numbering.

Every hypothesis failure raises :class:`HypothesisError` whose ``condition``
names the violated condition.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import analysis as an
from .core import (
    AbelianGroupSpec,
    BraceMap,
    FiniteBrace,
    brace_from_lambda,
    check_size,
    trivial_brace,
    verify_morphism,
)
from .errors import HypothesisError
from .modular import (
    QuadraticFormSpec,
    all_vectors,
    apply_rows,
    as_matrix,
    encode_vectors,
    identity,
    is_invertible_mod,
    is_orthogonal,
    is_prime,
    mat_order,
    mat_pow,
    prime_divisors,
    span_mod,
    unit_order,
)
from .products import (
    BraceAction,
    SymmetricCocycle,
    asymmetric_product,
    induced_wreath_automorphism,
    semidirect_product,
    wreath_product,
)


def _require(ok: bool, condition: str, message: str | None = None) -> None:
    if not ok:
        raise HypothesisError(condition, message)


def _matrix_perm(mat: np.ndarray, k: int, mod: int) -> np.ndarray:
    """Permutation of the codes of ``(Z/mod)^k`` induced by ``v -> mat v``."""
    return encode_vectors(apply_rows(mat, all_vectors(k, mod), mod), mod)


def _block_diag(blocks) -> np.ndarray:
    size = sum(b.shape[0] for b in blocks)
    out = np.zeros((size, size), dtype=np.int64)
    i = 0
    for b in blocks:
        k = b.shape[0]
        out[i : i + k, i : i + k] = b
        i += k
    return out


# --------------------------------------------------------------------------
# small examples


B3_MATRIX = np.array([[0, 1], [1, 1]])


def build_b3() -> FiniteBrace:
    """``K x| Z/3`` with ``K = (Z/2)^2`` and ``alpha_x(y, z) = (y, z) M^x``."""
    K = trivial_brace([2, 2])
    Z3 = trivial_brace([3])
    d = AbelianGroupSpec([2, 2]).digits()
    perms = []
    power = identity(2)
    for _ in range(3):
        perms.append(encode_vectors((d @ power) % 2, 2))  # row vector times M^x
        power = (power @ B3_MATRIX) % 2
    meta = {"family": "b3", "matrix": B3_MATRIX.tolist()}
    return semidirect_product(K, Z3, BraceAction(Z3, K, np.array(perms)), meta=meta)


def build_perfect_not_simple(B24: FiniteBrace) -> FiniteBrace:
    """``Z/3 x| B`` where ``s`` acts by ``-1`` exactly when ``s`` lies outside ``[(B,.),(B,.)]``."""
    _require(an.is_simple(B24), "B is a simple brace")
    _require(
        an.abelianization_order(B24) == 2,
        "(B,.) has abelianization of order 2",
        "no sign-like morphism (B,.) -> Aut(Z/3) with kernel the derived subgroup",
    )
    derived = an.derived_series_mult(B24)[1].mask
    Z3 = trivial_brace([3])
    neg = np.array([0, 2, 1])
    perms = np.where(derived[:, None], np.arange(3)[None, :], neg[None, :])
    meta = {"family": "perfect_not_simple", "S": B24.meta}
    return semidirect_product(Z3, B24, BraceAction(B24, Z3, perms), meta=meta)


# --------------------------------------------------------------------------
# iterated wreath construction, n = 2


@dataclass
class WreathSimpleParts:
    """Intermediate objects of the ``n = 2`` wreath construction."""

    G2: FiniteBrace
    N2: an.Subset
    Gbar: FiniteBrace
    projection: BraceMap
    gamma: int
    alpha: BraceAction
    b: SymmetricCocycle
    brace: FiniteBrace


def _smallest_gamma(order: int, mod: int, *, need_unit_difference: bool = False) -> int | None:
    for g in range(1, mod):
        if unit_order(g, mod) != order:
            continue
        if need_unit_difference and unit_order((g - 1) % mod, mod) is None:
            continue
        return g
    return None


def wreath_simple_parts(p1: int, p2: int, *, max_order: int | None = None) -> WreathSimpleParts:
    """Build every intermediate object of ``Gbar_2 x_o A``; see :func:`build_wreath_simple`."""
    _require(is_prime(p1) and is_prime(p2) and p1 != p2, "p1 and p2 are distinct primes")
    _require((p1 - 1) % p2 == 0, "p2 divides p1 - 1", f"{p2} does not divide {p1 - 1}")
    check_size(p1 * p2**p1, max_order, "wreath construction")

    F1, F2 = trivial_brace([p1]), trivial_brace([p2])
    G2 = wreath_product(F2, F1, max_order=max_order)  # index f*p1 + g, f in base p2
    funcs = np.arange(G2.order) // p1
    g_part = np.arange(G2.order) % p1
    values = np.stack([(funcs // p2**x) % p2 for x in range(p1)], axis=1)  # f(x)

    const = np.array([sum(c * p2**x for x in range(p1)) for c in range(p2)])
    N2 = an.Subset(G2, const * p1)
    conj = G2.conj_table
    _require(bool((conj[:, N2.members] == N2.members[None, :]).all()), "N_2 is central in (G_2,.)")
    _require(an.is_ideal(G2, N2), "N_2 is an ideal of G_2")

    q = an.quotient(G2, N2)
    Gbar, cls = q.brace, q.projection.image

    # b_2(f1, f2) = eps(f1) eps(f2) - eps(f1 . f2) on all of G_2, then pushed down
    eps = values.sum(axis=1) % p2
    pointwise = values @ values.T
    b_full = (eps[:, None] * eps[None, :] - pointwise) % p2
    _require(bool((b_full[const[1] * p1] == 0).all()), "b_2(1, f) = 0")
    reps = q.representatives
    b_bar = b_full[np.ix_(reps, reps)]
    _require(
        np.array_equal(b_full, b_bar[np.ix_(cls, cls)]),
        "b_2 vanishes on I_2 and induces b'_2 on Hbar_2",
    )
    h_part = np.flatnonzero(g_part[reps] == 0)  # classes of (h, 0): Hbar_2
    sub = b_bar[np.ix_(h_part, h_part)]
    _require(bool(sub[1:].any(axis=1).all()), "b'_2 is non-degenerate on Hbar_2")

    gamma = _smallest_gamma(p2, p1)
    auto1 = BraceMap(F1, F1, (gamma * np.arange(p1)) % p1)
    alpha2 = induced_wreath_automorphism(F2, F1, auto1, wreath=G2)
    _require(bool(np.isin(alpha2.image[N2.members], N2.members).all()), "alpha_2(a)(N_2) = N_2")
    step = cls[alpha2.image[reps]]
    _require(np.array_equal(cls[alpha2.image], step[cls]), "alpha_2(a) descends to Gbar_2")
    perms = [np.arange(Gbar.order)]
    for _ in range(p2 - 1):
        perms.append(step[perms[-1]])
    A = trivial_brace([p2])
    alpha = BraceAction(A, Gbar, np.array(perms))
    b = SymmetricCocycle(Gbar, A, b_bar, bilinear=True)

    meta = {"family": "wreath_simple", "p1": p1, "p2": p2, "gamma": int(gamma), "n": 2}
    brace = asymmetric_product(Gbar, A, b, alpha, max_order=max_order, meta=meta)
    return WreathSimpleParts(G2, N2, Gbar, q.projection, int(gamma), alpha, b, brace)


def build_wreath_simple(p1: int, p2: int, *, max_order: int | None = None) -> FiniteBrace:
    """Simple brace ``Gbar_2 x_o A`` from ``G_2 = F_p2 wr F_p1`` and ``A = F_p2``.

    ``gamma`` is the smallest unit of order ``p2`` modulo ``p1``.
    """
    return wreath_simple_parts(p1, p2, max_order=max_order).brace


# --------------------------------------------------------------------------
# generalized construction


@dataclass
class GeneralizedData:
    """Input of the generalized construction.

    ``b``, ``c`` and ``f`` are lists of square matrices over ``Z/(p)``, one per
    cyclic factor ``Z/(l_i)`` of ``A``.  When ``gamma`` is omitted the smallest
    admissible unit is chosen for each factor.
    """

    p: int
    l: list[int]
    b: list
    c: list
    f: list
    gamma: list[int] | None = None

    def __post_init__(self):
        self.l = [int(x) for x in self.l]
        self.b = [as_matrix(m) % self.p for m in self.b]
        self.c = [as_matrix(m) % self.p for m in self.c]
        self.f = [as_matrix(m) % self.p for m in self.f]
        if not (len(self.l) == len(self.b) == len(self.c) == len(self.f)):
            raise ValueError("l, b, c and f must have one entry per factor")
        if self.gamma is None:
            self.gamma = [_smallest_gamma(self.p, li, need_unit_difference=True) or 0 for li in self.l]
        self.gamma = [int(g) for g in self.gamma]

    @property
    def n(self) -> list[int]:
        return [m.shape[0] for m in self.b]

    def order(self) -> int:
        return self.p ** (sum(self.n) + 1) * int(np.prod(self.l))

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "l": self.l,
            "b": [m.tolist() for m in self.b],
            "c": [m.tolist() for m in self.c],
            "f": [m.tolist() for m in self.f],
            "gamma": self.gamma,
        }

    def check(self) -> None:
        """Raise :class:`HypothesisError` naming the first violated hypothesis."""
        p = self.p
        _require(is_prime(p), "p is prime")
        for i, li in enumerate(self.l):
            _require(li > 1, "l_i > 1", f"l_{i + 1} = {li}")
            for q in prime_divisors(li):
                _require((q - 1) % p == 0, "p | q - 1 for every prime q dividing |A|", f"q = {q}")
        for i, (b, c, f, g, li) in enumerate(zip(self.b, self.c, self.f, self.gamma, self.l), 1):
            _require(np.array_equal(b, b.T), "b_i is symmetric", f"i = {i}")
            _require(is_invertible_mod(b, p), "b_i is non-degenerate", f"i = {i}")
            _require(c.shape == b.shape and f.shape == b.shape, "c_i, f_i act on (Z/(p))^{n_i}", f"i = {i}")
            _require(is_orthogonal(c, b, p), "c_i is in the orthogonal group of b_i", f"i = {i}")
            _require(is_orthogonal(f, b, p), "f_i is in the orthogonal group of b_i", f"i = {i}")
            _require(mat_order(c, p) == li, "c_i has order l_i", f"i = {i}")
            _require(mat_order(f, p) == p, "f_i has order p", f"i = {i}")
            _require(unit_order(g, li) == p, "gamma_i is a unit of order p in Z/(l_i)", f"i = {i}")
            _require(
                unit_order((g - 1) % li, li) is not None,
                "gamma_i - 1 is invertible in Z/(l_i)",
                f"i = {i}, gamma_i = {g}",
            )
            _require(
                np.array_equal((f @ c) % p, (mat_pow(c, g, p) @ f) % p),
                "f_i c_i = c_i^gamma_i f_i",
                f"i = {i}",
            )


@dataclass
class GeneralizedResult:
    brace: FiniteBrace
    predicted_simple: bool
    ideal: an.Subset  # the ideal I' (all of B exactly when predicted simple)
    data: GeneralizedData
    T: FiniteBrace = field(repr=False)
    alpha: BraceAction = field(repr=False)
    cocycle: SymmetricCocycle = field(repr=False)


def build_generalized(data: GeneralizedData, *, max_order: int | None = None) -> GeneralizedResult:
    """``B = T x_o Z/(p)`` with ``T = (Z/(p))^n x| A`` twisted by the ``c_i``."""
    data.check()
    check_size(data.order(), max_order, "generalized construction")
    p, l, n = data.p, data.l, data.n
    ntot = sum(n)
    offsets = np.cumsum([0] + n)

    U = trivial_brace([p] * ntot)
    A_spec = AbelianGroupSpec(l)
    Ab = trivial_brace(l)
    a_digits = A_spec.digits()
    vecs = all_vectors(ntot, p)

    def block_map(powers_c, powers_f):
        return _block_diag(
            [(mat_pow(c, int(ec), p) @ mat_pow(f, int(ef), p)) % p
             for c, f, ec, ef in zip(data.c, data.f, powers_c, powers_f)]
        )

    zeros = [0] * len(l)
    beta = np.array([encode_vectors(apply_rows(block_map(a_digits[a], zeros), vecs, p), p) for a in range(Ab.order)])
    T = semidirect_product(U, Ab, BraceAction(Ab, U, beta), max_order=max_order, meta={"family": "generalized_T"})

    na = Ab.order
    t_u, t_a = np.arange(T.order) // na, np.arange(T.order) % na
    perms = []
    for mu in range(p):
        u_img = encode_vectors(apply_rows(block_map(zeros, [mu] * len(l)), vecs, p), p)
        g_mu = np.array([pow(g, mu, li) for g, li in zip(data.gamma, l)])
        a_img = A_spec.encode((a_digits * g_mu) % np.array(l))
        perms.append(u_img[t_u] * na + a_img[t_a])
    S = trivial_brace([p])
    alpha = BraceAction(S, T, np.array(perms))

    gram = _block_diag(data.b)
    u_vecs = vecs[t_u]
    b_table = (u_vecs @ gram @ u_vecs.T) % p
    cocycle = SymmetricCocycle(T, S, b_table, bilinear=True)

    meta = {"family": "generalized", **data.to_dict()}
    brace = asymmetric_product(T, S, cocycle, alpha, max_order=max_order, meta=meta)

    # I' = {(w, a, mu) : w_i in im(c_i - id) + im(f_i - id)}
    ok = np.ones(len(vecs), dtype=bool)
    predicted = True
    for i, (c, f) in enumerate(zip(data.c, data.f)):
        k = n[i]
        ident = identity(k)
        gens = np.concatenate([((c - ident) % p).T, ((f - ident) % p).T])
        w = span_mod(gens, p, k)
        predicted &= len(w) == p**k
        block = vecs[:, offsets[i] : offsets[i + 1]]
        ok &= np.isin(encode_vectors(block, p), w)
    members = np.flatnonzero(ok[np.arange(brace.order) // (na * p)])
    ideal = an.Subset(brace, members)
    if not an.is_ideal(brace, ideal):
        raise AssertionError("I' is not an ideal of B")
    return GeneralizedResult(brace, bool(predicted), ideal, data, T, alpha, cocycle)


# --------------------------------------------------------------------------
# cyclotomic realization


def cyclotomic_matrices(p: int, l: int, gamma: int):
    """``(c, f, b)`` on ``R = F_p[x]/(1 + x + ... + x^(l-1))`` in the basis ``1, xi, ..., xi^(l-2)``."""
    k = l - 1

    def power(e: int) -> np.ndarray:
        e %= l
        if e < k:
            v = np.zeros(k, dtype=np.int64)
            v[e] = 1
            return v
        return np.full(k, (p - 1) % p, dtype=np.int64)  # xi^(l-1) = -(1 + ... + xi^(l-2))

    c = np.stack([power(j + 1) for j in range(k)], axis=1)
    f = np.stack([power(j * gamma) for j in range(k)], axis=1)
    b = (np.ones((k, k), dtype=np.int64) - identity(k)) % p
    return c, f, b


def concrete_data(p: int, l) -> GeneralizedData:
    l = [int(x) for x in l]
    _require(is_prime(p), "p is prime")
    for li in l:
        _require(li > 1, "l_i > 1")
        for q in prime_divisors(li):
            _require((q - 1) % p == 0, "p | q - 1 for every prime q dividing l_i", f"q = {q}")
    gammas = [_smallest_gamma(p, li, need_unit_difference=True) for li in l]
    _require(all(g is not None for g in gammas), "gamma_i is a unit of order p with gamma_i - 1 invertible")
    mats = [cyclotomic_matrices(p, li, g) for li, g in zip(l, gammas)]
    for c, _, _ in mats:
        _require(is_invertible_mod((c - identity(c.shape[0])) % p, p), "c_i - id is invertible")
    return GeneralizedData(p, l, [m[2] for m in mats], [m[0] for m in mats], [m[1] for m in mats], gammas)


def build_concrete(p: int, l, *, max_order: int | None = None) -> FiniteBrace:
    """Cyclotomic instance of the generalized construction; always simple."""
    l = [int(x) for x in l]
    check_size(p ** (sum(li - 1 for li in l) + 1) * int(np.prod(l)), max_order, "concrete construction")
    res = build_generalized(concrete_data(p, l), max_order=max_order)
    res.brace.meta["family"] = "concrete"
    return res.brace


# --------------------------------------------------------------------------
# H(p^r, n, Q, f) and H'


def _check_form_automorphism(Q: QuadraticFormSpec, f: np.ndarray, name: str = "f") -> None:
    m = Q.modulus
    _require(f.shape == (Q.n, Q.n), f"{name} acts on (Z/(p^r))^n")
    _require(is_invertible_mod(f, m), f"{name} is invertible")
    _require(Q.preserved_by(f), f"{name} is in the orthogonal group of Q")


def _check_h_input(Q: QuadraticFormSpec, f: np.ndarray) -> None:
    _require(is_prime(Q.p), "p is prime")
    _check_form_automorphism(Q, f)
    _require(np.array_equal(mat_pow(f, Q.modulus, Q.modulus), identity(Q.n)), "f has order p^r' with r' <= r")


def _h_tables(Q: QuadraticFormSpec, f: np.ndarray):
    m, n = Q.modulus, Q.n
    xs = all_vectors(n, m)
    fpow = np.array([_matrix_perm(mat_pow(f, k, m), n, m) for k in range(m)])  # [k, x] -> f^k x
    gram = Q.gram()
    btab = (xs @ gram @ xs.T) % m
    return xs, fpow, btab


def build_H(Q: QuadraticFormSpec, f, *, max_order: int | None = None) -> FiniteBrace:
    """``H(p^r, n, Q, f)`` from its lambda map, index ``code(x)*p^r + mu``."""
    f = as_matrix(f) % Q.modulus
    _check_h_input(Q, f)
    m, n = Q.modulus, Q.n
    check_size(m ** (n + 1), max_order, "H brace")
    xs, fpow, btab = _h_tables(Q, f)
    N = m ** (n + 1)
    idx = np.arange(N)
    x, mu = idx // m, idx % m
    qv = (mu - Q(xs[x])) % m
    fy = fpow[qv[:, None], x[None, :]]  # f^q(a) (y_b)
    lam = fy * m + (mu[None, :] + btab[x[:, None], fy]) % m
    meta = {"family": "h_brace", "Q": Q.to_dict(), "f": f.tolist()}
    return brace_from_lambda(AbelianGroupSpec([m] * (n + 1)), lam, meta=meta, max_order=max_order)


def build_H_prime_and_phi(Q: QuadraticFormSpec, f, *, max_order: int | None = None):
    """``H'(p^r, n, -b, f) = T x_o S`` and ``phi(x, mu) = (x, mu - Q(x))`` from ``H``."""
    f = as_matrix(f) % Q.modulus
    H = build_H(Q, f, max_order=max_order)
    m, n = Q.modulus, Q.n
    xs, fpow, btab = _h_tables(Q, f)
    T, S = trivial_brace([m] * n), trivial_brace([m])
    alpha = BraceAction(S, T, fpow)
    cocycle = SymmetricCocycle(T, S, btab, bilinear=True).negated()
    meta = {"family": "h_prime", "Q": Q.to_dict(), "f": f.tolist()}
    Hp = asymmetric_product(T, S, cocycle, alpha, max_order=max_order, meta=meta)
    idx = np.arange(H.order)
    x, mu = idx // m, idx % m
    phi = BraceMap(H, Hp, x * m + (mu - Q(xs[x])) % m)
    report = verify_morphism(phi)
    if not report.is_isomorphism:
        raise AssertionError(f"phi is not an isomorphism: {report.to_dict()}")
    return Hp, phi


# --------------------------------------------------------------------------
# matched products


@dataclass
class MatchedFactor:
    Q: QuadraticFormSpec
    f: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        self.f = as_matrix(self.f, self.Q.n) % self.Q.modulus
        self.c = as_matrix(self.c, self.Q.n) % self.Q.modulus

    @property
    def modulus(self) -> int:
        return self.Q.modulus

    def to_dict(self) -> dict:
        return {**self.Q.to_dict(), "f": self.f.tolist(), "c": self.c.tolist()}


@dataclass
class MatchedData:
    """Factors ``H_i = H(p_i^r_i, n_i, Q_i, f_i)`` with linking maps ``c_i`` and the vector ``v_s``."""

    factors: list[MatchedFactor]
    v: np.ndarray

    def __post_init__(self):
        last = self.factors[-1]
        self.v = np.asarray(self.v, dtype=np.int64).reshape(last.Q.n) % last.modulus

    @property
    def s(self) -> int:
        return len(self.factors)

    def order(self) -> int:
        return int(np.prod([fa.modulus ** (fa.Q.n + 1) for fa in self.factors]))

    def to_dict(self) -> dict:
        return {"factors": [fa.to_dict() for fa in self.factors], "v": self.v.tolist()}

    def check(self) -> None:
        fs, s = self.factors, self.s
        primes = [fa.Q.p for fa in fs]
        _require(all(is_prime(p) for p in primes) and len(set(primes)) == s, "p_1, ..., p_s are distinct primes")
        _require(all(p % 2 for p in primes[:-1]), "p_1, ..., p_{s-1} are odd")
        for i, fa in enumerate(fs, 1):
            m = fa.modulus
            _require(fa.Q.is_nondegenerate(), "Q_i is non-degenerate", f"i = {i}")
            _check_form_automorphism(fa.Q, fa.f, "f_i")
            _require(np.array_equal(mat_pow(fa.f, m, m), identity(fa.Q.n)), "f_i has order p_i^r'_i with r'_i <= r_i", f"i = {i}")
            _require(np.array_equal((fa.f @ fa.c) % m, (fa.c @ fa.f) % m), "f_i c_i = c_i f_i", f"i = {i}")
        if s == 1:
            fa = fs[0]
            _require(
                np.array_equal(fa.c, identity(fa.Q.n)) and not self.v.any(),
                "a single factor has c_1 = id and v_1 = 0",
            )
            return
        for i, fa in enumerate(fs[:-1], 1):
            nxt = fs[i].modulus
            _check_form_automorphism(fa.Q, fa.c, "c_i")
            _require(mat_order(fa.c, fa.modulus) == nxt, "c_i has order p_{i+1}^r_{i+1}", f"i = {i}")
        last = fs[-1]
        _require(is_invertible_mod(last.c, last.modulus), "c_s is invertible")
        _require(mat_order(last.c, last.modulus) == fs[0].modulus, "c_s has order p_1^r_1")
        xs = all_vectors(last.Q.n, last.modulus)
        lhs = last.Q(apply_rows(last.c, xs, last.modulus))
        rhs = (last.Q(xs) + xs @ self.v) % last.modulus
        _require(np.array_equal(lhs, rhs), "Q_s(c_s(x)) = Q_s(x) + v_s x^t")


@dataclass
class MatchedResult:
    matched: FiniteBrace
    product: FiniteBrace
    phi: BraceMap
    predicted_simple: bool


def _matched_layout(data: MatchedData):
    mods = [fa.modulus for fa in data.factors]
    ns = [fa.Q.n for fa in data.factors]
    s_spec = AbelianGroupSpec(mods)
    t_spec = AbelianGroupSpec([m for m, k in zip(mods, ns) for _ in range(k)] or [1])
    return mods, ns, s_spec, t_spec


def build_matched_and_phi_prime(data: MatchedData, *, max_order: int | None = None) -> MatchedResult:
    """``H_1 |x| ... |x| H_s`` from its lambda map, ``B = T' x_o S'`` and ``phi'`` between them."""
    data.check()
    check_size(data.order(), max_order, "matched product")
    fs, s = data.factors, data.s
    mods, ns, s_spec, t_spec = _matched_layout(data)
    ns_order, nt_order = s_spec.order, t_spec.order
    N = ns_order * nt_order
    idx = np.arange(N)
    t_idx, s_idx = idx // ns_order, idx % ns_order
    mu = s_spec.digits()[s_idx]  # (N, s)
    t_dig = t_spec.digits()[t_idx]
    offs = np.cumsum([0] + ns)
    xs = [t_dig[:, offs[i] : offs[i + 1]] for i in range(s)]
    qvals = [fa.Q(x) if fa.Q.n else np.zeros(N, dtype=np.int64) for fa, x in zip(fs, xs)]
    expo = np.stack([(mu[:, i] - qvals[i]) % mods[i] for i in range(s)], axis=1)  # mu_i - Q_i(x_i)

    def link(i):  # index of the exponent driving c_i
        return (i + 1) % s

    # per factor: every power f_i^e c_i^e' as a matrix, and the partial sums for c_s
    fpow = [np.array([mat_pow(fa.f, e, fa.modulus) for e in range(fa.modulus)]) for fa in fs]
    cpow = [np.array([mat_pow(fa.c, e, fa.modulus) for e in range(mods[link(i)])]) for i, fa in enumerate(fs)]
    last = fs[-1]
    csum = np.zeros((mods[0], last.Q.n, last.Q.n), dtype=np.int64)
    for e in range(1, mods[0]):
        csum[e] = (csum[e - 1] + cpow[-1][e - 1]) % last.modulus

    lam = np.empty((N, N), dtype=np.int64)
    for a in range(N):
        new_t, new_mu = [], []
        for i, fa in enumerate(fs):
            m = fa.modulus
            g = (fpow[i][expo[a, i]] @ cpow[i][expo[a, link(i)]]) % m
            y = xs[i]
            gy = (y @ g.T) % m
            val = mu[:, i] + fa.Q.polar(xs[i][a], gy)
            if i == s - 1 and s > 1:
                val = val + (y @ csum[expo[a, 0]].T) @ data.v
            new_t.append(gy)
            new_mu.append(val % m)
        lam[a] = t_spec.encode(np.concatenate(new_t, axis=1)) * ns_order + s_spec.encode(np.stack(new_mu, axis=1))
    add_spec = AbelianGroupSpec(mods + list(t_spec.cyclic_orders))
    meta = {"family": "matched", **data.to_dict()}
    matched = brace_from_lambda(add_spec, lam, meta=meta, max_order=max_order)

    # B = T' x_o S' with alpha'_mu = (f_i^mu_i c_i^mu_{i+1})_i and b' = (-b_i)_i
    T, S = trivial_brace(t_spec.cyclic_orders), trivial_brace(mods)
    t_all = t_spec.digits()
    blocks = [t_all[:, offs[i] : offs[i + 1]] for i in range(s)]
    s_all = s_spec.digits()
    perms = np.empty((ns_order, nt_order), dtype=np.int64)
    for sv in range(ns_order):
        parts = []
        for i, fa in enumerate(fs):
            g = (fpow[i][s_all[sv, i]] @ cpow[i][s_all[sv, link(i)] % mods[link(i)]]) % fa.modulus
            parts.append(apply_rows(g, blocks[i], fa.modulus))
        perms[sv] = t_spec.encode(np.concatenate(parts, axis=1))
    bvals = np.stack(
        [(-(blocks[i] @ fa.Q.gram() @ blocks[i].T)) % fa.modulus for i, fa in enumerate(fs)], axis=-1
    )
    cocycle = SymmetricCocycle(T, S, s_spec.encode(bvals), bilinear=True)
    meta_b = {"family": "matched_asymmetric", **data.to_dict()}
    product = asymmetric_product(T, S, cocycle, BraceAction(S, T, perms), max_order=max_order, meta=meta_b)

    phi_img = t_idx * ns_order + s_spec.encode(expo)
    phi = BraceMap(matched, product, phi_img)
    report = verify_morphism(phi)
    if not report.is_isomorphism:
        raise AssertionError(f"phi' is not an isomorphism: {report.to_dict()}")
    predicted = all(
        is_invertible_mod((fa.c - identity(fa.Q.n)) % fa.modulus, fa.modulus) for fa in fs
    )
    return MatchedResult(matched, product, phi, predicted)


# --------------------------------------------------------------------------
# asymmetric products with trivial T over a simple S


@dataclass
class TrivialTInstance:
    name: str
    T: FiniteBrace
    S: FiniteBrace
    b: SymmetricCocycle
    alpha: BraceAction

    def product(self) -> FiniteBrace:
        return asymmetric_product(self.T, self.S, self.b, self.alpha, meta={"family": "trivial_T", "name": self.name})


HYPERBOLIC = np.array([[0, 1], [1, 0]])


def _central_involution(S: FiniteBrace) -> int:
    """Smallest ``e != 0`` with ``e + e = 0`` fixed by every ``lambda_x``."""
    fixed = (S.lam_table == np.arange(S.order)[None, :]).all(axis=0)
    two = S.add[np.arange(S.order), np.arange(S.order)] == 0
    cand = np.flatnonzero(fixed & two)
    cand = cand[cand != 0]
    _require(cand.size > 0, "S has a nonzero element of additive order 2 fixed by every lambda")
    return int(cand[0])


def _conjugation_matrices(S: FiniteBrace) -> np.ndarray:
    """Matrices over ``F_2`` of conjugation on the second derived subgroup ``~ (Z/2)^2``."""
    series = an.derived_series_mult(S)
    _require(len(series) > 2 and series[2].size == 4, "the second derived subgroup of (S,.) has order 4")
    d = series[2].members
    d1, d2 = int(d[1]), int(d[2])
    basis = {0: (0, 0), d1: (1, 0), d2: (0, 1), int(S.mul[d1, d2]): (1, 1)}
    _require(len(basis) == 4, "the second derived subgroup of (S,.) is elementary abelian")
    conj = S.conj_table
    mats = np.empty((S.order, 2, 2), dtype=np.int64)
    for g in range(S.order):
        mats[g] = np.array([basis[int(conj[g, d1])], basis[int(conj[g, d2])]]).T
    return mats


def trivial_t_instances(S: FiniteBrace) -> list[TrivialTInstance]:
    """Three asymmetric products ``T x_o S`` with ``T`` trivial and ``b = H(t, t') e``.

    ``e`` is an element of ``S`` of additive order 2 fixed by every
    ``lambda``; ``H`` is a non-degenerate alternating form over ``F_2``.

    * ``conjugation``: ``T = F_2^2`` with ``S`` acting through conjugation on
      its second derived subgroup (expected simple);
    * ``block``: ``T = F_2^2 + F_2^2`` acted on in the first block only;
    * ``trivial_action``: ``T = F_2^2`` with ``alpha = id``.
    """
    e = _central_involution(S)
    mats = _conjugation_matrices(S)
    out = []
    for name, k, act in [
        ("conjugation", 2, lambda g: mats[g]),
        ("block", 4, lambda g: _block_diag([mats[g], identity(2)])),
        ("trivial_action", 2, lambda g: identity(2)),
    ]:
        T = trivial_brace([2] * k)
        perms = np.array([_matrix_perm(act(g), k, 2) for g in range(S.order)])
        vecs = all_vectors(k, 2)
        gram = _block_diag([HYPERBOLIC] * (k // 2))
        table = np.where((vecs @ gram @ vecs.T) % 2 == 1, e, 0)
        out.append(TrivialTInstance(name, T, S, SymmetricCocycle(T, S, table, bilinear=True), BraceAction(S, T, perms)))
    return out
