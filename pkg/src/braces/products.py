"""Semidirect, asymmetric and wreath products of finite left braces.

Pairs ``(t, s)`` of ``T x S`` are encoded as ``t * |S| + s``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import (
    BraceMap,
    FiniteBrace,
    check_size,
    ensure_valid,
    trivial_brace,
    verify_morphism,
)
from .errors import HypothesisError

COCYCLE_FULL_THRESHOLD = 512
COCYCLE_SAMPLES = 200_000


@dataclass
class BraceAction:
    """``s -> alpha_s``: row ``s`` of ``perms`` is the permutation ``alpha_s`` of ``target``."""

    actor: FiniteBrace
    target: FiniteBrace
    perms: np.ndarray

    def __post_init__(self):
        self.perms = np.asarray(self.perms, dtype=np.int64)
        if self.perms.shape != (self.actor.order, self.target.order):
            raise ValueError(
                f"action table must be {self.actor.order} x {self.target.order}, got {self.perms.shape}"
            )

    @classmethod
    def trivial(cls, actor: FiniteBrace, target: FiniteBrace) -> "BraceAction":
        return cls(actor, target, np.tile(np.arange(target.order), (actor.order, 1)))

    def to_dict(self) -> dict:
        return {
            "actor_order": self.actor.order,
            "target_order": self.target.order,
            "perms": self.perms.tolist(),
        }


@dataclass
class SymmetricCocycle:
    """``b: T x T -> S`` as a dense table of ``S`` indices."""

    domain: FiniteBrace
    codomain: FiniteBrace
    table: np.ndarray
    bilinear: bool = False

    def __post_init__(self):
        n = self.domain.order
        self.table = np.asarray(self.table, dtype=np.int64).reshape(n, n)
        if self.table.min() < 0 or self.table.max() >= self.codomain.order:
            raise ValueError("cocycle value out of range")

    @classmethod
    def zero(cls, domain: FiniteBrace, codomain: FiniteBrace) -> "SymmetricCocycle":
        return cls(domain, codomain, np.zeros((domain.order, domain.order), dtype=np.int64), True)

    def negated(self) -> "SymmetricCocycle":
        return SymmetricCocycle(self.domain, self.codomain, self.codomain.neg[self.table], self.bilinear)

    def to_dict(self) -> dict:
        return {
            "t_order": self.domain.order,
            "s_order": self.codomain.order,
            "table": self.table.ravel().tolist(),
            "bilinear": self.bilinear,
        }


@dataclass
class Report:
    valid: bool
    failures: list[tuple[str, tuple[int, ...]]] = field(default_factory=list)
    mode: str = "exhaustive"

    def __bool__(self) -> bool:
        return self.valid

    def fail(self, name: str, witness) -> None:
        self.valid = False
        self.failures.append((name, tuple(int(w) for w in witness)))


def _first(mask: np.ndarray) -> tuple[int, ...]:
    return tuple(int(i) for i in np.argwhere(mask)[0])


# --------------------------------------------------------------------------
# validation


def validate_action(alpha: BraceAction) -> Report:
    """Each ``alpha_s`` is a brace automorphism of ``T`` and ``s -> alpha_s`` a homomorphism of ``(S,.)``."""
    T, S, P = alpha.target, alpha.actor, alpha.perms
    rep = Report(True)
    ident = np.arange(T.order)
    if not np.array_equal(P[0], ident):
        rep.fail("alpha_0 = id", _first(P[0] != ident))
    for s in range(S.order):
        p = P[s]
        if len(np.unique(p)) != T.order:
            rep.fail("alpha_s is bijective", (s,))
            continue
        bad = p[T.add] != T.add[p[:, None], p[None, :]]
        if bad.any():
            rep.fail("alpha_s is additive", (s,) + _first(bad))
        bad = p[T.mul] != T.mul[p[:, None], p[None, :]]
        if bad.any():
            rep.fail("alpha_s is multiplicative", (s,) + _first(bad))
    for s in range(S.order):
        bad = P[S.mul[s]] != P[s][P]
        if bad.any():
            rep.fail("alpha_{s s'} = alpha_s alpha_s'", (s,) + _first(bad))
            break
    return rep


def validate_cocycle(
    b: SymmetricCocycle,
    alpha: BraceAction,
    *,
    general: bool | None = None,
    force_full: bool = False,
    samples: int = COCYCLE_SAMPLES,
    seed: int = 0,
) -> Report:
    """Check the cocycle laws and the compatibility condition with ``alpha``.

    For bilinear ``b`` the compatibility condition reduces to invariance of
    ``b`` under every ``alpha_s`` (twisted by ``lambda_s`` of ``S``) and under
    every ``lambda_t`` of ``T``.  Otherwise (or with ``general=True``) the full
    condition ``s b(t2,t3) + b(t1 alpha_s(t2+t3), t1) = b(t1 alpha_s(t2), t1 alpha_s(t3)) + s``
    is checked, exhaustively up to ``|T| = 512`` and on random samples above.
    """
    T, S, B, P = b.domain, b.codomain, b.table, alpha.perms
    if alpha.target is not T and alpha.target != T:
        raise ValueError("cocycle domain and action target differ")
    rep = Report(True)
    if B[0, 0] != 0:
        rep.fail("b(0,0) = 0", (0, 0))
    bad = B != B.T
    if bad.any():
        rep.fail("b symmetric", _first(bad))
    for t1 in range(T.order):
        lhs = S.add[B[T.add[t1]], B[t1][:, None]]
        rhs = S.add[B[t1][T.add], B]
        bad = lhs != rhs
        if bad.any():
            rep.fail("b(t1+t2,t3)+b(t1,t2) = b(t1,t2+t3)+b(t2,t3)", (t1,) + _first(bad))
            break
    if b.bilinear:
        for t1 in range(T.order):
            bad = B[T.add[t1]] != S.add[B[t1][None, :], B]
            if bad.any():
                rep.fail("b additive in the first argument", (t1,) + _first(bad))
                break
    use_general = (not b.bilinear) if general is None else general
    if not use_general:
        lam_s = S.lam_table
        for s in range(S.order):
            p = P[s]
            bad = lam_s[s][B] != B[np.ix_(p, p)]
            if bad.any():
                rep.fail("lambda_s(b(t2,t3)) = b(alpha_s t2, alpha_s t3)", (s,) + _first(bad))
                break
        lam_t = T.lam_table
        for t1 in range(T.order):
            p = lam_t[t1]
            bad = B != B[np.ix_(p, p)]
            if bad.any():
                rep.fail("b(t2,t3) = b(lambda_t1 t2, lambda_t1 t3)", (t1,) + _first(bad))
                break
        return rep

    exhaustive = force_full or T.order <= COCYCLE_FULL_THRESHOLD
    if exhaustive:
        for s in range(S.order):
            p = P[s]
            sb = S.mul[s][B]  # s . b(t2,t3)
            for t1 in range(T.order):
                row = T.mul[t1]
                x = row[p[T.add]]  # t1 . alpha_s(t2+t3)
                lhs = S.add[sb, B[x, t1]]
                y = row[p]  # t1 . alpha_s(t)
                rhs = S.add[B[np.ix_(y, y)], s]
                bad = lhs != rhs
                if bad.any():
                    rep.fail("compatibility condition", (s, t1) + _first(bad))
                    return rep
    else:
        rng = np.random.default_rng(seed)
        s, t1, t2, t3 = (rng.integers(0, o, samples) for o in (S.order, T.order, T.order, T.order))
        lhs = S.add[S.mul[s, B[t2, t3]], B[T.mul[t1, P[s, T.add[t2, t3]]], t1]]
        rhs = S.add[B[T.mul[t1, P[s, t2]], T.mul[t1, P[s, t3]]], s]
        bad = lhs != rhs
        if bad.any():
            i = int(np.argmax(bad))
            rep.fail("compatibility condition", (s[i], t1[i], t2[i], t3[i]))
        rep.mode = f"sampled({samples})"
    return rep


def _raise_if_invalid(rep: Report, what: str) -> None:
    if not rep.valid:
        name, witness = rep.failures[0]
        raise HypothesisError(name, f"invalid {what}: {name} fails at {witness}")


# --------------------------------------------------------------------------
# products


def asymmetric_product(
    T: FiniteBrace,
    S: FiniteBrace,
    b: SymmetricCocycle,
    alpha: BraceAction,
    *,
    max_order: int | None = None,
    validate: bool = True,
    meta: dict | None = None,
) -> FiniteBrace:
    """``T x S`` with

    ``(t1,s1)+(t2,s2) = (t1+t2, s1+s2+b(t1,t2))`` and
    ``(t1,s1)(t2,s2) = (t1 alpha_{s1}(t2), s1 s2)``.
    """
    nt, ns = T.order, S.order
    check_size(nt * ns, max_order)
    if validate:
        _raise_if_invalid(validate_action(alpha), "action")
        _raise_if_invalid(validate_cocycle(b, alpha), "cocycle")
    idx = np.arange(nt * ns)
    t, s = idx // ns, idx % ns
    t1, t2 = t[:, None], t[None, :]
    s1, s2 = s[:, None], s[None, :]
    add = T.add[t1, t2].astype(np.int64) * ns + S.add[S.add[s1, s2], b.table[t1, t2]]
    mul = T.mul[t1, alpha.perms[s1, t2]].astype(np.int64) * ns + S.mul[s1, s2]
    info = meta or {"family": "asymmetric_product", "T": T.meta, "S": S.meta}
    return ensure_valid(FiniteBrace(add, mul, info))


def semidirect_product(
    T: FiniteBrace, S: FiniteBrace, alpha: BraceAction, *, max_order: int | None = None, meta: dict | None = None
) -> FiniteBrace:
    """``(t1,s1)(t2,s2) = (t1 alpha_{s1}(t2), s1 s2)`` with componentwise addition."""
    info = meta or {"family": "semidirect_product", "T": T.meta, "S": S.meta}
    return asymmetric_product(T, S, SymmetricCocycle.zero(T, S), alpha, max_order=max_order, meta=info)


def asymmetric_lambda_table(T, S, b: SymmetricCocycle, alpha: BraceAction) -> np.ndarray:
    """Lambda map of ``T x_b S`` evaluated from the closed formula

    ``lambda_(t1,s1)(t2,s2) = (lambda_t1 alpha_s1 (t2), lambda_s1(s2) - b(lambda_t1 alpha_s1(t2), t1))``.
    """
    nt, ns = T.order, S.order
    idx = np.arange(nt * ns)
    t, s = idx // ns, idx % ns
    t1, t2 = t[:, None], t[None, :]
    s1, s2 = s[:, None], s[None, :]
    u = T.lam_table[t1, alpha.perms[s1, t2]]
    v = S.add[S.lam_table[s1, s2], S.neg[b.table[u, t1]]]
    return u.astype(np.int64) * ns + v


def asymmetric_socle_mask(T, S, b: SymmetricCocycle, alpha: BraceAction) -> np.ndarray:
    """``{(t,s) : lambda_s = id, lambda_t alpha_s = id, b(t, .) = 0}`` as a mask."""
    nt, ns = T.order, S.order
    s_ok = (S.lam_table == np.arange(ns)).all(axis=1)
    comp = T.lam_table[:, alpha.perms]  # [t, s, x] = lambda_t(alpha_s(x))
    ts_ok = (comp == np.arange(nt)).all(axis=2)
    b_ok = (b.table == 0).all(axis=1)
    mask = ts_ok & s_ok[None, :] & b_ok[:, None]
    return mask.ravel()


# --------------------------------------------------------------------------
# wreath products


def _function_digits(base: int, length: int) -> np.ndarray:
    """Digits of ``0..base^length-1``; digit ``g`` is the value at element ``g``."""
    n = base**length
    idx = np.arange(n)
    out = np.empty((n, length), dtype=np.int64)
    for g in range(length):
        out[:, g] = idx % base
        idx = idx // base
    return out


def _encode_digits(digits: np.ndarray, base: int) -> np.ndarray:
    return digits @ (base ** np.arange(digits.shape[-1], dtype=np.int64))


def function_brace(G2: FiniteBrace, m: int, *, max_order: int | None = None) -> FiniteBrace:
    """All maps ``{0..m-1} -> G2`` with pointwise operations, encoded base ``|G2|``."""
    q = G2.order
    check_size(q**m, max_order)
    d = _function_digits(q, m)
    add = _encode_digits(G2.add[d[:, None, :], d[None, :, :]], q)
    mul = _encode_digits(G2.mul[d[:, None, :], d[None, :, :]], q)
    return FiniteBrace(add, mul, {"family": "function_brace", "G": G2.meta, "m": m})


def wreath_action(H: FiniteBrace, G2: FiniteBrace, G1: FiniteBrace) -> BraceAction:
    """``sigma(g)(f)(x) = f(g^-1 x)``."""
    q, m = G2.order, G1.order
    d = _function_digits(q, m)
    perms = np.empty((m, H.order), dtype=np.int64)
    for g in range(m):
        src = G1.mul[G1.inv[g]]  # x -> g^-1 x
        perms[g] = _encode_digits(d[:, src], q)
    return BraceAction(G1, H, perms)


def wreath_product(G2: FiniteBrace, G1: FiniteBrace, *, max_order: int | None = None) -> FiniteBrace:
    """``G2 wr G1 = H x| G1`` with ``H`` all maps ``G1 -> G2``."""
    q, m = G2.order, G1.order
    check_size(q**m * m, max_order, "wreath product")
    H = function_brace(G2, m, max_order=max_order)
    sigma = wreath_action(H, G2, G1)
    meta = {"family": "wreath_product", "G2": G2.meta, "G1": G1.meta}
    return semidirect_product(H, G1, sigma, max_order=max_order, meta=meta)


def group_ring_semidirect(p: int, G: FiniteBrace, *, max_order: int | None = None) -> FiniteBrace:
    """``F_p[G] x| G`` with ``G`` acting on the group algebra by left multiplication.

    Elements of ``F_p[G]`` are coefficient vectors ``(a_x)_x``; ``h`` sends
    ``sum a_x x`` to ``sum a_x (h x)``.
    """
    m = G.order
    check_size(p**m * m, max_order, "group ring semidirect product")
    K = trivial_brace([p] * m, max_order=max_order)
    d = _function_digits(p, m)
    perms = np.empty((m, K.order), dtype=np.int64)
    for h in range(m):
        moved = np.zeros_like(d)
        moved[:, G.mul[h]] = d  # coefficient of x goes to h x
        perms[h] = _encode_digits(moved, p)
    meta = {"family": "group_ring_semidirect", "p": p, "G": G.meta}
    return semidirect_product(K, G, BraceAction(G, K, perms), max_order=max_order, meta=meta)


def augmentation_ideal(p: int, m: int) -> np.ndarray:
    """Codes of ``F_p[G]`` elements with coefficient sum 0 (``|G| = m``)."""
    d = _function_digits(p, m)
    return np.flatnonzero(d.sum(axis=1) % p == 0)


def induced_wreath_automorphism(
    G2: FiniteBrace, G1: FiniteBrace, alpha1: BraceMap, *, wreath: FiniteBrace | None = None
) -> BraceMap:
    """``(f, g) -> (f o alpha1^-1, alpha1(g))`` on ``G2 wr G1``."""
    if not (alpha1.source == G1 and alpha1.target == G1 and verify_morphism(alpha1).is_isomorphism):
        raise HypothesisError("alpha1 is an automorphism of G1")
    W = wreath if wreath is not None else wreath_product(G2, G1)
    q, m = G2.order, G1.order
    d = _function_digits(q, m)
    a_inv = alpha1.inverse().image
    f_img = _encode_digits(d[:, a_inv], q)
    idx = np.arange(W.order)
    f, g = idx // m, idx % m
    return BraceMap(W, W, f_img[f] * m + alpha1.image[g])


# --------------------------------------------------------------------------
# simplicity criterion for trivial T


def image_sum(T: FiniteBrace, alpha: BraceAction) -> np.ndarray:
    """Mask of ``sum_s im(alpha_s - id)`` inside ``T``."""
    from .analysis import additive_span

    diffs = T.add[alpha.perms, T.neg[None, :]]
    return additive_span(T, diffs.ravel()).mask


def simplicity_by_image_criterion(
    T: FiniteBrace, S: FiniteBrace, b: SymmetricCocycle, alpha: BraceAction
) -> bool:
    """Decide simplicity of ``T x_b S`` for trivial ``T`` and simple non-trivial ``S``.

    Requires every nonzero ``t`` to pair nontrivially with some ``t'`` under
    ``b``; then the product is simple exactly when the images of the maps
    ``alpha_s - id`` add up to ``T``.
    """
    from .analysis import is_simple

    if not T.is_trivial():
        raise HypothesisError("T is a trivial brace")
    if S.is_trivial():
        raise HypothesisError("S is a non-trivial brace")
    if not is_simple(S):
        raise HypothesisError("S is a simple brace")
    degenerate = (b.table[1:] == 0).all(axis=1)
    if degenerate.any():
        t = int(np.argmax(degenerate)) + 1
        raise HypothesisError(
            "for every t != 0 there is t' with b(t,t') != 0", f"b(t, .) = 0 for t = {t}"
        )
    return bool(image_sum(T, alpha).all())


def check_socle_formula(T, S, b, alpha, product: FiniteBrace) -> bool:
    from .analysis import socle

    return bool(np.array_equal(socle(product).mask, asymmetric_socle_mask(T, S, b, alpha)))


def check_lambda_formula(T, S, b, alpha, product: FiniteBrace) -> bool:
    return bool(np.array_equal(product.lam_table, asymmetric_lambda_table(T, S, b, alpha)))

