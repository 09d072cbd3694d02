"""Ideals, series, simplicity and related structure of finite left braces.

Closures are computed in rounds on boolean masks: each round adds every
image of the current members under the relevant operations, until nothing new
appears.  All sets handled here are finite, so every loop terminates.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import permutations
from typing import Iterable

import numpy as np

from .core import BraceMap, FiniteBrace, verify_morphism
from .errors import HypothesisError, SizeGuardError

ANALYSIS_CAP = 512
GROUP_ISO_CAP = 256


class Subset:
    """A set of elements of ``parent``; members are kept sorted."""

    def __init__(self, parent: FiniteBrace, members: Iterable[int] | np.ndarray):
        self.parent = parent
        arr = np.asarray(members)
        if arr.dtype == bool:
            arr = np.flatnonzero(arr)
        arr = np.unique(arr.astype(np.int64))
        if arr.size and (arr[0] < 0 or arr[-1] >= parent.order):
            raise ValueError("subset member out of range")
        self.members = arr
        self.members.setflags(write=False)

    @classmethod
    def from_mask(cls, parent: FiniteBrace, mask: np.ndarray) -> "Subset":
        return cls(parent, np.flatnonzero(mask))

    @classmethod
    def whole(cls, parent: FiniteBrace) -> "Subset":
        return cls(parent, np.arange(parent.order))

    @classmethod
    def zero(cls, parent: FiniteBrace) -> "Subset":
        return cls(parent, [0])

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.parent.order, dtype=bool)
        m[self.members] = True
        return m

    def __len__(self) -> int:
        return int(self.members.size)

    size = property(__len__)

    def __iter__(self):
        return (int(x) for x in self.members)

    def __contains__(self, x) -> bool:
        return 0 <= x < self.parent.order and bool(self.mask[x])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subset):
            return NotImplemented
        return self.parent is other.parent and np.array_equal(self.members, other.members)

    def __hash__(self) -> int:
        return hash((id(self.parent), self.members.tobytes()))

    def __le__(self, other: "Subset") -> bool:
        return bool(np.all(other.mask[self.members]))

    def __and__(self, other: "Subset") -> "Subset":
        return Subset.from_mask(self.parent, self.mask & other.mask)

    def __repr__(self) -> str:
        body = self.members.tolist() if self.size <= 12 else f"{self.size} elements"
        return f"Subset({body})"

    def is_zero(self) -> bool:
        return bool(self.size == 1 and self.members[0] == 0)

    def is_whole(self) -> bool:
        return self.size == self.parent.order


def _as_mask(brace: FiniteBrace, s) -> np.ndarray:
    if isinstance(s, Subset):
        return s.mask.copy()
    m = np.zeros(brace.order, dtype=bool)
    m[np.asarray(list(s), dtype=np.int64)] = True
    return m


# --------------------------------------------------------------------------
# closures


def _close(mask: np.ndarray, expand, stop: np.ndarray | None = None) -> np.ndarray:
    """Grow ``mask`` until ``expand(members)`` adds nothing (or hits ``stop``)."""
    while True:
        members = np.flatnonzero(mask)
        new = np.zeros_like(mask)
        new[expand(members)] = True
        new &= ~mask
        if not new.any():
            return mask
        mask |= new
        if stop is not None and (mask & stop).any():
            return mask


def additive_span(brace: FiniteBrace, gens) -> Subset:
    """Subgroup of ``(B,+)`` generated by ``gens``."""
    mask = _as_mask(brace, gens)
    mask[0] = True
    add = brace.add
    return Subset.from_mask(brace, _close(mask, lambda m: add[np.ix_(m, m)].ravel()))


def multiplicative_span(brace: FiniteBrace, gens) -> Subset:
    """Subgroup of ``(B,.)`` generated by ``gens``."""
    mask = _as_mask(brace, gens)
    mask[0] = True
    mul = brace.mul
    return Subset.from_mask(brace, _close(mask, lambda m: mul[np.ix_(m, m)].ravel()))


def subbrace_closure(brace: FiniteBrace, gens) -> Subset:
    """Smallest subset containing ``gens`` closed under ``+`` and ``.``."""
    mask = _as_mask(brace, gens)
    mask[0] = True
    add, mul = brace.add, brace.mul

    def expand(m):
        return np.concatenate((add[np.ix_(m, m)].ravel(), mul[np.ix_(m, m)].ravel()))

    return Subset.from_mask(brace, _close(mask, expand))


def _ideal_mask(brace: FiniteBrace, mask: np.ndarray, stop: np.ndarray | None = None) -> np.ndarray:
    mask = mask.copy()
    mask[0] = True
    add, lam_t, conj = brace.add, brace.lam_table, brace.conj_table

    def expand(m):
        return np.concatenate(
            (add[np.ix_(m, m)].ravel(), lam_t[:, m].ravel(), conj[:, m].ravel())
        )

    return _close(mask, expand, stop)


def ideal_closure(brace: FiniteBrace, seed) -> Subset:
    """Smallest ideal of ``brace`` containing ``seed``.

    An ideal is an additive subgroup stable under every ``lambda_b`` and
    under conjugation in ``(B,.)``; the closure adds sums, lambda-images and
    conjugates until stable.
    """
    return Subset.from_mask(brace, _ideal_mask(brace, _as_mask(brace, seed)))


def left_ideal_closure(brace: FiniteBrace, seed) -> Subset:
    mask = _as_mask(brace, seed)
    mask[0] = True
    add, lam_t = brace.add, brace.lam_table

    def expand(m):
        return np.concatenate((add[np.ix_(m, m)].ravel(), lam_t[:, m].ravel()))

    return Subset.from_mask(brace, _close(mask, expand))


# --------------------------------------------------------------------------
# membership tests


def is_additive_subgroup(brace: FiniteBrace, s: Subset) -> bool:
    m = s.members
    return bool(s.mask[0] and s.mask[brace.add[np.ix_(m, m)]].all())


def is_multiplicative_subgroup(brace: FiniteBrace, s: Subset) -> bool:
    m = s.members
    return bool(s.mask[0] and s.mask[brace.mul[np.ix_(m, m)]].all())


def is_subbrace(brace: FiniteBrace, s: Subset) -> bool:
    return is_additive_subgroup(brace, s) and is_multiplicative_subgroup(brace, s)


def is_left_ideal(brace: FiniteBrace, s: Subset) -> bool:
    if not is_additive_subgroup(brace, s):
        return False
    return bool(s.mask[brace.lam_table[:, s.members]].all())


def is_normal_subgroup(brace: FiniteBrace, s: Subset) -> bool:
    if not is_multiplicative_subgroup(brace, s):
        return False
    return bool(s.mask[brace.conj_table[:, s.members]].all())


def is_ideal(brace: FiniteBrace, s: Subset) -> bool:
    if not is_normal_subgroup(brace, s):
        return False
    return bool(s.mask[brace.lam_table[:, s.members]].all())


# --------------------------------------------------------------------------
# ideal lattice, socle


def all_ideals(brace: FiniteBrace, *, cap: int = ANALYSIS_CAP) -> list[Subset]:
    """Every ideal of ``brace``, sorted by size then members.

    Each ideal is the join of the principal ideals it contains, so closing the
    set of principal ideals under joins gives the whole lattice.
    """
    if brace.order > cap:
        raise SizeGuardError(f"all_ideals: order {brace.order} exceeds analysis cap {cap}")
    n = brace.order
    found: dict[bytes, np.ndarray] = {}
    principal = []
    for x in range(n):
        m = _ideal_mask(brace, np.eye(1, n, x, dtype=bool)[0])
        key = m.tobytes()
        if key not in found:
            found[key] = m
            principal.append(m)
    frontier = list(found.values())
    while frontier:
        nxt = []
        for a in frontier:
            for p in principal:
                if (p & ~a).any():
                    j = _ideal_mask(brace, a | p)
                    key = j.tobytes()
                    if key not in found:
                        found[key] = j
                        nxt.append(j)
        frontier = nxt
    out = [Subset.from_mask(brace, m) for m in found.values()]
    out.sort(key=lambda s: (s.size, s.members.tolist()))
    return out


def socle(brace: FiniteBrace) -> Subset:
    """Elements ``a`` with ``a*b = a+b`` for every ``b``."""
    return Subset.from_mask(brace, (brace.mul == brace.add).all(axis=1))


def fixed_points_of_lambda(brace: FiniteBrace) -> Subset:
    """Elements fixed by every ``lambda_b``."""
    return Subset.from_mask(brace, (brace.lam_table == np.arange(brace.order)[None, :]).all(axis=0))


# --------------------------------------------------------------------------
# series


def _stabilize(first: Subset, step) -> list[Subset]:
    series = [first]
    while True:
        nxt = step(series[-1])
        if nxt == series[-1]:
            return series
        series.append(nxt)


def square(brace: FiniteBrace, s: Subset | None = None) -> Subset:
    """``S*S`` spanned additively, i.e. the brace ``S^2`` of the sub-brace ``S``."""
    m = np.arange(brace.order) if s is None else s.members
    return additive_span(brace, brace.star_table[np.ix_(m, m)].ravel())


def left_series(brace: FiniteBrace) -> list[Subset]:
    """``[B^1, B^2, ...]`` with ``B^{k+1} = B * B^k``, up to stabilization."""
    st = brace.star_table
    return _stabilize(Subset.whole(brace), lambda s: additive_span(brace, st[:, s.members].ravel()))


def right_series(brace: FiniteBrace) -> list[Subset]:
    """``[B^(1), B^(2), ...]`` with ``B^(k+1) = B^(k) * B``, up to stabilization."""
    st = brace.star_table
    return _stabilize(Subset.whole(brace), lambda s: additive_span(brace, st[s.members, :].ravel()))


def d_series(brace: FiniteBrace) -> list[Subset]:
    """``[d_0, d_1, ...]`` with ``d_0 = B``, ``d_1 = B^2`` and ``d_{i+1} = d_i^2``."""
    return _stabilize(Subset.whole(brace), lambda s: square(brace, s))


def is_left_nilpotent(brace: FiniteBrace) -> bool:
    return left_series(brace)[-1].is_zero()


def is_right_nilpotent(brace: FiniteBrace) -> bool:
    return right_series(brace)[-1].is_zero()


def is_solvable(brace: FiniteBrace) -> bool:
    return d_series(brace)[-1].is_zero()


def is_perfect(brace: FiniteBrace) -> bool:
    return square(brace).is_whole()


def is_trivial(brace: FiniteBrace) -> bool:
    return brace.is_trivial()


def is_simple(brace: FiniteBrace) -> bool:
    """Brute force: the ideal generated by every nonzero element is the whole brace.

    Once an element is known to generate everything, any later closure that
    reaches it can stop early.
    """
    n = brace.order
    if n <= 1:
        return False
    generating = np.zeros(n, dtype=bool)
    for x in range(1, n):
        if generating[x]:
            continue
        seed = np.zeros(n, dtype=bool)
        seed[x] = True
        m = _ideal_mask(brace, seed, stop=generating if generating.any() else None)
        if not (m.all() or (m & generating).any()):
            return False
        generating[x] = True
    return True


def proper_ideal_witness(brace: FiniteBrace) -> Subset | None:
    """A proper nonzero ideal if one exists (principal ideal of some element)."""
    for x in range(1, brace.order):
        s = ideal_closure(brace, [x])
        if not s.is_whole():
            return s
    return None


# --------------------------------------------------------------------------
# quotients and sub-braces


@dataclass
class Quotient:
    brace: FiniteBrace
    projection: BraceMap
    representatives: np.ndarray


def quotient(brace: FiniteBrace, ideal: Subset) -> Quotient:
    """``B/I`` with cosets numbered by increasing minimal representative."""
    if not is_ideal(brace, ideal):
        raise HypothesisError("I is an ideal of B", "quotient needs an ideal")
    n = brace.order
    add_cosets = brace.add[:, ideal.members]
    mul_cosets = brace.mul[:, ideal.members]
    if not np.array_equal(np.sort(add_cosets, axis=1), np.sort(mul_cosets, axis=1)):
        raise AssertionError("additive and multiplicative cosets differ for an ideal")
    rep_of = add_cosets.min(axis=1)
    reps = np.unique(rep_of)
    cls = np.searchsorted(reps, rep_of)
    q_add = cls[brace.add[np.ix_(reps, reps)]]
    q_mul = cls[brace.mul[np.ix_(reps, reps)]]
    meta = {
        "family": "quotient",
        "parent": brace.meta,
        "ideal_size": int(ideal.size),
        "projection": cls.tolist(),
    }
    qb = FiniteBrace(q_add, q_mul, meta)
    proj = BraceMap(brace, qb, cls)
    report = verify_morphism(proj)
    if not (report.is_homomorphism and report.surjective):
        raise AssertionError(f"projection is not a surjective morphism: {report}")
    return Quotient(qb, proj, reps)


def restrict(brace: FiniteBrace, s: Subset) -> tuple[FiniteBrace, np.ndarray]:
    """The sub-brace on ``s`` re-encoded as ``0..|s|-1`` plus the embedding."""
    if not is_subbrace(brace, s):
        raise HypothesisError("H is a sub-brace", "restrict needs a sub-brace")
    m = s.members
    pos = np.full(brace.order, -1, dtype=np.int64)
    pos[m] = np.arange(m.size)
    sub = FiniteBrace(
        pos[brace.add[np.ix_(m, m)]],
        pos[brace.mul[np.ix_(m, m)]],
        {"family": "subbrace", "parent": brace.meta, "members": m.tolist()},
    )
    return sub, m.copy()


def product_set(brace: FiniteBrace, h: Subset, n: Subset) -> Subset:
    return Subset(brace, brace.mul[np.ix_(h.members, n.members)].ravel())


def verify_second_iso(brace: FiniteBrace, h: Subset, n: Subset) -> bool:
    """Check ``HN/N ~ H/(H cap N)`` through the map ``h(H cap N) -> hN``."""
    if not is_subbrace(brace, h):
        raise HypothesisError("H is a sub-brace of B")
    if not is_ideal(brace, n):
        raise HypothesisError("N is an ideal of B")
    hn = product_set(brace, h, n)
    if not is_subbrace(brace, hn):
        return False
    hn_brace, hn_emb = restrict(brace, hn)
    h_brace, h_emb = restrict(brace, h)
    pos_hn = np.full(brace.order, -1, dtype=np.int64)
    pos_hn[hn_emb] = np.arange(hn_emb.size)
    pos_h = np.full(brace.order, -1, dtype=np.int64)
    pos_h[h_emb] = np.arange(h_emb.size)
    n_in_hn = Subset(hn_brace, pos_hn[n.members])
    h_cap_n = Subset(h_brace, pos_h[(h & n).members])
    q1 = quotient(hn_brace, n_in_hn)
    q2 = quotient(h_brace, h_cap_n)
    # class of h in H/(H cap N) -> class of h in HN/N
    image = q1.projection.image[pos_hn[h_emb[q2.representatives]]]
    report = verify_morphism(BraceMap(q2.brace, q1.brace, image))
    return report.is_isomorphism


# --------------------------------------------------------------------------
# the multiplicative group


def _group_table(g) -> np.ndarray:
    return (g.mul if isinstance(g, FiniteBrace) else np.asarray(g)).astype(np.int64)


def _group_inv(table: np.ndarray) -> np.ndarray:
    return np.argmax(table == 0, axis=1)


def _group_span(table: np.ndarray, gens) -> np.ndarray:
    mask = np.zeros(table.shape[0], dtype=bool)
    mask[0] = True
    mask[np.asarray(list(gens), dtype=np.int64)] = True
    return _close(mask, lambda m: table[np.ix_(m, m)].ravel())


def commutator_table(g) -> np.ndarray:
    """``[x, y] = x^-1 y^-1 x y``."""
    t = _group_table(g)
    inv = _group_inv(t)
    return t[t[inv[:, None], inv[None, :]], t]


def derived_series_mult(brace) -> list[Subset] | list[np.ndarray]:
    """Derived series of ``(B,.)`` starting at ``B``, up to stabilization."""
    t = _group_table(brace)
    comm = commutator_table(t)
    masks = [np.ones(t.shape[0], dtype=bool)]
    while True:
        m = np.flatnonzero(masks[-1])
        nxt = _group_span(t, comm[np.ix_(m, m)].ravel())
        if np.array_equal(nxt, masks[-1]):
            break
        masks.append(nxt)
    if isinstance(brace, FiniteBrace):
        return [Subset.from_mask(brace, m) for m in masks]
    return masks


def derived_length_mult(brace) -> int | None:
    """Derived length of ``(B,.)``; ``None`` if the group is not solvable."""
    series = derived_series_mult(brace)
    last = series[-1]
    size = last.size if isinstance(last, Subset) else int(last.sum())
    if size != 1:
        return None
    return len(series) - 1


def upper_central_series(brace) -> list[np.ndarray]:
    t = _group_table(brace)
    comm = commutator_table(t)
    zs = [np.eye(1, t.shape[0], 0, dtype=bool)[0]]
    while True:
        nxt = zs[-1][comm].all(axis=1)
        if np.array_equal(nxt, zs[-1]):
            return zs
        zs.append(nxt)


def is_group_nilpotent(brace) -> bool:
    return bool(upper_central_series(brace)[-1].all())


def abelianization_order(brace) -> int:
    series = derived_series_mult(brace)
    d1 = series[1] if len(series) > 1 else series[0]
    size = d1.size if isinstance(d1, Subset) else int(d1.sum())
    n = _group_table(brace).shape[0]
    return n // size


def element_orders(table: np.ndarray) -> np.ndarray:
    n = table.shape[0]
    orders = np.ones(n, dtype=np.int64)
    power = np.arange(n)
    alive = power != 0
    k = 1
    while alive.any():
        power = table[power, np.arange(n)]
        k += 1
        done = alive & (power == 0)
        orders[done] = k
        alive &= ~done
    return orders


def symmetric_group_table(k: int) -> np.ndarray:
    """Cayley table of ``S_k`` with the identity at index 0 (composition ``p o q``)."""
    perms = list(permutations(range(k)))
    index = {p: i for i, p in enumerate(perms)}
    return np.array(
        [[index[tuple(p[q[i]] for i in range(k))] for q in perms] for p in perms], dtype=np.int64
    )


def find_group_isomorphism(g1, g2, *, cap: int = GROUP_ISO_CAP) -> np.ndarray | None:
    """An isomorphism ``(G1,.) -> (G2,.)`` as an image array, or ``None``.

    Backtracking over images of a generating set, candidates restricted to
    elements of matching order; each partial assignment is extended over the
    subgroup it generates and rejected on the first inconsistency.
    """
    t1, t2 = _group_table(g1), _group_table(g2)
    n = t1.shape[0]
    if t2.shape[0] != n:
        return None
    if n > cap:
        raise SizeGuardError(f"group_isomorphic: order {n} exceeds cap {cap}")
    o1, o2 = element_orders(t1), element_orders(t2)
    if not np.array_equal(np.sort(o1), np.sort(o2)):
        return None

    gens: list[int] = []
    span = _group_span(t1, [])
    while not span.all():
        outside = np.flatnonzero(~span)
        g = int(outside[np.argmax(o1[outside])])
        gens.append(g)
        span = _group_span(t1, gens)

    def extend(assign: list[int]) -> np.ndarray | None:
        phi = np.full(n, -1, dtype=np.int64)
        phi[0] = 0
        used = np.zeros(n, dtype=bool)
        used[0] = True
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g, img in zip(gens[: len(assign)], assign):
                    y = int(t1[x, g])
                    target = int(t2[phi[x], img])
                    if phi[y] < 0:
                        if used[target]:
                            return None
                        phi[y] = target
                        used[target] = True
                        nxt.append(y)
                    elif phi[y] != target:
                        return None
            frontier = nxt
        return phi

    def search(assign: list[int]) -> np.ndarray | None:
        if len(assign) == len(gens):
            phi = extend(assign)
            if phi is not None and (phi >= 0).all():
                if np.array_equal(phi[t1], t2[phi[:, None], phi[None, :]]):
                    return phi
            return None
        g = gens[len(assign)]
        for cand in np.flatnonzero(o2 == o1[g]):
            trial = assign + [int(cand)]
            if extend(trial) is None:
                continue
            found = search(trial)
            if found is not None:
                return found
        return None

    return search([])


def group_isomorphic(g1, g2, *, cap: int = GROUP_ISO_CAP) -> bool:
    return find_group_isomorphism(g1, g2, cap=cap) is not None


# --------------------------------------------------------------------------
# report


def analysis_report(brace: FiniteBrace, *, with_ideals: bool = False, cap: int = ANALYSIS_CAP) -> dict:
    left, right, dser = left_series(brace), right_series(brace), d_series(brace)
    report = {
        "order": brace.order,
        "simple": bool(is_simple(brace)),
        "perfect": bool(is_perfect(brace)),
        "trivial": bool(brace.is_trivial()),
        "solvable": bool(dser[-1].is_zero()),
        "left_nilpotent": bool(left[-1].is_zero()),
        "right_nilpotent": bool(right[-1].is_zero()),
        "socle_size": int(socle(brace).size),
        "left_series_sizes": [int(s.size) for s in left],
        "right_series_sizes": [int(s.size) for s in right],
        "d_series_sizes": [int(s.size) for s in dser],
        "derived_length_mult": derived_length_mult(brace),
    }
    if with_ideals and brace.order <= cap:
        report["ideal_count"] = len(all_ideals(brace, cap=cap))
    return report
