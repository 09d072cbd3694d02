"""Finite left braces stored as explicit operation tables.

Elements are the integers ``0..n-1`` and ``0`` is the neutral element of both
groups.  The two operations are dense ``n x n`` tables.  Throughout the package
``lam(a, b)`` means ``a*b - a`` (the map ``lambda_a`` applied to ``b``).

Encodings
---------
* ``AbelianGroupSpec([l0, l1, ...])``: mixed radix, *least* significant factor
  first, i.e. ``index = x0 + l0*x1 + l0*l1*x2 + ...``.
* Pairs (direct, semidirect, asymmetric products): the left factor is the more
  significant one, ``index(x, y) = x * |B2| + y``.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from .errors import AxiomError, SizeGuardError, StructureError

DEFAULT_MAX_ORDER = 4096
HARD_MAX_ORDER = 16384
FULL_CHECK_THRESHOLD = 1024
SAMPLED_TRIPLES = 1_000_000

INDEX_DTYPE = np.uint16


def resolve_max_order(max_order: int | None = None) -> int:
    """Effective size limit: explicit argument, then ``BRACE_MAX_ORDER``, then 4096."""
    if max_order is None:
        env = os.environ.get("BRACE_MAX_ORDER")
        max_order = int(env) if env else DEFAULT_MAX_ORDER
    if max_order < 1 or max_order > HARD_MAX_ORDER:
        raise SizeGuardError(f"max_order must lie in 1..{HARD_MAX_ORDER}, got {max_order}")
    return max_order


def check_size(order: int, max_order: int | None = None, what: str = "brace") -> None:
    limit = resolve_max_order(max_order)
    if order > limit:
        raise SizeGuardError(f"{what} of order {order} exceeds size guard {limit}")


def _as_table(table, n: int, name: str) -> np.ndarray:
    arr = np.asarray(table)
    if arr.ndim == 1:
        if arr.size != n * n:
            raise StructureError(f"{name} table has {arr.size} entries, expected {n * n}")
        arr = arr.reshape(n, n)
    if arr.shape != (n, n):
        raise StructureError(f"{name} table has shape {arr.shape}, expected {(n, n)}")
    if arr.size and (arr.min() < 0 or arr.max() >= n):
        bad = np.argwhere((arr < 0) | (arr >= n))[0]
        raise StructureError(
            f"{name}[{bad[0]}][{bad[1]}] = {int(arr[tuple(bad)])} is out of range 0..{n - 1}"
        )
    return arr.astype(INDEX_DTYPE)


def _inverse_column(table: np.ndarray) -> np.ndarray:
    # index of the 0 in each row, -1 if the row has none
    hit = table == 0
    idx = np.argmax(hit, axis=1).astype(np.int64)
    idx[~hit.any(axis=1)] = -1
    return idx


class FiniteBrace:
    """A finite left brace given by its addition and multiplication tables.

    The object is immutable; tables are read-only numpy arrays.  Construction
    only checks the table shapes and ranges, use :func:`verify_brace_axioms`
    (or one of the constructors, which verify) to check the axioms.
    """

    def __init__(self, add, mul, meta: dict | None = None):
        add_arr = np.asarray(add)
        n = add_arr.shape[0] if add_arr.ndim == 2 else int(round(np.sqrt(add_arr.size)))
        if n < 1:
            raise StructureError("a brace needs at least one element")
        self.order = n
        self.add = _as_table(add, n, "add")
        self.mul = _as_table(mul, n, "mul")
        self.add.setflags(write=False)
        self.mul.setflags(write=False)
        self.neg = _inverse_column(self.add)
        self.inv = _inverse_column(self.mul)
        self.neg.setflags(write=False)
        self.inv.setflags(write=False)
        self.meta = dict(meta or {})

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        family = self.meta.get("family", "brace")
        return f"<FiniteBrace {family} order={self.order}>"

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteBrace):
            return NotImplemented
        return (
            self.order == other.order
            and np.array_equal(self.add, other.add)
            and np.array_equal(self.mul, other.mul)
        )

    __hash__ = None

    @property
    def elements(self) -> range:
        return range(self.order)

    def plus(self, a: int, b: int) -> int:
        return int(self.add[a, b])

    def times(self, a: int, b: int) -> int:
        return int(self.mul[a, b])

    def minus(self, a: int, b: int) -> int:
        return int(self.add[a, self.neg[b]])

    @cached_property
    def lam_table(self) -> np.ndarray:
        """``lam_table[a, b] = a*b - a``."""
        t = self.add[self.mul, self.neg[:, None]].astype(INDEX_DTYPE)
        t.setflags(write=False)
        return t

    @cached_property
    def lam_inv_table(self) -> np.ndarray:
        t = np.empty_like(self.lam_table)
        rows = np.arange(self.order)[:, None]
        t[rows, self.lam_table] = np.arange(self.order, dtype=INDEX_DTYPE)[None, :]
        t.setflags(write=False)
        return t

    @cached_property
    def star_table(self) -> np.ndarray:
        """``star_table[a, b] = a*b - a - b``."""
        t = self.add[self.lam_table, self.neg[None, :]].astype(INDEX_DTYPE)
        t.setflags(write=False)
        return t

    @cached_property
    def conj_table(self) -> np.ndarray:
        """``conj_table[c, x] = c * x * c^-1`` in the multiplicative group."""
        t = self.mul[self.mul, self.inv[:, None]].astype(INDEX_DTYPE)
        t.setflags(write=False)
        return t

    def is_trivial(self) -> bool:
        return bool(np.array_equal(self.add, self.mul))

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "add": self.add.ravel().tolist(),
            "mul": self.mul.ravel().tolist(),
            "meta": self.meta,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FiniteBrace":
        try:
            n = int(data["order"])
            add, mul = data["add"], data["mul"]
        except (KeyError, TypeError, ValueError) as exc:
            raise StructureError(f"malformed brace record: {exc}") from exc
        if n < 1:
            raise StructureError("order must be positive")
        if len(add) != n * n or len(mul) != n * n:
            raise StructureError(
                f"order {n} needs {n * n} table entries, got add={len(add)} mul={len(mul)}"
            )
        return cls(np.asarray(add).reshape(n, n), np.asarray(mul).reshape(n, n), data.get("meta"))


def dumps(brace: FiniteBrace) -> str:
    return json.dumps(brace.to_dict(), sort_keys=True, separators=(",", ":")) + "\n"


def write_brace(brace: FiniteBrace, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(brace))


def read_brace(path) -> FiniteBrace:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise StructureError(f"{path}: not valid JSON ({exc})") from exc
    return FiniteBrace.from_dict(data)


# --------------------------------------------------------------------------
# additive group specs


@dataclass(frozen=True)
class AbelianGroupSpec:
    """Direct product of cyclic groups, encoded mixed radix with factor 0 least significant."""

    cyclic_orders: tuple[int, ...]

    def __init__(self, cyclic_orders: Sequence[int]):
        orders = tuple(int(o) for o in cyclic_orders)
        if not orders or any(o < 1 for o in orders):
            raise StructureError(f"cyclic orders must be a nonempty list of positive ints: {orders}")
        object.__setattr__(self, "cyclic_orders", orders)

    @property
    def order(self) -> int:
        return int(np.prod(self.cyclic_orders, dtype=np.int64))

    def digits(self) -> np.ndarray:
        """``(order, k)`` array of coordinates of every element."""
        idx = np.arange(self.order)
        out = np.empty((self.order, len(self.cyclic_orders)), dtype=np.int64)
        for i, m in enumerate(self.cyclic_orders):
            out[:, i] = idx % m
            idx = idx // m
        return out

    def encode(self, coords) -> np.ndarray | int:
        coords = np.asarray(coords, dtype=np.int64)
        idx = np.zeros(coords.shape[:-1], dtype=np.int64)
        weight = 1
        for i, m in enumerate(self.cyclic_orders):
            idx = idx + (coords[..., i] % m) * weight
            weight *= m
        return int(idx) if idx.ndim == 0 else idx

    def decode(self, index: int) -> tuple[int, ...]:
        out = []
        for m in self.cyclic_orders:
            out.append(index % m)
            index //= m
        return tuple(out)

    def add_table(self) -> np.ndarray:
        d = self.digits()
        mods = np.asarray(self.cyclic_orders)
        summed = (d[:, None, :] + d[None, :, :]) % mods
        return self.encode(summed)


# --------------------------------------------------------------------------
# verification


@dataclass
class Violation:
    axiom: str
    witness: tuple[int, ...]

    def to_dict(self) -> dict:
        return {"axiom": self.axiom, "witness": list(self.witness)}


@dataclass
class AxiomReport:
    valid: bool
    mode: str
    violations: list[Violation] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.valid

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "mode": self.mode,
            "violations": [v.to_dict() for v in self.violations],
        }


def _first(mask: np.ndarray) -> tuple[int, ...]:
    return tuple(int(i) for i in np.argwhere(mask)[0])


def _latin(table: np.ndarray) -> bool:
    n = table.shape[0]
    ref = np.arange(n)
    return bool(
        (np.sort(table, axis=1) == ref).all() and (np.sort(table, axis=0) == ref[:, None]).all()
    )


def verify_brace_axioms(
    brace: FiniteBrace,
    *,
    full_check_threshold: int = FULL_CHECK_THRESHOLD,
    force_full: bool = False,
    samples: int = SAMPLED_TRIPLES,
    seed: int = 0,
) -> AxiomReport:
    """Check the left brace axioms on the tables of ``brace``.

    Up to ``full_check_threshold`` elements every triple is checked.  Above it
    the Latin-square, neutral-element and commutativity conditions are still
    checked in full, while associativity and the compatibility law are checked
    on ``samples`` random triples (fixed ``seed``); ``report.mode`` says which.
    """
    n = brace.order
    add, mul = brace.add.astype(np.intp), brace.mul.astype(np.intp)
    if add.shape != (n, n) or mul.shape != (n, n):
        raise StructureError("tables do not match the order")
    if add.min() < 0 or add.max() >= n or mul.min() < 0 or mul.max() >= n:
        raise StructureError("table entry out of range")

    violations: list[Violation] = []
    ident = np.arange(n)

    def record(name: str, bad: np.ndarray, prefix: tuple[int, ...] = ()) -> None:
        if bad.any():
            violations.append(Violation(name, prefix + _first(bad)))

    for name, table in (("add", add), ("mul", mul)):
        record(f"{name}: 0 is not a left neutral element", table[0] != ident)
        record(f"{name}: 0 is not a right neutral element", table[:, 0] != ident)
        if not _latin(table):
            rows = np.array([len(np.unique(r)) != n for r in table])
            cols = np.array([len(np.unique(c)) != n for c in table.T])
            if rows.any():
                violations.append(Violation(f"{name}: row is not a permutation", _first(rows)))
            if cols.any():
                violations.append(Violation(f"{name}: column is not a permutation", _first(cols)))
    record("add: not commutative", add != add.T)

    exhaustive = force_full or n <= full_check_threshold
    if exhaustive:
        for a in range(n):
            bad = add[add[a]] != add[a][add]
            if bad.any():
                violations.append(Violation("add: not associative", (a,) + _first(bad)))
                break
        for a in range(n):
            bad = mul[mul[a]] != mul[a][mul]
            if bad.any():
                violations.append(Violation("mul: not associative", (a,) + _first(bad)))
                break
        for a in range(n):
            row = mul[a]
            lhs = add[row[add], a]
            rhs = add[row[:, None], row[None, :]]
            bad = lhs != rhs
            if bad.any():
                violations.append(Violation("compatibility a(b+c)+a = ab+ac", (a,) + _first(bad)))
                break
        mode = "exhaustive"
    else:
        rng = np.random.default_rng(seed)
        a, b, c = rng.integers(0, n, size=(3, samples))
        checks = (
            ("add: not associative", add[add[a, b], c] != add[a, add[b, c]]),
            ("mul: not associative", mul[mul[a, b], c] != mul[a, mul[b, c]]),
            (
                "compatibility a(b+c)+a = ab+ac",
                add[mul[a, add[b, c]], a] != add[mul[a, b], mul[a, c]],
            ),
        )
        for name, bad in checks:
            if bad.any():
                i = int(np.argmax(bad))
                violations.append(Violation(name, (int(a[i]), int(b[i]), int(c[i]))))
        mode = f"sampled({samples})"
    return AxiomReport(not violations, mode, violations)


def ensure_valid(brace: FiniteBrace, **kwargs) -> FiniteBrace:
    report = verify_brace_axioms(brace, **kwargs)
    if not report.valid:
        v = report.violations[0]
        raise AxiomError(f"not a left brace: {v.axiom} at {v.witness}", v.witness, report)
    return brace


# --------------------------------------------------------------------------
# element arithmetic


def lam(brace: FiniteBrace, a: int, b: int) -> int:
    """``lambda_a(b) = a*b - a``."""
    return int(brace.add[brace.mul[a, b], brace.neg[a]])


def lam_inv(brace: FiniteBrace, a: int, b: int) -> int:
    """Inverse permutation of ``lambda_a`` evaluated at ``b``."""
    return int(brace.lam_inv_table[a, b])


def star(brace: FiniteBrace, a: int, b: int) -> int:
    """``a*b - a - b``."""
    return int(brace.star_table[a, b])


# --------------------------------------------------------------------------
# constructors


def trivial_brace(spec: AbelianGroupSpec | Sequence[int], *, max_order: int | None = None) -> FiniteBrace:
    if not isinstance(spec, AbelianGroupSpec):
        spec = AbelianGroupSpec(spec)
    check_size(spec.order, max_order)
    table = spec.add_table()
    meta = {"family": "trivial", "cyclic_orders": list(spec.cyclic_orders)}
    return ensure_valid(FiniteBrace(table, table, meta))


def brace_from_lambda(
    add_spec: AbelianGroupSpec | Sequence[int],
    lam_fn: Callable[[int, int], int] | np.ndarray,
    *,
    meta: dict | None = None,
    max_order: int | None = None,
    verify: bool = True,
) -> FiniteBrace:
    """Build the brace with ``a*b = lam_fn(a, b) + a`` on the given additive group.

    ``lam_fn`` is either a callable on element indices or a precomputed
    ``n x n`` table.  Raises :class:`AxiomError` with a witness when the result
    is not a left brace.
    """
    if not isinstance(add_spec, AbelianGroupSpec):
        add_spec = AbelianGroupSpec(add_spec)
    n = add_spec.order
    check_size(n, max_order)
    add = add_spec.add_table()
    if callable(lam_fn):
        lt = np.array([[lam_fn(a, b) for b in range(n)] for a in range(n)], dtype=np.int64)
    else:
        lt = np.asarray(lam_fn, dtype=np.int64).reshape(n, n)
    if lt.min() < 0 or lt.max() >= n:
        raise StructureError("lambda map produced an out-of-range element")
    mul = add[lt, np.arange(n)[:, None]]
    brace = FiniteBrace(add, mul, meta or {"family": "from_lambda"})
    if verify:
        report = verify_brace_axioms(brace)
        if not report.valid:
            v = report.violations[0]
            raise AxiomError(
                f"lambda map does not define a left brace: {v.axiom} at {v.witness}",
                v.witness,
                report,
            )
    return brace


def direct_product(b1: FiniteBrace, b2: FiniteBrace, *, max_order: int | None = None) -> FiniteBrace:
    n1, n2 = b1.order, b2.order
    check_size(n1 * n2, max_order)
    idx = np.arange(n1 * n2)
    x, y = idx // n2, idx % n2
    add = b1.add[x[:, None], x[None, :]].astype(np.int64) * n2 + b2.add[y[:, None], y[None, :]]
    mul = b1.mul[x[:, None], x[None, :]].astype(np.int64) * n2 + b2.mul[y[:, None], y[None, :]]
    meta = {"family": "direct_product", "factors": [b1.meta, b2.meta]}
    return ensure_valid(FiniteBrace(add, mul, meta))


# --------------------------------------------------------------------------
# maps


@dataclass
class BraceMap:
    source: FiniteBrace
    target: FiniteBrace
    image: np.ndarray

    def __post_init__(self):
        img = np.asarray(self.image, dtype=np.int64)
        if img.shape != (self.source.order,):
            raise StructureError(
                f"map needs {self.source.order} images, got shape {img.shape}"
            )
        if img.size and (img.min() < 0 or img.max() >= self.target.order):
            raise StructureError("map image out of range")
        self.image = img

    def __call__(self, a: int) -> int:
        return int(self.image[a])

    def compose(self, other: "BraceMap") -> "BraceMap":
        """``self o other``."""
        return BraceMap(other.source, self.target, self.image[other.image])

    def inverse(self) -> "BraceMap":
        inv = np.full(self.target.order, -1, dtype=np.int64)
        inv[self.image] = np.arange(self.source.order)
        if (inv < 0).any() or self.source.order != self.target.order:
            raise StructureError("map is not bijective")
        return BraceMap(self.target, self.source, inv)

    @classmethod
    def identity(cls, brace: FiniteBrace) -> "BraceMap":
        return cls(brace, brace, np.arange(brace.order))


@dataclass
class MorphismReport:
    additive: bool
    multiplicative: bool
    injective: bool
    surjective: bool
    witnesses: dict = field(default_factory=dict)

    @property
    def is_homomorphism(self) -> bool:
        return self.additive and self.multiplicative

    @property
    def is_isomorphism(self) -> bool:
        return self.is_homomorphism and self.injective and self.surjective

    def __bool__(self) -> bool:
        return self.is_homomorphism

    def to_dict(self) -> dict:
        return {
            "additive": self.additive,
            "multiplicative": self.multiplicative,
            "injective": self.injective,
            "surjective": self.surjective,
            "isomorphism": self.is_isomorphism,
            "witnesses": {k: list(v) for k, v in self.witnesses.items()},
        }


def verify_morphism(m: BraceMap) -> MorphismReport:
    src, tgt, img = m.source, m.target, m.image
    witnesses = {}
    bad_add = img[src.add] != tgt.add[img[:, None], img[None, :]]
    bad_mul = img[src.mul] != tgt.mul[img[:, None], img[None, :]]
    if bad_add.any():
        witnesses["additive"] = _first(bad_add)
    if bad_mul.any():
        witnesses["multiplicative"] = _first(bad_mul)
    values, first_idx, counts = np.unique(img, return_index=True, return_counts=True)
    injective = bool(len(values) == src.order)
    if not injective:
        v = values[np.argmax(counts > 1)]
        witnesses["injective"] = tuple(int(i) for i in np.flatnonzero(img == v)[:2])
    surjective = bool(len(values) == tgt.order)
    if not surjective:
        missing = np.setdiff1d(np.arange(tgt.order), values)
        witnesses["surjective"] = (int(missing[0]),)
    return MorphismReport(not bad_add.any(), not bad_mul.any(), injective, surjective, witnesses)
