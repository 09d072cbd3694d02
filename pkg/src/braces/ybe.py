"""Set-theoretic solutions of the Yang-Baxter equation attached to braces.

A solution on ``X = {0..n-1}`` is stored as two ``n x n`` tables ``u`` and
``v`` with ``r(x, y) = (u[x, y], v[x, y])``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import FULL_CHECK_THRESHOLD, SAMPLED_TRIPLES, FiniteBrace
from .errors import StructureError


@dataclass
class YBESolution:
    size: int
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        n = self.size
        self.u = np.asarray(self.u, dtype=np.int64).reshape(n, n)
        self.v = np.asarray(self.v, dtype=np.int64).reshape(n, n)
        for t in (self.u, self.v):
            if t.size and (t.min() < 0 or t.max() >= n):
                raise StructureError("solution entry out of range")

    def __call__(self, x: int, y: int) -> tuple[int, int]:
        return int(self.u[x, y]), int(self.v[x, y])

    @classmethod
    def flip(cls, n: int) -> "YBESolution":
        x, y = np.indices((n, n))
        return cls(n, y, x)

    def to_dict(self) -> dict:
        pairs = np.stack([self.u.ravel(), self.v.ravel()], axis=1)
        return {"size": self.size, "r": pairs.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "YBESolution":
        n = int(data["size"])
        pairs = np.asarray(data["r"], dtype=np.int64)
        if pairs.shape != (n * n, 2):
            raise StructureError(f"expected {n * n} pairs, got shape {pairs.shape}")
        return cls(n, pairs[:, 0], pairs[:, 1])

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    def write(self, path) -> None:
        Path(path).write_text(self.dumps() + "\n", encoding="utf-8")

    @classmethod
    def read(cls, path) -> "YBESolution":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


@dataclass
class CheckResult:
    ok: bool
    witness: tuple[int, ...] | None = None
    mode: str = "exhaustive"

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        return {"ok": self.ok, "witness": None if self.witness is None else list(self.witness), "mode": self.mode}


def solution_from_brace(brace: FiniteBrace) -> YBESolution:
    """``r(a, b) = (lambda_a(b), lambda^-1_{lambda_a(b)}(a))``."""
    lt = brace.lam_table.astype(np.int64)
    lit = brace.lam_inv_table.astype(np.int64)
    n = brace.order
    a = np.arange(n)[:, None]
    return YBESolution(n, lt, lit[lt, a])


def verify_braid(
    sol: YBESolution,
    *,
    force_full: bool = False,
    threshold: int = FULL_CHECK_THRESHOLD,
    samples: int = SAMPLED_TRIPLES,
    seed: int = 0,
) -> CheckResult:
    """``r12 r23 r12 = r23 r12 r23`` on ``X^3``.

    Exhaustive for ``n <= threshold`` (or with ``force_full``), otherwise on
    ``samples`` random triples.  A failing triple is returned as witness.
    """
    n, u, v = sol.size, sol.u, sol.v

    def both_sides(x, y, z):
        # left: r12 then r23 then r12
        a, b = u[x, y], v[x, y]
        b, c = u[b, z], v[b, z]
        a, b = u[a, b], v[a, b]
        left = (a, b, c)
        # right: r23 then r12 then r23
        b2, c2 = u[y, z], v[y, z]
        a2, b2 = u[x, b2], v[x, b2]
        b2, c2 = u[b2, c2], v[b2, c2]
        right = (a2, b2, c2)
        return left, right

    if force_full or n <= threshold:
        y, z = (g.ravel() for g in np.indices((n, n)))
        for x in range(n):
            left, right = both_sides(x, y, z)
            bad = (left[0] != right[0]) | (left[1] != right[1]) | (left[2] != right[2])
            if bad.any():
                i = int(np.argmax(bad))
                return CheckResult(False, (x, int(y[i]), int(z[i])))
        return CheckResult(True)
    rng = np.random.default_rng(seed)
    x, y, z = (rng.integers(0, n, samples) for _ in range(3))
    left, right = both_sides(x, y, z)
    bad = (left[0] != right[0]) | (left[1] != right[1]) | (left[2] != right[2])
    mode = f"sampled({samples})"
    if bad.any():
        i = int(np.argmax(bad))
        return CheckResult(False, (int(x[i]), int(y[i]), int(z[i])), mode)
    return CheckResult(True, None, mode)


def verify_involutive(sol: YBESolution) -> CheckResult:
    """``r^2 = id`` on ``X^2``."""
    x, y = np.indices((sol.size, sol.size))
    a, b = sol.u, sol.v
    bad = (sol.u[a, b] != x) | (sol.v[a, b] != y)
    if bad.any():
        i, j = np.argwhere(bad)[0]
        return CheckResult(False, (int(i), int(j)))
    return CheckResult(True)


def verify_nondegenerate(sol: YBESolution) -> CheckResult:
    """Every ``f_x = u[x, .]`` and every ``g_y = v[., y]`` is a bijection.

    The witness is ``(0, x)`` for a bad ``f_x`` and ``(1, y)`` for a bad ``g_y``.
    """
    n = sol.size
    full = np.arange(n)
    rows = (np.sort(sol.u, axis=1) != full[None, :]).any(axis=1)
    if rows.any():
        return CheckResult(False, (0, int(np.argmax(rows))))
    cols = (np.sort(sol.v, axis=0) != full[:, None]).any(axis=0)
    if cols.any():
        return CheckResult(False, (1, int(np.argmax(cols))))
    return CheckResult(True)


def verify_all(sol: YBESolution, **kwargs) -> dict[str, CheckResult]:
    return {
        "braid": verify_braid(sol, **kwargs),
        "involutive": verify_involutive(sol),
        "nondegenerate": verify_nondegenerate(sol),
    }
