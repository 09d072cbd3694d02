"""Small matrices, bilinear and quadratic forms over ``Z/(m)``.

Vectors are columns: a matrix ``M`` acts by ``v -> M v``.  Batches of vectors
are stored as rows of an ``(N, k)`` array.  Ranks here are tiny, so several
checks simply enumerate the whole module.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import gcd

import numpy as np
from sympy import factorint, isprime


def as_matrix(m, size: int | None = None) -> np.ndarray:
    arr = np.asarray(m, dtype=np.int64)
    if arr.ndim == 1 and size is not None:
        arr = arr.reshape(size, size)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    return arr


def identity(k: int) -> np.ndarray:
    return np.eye(k, dtype=np.int64)


def mat_mul(a: np.ndarray, b: np.ndarray, mod: int) -> np.ndarray:
    return (a @ b) % mod


def mat_pow(a: np.ndarray, e: int, mod: int) -> np.ndarray:
    result = identity(a.shape[0])
    base = a % mod
    if e < 0:
        raise ValueError("negative exponent")
    while e:
        if e & 1:
            result = (result @ base) % mod
        base = (base @ base) % mod
        e >>= 1
    return result


def mat_powers(a: np.ndarray, count: int, mod: int) -> np.ndarray:
    """``[a^0, a^1, ..., a^(count-1)]`` stacked."""
    out = np.empty((count,) + a.shape, dtype=np.int64)
    cur = identity(a.shape[0])
    for i in range(count):
        out[i] = cur
        cur = (cur @ a) % mod
    return out


def mat_order(a: np.ndarray, mod: int, limit: int = 100_000) -> int:
    """Multiplicative order of an invertible matrix."""
    ident = identity(a.shape[0])
    cur = a % mod
    for k in range(1, limit + 1):
        if np.array_equal(cur, ident):
            return k
        cur = (cur @ a) % mod
    raise ValueError("matrix is not invertible or its order exceeds the search limit")


def rank_mod_p(a: np.ndarray, p: int) -> int:
    """Rank over the field ``Z/(p)`` by Gaussian elimination."""
    m = np.array(a, dtype=np.int64) % p
    rows, cols = m.shape
    rank = 0
    for c in range(cols):
        pivot = next((r for r in range(rank, rows) if m[r, c]), None)
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        m[rank] = (m[rank] * pow(int(m[rank, c]), -1, p)) % p
        for r in range(rows):
            if r != rank and m[r, c]:
                m[r] = (m[r] - m[r, c] * m[rank]) % p
        rank += 1
        if rank == rows:
            break
    return rank


def is_invertible_mod(a: np.ndarray, mod: int) -> bool:
    """A matrix over ``Z/(m)`` is invertible iff it is invertible mod every prime of ``m``."""
    if mod == 1:
        return True
    return all(rank_mod_p(a, q) == a.shape[0] for q in factorint(mod))


def all_vectors(k: int, mod: int) -> np.ndarray:
    """Every vector of ``(Z/(m))^k`` in mixed-radix order (coordinate 0 least significant)."""
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grid = np.array(list(product(range(mod), repeat=k)), dtype=np.int64)
    return grid[:, ::-1].copy()


def encode_vectors(vecs: np.ndarray, mod: int) -> np.ndarray:
    k = vecs.shape[-1]
    weights = mod ** np.arange(k, dtype=np.int64)
    return (vecs % mod) @ weights


def apply_rows(a: np.ndarray, vecs: np.ndarray, mod: int) -> np.ndarray:
    """``a v`` for every row ``v`` of ``vecs``."""
    return (vecs @ a.T) % mod


def bilinear(gram: np.ndarray, u, v, mod: int):
    """``u^T G v`` (batched over leading axes)."""
    return np.einsum("...i,ij,...j->...", np.asarray(u), gram, np.asarray(v)) % mod


def is_orthogonal(a: np.ndarray, gram: np.ndarray, mod: int) -> bool:
    return bool(np.array_equal((a.T @ gram @ a) % mod, gram % mod))


def span_mod(vecs: np.ndarray, mod: int, k: int) -> np.ndarray:
    """Additive subgroup of ``(Z/(m))^k`` generated by the rows of ``vecs``, as sorted codes."""
    space = all_vectors(k, mod)
    gens = space[np.unique(encode_vectors(np.asarray(vecs, dtype=np.int64).reshape(-1, k), mod))]
    mask = np.zeros(len(space), dtype=bool)
    mask[0] = True
    while True:
        sums = encode_vectors((space[mask][:, None, :] + gens[None, :, :]) % mod, mod)
        new = np.zeros_like(mask)
        new[sums.ravel()] = True
        if not (new & ~mask).any():
            return np.flatnonzero(mask)
        mask |= new


def unit_order(g: int, mod: int) -> int | None:
    """Multiplicative order of ``g`` modulo ``mod``; ``None`` for non-units."""
    if gcd(g, mod) != 1:
        return None
    x, k = g % mod, 1
    while x != 1 % mod:
        x = (x * g) % mod
        k += 1
    return k


def smallest_unit_of_order(order: int, mod: int) -> int | None:
    """Smallest ``g`` in ``(Z/(m))^*`` of multiplicative order exactly ``order``."""
    return next((g for g in range(1, mod) if unit_order(g, mod) == order), None)


def prime_divisors(n: int) -> list[int]:
    return sorted(factorint(n))


def is_prime(n: int) -> bool:
    return bool(isprime(n))


@dataclass(frozen=True)
class QuadraticFormSpec:
    """``Q(x) = sum_{i<=j} c_ij x_i x_j`` over ``(Z/(p^r))^n``.

    ``coeffs`` is read as upper triangular; entries below the diagonal are ignored.
    """

    p: int
    r: int
    n: int
    coeffs: tuple[tuple[int, ...], ...]

    def __init__(self, p: int, r: int, n: int, coeffs):
        c = np.asarray(coeffs, dtype=np.int64).reshape(n, n) if n else np.zeros((0, 0), np.int64)
        object.__setattr__(self, "p", int(p))
        object.__setattr__(self, "r", int(r))
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "coeffs", tuple(tuple(int(x) for x in row) for row in np.triu(c)))

    @property
    def modulus(self) -> int:
        return self.p**self.r

    @property
    def upper(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=np.int64).reshape(self.n, self.n)

    def __call__(self, x) -> np.ndarray | int:
        x = np.asarray(x, dtype=np.int64)
        val = np.einsum("...i,ij,...j->...", x, self.upper, x) % self.modulus
        return int(val) if val.ndim == 0 else val

    def gram(self) -> np.ndarray:
        """Matrix of the polar form ``b(x,y) = Q(x+y) - Q(x) - Q(y)``."""
        u = self.upper
        return (u + u.T) % self.modulus

    def polar(self, x, y):
        return bilinear(self.gram(), x, y, self.modulus)

    def is_nondegenerate(self) -> bool:
        return is_invertible_mod(self.gram(), self.modulus)

    def preserved_by(self, a: np.ndarray) -> bool:
        """``Q(a x) = Q(x)`` for every ``x`` (checked exhaustively)."""
        vecs = all_vectors(self.n, self.modulus)
        return bool(np.array_equal(self(apply_rows(a, vecs, self.modulus)), self(vecs)))

    def to_dict(self) -> dict:
        return {"p": self.p, "r": self.r, "n": self.n, "coeffs": [list(r) for r in self.coeffs]}
