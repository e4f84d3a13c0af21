"""Finite groups given by Cayley tables."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

import numpy as np

from .errors import InvalidGroup


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """Group on {0, ..., n-1} with ``cayley[g, h]`` the index of g*h."""

    cayley: np.ndarray
    name: str = ""

    def __post_init__(self) -> None:
        table = np.asarray(self.cayley)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise InvalidGroup("Cayley table must be a non-empty square array")
        if not np.issubdtype(table.dtype, np.integer):
            if not np.all(np.equal(np.mod(table, 1), 0)):
                raise InvalidGroup("Cayley table entries must be integers")
            table = table.astype(int)
        n = table.shape[0]
        if table.min() < 0 or table.max() >= n:
            raise InvalidGroup("Cayley table entries out of range")
        object.__setattr__(self, "cayley", table)
        # associativity over all triples: (gh)k == g(hk)
        left = table[table, :]  # left[g, h, k] = (gh)k
        right = table[:, table]  # right[g, h, k] = g(hk)
        if not np.array_equal(left, right):
            raise InvalidGroup("multiplication is not associative")
        ids = [e for e in range(n) if np.array_equal(table[e], np.arange(n)) and np.array_equal(table[:, e], np.arange(n))]
        if not ids:
            raise InvalidGroup("no identity element")
        e = ids[0]
        inv = np.full(n, -1)
        for g in range(n):
            hits = np.flatnonzero(table[g] == e)
            if hits.size != 1 or table[hits[0], g] != e:
                raise InvalidGroup(f"element {g} has no two-sided inverse")
            inv[g] = hits[0]
        object.__setattr__(self, "_identity", e)
        object.__setattr__(self, "_inverse", inv)

    @property
    def order(self) -> int:
        return self.cayley.shape[0]

    @property
    def identity(self) -> int:
        return self._identity  # type: ignore[attr-defined]

    @property
    def inverse(self) -> np.ndarray:
        return self._inverse  # type: ignore[attr-defined]

    def mul(self, g: int, h: int) -> int:
        return int(self.cayley[g, h])

    @property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.cayley, self.cayley.T))

    def left_regular(self, g: int) -> np.ndarray:
        """Permutation matrix of delta_h -> delta_{gh}."""
        n = self.order
        p = np.zeros((n, n))
        p[self.cayley[g], np.arange(n)] = 1.0
        return p

    def right_regular(self, g: int) -> np.ndarray:
        """Permutation matrix of delta_h -> delta_{h g^{-1}}."""
        n = self.order
        p = np.zeros((n, n))
        p[self.cayley[:, self.inverse[g]], np.arange(n)] = 1.0
        return p

    def to_json(self) -> dict:
        return {"order": self.order, "cayley": self.cayley.tolist()}

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name or 'order ' + str(self.order)})"


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise InvalidGroup("cyclic group needs n >= 1")
    idx = np.arange(n)
    return FiniteGroup((idx[:, None] + idx[None, :]) % n, name=f"Z{n}")


def symmetric(n: int) -> FiniteGroup:
    """S_n with product (p*q)(i) = p(q(i)), identity listed first."""
    perms = list(itertools.permutations(range(n)))
    index = {p: k for k, p in enumerate(perms)}
    table = np.array([[index[tuple(p[q[i]] for i in range(n))] for q in perms] for p in perms])
    return FiniteGroup(table, name=f"S{n}")


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the regular n-gon as r^k s^f, encoded k + n*f."""
    def mul(a: int, b: int) -> int:
        k1, f1 = a % n, a // n
        k2, f2 = b % n, b // n
        k = (k1 + (-k2 if f1 else k2)) % n
        return k + n * ((f1 + f2) % 2)

    table = np.array([[mul(a, b) for b in range(2 * n)] for a in range(2 * n)])
    return FiniteGroup(table, name=f"D{n}")


def group_from_json(obj) -> FiniteGroup:
    """Accepts {"order": n, "cayley": [[...]]} or a name such as "Z3", "S3", "D4"."""
    if isinstance(obj, str):
        return group_by_name(obj)
    try:
        table = np.asarray(obj["cayley"])
        order = int(obj.get("order", table.shape[0]))
    except (KeyError, TypeError, AttributeError) as exc:
        raise InvalidGroup(f"malformed group object: {exc}") from exc
    if table.ndim != 2 or table.shape[0] != order:
        raise InvalidGroup("order does not match the Cayley table")
    return FiniteGroup(table)


def group_by_name(name: str) -> FiniteGroup:
    m = re.fullmatch(r"\s*([ZSD])(\d+)\s*", name)
    if not m:
        raise InvalidGroup(f"unknown group name {name!r}")
    kind, n = m.group(1), int(m.group(2))
    return {"Z": cyclic, "S": symmetric, "D": dihedral}[kind](n)
