"""Vector-valued totally symmetric multilinear maps, packed by multisets of lower indices.

A degree-``m`` element ``s^i_{j1...jm}`` is stored as ``n`` blocks (one per upper
index ``i``), each listing the multisets ``j1 <= ... <= jm`` in
``itertools.combinations_with_replacement`` order.  For ``m = 2`` this is the
``"upper-jk"`` packing: ``(0,0), (0,1), ..., (0,n-1), (1,1), ...``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb
from typing import Sequence

from .linalg import DimensionError, Matrix, Number, rat

PACKING = "upper-jk"


@lru_cache(maxsize=None)
def multisets(n: int, m: int) -> tuple[tuple[int, ...], ...]:
    return tuple(combinations_with_replacement(range(n), m))


@lru_cache(maxsize=None)
def multiset_index(n: int, m: int) -> dict[tuple[int, ...], int]:
    return {ms: k for k, ms in enumerate(multisets(n, m))}


def packed_size(n: int, m: int) -> int:
    """Number of stored entries for a degree-m tensor: n * C(n+m-1, m)."""
    return n * comb(n + m - 1, m)


def flat_index(n: int, upper: int, lower: Sequence[int]) -> int:
    m = len(lower)
    return upper * comb(n + m - 1, m) + multiset_index(n, m)[tuple(sorted(lower))]


@dataclass(frozen=True)
class Sym2Tensor:
    """``s^i_{jk}``, symmetric in ``(j, k)``; connection coefficients live here too."""

    n: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != packed_size(self.n, 2):
            raise DimensionError(f"Sym2Tensor(n={self.n}) needs {packed_size(self.n, 2)} entries")

    @classmethod
    def zeros(cls, n: int) -> Sym2Tensor:
        return cls(n, (Fraction(0),) * packed_size(n, 2))

    @classmethod
    def from_function(cls, n: int, f) -> Sym2Tensor:
        """Build from ``f(i, j, k)``, sampled at ``j <= k`` only."""
        return cls(n, tuple(f(i, j, k) for i in range(n) for (j, k) in multisets(n, 2)))

    @classmethod
    def from_components(cls, n: int, comps: dict) -> Sym2Tensor:
        """Sparse constructor: ``{(i, j, k): value}`` with 0-based indices."""
        e = [Fraction(0)] * packed_size(n, 2)
        for (i, j, k), v in comps.items():
            e[flat_index(n, i, (j, k))] = rat(v) if not isinstance(v, float) else v
        return cls(n, tuple(e))

    @classmethod
    def from_dense(cls, n: int, dense) -> Sym2Tensor:
        """From a full ``dense[i][j][k]`` array; rejects non-symmetric input."""
        for i in range(n):
            for j in range(n):
                for k in range(j + 1, n):
                    if dense[i][j][k] != dense[i][k][j]:
                        raise DimensionError("dense array is not symmetric in its lower indices")
        return cls.from_function(n, lambda i, j, k: dense[i][j][k])

    def __call__(self, i: int, j: int, k: int) -> Number:
        return self.entries[flat_index(self.n, i, (j, k))]

    def dense(self) -> list[list[list[Number]]]:
        n = self.n
        return [[[self(i, j, k) for k in range(n)] for j in range(n)] for i in range(n)]

    def packed_rows(self) -> list[list[Number]]:
        m = len(multisets(self.n, 2))
        return [list(self.entries[i * m : (i + 1) * m]) for i in range(self.n)]

    def slice(self, j: int) -> Matrix:
        """The endomorphism ``v -> s(e_j, v)`` as an n x n matrix ``[i][k] = s^i_{jk}``."""
        n = self.n
        return Matrix(n, n, tuple(self(i, j, k) for i in range(n) for k in range(n)))

    def trace_form(self) -> list[Number]:
        """``sum_k s^k_{ki}`` for each ``i``."""
        n = self.n
        return [sum((self(k, k, i) for k in range(n)), Fraction(0)) for i in range(n)]

    def _check(self, other: Sym2Tensor):
        if self.n != other.n:
            raise DimensionError(f"dimension mismatch {self.n} vs {other.n}")

    def __add__(self, other: Sym2Tensor) -> Sym2Tensor:
        self._check(other)
        return Sym2Tensor(self.n, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: Sym2Tensor) -> Sym2Tensor:
        self._check(other)
        return Sym2Tensor(self.n, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> Sym2Tensor:
        return Sym2Tensor(self.n, tuple(-a for a in self.entries))

    def scale(self, k) -> Sym2Tensor:
        return Sym2Tensor(self.n, tuple(k * a for a in self.entries))

    def is_zero(self) -> bool:
        return not any(self.entries)


def kronecker_form(n: int, mu: Sequence, eta: Matrix | None = None) -> Sym2Tensor:
    """``delta^i_j mu_k + delta^i_k mu_j``, minus ``eta^{is} eta_{jk} mu_s`` when ``eta`` is given.

    Without ``eta`` this is an element of the projective algebra; with a
    nondegenerate symmetric ``eta`` it is the conformal first-prolongation element
    attached to ``mu``.
    """
    mu = [rat(x) if not isinstance(x, float) else x for x in mu]
    if len(mu) != n:
        raise DimensionError("covector has the wrong length")
    raised = None
    if eta is not None:
        inv = eta.inverse()
        raised = [sum((inv[i, s] * mu[s] for s in range(n)), Fraction(0)) for i in range(n)]

    def f(i, j, k):
        v = (mu[k] if i == j else 0) + (mu[j] if i == k else 0)
        if raised is not None:
            v -= eta[j, k] * raised[i]
        return Fraction(v) if isinstance(v, int) else v

    return Sym2Tensor.from_function(n, f)
