"""First- and second-order jet groups.

``G2`` is modelled as pairs ``(a, s)`` with ``a`` invertible and ``s`` a symmetric
bilinear map, multiplied by ``(a, s)(b, t) = (ab, b^-1 s(b., b.) + t)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import (
    DegenerateError,
    DimensionError,
    GStructError,
    Matrix,
    Number,
    is_zero,
    real_root,
)
from .tensors import Sym2Tensor

TAGS = ("SLpm", "O", "CO", "H", "GL")


def eta(n: int, q: int) -> Matrix:
    """``diag(-I_q, I_{n-q})``; q counts the minus signs."""
    if not 0 <= q <= n:
        raise GStructError(f"signature q={q} out of range for n={n}")
    return Matrix.diag([-1] * q + [1] * (n - q))


def _require_invertible(a: Matrix) -> Matrix:
    if a.rows != a.cols:
        raise DimensionError(f"expected a square matrix, got {a.shape}")
    if is_zero(a.det()):
        raise DegenerateError("matrix is not invertible")
    return a


def sym2_transport(b: Matrix, s: Sym2Tensor) -> Sym2Tensor:
    """``b^-1 s(b., b.)``: the right action of G1 on symmetric bilinear maps."""
    n = s.n
    if b.shape != (n, n):
        raise DimensionError(f"{b.shape} matrix cannot act on Sym2Tensor(n={n})")
    binv = b.inverse()
    bt = b.T
    # pulled[l] = b^T S^l b with S^l = (s^l_{mp})
    pulled = [bt @ Matrix(n, n, tuple(s(l, m, p) for m in range(n) for p in range(n))) @ b for l in range(n)]
    zero = Fraction(0)

    def entry(i, j, k):
        acc = zero
        for l in range(n):
            c = binv[i, l]
            if c:
                acc += c * pulled[l][j, k]
        return acc

    return Sym2Tensor.from_function(n, entry)


@dataclass(frozen=True)
class Jet2:
    a: Matrix
    s: Sym2Tensor

    def __post_init__(self):
        if self.a.shape != (self.s.n, self.s.n):
            raise DimensionError("linear part and quadratic part have different dimensions")
        _require_invertible(self.a)

    @property
    def n(self) -> int:
        return self.s.n

    @classmethod
    def identity(cls, n: int) -> Jet2:
        return cls(Matrix.identity(n), Sym2Tensor.zeros(n))

    def __mul__(self, other: Jet2) -> Jet2:
        return jet2_mul(self, other)

    def inverse(self) -> Jet2:
        return jet2_inv(self)


def jet2_mul(x: Jet2, y: Jet2) -> Jet2:
    if x.n != y.n:
        raise DimensionError("jets of different dimension")
    return Jet2(x.a @ y.a, sym2_transport(y.a, x.s) + y.s)


def jet2_inv(x: Jet2) -> Jet2:
    ainv = x.a.inverse()
    return Jet2(ainv, -sym2_transport(ainv, x.s))


@dataclass(frozen=True)
class SubgroupTag:
    tag: str
    n: int
    q: int = 0

    def __post_init__(self):
        if self.tag not in TAGS:
            raise GStructError(f"unknown subgroup tag {self.tag!r}; expected one of {TAGS}")
        if not 0 <= self.q <= self.n:
            raise GStructError(f"signature q={self.q} out of range for n={self.n}")


@dataclass(frozen=True)
class Verdict:
    member: bool
    certificate: Number | None = None


def _conformal_factor(a: Matrix, form: Matrix) -> Number | None:
    """k with ``a^T form a = k form``, or None."""
    n = a.rows
    lhs = a.T @ form @ a
    k = None
    for i in range(n):
        for j in range(n):
            f, x = form[i, j], lhs[i, j]
            if f == 0:
                if x != 0:
                    return None
            elif k is None:
                k = x / f
            elif x != k * f:
                return None
    return k


def subgroup_member(a: Matrix, tag: SubgroupTag) -> Verdict:
    """Exact membership of ``a`` in one of the named subgroups of G1.

    Certificates: the conformal factor ``k`` for CO and H, ``det a`` for SLpm
    and GL, none for O.
    """
    if a.shape != (tag.n, tag.n):
        raise DimensionError(f"{a.shape} matrix tested against a subgroup of GL({tag.n})")
    d = a.det()
    if d == 0:
        return Verdict(False)
    if tag.tag == "GL":
        return Verdict(True, d)
    if tag.tag == "SLpm":
        return Verdict(abs(d) == 1, d if abs(d) == 1 else None)
    if tag.tag == "H":
        k = a[0, 0]
        ok = k > 0 and a == Matrix.identity(tag.n).scale(k)
        return Verdict(ok, k if ok else None)
    e = eta(tag.n, tag.q)
    if tag.tag == "O":
        return Verdict(a.T @ e @ a == e)
    k = _conformal_factor(a, e)
    if k is not None and k > 0:
        return Verdict(True, k)
    return Verdict(False)


def factor_sl_co(a: Matrix, q: int = 0) -> tuple[Matrix, Matrix]:
    """Split ``a = s c`` with ``|det s| = 1`` and ``c = |det a|^{1/n} I``.

    ``c`` is in H, hence in every CO(q, n-q); the signature only matters for
    the caller's bookkeeping.  Exact when ``|det a|`` is an n-th power of a
    rational, otherwise the scale is a float.
    """
    _require_invertible(a)
    n = a.rows
    eta(n, q)
    r = real_root(abs(a.det()), n)
    c = Matrix.identity(n).scale(r)
    s = a.scale(1 / r)
    return s, c


def sl_co_intersection_check(a: Matrix, q: int) -> bool:
    """``a in SLpm and a in CO(q, n-q)``; cross-checked against direct O membership."""
    n = a.rows
    both = subgroup_member(a, SubgroupTag("SLpm", n)).member and subgroup_member(a, SubgroupTag("CO", n, q)).member
    direct = subgroup_member(a, SubgroupTag("O", n, q)).member
    if both != direct:
        raise AssertionError(f"O = SLpm ∩ CO violated for {a}")
    return both

