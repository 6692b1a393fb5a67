"""Seeded generators of random exact inputs: rationals, group elements, metrics, fields."""

from __future__ import annotations

import random
from fractions import Fraction

from .connections import PolyMetricField
from .jets import Jet2, SubgroupTag, eta
from .linalg import DegenerateError, Matrix
from .poly import Polynomial
from .tensors import Sym2Tensor, packed_size


def rational(rng: random.Random, bound: int = 5, den: int = 4) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, den))


def nonzero_rational(rng: random.Random, bound: int = 5, den: int = 4) -> Fraction:
    while True:
        x = rational(rng, bound, den)
        if x:
            return x


def matrix(rng: random.Random, n: int, m: int | None = None, bound: int = 5, den: int = 4) -> Matrix:
    m = n if m is None else m
    return Matrix(n, m, tuple(rational(rng, bound, den) for _ in range(n * m)))


def invertible(rng: random.Random, n: int, bound: int = 5, den: int = 4) -> Matrix:
    while True:
        a = matrix(rng, n, bound=bound, den=den)
        if a.det() != 0:
            return a


def sym2(rng: random.Random, n: int, bound: int = 5, den: int = 4) -> Sym2Tensor:
    return Sym2Tensor(n, tuple(rational(rng, bound, den) for _ in range(packed_size(n, 2))))


def jet2(rng: random.Random, n: int) -> Jet2:
    return Jet2(invertible(rng, n), sym2(rng, n))


def covector(rng: random.Random, n: int, bound: int = 5, den: int = 4) -> list[Fraction]:
    return [rational(rng, bound, den) for _ in range(n)]


def o_member(rng: random.Random, n: int, q: int) -> Matrix:
    """Cayley transform ``(I - A)^-1 (I + A)`` of a random eta-skew ``A``: exact and in O(q, n-q)."""
    e = eta(n, q)
    ident = Matrix.identity(n)
    while True:
        k = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                k[i][j] = rational(rng, 3, 3)
                k[j][i] = -k[i][j]
        a = e @ Matrix.from_rows(k)
        try:
            return (ident - a).inverse() @ (ident + a)
        except DegenerateError:
            continue


def positive_rational(rng: random.Random, bound: int = 5, den: int = 4) -> Fraction:
    return Fraction(rng.randint(1, bound), rng.randint(1, den))


def slpm_member(rng: random.Random, n: int) -> Matrix:
    """Random exact matrix with ``|det| = 1``: a random invertible matrix rescaled in one column."""
    a = invertible(rng, n)
    d = a.det()
    sign = rng.choice((1, -1))
    cols = [[a[i, j] for i in range(n)] for j in range(n)]
    cols[0] = [x * sign / abs(d) for x in cols[0]]
    return Matrix(n, n, tuple(cols[j][i] for i in range(n) for j in range(n)))


def group_member(rng: random.Random, tag: SubgroupTag) -> Matrix:
    n = tag.n
    if tag.tag == "GL":
        return invertible(rng, n)
    if tag.tag == "SLpm":
        return slpm_member(rng, n)
    if tag.tag == "H":
        return Matrix.identity(n).scale(positive_rational(rng))
    if tag.tag == "O":
        return o_member(rng, n, tag.q)
    return o_member(rng, n, tag.q).scale(positive_rational(rng))


def metric(rng: random.Random, n: int, q: int) -> Matrix:
    """``P^T eta P`` for random invertible P: a random rational metric of signature (q, n-q)."""
    p = invertible(rng, n, bound=3, den=3)
    return p.T @ eta(n, q) @ p


def polynomial(rng: random.Random, nvars: int, degree: int = 2, terms: int = 3, bound: int = 3) -> Polynomial:
    t = {}
    for _ in range(terms):
        exp = [0] * nvars
        for _ in range(rng.randint(0, degree)):
            exp[rng.randrange(nvars)] += 1
        t[tuple(exp)] = rational(rng, bound, 3)
    return Polynomial(nvars, t)


def metric_field(rng: random.Random, n: int, q: int, degree: int = 2) -> PolyMetricField:
    """Constant random metric plus small random polynomial perturbations (symmetric)."""
    base = metric(rng, n, q)
    rows = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            p = Polynomial.const(n, base[i, j]) + polynomial(rng, n, degree, terms=2, bound=1) * Fraction(1, 5)
            rows[i][j] = rows[j][i] = p
    return PolyMetricField(rows, q)
