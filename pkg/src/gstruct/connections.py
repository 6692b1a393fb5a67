"""Torsion-free connections at points of polynomial charts.

Every statement is checked pointwise: fields are polynomial, derived
quantities (inverse metric, Christoffel symbols) are exact rationals at a
rational point.  Conventions:

* Weyl compatibility: ``nabla_k g_ij = -2 theta_k g_ij``.
* A density ``v`` is parallel iff ``sum_k Gamma^k_{ki} = d_i ln v``.
* Projective shift: ``Gamma^i_jk + delta^i_j mu_k + delta^i_k mu_j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .jets import Jet2, sym2_transport
from .linalg import (
    DegenerateError,
    DimensionError,
    GStructError,
    Matrix,
    PreconditionError,
    nullspace_vectors,
    rat,
    solve,
)
from .poly import Polynomial
from .tensors import Sym2Tensor, kronecker_form, multisets

# a connection value is just its Christoffel symbols at the point
ConnectionValue = Sym2Tensor


def _point(x: Sequence, n: int) -> list[Fraction]:
    if len(x) != n:
        raise DimensionError(f"point has {len(x)} coordinates, expected {n}")
    return [rat(v) for v in x]


def _covector(mu: Sequence, n: int) -> list[Fraction]:
    if len(mu) != n:
        raise DimensionError(f"covector has {len(mu)} components, expected {n}")
    return [rat(v) for v in mu]


class PolyMetricField:
    """Symmetric n x n matrix of polynomials in the n chart coordinates."""

    def __init__(self, entries: Sequence[Sequence[Polynomial]], q: int | None = None):
        n = len(entries)
        rows = [list(r) for r in entries]
        if any(len(r) != n for r in rows):
            raise DimensionError("metric field must be square")
        for i in range(n):
            for j in range(n):
                if rows[i][j].nvars != n:
                    raise DimensionError(f"entry ({i},{j}) is not a polynomial in {n} variables")
                if j > i and rows[i][j] != rows[j][i]:
                    raise GStructError("metric field must be symmetric")
        self.n = n
        self.entries = tuple(tuple(r) for r in rows)
        self.q = q

    @classmethod
    def constant(cls, g: Matrix, q: int | None = None) -> PolyMetricField:
        n = g.rows
        return cls([[Polynomial.const(n, g[i, j]) for j in range(n)] for i in range(n)], q)

    def at(self, x: Sequence) -> Matrix:
        x = _point(x, self.n)
        g = Matrix.from_rows([[p(x) for p in row] for row in self.entries])
        if g.det() == 0:
            raise DegenerateError(f"metric is degenerate at {[str(v) for v in x]}")
        return g

    def partials(self, x: Sequence) -> list[Matrix]:
        """``[d_k g]`` for k = 0..n-1."""
        x = _point(x, self.n)
        return [
            Matrix.from_rows([[p.derivative(k)(x) for p in row] for row in self.entries]) for k in range(self.n)
        ]


@dataclass(frozen=True)
class PolyVolumeField:
    n: int
    v: Polynomial

    def __post_init__(self):
        if self.v.nvars != self.n:
            raise DimensionError("volume polynomial has the wrong number of variables")

    def eval_grad(self, x: Sequence) -> tuple[Fraction, list[Fraction]]:
        val, grad = self.v.eval_grad(_point(x, self.n))
        if val <= 0:
            raise PreconditionError(f"volume density {val} is not positive at {[str(v) for v in x]}")
        return val, grad


@dataclass(frozen=True)
class PolyConnectionField:
    """Christoffel symbols as polynomials, in the packed upper-jk layout."""

    n: int
    entries: tuple[Polynomial, ...]

    def __post_init__(self):
        if len(self.entries) != self.n * len(multisets(self.n, 2)):
            raise DimensionError("wrong number of packed connection coefficients")


def poly_connection_eval(field: PolyConnectionField, x: Sequence) -> Sym2Tensor:
    x = _point(x, field.n)
    return Sym2Tensor(field.n, tuple(p(x) for p in field.entries))


def levi_civita_at(g: PolyMetricField, x: Sequence) -> Sym2Tensor:
    """Christoffel symbols ``1/2 g^il (d_j g_lk + d_k g_lj - d_l g_jk)`` at ``x``."""
    n = g.n
    ginv = g.at(x).inverse()
    dg = g.partials(x)
    # lowered[l][j][k] = Gamma_{l jk}, the first-kind symbols
    lowered = [
        [[(dg[j][l, k] + dg[k][l, j] - dg[l][j, k]) / 2 for k in range(n)] for j in range(n)] for l in range(n)
    ]
    return Sym2Tensor.from_function(
        n, lambda i, j, k: sum((ginv[i, l] * lowered[l][j][k] for l in range(n)), Fraction(0))
    )


def metric_cov_deriv_at(gamma: Sym2Tensor, g: PolyMetricField, x: Sequence) -> list[list[list[Fraction]]]:
    """``out[k][i][j] = d_k g_ij - Gamma^l_ki g_lj - Gamma^l_kj g_il``."""
    n = g.n
    if gamma.n != n:
        raise DimensionError("connection and metric have different dimensions")
    gx = g.at(x)
    dg = g.partials(x)
    return _cov_deriv(gamma, gx, dg)


def _cov_deriv(gamma: Sym2Tensor, gx: Matrix, dg: Sequence[Matrix]) -> list[list[list[Fraction]]]:
    n = gamma.n
    out = []
    for k in range(n):
        block = []
        for i in range(n):
            row = []
            for j in range(n):
                v = dg[k][i, j]
                for l in range(n):
                    v -= gamma(l, k, i) * gx[l, j] + gamma(l, k, j) * gx[i, l]
                row.append(v)
            block.append(row)
        out.append(block)
    return out


def connection_transform(gamma: Sym2Tensor, j: Jet2) -> Sym2Tensor:
    """``a^-1 Gamma(a., a.) + s`` for the 2-jet ``j = (a, s)``."""
    if gamma.n != j.n:
        raise DimensionError("connection and jet have different dimensions")
    return sym2_transport(j.a, gamma) + j.s


def projective_shift(gamma: Sym2Tensor, mu: Sequence) -> Sym2Tensor:
    return gamma + kronecker_form(gamma.n, _covector(mu, gamma.n))


def projective_difference(gamma1: Sym2Tensor, gamma2: Sym2Tensor) -> list[Fraction] | None:
    """``mu`` with ``gamma2 = projective_shift(gamma1, mu)``, or None if they are not projectively related."""
    if gamma1.n != gamma2.n:
        raise DimensionError("connections of different dimension")
    n = gamma1.n
    d = gamma2 - gamma1
    mu = [t / (n + 1) for t in d.trace_form()]
    if kronecker_form(n, mu) != d:
        return None
    return mu


def volume_parallel_residual(gamma: Sym2Tensor, vol: PolyVolumeField, x: Sequence) -> list[Fraction]:
    """``d_i v - v sum_k Gamma^k_ki``; zero exactly when v is parallel at x."""
    if gamma.n != vol.n:
        raise DimensionError("connection and volume have different dimensions")
    v, grad = vol.eval_grad(x)
    tr = gamma.trace_form()
    return [grad[i] - v * tr[i] for i in range(vol.n)]


def equiaffine_representative(
    gamma: Sym2Tensor, vol: PolyVolumeField, x: Sequence
) -> tuple[Sym2Tensor, list[Fraction]]:
    """The unique projective shift of ``gamma`` that makes ``vol`` parallel at ``x``.

    A shift by ``mu`` adds ``(n+1) mu_i`` to the trace ``sum_k Gamma^k_ki``,
    which pins ``mu`` down.
    """
    if gamma.n != vol.n:
        raise DimensionError("connection and volume have different dimensions")
    n = gamma.n
    v, grad = vol.eval_grad(x)
    tr = gamma.trace_form()
    mu = [(grad[i] / v - tr[i]) / (n + 1) for i in range(n)]
    return projective_shift(gamma, mu), mu


def weyl_term(gx: Matrix, theta: Sequence) -> Sym2Tensor:
    """``delta^i_j th_k + delta^i_k th_j - g_jk g^is th_s``: the conformal correction."""
    return kronecker_form(gx.rows, theta, gx)


def weyl_connection_at(g: PolyMetricField, theta: Sequence, x: Sequence) -> Sym2Tensor:
    theta = _covector(theta, g.n)
    return levi_civita_at(g, x) + weyl_term(g.at(x), theta)


def weyl_compatibility_check(gamma: Sym2Tensor, g: PolyMetricField, x: Sequence) -> list[Fraction] | None:
    """``theta`` with ``nabla_k g_ij = -2 theta_k g_ij`` for all k, i, j, or None."""
    n = g.n
    gx = g.at(x)
    ginv = gx.inverse()
    nab = metric_cov_deriv_at(gamma, g, x)
    theta = [
        -sum((ginv[i, j] * nab[k][i][j] for i in range(n) for j in range(n)), Fraction(0)) / (2 * n)
        for k in range(n)
    ]
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if nab[k][i][j] != -2 * theta[k] * gx[i, j]:
                    return None
    return theta


def weyl_intersection_at(
    gamma: Sym2Tensor, g: PolyMetricField, x: Sequence
) -> tuple[list[Fraction], list[Fraction]] | None:
    """Find ``(mu, theta)`` making ``projective_shift(gamma, mu)`` Weyl-compatible with ``g``.

    Solves ``nabla_k g_ij = mu_i g_kj + mu_j g_ik + 2 (mu_k - theta_k) g_ij``
    exactly in the 2n unknowns ``(mu, theta)``.  Returns None when the
    projective class of ``gamma`` misses the Weyl connections of ``[g]`` at x.
    """
    n = g.n
    gx = g.at(x)
    nab = metric_cov_deriv_at(gamma, g, x)
    rows, rhs = [], []
    for k in range(n):
        for i in range(n):
            for j in range(i, n):
                row = [Fraction(0)] * (2 * n)
                row[i] += gx[k, j]
                row[j] += gx[i, k]
                row[k] += 2 * gx[i, j]
                row[n + k] -= 2 * gx[i, j]
                rows.append(row)
                rhs.append(nab[k][i][j])
    sol = solve(rows, rhs, 2 * n)
    if sol is None:
        return None
    mu, theta = sol[:n], sol[n:]
    if weyl_compatibility_check(projective_shift(gamma, mu), g, x) != theta:
        raise AssertionError("Weyl intersection solution failed verification")
    return mu, theta


def metric_compatible_directions(g: PolyMetricField, x: Sequence, directions: Sequence[Sym2Tensor]) -> list[list[Fraction]]:
    """Coefficient vectors ``c`` for which ``sum c_a s_a`` leaves ``nabla g`` unchanged at x.

    Adding ``s`` to a connection changes ``nabla_k g_ij`` by
    ``-(s^l_ki g_lj + s^l_kj g_il)``; this returns the kernel of that linear map
    restricted to ``span(directions)``.  Only the zero combination survives
    when the metric's orthogonal algebra has trivial first prolongation.
    """
    n = g.n
    gx = g.at(x)
    zero_dg = [Matrix.zeros(n, n)] * n
    columns = [_cov_deriv(s, gx, zero_dg) for s in directions]
    rows = []
    for k in range(n):
        for i in range(n):
            for j in range(i, n):
                rows.append([col[k][i][j] for col in columns])
    return nullspace_vectors(rows, len(directions))
