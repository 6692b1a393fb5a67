"""Pointwise metrics, conformal classes and volume densities.

A metric factors as a conformal class plus a volume density:
``decompose_metric`` and ``recompose_metric`` are mutually inverse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .linalg import (
    DegenerateError,
    DimensionError,
    GStructError,
    Matrix,
    Number,
    PreconditionError,
    congruence_diagonalize,
    exact_root,
    is_zero,
    real_root,
)


@dataclass(frozen=True)
class MetricValue:
    g: Matrix
    q: int | None = None

    def __post_init__(self):
        if not self.g.is_symmetric():
            raise GStructError("metric must be symmetric")
        if self.g.det() == 0:
            raise DegenerateError("metric is degenerate")
        if self.q is not None and self.g.is_exact and metric_signature(self.g)[0] != self.q:
            raise GStructError(f"declared signature q={self.q} does not match the matrix")

    @property
    def n(self) -> int:
        return self.g.rows


@dataclass(frozen=True)
class VolumeDensityValue:
    """Positive density ``v``; ``v2 = v**2`` is kept exactly when it is rational."""

    v: float
    v2: Fraction | None = None

    def __post_init__(self):
        if not self.v > 0:
            raise PreconditionError("volume density must be positive")

    @classmethod
    def from_square(cls, v2) -> VolumeDensityValue:
        v2 = Fraction(v2)
        if v2 <= 0:
            raise PreconditionError("volume density must be positive")
        return cls(float(real_root(v2, 2)), v2)

    @classmethod
    def from_value(cls, v) -> VolumeDensityValue:
        if isinstance(v, float):
            return cls(v)
        v = Fraction(v)
        if v <= 0:
            raise PreconditionError("volume density must be positive")
        return cls(float(v), v * v)

    @property
    def exact(self) -> Fraction | None:
        return None if self.v2 is None else exact_root(self.v2, 2)

    @property
    def square(self) -> Number:
        return self.v2 if self.v2 is not None else self.v * self.v


def metric_signature(g: Matrix) -> tuple[int, int]:
    """``(q, n - q)`` with q the number of negative directions."""
    p, q, z, _ = congruence_diagonalize(g)
    if z:
        raise DegenerateError(f"degenerate form: {z} null direction(s)")
    return q, p


@dataclass(frozen=True)
class ConformalRep:
    """A representative ``scale * base`` of a conformal class.

    ``base`` is kept exact so the class survives float scale factors
    unchanged; ``r`` is the representative itself.
    """

    base: Matrix
    scale: Number = Fraction(1)

    def __post_init__(self):
        if not self.base.is_symmetric():
            raise GStructError("conformal representative must be symmetric")
        if self.base.det() == 0:
            raise DegenerateError("conformal representative is degenerate")
        if not self.scale > 0:
            raise GStructError("representative scale must be positive")

    @property
    def n(self) -> int:
        return self.base.rows

    @property
    def r(self) -> Matrix:
        return self.base if self.scale == 1 else self.base.scale(self.scale)

    def rescaled(self, lam: Number) -> ConformalRep:
        """Another representative of the same class."""
        return ConformalRep(self.base, self.scale * lam)


def decompose_metric(g: MetricValue | Matrix) -> tuple[ConformalRep, VolumeDensityValue]:
    """Unit-|det| conformal representative ``g / |det g|^(1/n)`` and density ``|det g|^(1/2)``."""
    m = g.g if isinstance(g, MetricValue) else MetricValue(g).g
    n = m.rows
    d = abs(m.det())
    rep = ConformalRep(m, 1 / real_root(d, n))
    vol = VolumeDensityValue.from_square(d) if isinstance(d, Fraction) else VolumeDensityValue(math.sqrt(d))
    return rep, vol


def _abs_det(m: Matrix) -> Fraction:
    # Fraction(float) is exact, so this is the true determinant of the stored binary values
    return abs(Matrix(m.rows, m.cols, tuple(Fraction(x) for x in m.entries)).det())


def recompose_metric(rep: ConformalRep | Matrix, vol: VolumeDensityValue) -> Matrix:
    """The metric conformal to ``rep`` whose density is ``vol``: ``(v^2 / |det rep|)^(1/n) rep``.

    Only the class of ``rep`` matters, so a :class:`ConformalRep` is rescaled
    from its exact base.
    """
    base = rep.base if isinstance(rep, ConformalRep) else rep
    if base.rows != base.cols:
        raise DimensionError("representative must be square")
    d = _abs_det(base)
    if d == 0:
        raise DegenerateError("conformal representative is degenerate")
    n = base.rows
    sq = vol.square
    if isinstance(sq, float):
        sq = Fraction(sq)
    factor = real_root(sq / d, n)
    if base.is_exact:
        return base.scale(factor)
    return base.scale(float(factor))


def conformal_equivalent(g1: Matrix, g2: Matrix, tol: float = 1e-12) -> Number | None:
    """``lam > 0`` with ``g2 = lam g1``, or None.

    Exact for rational inputs; ``tol`` (relative to the largest entry) only
    applies when float entries are involved.
    """
    if g1.shape != g2.shape:
        raise DimensionError("metrics of different dimension")
    exact = g1.is_exact and g2.is_exact
    scale = max(abs(float(x)) for x in g2.entries) if not exact else 0.0
    lam = None
    for a, b in zip(g1.entries, g2.entries):
        if a == 0:
            if not is_zero(b, 0.0 if exact else tol * scale):
                return None
        elif lam is None:
            lam = b / a
        elif not is_zero(b - lam * a, 0.0 if exact else tol * scale):
            return None
    if lam is None or lam <= 0:
        return None
    return lam


def volume_equivariant_value(vol: VolumeDensityValue, frame: Matrix) -> Number:
    """``f(l) = (v |det l|)^(-1/n)``, so that ``f(l a) = |det a|^(-1/n) f(l)``.

    Exact (a Fraction) when v and the root are rational.
    """
    d = abs(frame.det())
    if d == 0:
        raise DegenerateError("frame is not invertible")
    n = frame.rows
    exact = vol.exact
    if exact is not None and isinstance(d, Fraction):
        return real_root(1 / (exact * d), n)
    log_d = math.log(d.numerator) - math.log(d.denominator) if isinstance(d, Fraction) else math.log(d)
    return math.exp(-(math.log(vol.v) + log_d) / n)
