"""Sparse multivariate polynomials with rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .linalg import DimensionError, rat


class Polynomial:
    """Immutable polynomial in ``nvars`` variables: ``{exponent tuple: coefficient}``."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Sequence[int], object] | None = None):
        clean: dict[tuple[int, ...], Fraction] = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars:
                raise DimensionError(f"exponent {exp} does not have length {nvars}")
            if any(e < 0 for e in exp):
                raise ValueError("negative exponent")
            c = rat(c)
            if c:
                c = clean.get(exp, 0) + c
                if c:
                    clean[exp] = c
                else:
                    clean.pop(exp, None)
        self.nvars = nvars
        self.terms = clean

    @classmethod
    def const(cls, nvars: int, c) -> Polynomial:
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, i: int) -> Polynomial:
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise DimensionError("polynomials in different numbers of variables")
            return other
        return Polynomial.const(self.nvars, other)

    def __add__(self, other) -> Polynomial:
        other = self._coerce(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0) + c
        return Polynomial(self.nvars, t)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> Polynomial:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> Polynomial:
        return self._coerce(other) - self

    def __mul__(self, other) -> Polynomial:
        other = self._coerce(other)
        t: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return Polynomial(self.nvars, t)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Polynomial:
        out = Polynomial.const(self.nvars, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(f"x{i + 1}" + (f"^{p}" if p > 1 else "") for i, p in enumerate(e) if p)
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def derivative(self, i: int) -> Polynomial:
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                d = list(e)
                d[i] -= 1
                t[tuple(d)] = c * e[i]
        return Polynomial(self.nvars, t)

    def _check_point(self, x: Sequence) -> list:
        if len(x) != self.nvars:
            raise DimensionError(f"point has {len(x)} coordinates, polynomial has {self.nvars} variables")
        return [v if isinstance(v, float) else rat(v) for v in x]

    def __call__(self, x: Sequence):
        x = self._check_point(x)
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for xi, p in zip(x, e):
                if p:
                    t *= xi**p
            total += t
        return total

    def eval_grad(self, x: Sequence):
        """``(f(x), [df/dx_i (x)])`` by formal differentiation."""
        x = self._check_point(x)
        return self(x), [self.derivative(i)(x) for i in range(self.nvars)]


def poly_eval_grad(f: Polynomial, x: Sequence):
    return f.eval_grad(x)
