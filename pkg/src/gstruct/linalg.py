"""Exact dense matrices over the rationals, sparse row reduction and Sylvester inertia.

Scalars are :class:`fractions.Fraction`.  A :class:`Matrix` may also hold
``float`` entries; that only happens downstream of an n-th root that has no
rational value (see :func:`exact_root`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Number = Union[Fraction, float]


class GStructError(ValueError):
    """Base class for every error raised by this package."""


class DimensionError(GStructError):
    pass


class PreconditionError(GStructError):
    """A mathematical precondition failed (degenerate metric, nonpositive volume...)."""


class DegenerateError(PreconditionError):
    pass


def rat(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected: silently turning 0.1 into 3602879701896397/36028797018963968
    is never what a caller wants.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def fmt_rat(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _iroot(m: int, n: int) -> int | None:
    """Exact integer n-th root of m >= 0, or None."""
    if m < 2:
        return m
    r = round(m ** (1.0 / n)) if m.bit_length() < 1000 else 1 << (m.bit_length() // n)
    # Newton from above to fix float drift on big inputs
    x = max(r, 1)
    while True:
        y = ((n - 1) * x + m // x ** (n - 1)) // n
        if y >= x:
            break
        x = y
    for c in (x - 1, x, x + 1):
        if c >= 0 and c**n == m:
            return c
    return None


def exact_root(x: Fraction, n: int) -> Fraction | None:
    """The positive rational n-th root of ``x > 0`` if it exists."""
    if x <= 0:
        raise ValueError("exact_root needs a positive argument")
    p, q = _iroot(x.numerator, n), _iroot(x.denominator, n)
    if p is None or q is None:
        return None
    return Fraction(p, q)


def real_root(x: Number, n: int) -> Number:
    """n-th root of a positive number, exact when possible, else binary64."""
    if isinstance(x, Fraction):
        r = exact_root(x, n)
        if r is not None:
            return r
        # log-space keeps huge numerators/denominators from overflowing
        return math.exp((math.log(x.numerator) - math.log(x.denominator)) / n)
    return x ** (1.0 / n)


def is_zero(x: Number, tol: float = 0.0) -> bool:
    if isinstance(x, Fraction) or tol == 0.0:
        return x == 0
    return abs(x) <= tol


@dataclass(frozen=True)
class Matrix:
    """Immutable dense matrix, row-major."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DimensionError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> Matrix:
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DimensionError("ragged rows")
        conv = [x if isinstance(x, (Fraction, float)) else rat(x) for r in rows for x in r]
        return cls(len(rows), ncols, tuple(conv))

    @classmethod
    def identity(cls, n: int) -> Matrix:
        return cls(n, n, tuple(Fraction(int(i == j)) for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> Matrix:
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    @classmethod
    def diag(cls, values: Sequence) -> Matrix:
        n = len(values)
        vals = [rat(v) if not isinstance(v, float) else v for v in values]
        return cls(n, n, tuple(vals[i] if i == j else Fraction(0) for i in range(n) for j in range(n)))

    @classmethod
    def column(cls, values: Sequence) -> Matrix:
        return cls(len(values), 1, tuple(values))

    def __getitem__(self, ij: tuple[int, int]):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def tolist(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_exact(self) -> bool:
        return all(isinstance(x, Fraction) for x in self.entries)

    @property
    def T(self) -> Matrix:
        return Matrix(self.cols, self.rows, tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def __add__(self, other: Matrix) -> Matrix:
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")
        return Matrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: Matrix) -> Matrix:
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")
        return Matrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> Matrix:
        return Matrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, k: Number) -> Matrix:
        return Matrix(self.rows, self.cols, tuple(k * a for a in self.entries))

    def __mul__(self, k):
        if isinstance(k, Matrix):
            return NotImplemented
        return self.scale(k)

    __rmul__ = __mul__

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        zero = Fraction(0)
        out = []
        ocols = [other.entries[j :: other.cols] for j in range(other.cols)]
        for i in range(self.rows):
            r = self.row(i)
            for col in ocols:
                s = zero
                for a, b in zip(r, col):
                    if a and b:
                        s += a * b
                out.append(s)
        return Matrix(self.rows, other.cols, tuple(out))

    def trace(self):
        return sum((self[i, i] for i in range(min(self.rows, self.cols))), Fraction(0))

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self[i, j] == self[j, i] for i in range(self.rows) for j in range(i + 1, self.cols)
        )

    def _require_square(self):
        if self.rows != self.cols:
            raise DimensionError(f"expected a square matrix, got {self.shape}")

    def det(self) -> Number:
        self._require_square()
        n = self.rows
        a = self.tolist()
        exact = self.is_exact
        d: Number = Fraction(1)
        for c in range(n):
            if exact:
                p = next((r for r in range(c, n) if a[r][c] != 0), None)
            else:
                p = max(range(c, n), key=lambda r: abs(a[r][c]))
                if a[p][c] == 0:
                    p = None
            if p is None:
                return Fraction(0) if exact else 0.0
            if p != c:
                a[c], a[p] = a[p], a[c]
                d = -d
            piv = a[c][c]
            d = d * piv
            for r in range(c + 1, n):
                f = a[r][c]
                if f:
                    f = f / piv
                    a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        return d

    def inverse(self) -> Matrix:
        """Gauss-Jordan inverse; raises DegenerateError when singular."""
        self._require_square()
        n = self.rows
        exact = self.is_exact
        one = Fraction(1)
        a = [list(self.row(i)) + [one if i == j else Fraction(0) for j in range(n)] for i in range(n)]
        for c in range(n):
            if exact:
                p = next((r for r in range(c, n) if a[r][c] != 0), None)
            else:
                p = max(range(c, n), key=lambda r: abs(a[r][c]))
                if a[p][c] == 0:
                    p = None
            if p is None:
                raise DegenerateError("matrix is singular")
            a[c], a[p] = a[p], a[c]
            piv = a[c][c]
            a[c] = [x / piv for x in a[c]]
            for r in range(n):
                if r != c and a[r][c]:
                    f = a[r][c]
                    a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        return Matrix(n, n, tuple(x for r in a for x in r[n:]))

    def to_float(self) -> Matrix:
        return Matrix(self.rows, self.cols, tuple(float(x) for x in self.entries))


def max_rel_error(a: Matrix, b: Matrix) -> float:
    """Largest componentwise |a-b| / max(|b|, 1)."""
    if a.shape != b.shape:
        raise DimensionError("shape mismatch")
    return max(
        (abs(float(x) - float(y)) / max(abs(float(y)), 1.0) for x, y in zip(a.entries, b.entries)),
        default=0.0,
    )


# ---------------------------------------------------------------------------
# Row reduction.  Rows are sparse dicts {col: Fraction}; prolongation systems are
# mostly zeros and this keeps them cheap.


def _sparse(rows: Iterable[Sequence]) -> list[dict[int, Fraction]]:
    out = []
    for r in rows:
        d = {j: rat(x) for j, x in enumerate(r) if x != 0}
        if d:
            out.append(d)
    return out


def _rref_sparse(rows: list[dict[int, Fraction]]) -> tuple[list[dict[int, Fraction]], list[int]]:
    """Reduced row echelon form; pivot = first nonzero column in column order."""
    reduced: list[dict[int, Fraction]] = []
    pivots: list[int] = []
    for r in rows:
        r = dict(r)
        # eliminate against existing pivots
        for p_row, p_col in zip(reduced, pivots):
            f = r.get(p_col)
            if f:
                for j, v in p_row.items():
                    nv = r.get(j, 0) - f * v
                    if nv:
                        r[j] = nv
                    else:
                        r.pop(j, None)
        if not r:
            continue
        c = min(r)
        inv = 1 / r[c]
        r = {j: v * inv for j, v in r.items()}
        # back-eliminate the new pivot column from earlier rows
        for k, p_row in enumerate(reduced):
            f = p_row.get(c)
            if f:
                for j, v in r.items():
                    nv = p_row.get(j, 0) - f * v
                    if nv:
                        p_row[j] = nv
                    else:
                        p_row.pop(j, None)
        reduced.append(r)
        pivots.append(c)
    order = sorted(range(len(pivots)), key=pivots.__getitem__)
    return [reduced[k] for k in order], [pivots[k] for k in order]


def rref(rows: Sequence[Sequence], ncols: int | None = None) -> tuple[list[list[Fraction]], list[int]]:
    """Dense RREF of a list of rows.  Returns (nonzero rows, pivot columns)."""
    rows = list(rows)
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    red, piv = _rref_sparse(_sparse(rows))
    zero = Fraction(0)
    return [[r.get(j, zero) for j in range(ncols)] for r in red], piv


def rank(rows: Sequence[Sequence]) -> int:
    return len(_rref_sparse(_sparse(rows))[1])


def nullspace_vectors(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Kernel basis of the matrix whose rows are ``rows``, canonicalised.

    The returned vectors, stacked as rows, are in reduced row echelon form
    (equivalently: as columns they are in reduced column echelon form).  The
    basis is therefore a function of the kernel alone.
    """
    return nullspace_sparse(_sparse(rows), ncols)


def nullspace_sparse(rows: list[dict[int, Fraction]], ncols: int) -> list[list[Fraction]]:
    """:func:`nullspace_vectors` for rows already given as ``{col: value}`` dicts."""
    red, piv = _rref_sparse([r for r in rows if r])
    pivset = set(piv)
    free = [j for j in range(ncols) if j not in pivset]
    zero = Fraction(0)
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = Fraction(1)
        for r, p in zip(red, piv):
            c = r.get(f)
            if c:
                v[p] = -c
        basis.append(v)
    return canonical_basis(basis, ncols)


def canonical_basis(vectors: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """RREF of the span: a unique basis for the subspace spanned by ``vectors``."""
    return rref(vectors, ncols)[0] if vectors else []


def rat_nullspace(m: Matrix) -> list[Matrix]:
    """Kernel of ``m`` as column vectors (reduced column-echelon, deterministic).

    An empty (0-row) matrix has the whole space as kernel.
    """
    if not m.is_exact:
        raise TypeError("rat_nullspace needs an exact matrix")
    rows = [m.row(i) for i in range(m.rows)]
    return [Matrix.column(v) for v in nullspace_vectors(rows, m.cols)]


def solve(rows: Sequence[Sequence], rhs: Sequence, ncols: int) -> list[Fraction] | None:
    """One exact solution of ``A x = b`` (free variables set to 0), or None if inconsistent."""
    aug = [list(r) + [rat(b)] for r, b in zip(rows, rhs)]
    red, piv = _rref_sparse(_sparse(aug))
    if piv and piv[-1] == ncols:
        return None
    x = [Fraction(0)] * ncols
    for r, p in zip(red, piv):
        x[p] = r.get(ncols, Fraction(0))
    return x


def in_span(v: Sequence, basis: Sequence[Sequence]) -> bool:
    if not any(x != 0 for x in v):
        return True
    return rank(list(basis) + [v]) == rank(basis)


def same_span(a: Sequence[Sequence], b: Sequence[Sequence], ncols: int) -> bool:
    return canonical_basis(a, ncols) == canonical_basis(b, ncols)


def intersection_dim(a: Sequence[Sequence], b: Sequence[Sequence]) -> int:
    """dim(span a ∩ span b) = rank a + rank b - rank(a ∪ b)."""
    return rank(a) + rank(b) - rank(list(a) + list(b))


# ---------------------------------------------------------------------------


def congruence_diagonalize(g: Matrix) -> tuple[int, int, int, Matrix]:
    """Sylvester inertia of a symmetric rational matrix.

    Returns ``(p, q, z, P)`` with ``P.T @ g @ P`` diagonal, ``p`` positive,
    ``q`` negative and ``z`` zero diagonal entries.
    """
    if not g.is_symmetric():
        raise GStructError("congruence_diagonalize needs a symmetric matrix")
    if not g.is_exact:
        raise TypeError("congruence_diagonalize needs an exact matrix")
    n = g.rows
    a = g.tolist()
    # columns of P, updated alongside the congruence a <- E^T a E
    p_cols = [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]

    def add_col(dst: int, src: int, f: Fraction):
        # a <- E^T a E with E = I + f e_src e_dst^T  (column dst += f * column src)
        for r in range(n):
            a[r][dst] += f * a[r][src]
        for c in range(n):
            a[dst][c] += f * a[src][c]
        p_cols[dst] = [x + f * y for x, y in zip(p_cols[dst], p_cols[src])]

    def swap(i: int, j: int):
        a[i], a[j] = a[j], a[i]
        for r in a:
            r[i], r[j] = r[j], r[i]
        p_cols[i], p_cols[j] = p_cols[j], p_cols[i]

    for k in range(n):
        if a[k][k] == 0:
            piv = next((j for j in range(k + 1, n) if a[j][j] != 0), None)
            if piv is not None:
                swap(k, piv)
            else:
                j = next((j for j in range(k + 1, n) if a[k][j] != 0), None)
                if j is None:
                    continue  # row k already zero off the diagonal
                # a_kk = 0 = a_jj, a_kj != 0: column k += column j gives 2 a_kj
                add_col(k, j, Fraction(1))
        d = a[k][k]
        for j in range(k + 1, n):
            if a[k][j]:
                add_col(j, k, -a[k][j] / d)

    diag = [a[i][i] for i in range(n)]
    pos = sum(1 for x in diag if x > 0)
    neg = sum(1 for x in diag if x < 0)
    transform = Matrix(n, n, tuple(p_cols[j][i] for i in range(n) for j in range(n)))
    return pos, neg, n - pos - neg, transform
