"""Prolongations of matrix Lie algebras and finite-type detection.

The k-th prolongation of ``g ⊂ gl(n)`` is the space of vector-valued totally
symmetric (k+1)-linear maps ``T`` such that, for every choice of k lower
indices ``J``, the matrix ``(i, l) -> T^i_{J l}`` lies in ``g``.  Membership in
``g`` is tested against an annihilator basis of ``g`` inside the n^2-dimensional
matrix space, so every prolongation is a single exact nullspace problem.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .jets import SubgroupTag, eta, subgroup_member, sym2_transport
from .linalg import (
    GStructError,
    Matrix,
    canonical_basis,
    in_span,
    nullspace_sparse,
    nullspace_vectors,
    rank,
    rat,
)
from .tensors import Sym2Tensor, flat_index, kronecker_form, multisets, packed_size

DEFAULT_K_MAX = 4


def vec(m: Matrix) -> list:
    return list(m.entries)


def unvec(v: Sequence, n: int) -> Matrix:
    return Matrix(n, n, tuple(v))


def _elem(n: int, i: int, j: int) -> Matrix:
    return Matrix(n, n, tuple(Fraction(int((r, c) == (i, j))) for r in range(n) for c in range(n)))


@dataclass(frozen=True)
class LieSubalgebra:
    n: int
    basis: tuple[Matrix, ...]
    name: str = "custom"

    def __post_init__(self):
        for m in self.basis:
            if m.shape != (self.n, self.n):
                raise GStructError(f"basis element of shape {m.shape} in an algebra of {self.n}x{self.n} matrices")
        if rank([vec(m) for m in self.basis]) != len(self.basis):
            raise GStructError("basis elements are linearly dependent")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, m: Matrix) -> bool:
        return in_span(vec(m), [vec(b) for b in self.basis])

    def annihilator(self) -> list[list[Fraction]]:
        """Linear functionals on gl(n) (as n^2-vectors) vanishing exactly on this algebra."""
        return nullspace_vectors([vec(b) for b in self.basis], self.n * self.n)

    def is_closed(self) -> bool:
        """Every commutator of basis elements lies in the span."""
        span = [vec(b) for b in self.basis]
        for i, x in enumerate(self.basis):
            for y in self.basis[i + 1 :]:
                if not in_span(vec(x @ y - y @ x), span):
                    return False
        return True


def _from_constraints(n: int, constraints: Iterable[Sequence], extra: int = 0) -> list[Matrix]:
    """Matrices solving a homogeneous linear system on (vec M, extra unknowns); returns the M parts."""
    sols = nullspace_vectors(list(constraints), n * n + extra)
    parts = [s[: n * n] for s in sols]
    return [unvec(v, n) for v in canonical_basis(parts, n * n)]


def _form_constraints(n: int, form: Matrix, with_scale: bool) -> list[list[Fraction]]:
    """Rows of ``M^T F + F M - lam F = 0`` in the unknowns (vec M[, lam])."""
    rows = []
    for a in range(n):
        for b in range(a, n):
            row = [Fraction(0)] * (n * n + (1 if with_scale else 0))
            # (M^T F)_{ab} = sum_r M_{ra} F_{rb};  (F M)_{ab} = sum_r F_{ar} M_{rb}
            for r in range(n):
                row[r * n + a] += form[r, b]
                row[r * n + b] += form[a, r]
            if with_scale:
                row[-1] = -form[a, b]
            rows.append(row)
    return rows


def _glwc_coupling(n: int, c: Fraction) -> list[Fraction]:
    """``M_11 - c tr M`` as a functional on vec M."""
    row = [Fraction(0)] * (n * n)
    for i in range(n):
        row[i * n + i] -= c
    row[0] += 1
    return row


def symplectic_form(n: int = 4) -> Matrix:
    h = n // 2
    return Matrix(
        n,
        n,
        tuple(
            Fraction(1 if j == i + h else -1 if i == j + h else 0) for i in range(n) for j in range(n)
        ),
    )


def builtin_algebra(
    name: str,
    n: int,
    q: int = 0,
    c=0,
    coupling: Callable[[int, Fraction], Sequence] | None = None,
    basis: Sequence[Matrix] | None = None,
) -> LieSubalgebra:
    """One of the named matrix algebras.

    ``gl``, ``sl``, ``o`` (signature ``q``), ``co``, ``glw`` (stabiliser of the
    line W = span(e_1)), ``glwc`` (the subalgebra of ``glw`` cut out by
    ``coupling(n, c) . vec M = 0``; default coupling ``M_11 = c tr M``),
    ``csp`` (n = 4 only), ``h`` (scalars) and ``custom`` (``basis`` given).
    """
    if n < 1:
        raise GStructError("n must be positive")
    if name == "custom":
        if not basis:
            raise GStructError("custom algebra needs a basis")
        return LieSubalgebra(n, tuple(basis), "custom")
    if name == "gl":
        mats = [_elem(n, i, j) for i in range(n) for j in range(n)]
    elif name == "sl":
        tr = [Fraction(int(i == j)) for i in range(n) for j in range(n)]
        mats = _from_constraints(n, [tr])
    elif name == "h":
        mats = [Matrix.identity(n)]
    elif name in ("o", "co"):
        mats = list(form_algebra(eta(n, q), name == "co").basis)
    elif name in ("glw", "glwc"):
        rows = []
        for i in range(1, n):
            r = [Fraction(0)] * (n * n)
            r[i * n] = Fraction(1)
            rows.append(r)
        if name == "glwc":
            rows.append([rat(x) for x in (coupling or _glwc_coupling)(n, rat(c))])
        mats = _from_constraints(n, rows)
    elif name == "csp":
        if n != 4:
            raise GStructError("csp(2, R) is only defined here for n = 4")
        mats = _from_constraints(n, _form_constraints(n, symplectic_form(n), True), extra=1)
    else:
        raise GStructError(f"unknown algebra {name!r}")
    label = {"o": f"o({q},{n - q})", "co": f"co({q},{n - q})", "glwc": f"glwc(c={rat(c)})"}.get(name, f"{name}({n})")
    alg = LieSubalgebra(n, tuple(mats), label)
    if not alg.is_closed():
        raise GStructError(f"{label} is not closed under the commutator")
    return alg


def form_algebra(form: Matrix, conformal: bool = False) -> LieSubalgebra:
    """``{M : M^T F + F M = 0}``, or ``= lam F`` when ``conformal``, for a symmetric form F."""
    n = form.rows
    mats = _from_constraints(n, _form_constraints(n, form, conformal), extra=int(conformal))
    return LieSubalgebra(n, tuple(mats), "co(form)" if conformal else "o(form)")


def algebra_for_tag(tag: SubgroupTag) -> LieSubalgebra:
    name = {"SLpm": "sl", "O": "o", "CO": "co", "H": "h", "GL": "gl"}[tag.tag]
    return builtin_algebra(name, tag.n, tag.q)


@dataclass(frozen=True)
class ProlongSpace:
    """Basis of a space of totally symmetric maps of ``degree + 1`` lower indices."""

    n: int
    degree: int
    basis: tuple[tuple[Fraction, ...], ...]
    name: str = ""

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def size(self) -> int:
        return packed_size(self.n, self.degree + 1)

    def tensors(self) -> list[Sym2Tensor]:
        if self.degree != 1:
            raise GStructError("only degree-1 elements are Sym2Tensors")
        return [Sym2Tensor(self.n, b) for b in self.basis]

    def canonical(self) -> list[list[Fraction]]:
        return canonical_basis(self.basis, self.size)

    def same_span(self, other: ProlongSpace) -> bool:
        return (self.n, self.degree) == (other.n, other.degree) and self.canonical() == other.canonical()

    def contains(self, s: Sym2Tensor | Sequence) -> bool:
        v = s.entries if isinstance(s, Sym2Tensor) else s
        return in_span(list(v), list(self.basis))


def kth_prolongation(g: LieSubalgebra, k: int) -> ProlongSpace:
    if k < 1:
        raise GStructError("prolongation degree must be >= 1")
    n = g.n
    ann = g.annihilator()
    m = k + 1
    rows: list[dict[int, Fraction]] = []
    for fixed in multisets(n, k):
        for alpha in ann:
            row: dict[int, Fraction] = {}
            for idx, a in enumerate(alpha):
                if not a:
                    continue
                i, l = divmod(idx, n)
                col = flat_index(n, i, fixed + (l,))
                row[col] = row.get(col, 0) + a
            rows.append({c: v for c, v in row.items() if v})
    basis = nullspace_sparse(rows, packed_size(n, m))
    return ProlongSpace(n, k, tuple(tuple(v) for v in basis), f"{g.name}_{k}")


def first_prolongation(g: LieSubalgebra) -> ProlongSpace:
    return kth_prolongation(g, 1)


@dataclass(frozen=True)
class TypeReport:
    dims: tuple[int, ...]
    k_max: int
    finite_type: int | None = field(default=None)

    @property
    def verdict(self) -> str:
        if self.finite_type is not None:
            return f"finite-type-{self.finite_type}"
        return f"type>{self.k_max}"


def finite_type_order(g: LieSubalgebra, k_max: int = DEFAULT_K_MAX) -> TypeReport:
    """Dimensions of g_1, g_2, ... up to the first zero or ``k_max``.

    A vanishing prolongation forces every later one to vanish, so the first
    zero is the type.  Infinite type can only be reported as a lower bound.
    """
    if k_max < 1:
        raise GStructError("k_max must be >= 1")
    dims = []
    for k in range(1, k_max + 1):
        d = kth_prolongation(g, k).dim
        dims.append(d)
        if d == 0:
            return TypeReport(tuple(dims), k_max, k)
    return TypeReport(tuple(dims), k_max)


def co1_formula_basis_for(form: Matrix) -> ProlongSpace:
    """Conformal first prolongation of a nondegenerate symmetric ``form``, one element per dual basis vector."""
    n = form.rows
    basis = []
    for s in range(n):
        mu = [Fraction(int(t == s)) for t in range(n)]
        basis.append(kronecker_form(n, mu, form).entries)
    return ProlongSpace(n, 1, tuple(basis), "co1-formula")


def co1_formula_basis(q: int, p: int) -> ProlongSpace:
    return co1_formula_basis_for(eta(q + p, q))


def projective_subspace(n: int) -> ProlongSpace:
    if n < 2:
        raise GStructError("projective algebra needs n >= 2")
    basis = []
    for s in range(n):
        mu = [Fraction(int(t == s)) for t in range(n)]
        basis.append(kronecker_form(n, mu).entries)
    return ProlongSpace(n, 1, tuple(basis), "p")


@dataclass(frozen=True)
class ClosureReport:
    ok: bool
    checked: int
    failures: tuple[tuple[int, int], ...] = ()


def semidirect_closure_check(tag: SubgroupTag, g1: ProlongSpace, samples: Sequence[Matrix]) -> ClosureReport:
    """Check ``b^-1 s(b., b.) in g1`` for every sampled ``b in G`` and basis element ``s``.

    Failures are ``(sample index, basis index)`` pairs; a sample outside the
    group counts as a failure with basis index -1.
    """
    if g1.degree != 1:
        raise GStructError("closure check needs a degree-1 prolongation")
    failures = []
    checked = 0
    tensors = g1.tensors()
    for bi, b in enumerate(samples):
        if not subgroup_member(b, tag).member:
            failures.append((bi, -1))
            continue
        for si, s in enumerate(tensors):
            checked += 1
            if not g1.contains(sym2_transport(b, s)):
                failures.append((bi, si))
    return ClosureReport(not failures, checked, tuple(failures))
