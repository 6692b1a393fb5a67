"""JSON codecs.

Rationals travel as ``"p/q"`` strings (or ``"p"``); floats only appear where an
irrational root was taken.  On output every numeric field ``foo`` holds
decimals and ``foo_exact`` holds rational strings (or null when inexact);
readers prefer ``foo_exact`` so outputs pipe back in without losing exactness.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any

from .jets import Jet2, SubgroupTag
from .linalg import GStructError, Matrix, Number, fmt_rat, rat
from .poly import Polynomial
from .prolong import LieSubalgebra, ProlongSpace, TypeReport, builtin_algebra
from .tensors import PACKING, Sym2Tensor, multisets


class SchemaError(GStructError):
    """Payload does not match the expected JSON shape."""


def parse_number(x) -> Number:
    if isinstance(x, bool):
        raise SchemaError("boolean where a number was expected")
    if isinstance(x, float):
        return x
    try:
        return rat(x)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"cannot parse number {x!r}") from exc


def exact_str(x) -> str | None:
    return fmt_rat(x) if isinstance(x, Fraction) else None


def decimal(x) -> float:
    return float(x)


def _require(payload: dict, key: str):
    if not isinstance(payload, dict):
        raise SchemaError("payload must be a JSON object")
    if key in payload and payload[key] is not None:
        return payload[key]
    if f"{key}_exact" in payload and payload[f"{key}_exact"] is not None:
        return payload[f"{key}_exact"]
    raise SchemaError(f"missing field {key!r}")


def field(payload: dict, key: str):
    """Value of ``key``, preferring the exact twin ``key_exact`` when present."""
    if isinstance(payload, dict) and payload.get(f"{key}_exact") is not None:
        return payload[f"{key}_exact"]
    return _require(payload, key)


def has(payload: dict, key: str) -> bool:
    return isinstance(payload, dict) and (payload.get(key) is not None or payload.get(f"{key}_exact") is not None)


# matrices -------------------------------------------------------------------


def parse_matrix(obj) -> Matrix:
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise SchemaError("matrix must be a non-empty array of row arrays")
    rows = [[parse_number(x) for x in r] for r in obj]
    if any(len(r) != len(rows[0]) for r in rows):
        raise SchemaError("ragged matrix rows")
    return Matrix(len(rows), len(rows[0]), tuple(x for r in rows for x in r))


def matrix_fields(key: str, m: Matrix) -> dict[str, Any]:
    return {
        key: [[decimal(x) for x in r] for r in m.tolist()],
        f"{key}_exact": [[fmt_rat(x) for x in r] for r in m.tolist()] if m.is_exact else None,
    }


def scalar_fields(key: str, x) -> dict[str, Any]:
    return {key: decimal(x), f"{key}_exact": exact_str(x)}


def vector_fields(key: str, v) -> dict[str, Any]:
    exact = all(isinstance(x, Fraction) for x in v)
    return {key: [decimal(x) for x in v], f"{key}_exact": [fmt_rat(x) for x in v] if exact else None}


def parse_vector(obj, n: int | None = None) -> list:
    if not isinstance(obj, list):
        raise SchemaError("expected an array of numbers")
    v = [parse_number(x) for x in obj]
    if n is not None and len(v) != n:
        raise SchemaError(f"expected {n} components, got {len(v)}")
    return v


def parse_point(obj, n: int | None = None) -> list[Fraction]:
    v = parse_vector(obj, n)
    if any(isinstance(x, float) for x in v):
        raise SchemaError("points must be exact rationals")
    return v


# symmetric tensors ------------------------------------------------------------


def dump_sym2(s: Sym2Tensor) -> dict[str, Any]:
    exact = all(isinstance(x, Fraction) for x in s.entries)
    rows = s.packed_rows()
    return {
        "packing": PACKING,
        "n": s.n,
        "entries": [[fmt_rat(x) if exact else decimal(x) for x in r] for r in rows],
        "decimal": [[decimal(x) for x in r] for r in rows],
    }


def parse_sym2(obj) -> Sym2Tensor:
    if isinstance(obj, dict):
        if obj.get("packing", PACKING) != PACKING:
            raise SchemaError(f"unsupported packing {obj.get('packing')!r}")
        obj = obj.get("entries")
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise SchemaError("Sym2Tensor must be n arrays of n(n+1)/2 packed entries")
    n = len(obj)
    m = len(multisets(n, 2))
    if any(len(r) != m for r in obj):
        raise SchemaError(f"each packed block needs {m} entries for n={n}")
    return Sym2Tensor(n, tuple(parse_number(x) for r in obj for x in r))


def dump_packed_space(space: ProlongSpace) -> dict[str, Any]:
    m = len(multisets(space.n, space.degree + 1))
    return {
        "n": space.n,
        "degree": space.degree,
        "dim": space.dim,
        "packing": PACKING if space.degree == 1 else f"upper-multiset-{space.degree + 1}",
        "basis": [[[fmt_rat(x) for x in b[i * m : (i + 1) * m]] for i in range(space.n)] for b in space.basis],
    }


def dump_type_report(r: TypeReport) -> dict[str, Any]:
    return {"dims": list(r.dims), "verdict": r.verdict}


# polynomials ----------------------------------------------------------------


def parse_poly(obj, nvars: int) -> Polynomial:
    if isinstance(obj, (str, int)) and not isinstance(obj, bool):
        return Polynomial.const(nvars, parse_number(obj))
    if not isinstance(obj, list):
        raise SchemaError("polynomial must be an array of {coeff, exp} terms or a rational constant")
    terms: dict[tuple[int, ...], Fraction] = {}
    for t in obj:
        if not isinstance(t, dict) or "coeff" not in t or "exp" not in t:
            raise SchemaError("polynomial term needs 'coeff' and 'exp'")
        exp = t["exp"]
        if not isinstance(exp, list) or len(exp) != nvars or not all(isinstance(e, int) and e >= 0 for e in exp):
            raise SchemaError(f"exponent must be {nvars} non-negative integers")
        c = parse_number(t["coeff"])
        if isinstance(c, float):
            raise SchemaError("polynomial coefficients must be exact")
        key = tuple(exp)
        terms[key] = terms.get(key, 0) + c
    return Polynomial(nvars, terms)


def dump_poly(p: Polynomial) -> list[dict[str, Any]]:
    return [{"coeff": fmt_rat(c), "exp": list(e)} for e, c in sorted(p.terms.items())]


def parse_poly_matrix(obj) -> list[list[Polynomial]]:
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise SchemaError("metric field must be an array of row arrays of polynomials")
    n = len(obj)
    if any(len(r) != n for r in obj):
        raise SchemaError("metric field must be square")
    return [[parse_poly(e, n) for e in r] for r in obj]


# group / algebra objects ----------------------------------------------------


def parse_jet(obj) -> Jet2:
    if not isinstance(obj, dict):
        raise SchemaError("jet must be an object with 'a' and 's'")
    return Jet2(parse_matrix(field(obj, "a")), parse_sym2(field(obj, "s")))


def dump_jet(j: Jet2) -> dict[str, Any]:
    return {**matrix_fields("a", j.a), "s": dump_sym2(j.s)}


def parse_tag(obj) -> SubgroupTag:
    if not isinstance(obj, dict) or "tag" not in obj or "n" not in obj:
        raise SchemaError("subgroup tag needs 'tag' and 'n'")
    return SubgroupTag(str(obj["tag"]), int(obj["n"]), int(obj.get("q", 0)))


def parse_algebra(obj) -> LieSubalgebra:
    if not isinstance(obj, dict) or "name" not in obj:
        raise SchemaError("algebra description needs a 'name'")
    name = obj["name"]
    if name == "custom":
        basis = [parse_matrix(m) for m in _require(obj, "basis")]
        if not basis:
            raise SchemaError("custom algebra needs a non-empty basis")
        return builtin_algebra("custom", basis[0].rows, basis=basis)
    if "n" not in obj:
        raise SchemaError("algebra description needs 'n'")
    return builtin_algebra(name, int(obj["n"]), int(obj.get("q", 0)), parse_number(obj.get("c", 0)))
