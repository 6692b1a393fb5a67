"""``gstruct <command>``: every operation over JSON on files or stdin/stdout.

Exit codes: 0 ok, 2 malformed request, 3 mathematical precondition failure
(degenerate metric, nonpositive volume, singular frame).
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Any, Callable

from . import connections as conn
from . import jets, prolong, sampling, structures
from .linalg import GStructError, PreconditionError, fmt_rat
from .serialize import (
    dump_jet,
    dump_packed_space,
    dump_sym2,
    dump_type_report,
    field,
    has,
    matrix_fields,
    parse_algebra,
    parse_jet,
    parse_matrix,
    parse_number,
    parse_point,
    parse_poly,
    parse_poly_matrix,
    parse_sym2,
    parse_tag,
    scalar_fields,
    vector_fields,
)

EXIT_OK, EXIT_SCHEMA, EXIT_PRECONDITION = 0, 2, 3


@dataclass(frozen=True)
class Options:
    tolerance: float = 1e-12
    k_max: int = prolong.DEFAULT_K_MAX
    seed: int = 0


@dataclass(frozen=True)
class CommandRequest:
    command: str
    payload: Any
    options: Options = Options()


@dataclass
class CommandResult:
    status: str
    data: Any = None
    diagnostics: list[str] = dc_field(default_factory=list)
    code: str | None = None

    @property
    def exit_code(self) -> int:
        if self.status == "ok":
            return EXIT_OK
        return EXIT_PRECONDITION if self.code == "precondition" else EXIT_SCHEMA

    def to_json(self) -> dict[str, Any]:
        out = {"status": self.status, "data": self.data, "diagnostics": self.diagnostics}
        if self.code is not None:
            out["code"] = self.code
        return out


def _check(ok: bool, certificate=None, residual=None, **extra) -> dict[str, Any]:
    return {"ok": ok, "certificate": certificate, "residual": residual, **extra}


def _metric_field(p) -> conn.PolyMetricField:
    q = p.get("q")
    return conn.PolyMetricField(parse_poly_matrix(field(p, "g")), None if q is None else int(q))


def _volume(p) -> structures.VolumeDensityValue:
    if has(p, "v2"):
        return structures.VolumeDensityValue.from_square(parse_number(field(p, "v2")))
    return structures.VolumeDensityValue.from_value(parse_number(field(p, "v")))


def exact_str_or_none(x):
    return None if x is None else fmt_rat(x)


# command handlers ------------------------------------------------------------


def cmd_prolong(p, opts: Options):
    g = parse_algebra(p)
    return dump_packed_space(prolong.kth_prolongation(g, int(p.get("k", 1))))


def cmd_type_order(p, opts: Options):
    return dump_type_report(prolong.finite_type_order(parse_algebra(p), int(p.get("k_max", opts.k_max))))


def cmd_co1_basis(p, opts: Options):
    n, q = int(field(p, "n")), int(p.get("q", 0))
    return dump_packed_space(prolong.co1_formula_basis(q, n - q))


def cmd_projective_basis(p, opts: Options):
    return dump_packed_space(prolong.projective_subspace(int(field(p, "n"))))


def cmd_jet_mul(p, opts: Options):
    return dump_jet(jets.jet2_mul(parse_jet(field(p, "x")), parse_jet(field(p, "y"))))


def cmd_jet_inv(p, opts: Options):
    return dump_jet(jets.jet2_inv(parse_jet(field(p, "x"))))


def cmd_member(p, opts: Options):
    v = jets.subgroup_member(parse_matrix(field(p, "a")), parse_tag(field(p, "tag")))
    cert = v.certificate
    return {"member": v.member, "certificate": fmt_rat(cert) if isinstance(cert, Fraction) else cert}


def cmd_factor(p, opts: Options):
    a = parse_matrix(field(p, "a"))
    s, c = jets.factor_sl_co(a, int(p.get("q", 0)))
    det_s = abs(s.det())
    return {
        **matrix_fields("s", s),
        **matrix_fields("c", c),
        **scalar_fields("abs_det_s", det_s),
        "within_tolerance": abs(float(det_s) - 1.0) <= opts.tolerance,
    }


def cmd_decompose(p, opts: Options):
    g = parse_matrix(field(p, "g"))
    q = p.get("q")
    mv = structures.MetricValue(g, None if q is None else int(q))
    rep, vol = structures.decompose_metric(mv)
    return {
        **matrix_fields("rep", rep.r),
        "class_exact": matrix_fields("c", rep.base)["c_exact"],
        "v": vol.v,
        "v_exact": exact_str_or_none(vol.exact),
        "v2": exact_str_or_none(vol.v2),
        "q": structures.metric_signature(g)[0] if g.is_exact else q,
    }


def cmd_recompose(p, opts: Options):
    if has(p, "class"):
        rep = structures.ConformalRep(parse_matrix(field(p, "class")))
    else:
        rep = parse_matrix(field(p, "rep"))
    g = structures.recompose_metric(rep, _volume(p))
    return matrix_fields("g", g)


def cmd_equivariant_value(p, opts: Options):
    value = structures.volume_equivariant_value(_volume(p), parse_matrix(field(p, "l")))
    return scalar_fields("value", value)


def cmd_levi_civita(p, opts: Options):
    g = _metric_field(p)
    x = parse_point(field(p, "x"), g.n)
    gamma = conn.levi_civita_at(g, x)
    return {"gamma": dump_sym2(gamma)}


def cmd_transform_connection(p, opts: Options):
    return {"gamma": dump_sym2(conn.connection_transform(parse_sym2(field(p, "gamma")), parse_jet(field(p, "jet"))))}


def cmd_projective_diff(p, opts: Options):
    g1, g2 = parse_sym2(field(p, "gamma1")), parse_sym2(field(p, "gamma2"))
    mu = conn.projective_difference(g1, g2)
    if mu is not None:
        return _check(True, vector_fields("mu", mu))
    n = g1.n
    cand = [t / (n + 1) for t in (g2 - g1).trace_form()]
    return _check(False, None, dump_sym2(conn.projective_shift(g1, cand) - g2))


def cmd_projective_shift(p, opts: Options):
    gamma = parse_sym2(field(p, "gamma"))
    return {"gamma": dump_sym2(conn.projective_shift(gamma, parse_point(field(p, "mu"), gamma.n)))}


def cmd_equiaffine(p, opts: Options):
    gamma = parse_sym2(field(p, "gamma"))
    vol = conn.PolyVolumeField(gamma.n, parse_poly(field(p, "v"), gamma.n))
    x = parse_point(field(p, "x"), gamma.n)
    rep, mu = conn.equiaffine_representative(gamma, vol, x)
    res = conn.volume_parallel_residual(rep, vol, x)
    return {"gamma": dump_sym2(rep), **vector_fields("mu", mu), **vector_fields("residual", res)}


def cmd_weyl_build(p, opts: Options):
    g = _metric_field(p)
    x = parse_point(field(p, "x"), g.n)
    theta = parse_point(field(p, "theta"), g.n)
    return {"gamma": dump_sym2(conn.weyl_connection_at(g, theta, x))}


def cmd_weyl_check(p, opts: Options):
    g = _metric_field(p)
    gamma = parse_sym2(field(p, "gamma"))
    x = parse_point(field(p, "x"), g.n)
    theta = conn.weyl_compatibility_check(gamma, g, x)
    nab = conn.metric_cov_deriv_at(gamma, g, x)
    if theta is not None:
        return _check(True, vector_fields("theta", theta))
    return _check(False, None, [[[fmt_rat(v) for v in r] for r in b] for b in nab])


def cmd_weyl_intersect(p, opts: Options):
    g = _metric_field(p)
    gamma = parse_sym2(field(p, "gamma"))
    x = parse_point(field(p, "x"), g.n)
    sol = conn.weyl_intersection_at(gamma, g, x)
    if sol is None:
        return _check(False)
    mu, theta = sol
    return _check(
        True,
        {**vector_fields("mu", mu), **vector_fields("theta", theta)},
        gamma=dump_sym2(conn.projective_shift(gamma, mu)),
    )


def cmd_closure_check(p, opts: Options):
    tag = parse_tag(field(p, "tag"))
    if has(p, "algebra"):
        g1 = prolong.first_prolongation(parse_algebra(field(p, "algebra")))
    else:
        g1 = prolong.first_prolongation(prolong.algebra_for_tag(tag))
    rng = random.Random(opts.seed)
    count = int(p.get("samples", 8))
    samples = [sampling.group_member(rng, tag) for _ in range(count)]
    rep = prolong.semidirect_closure_check(tag, g1, samples)
    return _check(
        rep.ok,
        {"checked": rep.checked, "samples": count, "dim_g1": g1.dim},
        [list(f) for f in rep.failures],
    )


COMMANDS: dict[str, Callable[[Any, Options], Any]] = {
    "prolong": cmd_prolong,
    "type-order": cmd_type_order,
    "co1-basis": cmd_co1_basis,
    "projective-basis": cmd_projective_basis,
    "jet-mul": cmd_jet_mul,
    "jet-inv": cmd_jet_inv,
    "member": cmd_member,
    "factor": cmd_factor,
    "decompose": cmd_decompose,
    "recompose": cmd_recompose,
    "equivariant-value": cmd_equivariant_value,
    "levi-civita": cmd_levi_civita,
    "transform-connection": cmd_transform_connection,
    "projective-diff": cmd_projective_diff,
    "projective-shift": cmd_projective_shift,
    "equiaffine": cmd_equiaffine,
    "weyl-build": cmd_weyl_build,
    "weyl-check": cmd_weyl_check,
    "weyl-intersect": cmd_weyl_intersect,
    "closure-check": cmd_closure_check,
}


def _unwrap(payload):
    # accept a bare payload, a {"command", "payload"} request, or a previous result envelope
    if isinstance(payload, dict):
        if "payload" in payload and "command" in payload:
            return payload["payload"]
        if payload.get("status") == "ok" and "data" in payload:
            return payload["data"]
    return payload


def run(request: CommandRequest) -> CommandResult:
    handler = COMMANDS.get(request.command)
    if handler is None:
        return CommandResult("error", None, [f"unknown command {request.command!r}"], "schema")
    try:
        data = handler(_unwrap(request.payload), request.options)
    except PreconditionError as exc:
        return CommandResult("error", None, [str(exc)], "precondition")
    except (GStructError, KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        return CommandResult("error", None, [f"{type(exc).__name__}: {exc}"], "schema")
    return CommandResult("ok", data)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gstruct", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--in", dest="infile", default="-", help="input JSON file, '-' for stdin")
    ap.add_argument("--out", dest="outfile", default="-", help="output JSON file, '-' for stdout")
    ap.add_argument("--tolerance", type=float, default=1e-12)
    ap.add_argument("--k-max", type=int, default=prolong.DEFAULT_K_MAX)
    ap.add_argument("--seed", type=int, default=0)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    opts = Options(args.tolerance, args.k_max, args.seed)
    try:
        text = sys.stdin.read() if args.infile == "-" else open(args.infile, encoding="utf-8").read()
        payload = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        result = CommandResult("error", None, [f"cannot read input: {exc}"], "schema")
    else:
        result = run(CommandRequest(args.command, payload, opts))
    out = json.dumps(result.to_json(), indent=1)
    if args.outfile == "-":
        print(out)
    else:
        with open(args.outfile, "w", encoding="utf-8") as fh:
            fh.write(out + "\n")
    if result.status != "ok":
        for d in result.diagnostics:
            print(f"gstruct: {d}", file=sys.stderr)
    return result.exit_code

