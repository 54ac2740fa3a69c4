"""Command-line front end.

Reads a pair specification from a JSON document, runs decisions and
constructions, and prints a report.  Exit codes: 0 success (or decision
true), 1 input error, 2 numerical failure, 3 decision false / no complement,
4 invalid certificate.  JSON output has a fixed key order and prints floats
with 17 significant digits, so identical inputs give byte-identical output.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

import numpy as np

from . import gallery, kernel, relpos, witness
from .errors import (
    InputError,
    InvalidCertificateError,
    NoComplementError,
    NumericalFailure,
    SubcompError,
)
from .kernel import TOLERANCE_PROFILES, TolerancePolicy
from .subspace import Subspace

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NUMERICAL = 2
EXIT_FALSE = 3
EXIT_INVALID_CERT = 4

_PROFILE_ENV = "SUBCOMP_TOLERANCE_PROFILE"


# -- deterministic serialization --------------------------------------------


def _plain(value):
    """Convert numpy containers and dataclasses to plain Python values."""
    if isinstance(value, np.ndarray):
        return [_plain(row) for row in value.tolist()] if value.ndim > 1 else _plain(value.tolist())
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: _plain(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, dict):
        return {key: _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    return value


def _render_json(value, indent: int = 0) -> str:
    pad = "  " * indent
    child = "  " * (indent + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        parts = [f"{child}{json.dumps(str(key))}: {_render_json(item, indent + 1)}"
                 for key, item in value.items()]
        return "{\n" + ",\n".join(parts) + "\n" + pad + "}"
    if isinstance(value, list):
        if not value:
            return "[]"
        if all(not isinstance(item, (dict, list)) for item in value):
            return "[" + ", ".join(_render_json(item) for item in value) + "]"
        parts = [f"{child}{_render_json(item, indent + 1)}" for item in value]
        return "[\n" + ",\n".join(parts) + "\n" + pad + "]"
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "null"
    if isinstance(value, float):
        return f"{value:.17g}"
    if isinstance(value, int):
        return str(value)
    return json.dumps(value)


def _render_text(value, prefix: str = "") -> list:
    lines = []
    if isinstance(value, dict):
        for key, item in value.items():
            path = f"{prefix}.{key}" if prefix else str(key)
            lines.extend(_render_text(item, path))
    elif isinstance(value, list):
        if all(not isinstance(item, (dict, list)) for item in value):
            rendered = ", ".join(_render_json(item) for item in value)
            lines.append(f"{prefix}: [{rendered}]")
        else:
            for index, item in enumerate(value):
                lines.extend(_render_text(item, f"{prefix}[{index}]"))
    else:
        lines.append(f"{prefix}: {_render_json(value)}")
    return lines


def _emit(payload: dict, fmt: str, stream) -> None:
    payload = _plain(payload)
    if fmt == "json":
        stream.write(_render_json(payload) + "\n")
    else:
        stream.write("\n".join(_render_text(payload)) + "\n")


def _basis_rows(sub: Subspace) -> list:
    return [list(map(float, sub.basis[:, j])) for j in range(sub.dim)]


# -- input handling ----------------------------------------------------------


@dataclasses.dataclass
class PairInput:
    ambient_dim: int
    subspaces: dict
    involution: np.ndarray | None
    iso_map: np.ndarray | None
    bound: float | None
    epsilon: float | None
    tolerances: dict | None


def load_pair_input(path: str) -> PairInput:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            document = json.load(handle)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}")
    if not isinstance(document, dict):
        raise InputError("input document must be a JSON object")
    if "ambient_dim" not in document:
        raise InputError("input document needs an 'ambient_dim' field")
    ambient = document["ambient_dim"]
    if not isinstance(ambient, int) or ambient < 0:
        raise InputError("'ambient_dim' must be a nonnegative integer")
    raw_subspaces = document.get("subspaces", {})
    if not isinstance(raw_subspaces, dict):
        raise InputError("'subspaces' must be an object mapping names to spanning rows")
    subspaces = {}
    for name, rows in raw_subspaces.items():
        if not isinstance(rows, list):
            raise InputError(f"subspace {name!r} must be a list of spanning vectors")
        subspaces[name] = rows
    involution = document.get("S")
    iso_map = document.get("U_map")
    bound = document.get("C")
    epsilon = document.get("epsilon")
    tolerances = document.get("tolerances")
    if tolerances is not None and not isinstance(tolerances, dict):
        raise InputError("'tolerances' must be an object of named thresholds")
    return PairInput(
        ambient_dim=ambient,
        subspaces=subspaces,
        involution=None if involution is None else kernel.as_matrix(involution, "S"),
        iso_map=None if iso_map is None else kernel.as_matrix(iso_map, "U_map"),
        bound=None if bound is None else float(bound),
        epsilon=None if epsilon is None else float(epsilon),
        tolerances=tolerances,
    )


def resolve_tolerances(pair: PairInput | None, args) -> TolerancePolicy:
    profile_name = os.environ.get(_PROFILE_ENV, "default")
    if profile_name not in TOLERANCE_PROFILES:
        raise InputError(
            f"unknown tolerance profile {profile_name!r} in ${_PROFILE_ENV}; "
            f"choose from {sorted(TOLERANCE_PROFILES)}"
        )
    tol = TOLERANCE_PROFILES[profile_name]
    if pair is not None and pair.tolerances:
        allowed = {"rank_rel", "rank_abs", "angle_tol", "subspace_tol"}
        unknown = set(pair.tolerances) - allowed
        if unknown:
            raise InputError(f"unknown tolerance fields: {sorted(unknown)}")
        tol = dataclasses.replace(tol, **{k: float(v) for k, v in pair.tolerances.items()})
    if getattr(args, "tol_rank", None) is not None:
        tol = dataclasses.replace(tol, rank_abs=args.tol_rank)
    if getattr(args, "tol_angle", None) is not None:
        tol = dataclasses.replace(tol, angle_tol=args.tol_angle)
    return tol


def _build_subspaces(pair: PairInput, tol: TolerancePolicy, *names, required=("M", "N")) -> dict:
    out = {}
    for name in names:
        if name in pair.subspaces:
            out[name] = Subspace.from_spanning(pair.subspaces[name], pair.ambient_dim, tol)
        elif name in required:
            raise InputError(f"input document is missing required subspace {name!r}")
    return out


def _resolve_epsilon(args, pair: PairInput) -> float | None:
    if getattr(args, "epsilon", None) is not None:
        return args.epsilon
    return pair.epsilon


def _write_certificate(path: str, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(_render_json(_plain(payload)) + "\n")


def _complement_payload(command: str, m: Subspace, n: Subspace,
                        cert: witness.ComplementCertificate) -> dict:
    return {
        "command": command,
        "kind": "common-complement",
        "ambient_dim": m.ambient_dim,
        "dim_m": m.dim,
        "dim_n": n.dim,
        "dim_k": cert.complement.dim,
        "min_basis_sv_m": cert.min_basis_sv_m,
        "min_basis_sv_n": cert.min_basis_sv_n,
        "inverse_residual": cert.inverse_residual,
        "complement_rows": _basis_rows(cert.complement),
    }


def _complement_certificate_document(pair: PairInput, cert: witness.ComplementCertificate) -> dict:
    return {
        "kind": "common-complement",
        "ambient_dim": pair.ambient_dim,
        "subspaces": {
            "M": pair.subspaces["M"],
            "N": pair.subspaces["N"],
            "K": _basis_rows(cert.complement),
        },
        "details": {
            "min_basis_sv_m": cert.min_basis_sv_m,
            "min_basis_sv_n": cert.min_basis_sv_n,
            "inverse_residual": cert.inverse_residual,
        },
    }


# -- subcommand handlers -----------------------------------------------------


def _cmd_classify(args) -> tuple:
    pair = load_pair_input(args.input)
    tol = resolve_tolerances(pair, args)
    subs = _build_subspaces(pair, tol, "M", "N")
    report = relpos.classify(subs["M"], subs["N"], tol)
    dec = report.decomposition
    payload = {
        "command": "classify",
        "ambient_dim": pair.ambient_dim,
        "dim_m": subs["M"].dim,
        "dim_n": subs["N"].dim,
        "decomposition": {
            "dim_mn": dec.dim_mn,
            "dim_m_nperp": dec.dim_m_nperp,
            "dim_mperp_n": dec.dim_mperp_n,
            "dim_mperp_nperp": dec.dim_mperp_nperp,
            "generic_mult": dec.generic_mult,
            "angles": list(dec.angles),
            "gram_spectrum": list(dec.gram_spectrum),
        },
        "generic_position": report.generic_position,
        "generalized_generic": report.generalized_generic,
        "position_p_prime": report.position_p_prime,
        "equivalently_positioned": report.equivalently_positioned,
        "dims_equal": report.dims_equal,
        "reduced_dims_equal": report.reduced_dims_equal,
    }
    return payload, EXIT_OK


def _cmd_angles(args) -> tuple:
    pair = load_pair_input(args.input)
    tol = resolve_tolerances(pair, args)
    subs = _build_subspaces(pair, tol, "M", "N")
    m, n = subs["M"], subs["N"]
    payload = {
        "command": "angles",
        "angles": list(relpos.principal_angles(m, n)),
        "m_sided_angles": list(relpos.principal_angles_m_sided(m, n)),
        "sum_closedness_margin": relpos.sum_closedness_margin(m, n, tol),
    }
    return payload, EXIT_OK


def _cmd_decide(args) -> tuple:
    pair = load_pair_input(args.input)
    tol = resolve_tolerances(pair, args)
    subs = _build_subspaces(pair, tol, "M", "N")
    report = relpos.has_common_complement(subs["M"], subs["N"], tol,
                                          epsilon=_resolve_epsilon(args, pair))
    payload = {
        "command": "decide",
        "decision": report.decision,
        "epsilon": report.epsilon,
        "cross_checks": {
            "dims_equal": report.dims_equal,
            "equivalently_positioned": report.equivalently_positioned,
            "spectral_count_holds": report.spectral_check.holds,
            "cone_codimensions_equal": report.cone.ulc_m == report.cone.ulc_n,
            "reduced_dims_equal": report.reduced_dims_equal,
        },
        "spectral_counts": {
            "left": report.spectral_check.left_count,
            "right": report.spectral_check.right_count,
            "interior": report.spectral_check.spectral_count,
        },
        "cone": {
            "max_subspace_dim_m": report.cone.max_subspace_dim_m,
            "max_subspace_dim_n": report.cone.max_subspace_dim_n,
            "ulc_m": report.cone.ulc_m,
            "ulc_n": report.cone.ulc_n,
        },
    }
    return payload, EXIT_OK if report.decision else EXIT_FALSE


def _cmd_complement(args) -> tuple:
    pair = load_pair_input(args.input)
    tol = resolve_tolerances(pair, args)
    subs = _build_subspaces(pair, tol, "M", "N")
    cert = witness.common_complement(subs["M"], subs["N"], tol)
    payload = _complement_payload("complement", subs["M"], subs["N"], cert)
    if args.emit_certificate:
        _write_certificate(args.emit_certificate, _complement_certificate_document(pair, cert))
    return payload, EXIT_OK


def _cmd_certify(args) -> tuple:
    pair = load_pair_input(args.input)
    tol = resolve_tolerances(pair, args)
    subs = _build_subspaces(pair, tol, "M", "N", "K", required=("M", "N", "K"))
    cert = witness.verify_common_complement(subs["M"], subs["N"], subs["K"], tol)
    payload = _complement_payload("certify", subs["M"], subs["N"], cert)
    if args.emit_certificate:
        _write_certificate(args.emit_certificate, _complement_certificate_document(pair, cert))
    return payload, EXIT_OK


def _graph_form_payload(form: witness.GraphForm) -> dict:
    return {
        "dim_x1": form.dim_x1,
        "dim_x2": form.dim_x2,
        "operator_m": form.operator_m,
        "operator_n": form.operator_n,
        "change_of_basis": form.change_of_basis,
        "cond_change_of_basis": form.cond_change_of_basis,
    }


def _cmd_graph_form(args) -> tuple:
    pair = load_pair_input(args.input)
    tol = resolve_tolerances(pair, args)
    chosen = [name for name, flag in (("zero-form", args.zero_form),
                                      ("antisymmetric", args.antisymmetric),
                                      ("contraction", args.contraction)) if flag]
    if len(chosen) > 1:
        raise InputError(f"choose at most one graph-form variant, got {chosen}")
    subs = _build_subspaces(pair, tol, "M", "N", "K")
    m, n = subs["M"], subs["N"]
    payload = {"command": "graph-form"}
    if args.zero_form:
        form = witness.zero_graph_form(m, n, tol, subs.get("K"))
        payload["variant"] = "zero-form"
    elif args.antisymmetric:
        form = witness.antisymmetric_graph_form(m, n, tol, subs.get("K"))
        payload["variant"] = "antisymmetric"
    elif args.contraction:
        form, margin = witness.contraction_graph_form(m, n, tol)
        payload["variant"] = "contraction"
        payload["injectivity_margin"] = margin
    else:
        if "K" not in subs:
            raise InputError("graph-form without a variant flag needs subspace K in the input")
        form = witness.graph_pair_form(m, n, subs["K"], tol)
        payload["variant"] = "orthogonal-split"
    payload.update(_graph_form_payload(form))
    return payload, EXIT_OK


def _cmd_involution(args) -> tuple:
    pair = load_pair_input(args.input)
    tol = resolve_tolerances(pair, args)
    subs = _build_subspaces(pair, tol, "M", "N", "K")
    cert = witness.involution_for_pair(subs["M"], subs["N"], tol, subs.get("K"))
    payload = {
        "command": "involution",
        "ambient_dim": pair.ambient_dim,
        "lower_bound": cert.lower_bound,
        "lower_bound_attained": cert.lower_bound_attained,
        "involution_residual": cert.involution_residual,
        "exchange_residual": cert.exchange_residual,
        "dim_fixed_subspace": cert.fixed_subspace.dim,
        "dim_negated_subspace": cert.negated_subspace.dim,
        "involution": cert.involution,
    }
    if args.emit_certificate:
        _write_certificate(args.emit_certificate, {
            "kind": "involution",
            "ambient_dim": pair.ambient_dim,
            "subspaces": {"M": pair.subspaces["M"], "N": pair.subspaces["N"]},
            "S": cert.involution,
            "details": {
                "lower_bound": cert.lower_bound,
                "lower_bound_attained": cert.lower_bound_attained,
                "involution_residual": cert.involution_residual,
                "exchange_residual": cert.exchange_residual,
            },
        })
    return payload, EXIT_OK


def _cmd_from_involution(args) -> tuple:
    pair = load_pair_input(args.input)
    tol = resolve_tolerances(pair, args)
    subs = _build_subspaces(pair, tol, "M", "N")
    if pair.involution is None:
        raise InputError("from-involution needs a square matrix field 'S' in the input")
    cert = witness.complement_from_involution(subs["M"], subs["N"], pair.involution, tol)
    payload = _complement_payload("from-involution", subs["M"], subs["N"], cert)
    if args.emit_certificate:
        _write_certificate(args.emit_certificate, _complement_certificate_document(pair, cert))
    return payload, EXIT_OK


def _cmd_reduce(args) -> tuple:
    pair = load_pair_input(args.input)
    tol = resolve_tolerances(pair, args)
    subs = _build_subspaces(pair, tol, "M", "N")
    m1, n1, meet = witness.reduce_pair(subs["M"], subs["N"], tol)
    payload = {
        "command": "reduce",
        "dim_l": meet.dim,
        "dim_m1": m1.dim,
        "dim_n1": n1.dim,
        "l_rows": _basis_rows(meet),
        "m1_rows": _basis_rows(m1),
        "n1_rows": _basis_rows(n1),
    }
    return payload, EXIT_OK


def _cmd_ortho_complement_check(args) -> tuple:
    pair = load_pair_input(args.input)
    tol = resolve_tolerances(pair, args)
    subs = _build_subspaces(pair, tol, "M", "N")
    holds, form = witness.orthocomplement_common_complement(subs["M"], subs["N"], tol)
    payload = {"command": "ortho-complement-check", "holds": holds}
    if form is not None:
        payload.update(_graph_form_payload(form))
    return payload, EXIT_OK if holds else EXIT_FALSE


def _cmd_closed_companion(args) -> tuple:
    pair = load_pair_input(args.input)
    tol = resolve_tolerances(pair, args)
    subs = _build_subspaces(pair, tol, "M", "N", "K", "M1", required=("M", "N", "K", "M1"))
    n1, c_prime = witness.closed_companion(subs["M"], subs["N"], subs["K"], subs["M1"], tol)
    payload = {
        "command": "closed-companion",
        "dim_m1": subs["M1"].dim,
        "dim_n1": n1.dim,
        "c_prime": c_prime,
        "n1_rows": _basis_rows(n1),
    }
    return payload, EXIT_OK


def _cmd_example(args) -> tuple:
    tol = resolve_tolerances(None, args)
    example = gallery.build_example(args.name, args.level, args.variant, tol)
    payload = {
        "command": "example",
        "name": example.name,
        "level": example.level,
        "ambient_dim": example.ambient_dim,
        "subspace_dims": {name: sub.dim for name, sub in example.subspaces.items()},
        "diagnostics": example.diagnostics,
    }
    return payload, EXIT_OK


# -- argument parsing --------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _add_common(parser):
    parser.add_argument("--format", choices=("json", "text"), default="json")
    parser.add_argument("--epsilon", type=float, default=None,
                        help="epsilon for the spectral and cone checks")
    parser.add_argument("--tol-rank", type=float, default=None,
                        help="override the absolute rank floor")
    parser.add_argument("--tol-angle", type=float, default=None,
                        help="override the principal-angle resolution (radians)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="subcomp",
                     description="Decide, construct, and certify common complements "
                                 "of subspace pairs.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, needs_input=True, emit=False):
        p = sub.add_parser(name)
        if needs_input:
            p.add_argument("input", help="JSON pair description")
        _add_common(p)
        if emit:
            p.add_argument("--emit-certificate", metavar="PATH", default=None,
                           help="write a re-checkable certificate document")
        p.set_defaults(handler=handler)
        return p

    add("classify", _cmd_classify)
    add("angles", _cmd_angles)
    add("decide", _cmd_decide)
    add("complement", _cmd_complement, emit=True)
    add("certify", _cmd_certify, emit=True)
    graph = add("graph-form", _cmd_graph_form)
    graph.add_argument("--zero-form", action="store_true")
    graph.add_argument("--antisymmetric", action="store_true")
    graph.add_argument("--contraction", action="store_true")
    add("involution", _cmd_involution, emit=True)
    add("from-involution", _cmd_from_involution, emit=True)
    add("reduce", _cmd_reduce)
    add("ortho-complement-check", _cmd_ortho_complement_check)
    add("closed-companion", _cmd_closed_companion)
    example = add("example", _cmd_example, needs_input=False)
    example.add_argument("--name", required=True, choices=gallery.EXAMPLE_NAMES)
    example.add_argument("--level", required=True, type=int)
    example.add_argument("--variant", choices=("asymmetric", "symmetric"),
                         default="asymmetric",
                         help="index-window convention for the shift-triple example")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        payload, code = args.handler(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InvalidCertificateError as exc:
        print(f"invalid certificate: {exc}", file=sys.stderr)
        return EXIT_INVALID_CERT
    except NoComplementError as exc:
        print(f"no common complement: {exc}", file=sys.stderr)
        return EXIT_FALSE
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except SubcompError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    _emit(payload, args.format, sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
