"""Command line entry point ``drs``.

Every subcommand builds one report ``{command, ok, result, reports?}``,
buffered and written once. Exit codes: 0 success, 1 usage or input error,
2 a failing verdict under ``--expect-hold``.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from types import SimpleNamespace
from typing import Sequence

from . import approx, fixtures, imgalg, latfca, magma, powgrp, quotient
from .audit import ClaimReport, UnknownClaim
from .documents import (DocumentError, emit_groupoid, groupoid_document, order_dot,
                        parse_groupoid, parse_info_table, parse_space, space_dot,
                        table_to_space, validate_report)
from .relcore import (NEIGHBORHOOD_KINDS, BoundExceeded, FiniteRelationSpace, SpaceError,
                      check_bound, classify, neighborhood)

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 is reserved for failing verdicts here.
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# -- inputs -------------------------------------------------------------------

def load_space(args) -> FiniteRelationSpace:
    if getattr(args, "info_table", None):
        if not args.attributes:
            raise UsageError("--info-table needs --attributes")
        table = parse_info_table(Path(args.info_table))
        return table_to_space(table, _split(args.attributes), name=Path(args.info_table).stem)
    ref = args.space
    if ref is None:
        raise UsageError("--space is required")
    if ref in fixtures.SPACE_FILES:
        return fixtures.space(ref)
    path = Path(ref)
    if path.exists():
        return parse_space(path, name=path.stem)
    by_file = {v: k for k, v in fixtures.SPACE_FILES.items()}
    if path.name in by_file:
        return fixtures.space(by_file[path.name])
    raise UsageError(f"no such space file or bundled fixture: {ref}")


def load_groupoid(ref: str):
    if ref in fixtures.GROUPOID_FILES:
        return fixtures.groupoid(ref)
    path = Path(ref)
    if path.exists():
        return parse_groupoid(path)
    by_file = {v: k for k, v in fixtures.GROUPOID_FILES.items()}
    if path.name in by_file:
        return fixtures.groupoid(by_file[path.name])
    raise UsageError(f"no such groupoid file or bundled fixture: {ref}")


def _split(text: str | None) -> list[str]:
    if not text:
        return []
    return [t.strip() for t in text.split(",") if t.strip()]


def _pairs(pairs) -> list[list[str]]:
    return [list(p) for p in pairs]


def _labels(space: FiniteRelationSpace, labels) -> list[str]:
    order = space.index
    return sorted(labels, key=order.__getitem__)


# -- subcommands --------------------------------------------------------------

def cmd_classify(args):
    space = load_space(args)
    prof = classify(space)
    result = {"space": space.name, "size": space.n, **prof.flags(),
              "witnesses": {k: list(v) for k, v in prof.witnesses.items()}}
    return result, [], []


def cmd_granules(args):
    space = load_space(args)
    table = {x: {k: _labels(space, neighborhood(space, x, k)) for k in NEIGHBORHOOD_KINDS}
             for x in space.universe}
    return {"space": space.name, "granules": table}, [], []


def cmd_approx(args):
    space = load_space(args)
    subset = _split(args.set)
    ops = approx.OPERATORS if args.op == "all" else [approx.operator_id(o) for o in _split(args.op)]
    values = {op: _labels(space, approx.approximate(space, subset, op)) for op in ops}
    return {"space": space.name, "set": _labels(space, subset), "values": values}, [], []


def cmd_groupoid(args):
    space = load_space(args)
    if args.action == "build":
        G = magma.build_updg(space)
        return {"space": space.name, "count": magma.count_updg(space),
                "groupoid": groupoid_document(G)}, [], []
    if args.action == "check":
        if not args.table:
            raise UsageError("groupoid check needs --table")
        bad = magma.realization_check(space, load_groupoid(args.table))
        return {"space": space.name, "violations": _pairs(bad)}, [], [not bad]
    reports = magma.bridge_audit(space, limit=args.limit)
    return {"space": space.name, "realizations": reports[0].sweep_size}, reports, []


ALGEBRA_SUITES = {"uua": imgalg.UUA_SUITE, "ua": imgalg.AP_SUITE, "ua*": imgalg.APP_SUITE}


def cmd_algebra(args):
    space = load_space(args)
    alg = imgalg.build_algebra(space, args.kind)
    reports = []
    if args.audit:
        ids = _split(args.claims) or ALGEBRA_SUITES[args.kind]
        reports = imgalg.audit([space], ids, enforce_hypothesis=not args.waive_hypothesis)
    return alg.to_json(), reports, []


def cmd_powgrp(args):
    space = load_space(args)
    G = load_groupoid(args.table) if args.table else magma.build_updg(space)
    ctx = powgrp.LiftedProductContext(space, G)
    result = {"space": space.name, "groupoid": groupoid_document(G)}
    if args.set:
        a, b = (_split(s) for s in args.set[:2]) if len(args.set) >= 2 else (None, None)
        if a is None:
            raise UsageError("powgrp needs two --set arguments for products")
        result["product"] = _labels(space, powgrp.lift_product(ctx, a, b))
        result["split"] = {w: _labels(space, powgrp.split_op(ctx, w, a, b)) for w in powgrp.SPLIT_OPS}
    reports = []
    if args.audit:
        reports = powgrp.audit([ctx], _split(args.claims) or None,
                               enforce_hypothesis=not args.waive_hypothesis)
    return result, reports, []


def cmd_quotient(args):
    space = load_space(args)
    q = quotient.Quotient(space, args.kind)
    result = {"space": space.name, "kind": args.kind, "classes": [c.to_json() for c in q]}
    if args.rpa_op:
        if args.kind != "standard":
            raise UsageError("--rpa-op works on the standard quotient")
        rpa = quotient.RoughParthoodAlgebra(space)
        operands = [rpa.quotient.class_of(space.mask(_split(s))) for s in args.set or []]
        result["rpa"] = {"op": quotient.rpa_op_id(args.rpa_op),
                         "operands": [c.to_json() for c in operands],
                         "value": rpa.apply(args.rpa_op, *operands).to_json()}
    reports = []
    if args.audit:
        reports = quotient.audit([space], _split(args.claims) or None,
                                 enforce_hypothesis=not args.waive_hypothesis)
    return result, reports, []


def cmd_lattice(args):
    space = load_space(args)
    op = approx.operator_id(args.op)
    L = latfca.image_lattice(space, op)
    result = {"space": space.name, "op": op, "lattice": L.to_json()}
    checks = []
    if args.cd:
        ok, wit = latfca.is_completely_distributive(L)
        result["completely_distributive"] = ok
        if wit:
            result["cd_witness"] = wit
        checks.append(ok)
    if args.tr23:
        ok, detail = latfca.tr23_condition(space)
        result["tr23"] = ok
        result["tr23_detail"] = ({f"{a},{b}": list(v) for (a, b), v in detail.items()}
                                 if ok else detail)
        checks.append(ok)
    for which in ("ei3", "ei4"):
        if getattr(args, which):
            ok, wit = latfca.ei_condition(space, which)
            result[which] = ok
            result["spatial"] = latfca.is_spatial(L)
            if wit:
                result[f"{which}_witness"] = wit
            checks.append(ok)
    if args.triagrp:
        ok, wit = latfca.triagrp_condition(space, magma.build_updg(space))
        result["triagrp"] = ok
        if wit:
            result["triagrp_witness"] = wit
        checks.append(ok)
    return result, [], checks


def cmd_fca(args):
    space = load_space(args)
    ctx = latfca.context_of(space)
    L = latfca.concept_lattice(ctx)
    cd = latfca.is_completely_distributive(L)[0]
    result = {"space": space.name,
              "concepts": [[_labels(space, e), _labels(space, i)] for e, i in latfca.concepts(ctx)],
              "completely_distributive": cd}
    checks = []
    if args.th40:
        ok, wit = latfca.th40_condition(ctx)
        result["th40"] = ok
        if wit:
            result["th40_witness"] = wit
        checks.append(ok)
    return result, [], checks


def _powgrp_context(space):
    prof = classify(space)
    if not prof.realizable:
        # every groupoid claim requires a realization; this stub makes them not_applicable
        return SimpleNamespace(space=space, profile=prof)
    return powgrp.LiftedProductContext.canonical(space)


AUDIT_MODULES = {
    "approx": (approx.REGISTRY, approx.Approximator, None),
    "imgalg": (imgalg.REGISTRY, imgalg.AlgebraBundle, None),
    "powgrp": (powgrp.REGISTRY, _powgrp_context, 6),
    "quotient": (quotient.REGISTRY, quotient.RoughParthoodAlgebra, 6),
    "latfca": (latfca.REGISTRY, latfca.LatticeContext, None),
}


def resolve_claims(ids: Sequence[str]) -> list[tuple[str, object]]:
    """``module:claim`` or a bare id looked up module by module."""
    out = []
    for cid in ids:
        if ":" in cid:
            mod, bare = cid.split(":", 1)
            if mod not in AUDIT_MODULES:
                raise UsageError(f"unknown audit module {mod!r}; choose from {sorted(AUDIT_MODULES)}")
            out.append((mod, AUDIT_MODULES[mod][0][bare]))
            continue
        for mod, (reg, _, _) in AUDIT_MODULES.items():
            if cid in reg:
                out.append((mod, reg[cid]))
                break
        else:
            raise UnknownClaim(f"unknown claim id {cid!r}")
    return out


def run_audit(space: FiniteRelationSpace, claims, mode="exhaustive", samples=2000, seed=0,
              enforce_hypothesis=True) -> list[ClaimReport]:
    contexts: dict = {}
    reports = []
    for mod, claim in claims:
        reg, factory, bound = AUDIT_MODULES[mod]
        if mode == "exhaustive":
            check_bound(space, bound)
        if mod not in contexts:
            contexts[mod] = factory(space)
        ctx = contexts[mod]
        profile = classify(space) if enforce_hypothesis else None
        reports.append(reg.run(ctx, claim, mode=mode, samples=samples, seed=seed,
                               space_name=space.name, profile=profile))
    return reports


def cmd_audit(args):
    space = load_space(args)
    ids = _split(args.claims)
    if not ids:
        raise UsageError("audit needs --claims")
    reports = run_audit(space, resolve_claims(ids), args.mode, args.samples, args.seed,
                        not args.waive_hypothesis)
    return {"space": space.name, "mode": args.mode}, reports, []


def cmd_export_dot(args):
    if args.what == "groupoid-order":
        G = load_groupoid(args.table) if args.table else magma.build_updg(load_space(args))
        return {"dot": order_dot(G)}, [], []
    space = load_space(args)
    if args.what == "space":
        return {"dot": space_dot(space)}, [], []
    if args.what == "concepts":
        L = latfca.concept_lattice(latfca.context_of(space))
    else:
        L = latfca.image_lattice(space, approx.operator_id(args.op))
    return {"dot": latfca.lattice_dot(L)}, [], []


def cmd_emit(args):
    from .documents import emit_space
    if args.table:
        return {"document": emit_groupoid(load_groupoid(args.table))}, [], []
    return {"document": emit_space(load_space(args), args.format)}, [], []


# -- parser ---------------------------------------------------------------------

def _space_args(p):
    p.add_argument("--space", help="space file (JSON or edge list) or bundled fixture name")
    p.add_argument("--info-table", help="information table JSON; needs --attributes")
    p.add_argument("--attributes", help="comma-separated attribute subset B")


def _common(p):
    p.add_argument("--json", action="store_true", help="emit the JSON report")
    p.add_argument("--expect-hold", action="store_true",
                   help="exit 2 when any verdict or requested check fails")


def _audit_flags(p):
    p.add_argument("--claims", help="comma-separated claim ids (default: the whole suite)")
    p.add_argument("--waive-hypothesis", action="store_true",
                   help="run claims even where their hypotheses fail")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="drs", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)

    def add(name, fn, help_text, space=True):
        p = sub.add_parser(name, help=help_text)
        if space:
            _space_args(p)
        _common(p)
        p.set_defaults(func=fn)
        return p

    add("classify", cmd_classify, "relation properties with witnesses")
    add("granules", cmd_granules, "neighbourhood granules of every element")
    p = add("approx", cmd_approx, "approximations of one subset")
    p.add_argument("--set", required=True, help="comma-separated labels; empty for ∅")
    p.add_argument("--op", default="all", help="operator id(s), comma-separated, or 'all'")

    p = add("groupoid", cmd_groupoid, "realizing groupoids")
    p.add_argument("action", choices=("build", "check", "bridge"))
    p.add_argument("--table", help="groupoid JSON or bundled name (for check)")
    p.add_argument("--limit", type=int, help="bridge: cap on enumerated realizations")

    p = add("algebra", cmd_algebra, "image algebras")
    p.add_argument("kind", choices=imgalg.KINDS)
    p.add_argument("--audit", action="store_true")
    _audit_flags(p)

    p = add("powgrp", cmd_powgrp, "lifted products and split operations")
    p.add_argument("--table", help="realizing groupoid (default: canonical)")
    p.add_argument("--set", action="append", help="operand subset; give twice")
    p.add_argument("--audit", action="store_true")
    _audit_flags(p)

    p = add("quotient", cmd_quotient, "rough equality classes and RPA operations")
    p.add_argument("--kind", default="standard", choices=quotient.KINDS)
    p.add_argument("--rpa-op", help=f"one of {', '.join(quotient.RPA_OPS)}")
    p.add_argument("--set", action="append", help="representative of an operand class")
    p.add_argument("--audit", action="store_true")
    _audit_flags(p)

    p = add("lattice", cmd_lattice, "image lattices and distributivity criteria")
    p.add_argument("--op", required=True, choices=latfca.LATTICE_OPS + tuple(approx.SYMBOLS.values()))
    p.add_argument("--cd", action="store_true")
    p.add_argument("--tr23", action="store_true")
    ei = p.add_mutually_exclusive_group()
    ei.add_argument("--ei3", action="store_true")
    ei.add_argument("--ei4", action="store_true")
    p.add_argument("--triagrp", action="store_true")

    p = add("fca", cmd_fca, "concept lattice of the complement context")
    p.add_argument("--th40", action="store_true")

    p = add("audit", cmd_audit, "run claims by id")
    p.add_argument("--mode", default="exhaustive", choices=("exhaustive", "sampled"))
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    _audit_flags(p)

    p = add("export-dot", cmd_export_dot, "Graphviz export")
    p.add_argument("--what", required=True, choices=("space", "groupoid-order", "lattice", "concepts"))
    p.add_argument("--op", default="tri_up", help="lattice operator")
    p.add_argument("--table", help="groupoid for groupoid-order")

    p = add("emit", cmd_emit, "re-emit a parsed document")
    p.add_argument("--format", default="json", choices=("json", "edges"))
    p.add_argument("--table", help="emit this groupoid instead of a space")
    return parser


# -- output -----------------------------------------------------------------------

def _text(value) -> str:
    if isinstance(value, str):
        return value
    return json.dumps(value, ensure_ascii=False)


def render_text(doc: dict) -> str:
    result = doc["result"]
    if set(result) == {"dot"}:
        return result["dot"]
    if set(result) == {"document"}:
        return result["document"]
    lines = []
    width = max((len(k) for k in result), default=0)
    for k, v in result.items():
        if isinstance(v, dict) and k in ("values", "granules"):
            lines.append(f"{k}:")
            w2 = max(len(x) for x in v) if v else 0
            lines += [f"  {x:<{w2}}  {_text(y)}" for x, y in v.items()]
        else:
            lines.append(f"{k + ':':<{width + 1}} {_text(v)}")
    reports = doc.get("reports") or []
    if reports:
        cw = max(len(r["claim"]) for r in reports)
        vw = max(len(r["verdict"]) for r in reports)
        for r in reports:
            tail = _text(r["witness"]) if r["witness"] is not None else r.get("note", "")
            lines.append(f"{r['claim']:<{cw}}  {r['verdict']:<{vw}}  {tail}".rstrip())
    return "\n".join(lines) + "\n"


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        result, reports, checks = args.func(args)
    except UsageError as exc:
        err.write(f"{exc}\n")
        return EXIT_USAGE
    except (DocumentError, SpaceError, BoundExceeded, UnknownClaim, magma.NotUpDirected,
            magma.PreconditionViolated, latfca.NotALattice, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        err.write(f"drs: error: {msg}\n")
        return EXIT_USAGE
    failed = any(r.failed for r in reports) or not all(checks)
    doc = {"command": args.command, "ok": not failed, "result": result}
    if reports:
        doc["reports"] = [r.to_json() for r in reports]
    if args.json:
        validate_report(doc)
        text = json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    else:
        text = render_text(doc)
    out.write(text)
    return EXIT_FAIL if args.expect_hold and failed else EXIT_OK


def main(argv: Sequence[str] | None = None) -> None:
    raise SystemExit(run(argv))


if __name__ == "__main__":
    main()
