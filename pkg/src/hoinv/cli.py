"""Command-line front end.

    hoinv invariants compute --action FILE [--max-order Q] [--closure-depth D]
    hoinv invariants homs --presentation FILE
    hoinv invariants restrict --action FILE --subgroup FILE [--max-order Q]
    hoinv invariants bound --action FILE --presentation FILE [--max-order Q]
    hoinv comb diff|antidiff|order|fourier|invfourier --in FILE [--out FILE]
    hoinv comb check-pairing --in FILE [--tol 1e-9]
    hoinv modular periods --level 11 | residual --level 11 --samples 20 --tol 1e-6
    hoinv modular dims --genus G --max-order Q
    hoinv rerun --report FILE

``invariants``, ``comb`` and ``modular`` are also installed as standalone
commands. Exit status: 0 all checks pass, 1 some check fails, 2 missing
input, 3 wrong document kind, 4 invalid input, 5 unwritable output.
"""
from __future__ import annotations

import argparse
import dataclasses
import sys

from hoinv import comb as cb
from hoinv import invariants as inv
from hoinv import modular as md
from hoinv.errors import HoinvError, MalformedInputError
from hoinv.invariants import format_word
from hoinv.io import Report, RunConfig, emit_report, family_to_doc, from_doc, read_document, write_document

# role -> (flag, document kind) for each command
INPUTS = {
    "invariants compute": {"action": "action"},
    "invariants homs": {"presentation": "presentation"},
    "invariants restrict": {"action": "action", "subgroup": "subgroup"},
    "invariants bound": {"action": "action", "presentation": "presentation"},
    "comb diff": {"in": "polyexp"},
    "comb antidiff": {"in": "polyexp"},
    "comb order": {"in": "polyexp"},
    "comb fourier": {"in": "polyexp"},
    "comb invfourier": {"in": "comb"},
    "comb check-pairing": {"in": "polyexp"},
    "modular periods": {},
    "modular residual": {},
    "modular dims": {},
}


def _load(config: RunConfig, docs: dict, role: str):
    return from_doc(docs[role], INPUTS[config.command][role])


def _action(config: RunConfig, docs: dict) -> inv.ActionSpec:
    a = _load(config, docs, "action")
    if config.closure_depth is not None:
        a = dataclasses.replace(a, closure_depth=config.closure_depth)
    return a


def cmd_compute(config, docs):
    a = _action(config, docs)
    f = inv.invariants_filtration(a, config.max_order)
    rep = Report(config.to_dict(), inputs=docs)
    nested = all(f[q].contains(f[q - 1]) for q in range(1, f.max_order + 1))
    rep.add("filtration", {
        "dims": f.dims,
        "graded": inv.graded_dimensions(f),
        "stabilized_at": f.stabilized_at,
        "closure_depth": f.closure_depth,
        "closure_size": f.closure_size,
        "note": "parabolic closure is finite; spaces are supersets of the exact ones" if a.parabolic_words else "",
        "bases": [h.to_strings() for h in f.subspaces],
    }, nested)
    # graded pieces vanish past the stabilization point
    last = f.max_order if f.stabilized_at is None else min(f.max_order, f.stabilized_at)
    for q in range(1, last + 1):
        g = inv.order_lowering_map(a, f, q)
        rep.add(f"order_lowering[{q}]", {
            "source_dimension": g.source_dimension,
            "target_dimension": g.target_dimension,
            "matrices": {l: m.to_strings() for l, m in g.matrices.items()},
            "joint_kernel_dimension": g.joint_kernel_dimension,
            "additivity_defect": g.additivity_defect,
        }, g.injective and g.additivity_defect == 0)
    return rep


def cmd_homs(config, docs):
    p = _load(config, docs, "presentation")
    basis = inv.hom_space(p)
    rep = Report(config.to_dict(), inputs=docs)
    rep.add("hom_space", {
        "generators": p.generator_labels,
        "dimension": len(basis),
        "dimension_without_parabolic": len(inv.hom_space(p, use_parabolic=False)),
        "basis": [list(v) for v in basis],
    }, True)
    return rep


def cmd_restrict(config, docs):
    a = _action(config, docs)
    words = _load(config, docs, "subgroup")
    q = 5 if config.max_order is None else config.max_order
    r = inv.restriction_check(a, words, q)
    rep = Report(config.to_dict(), inputs=docs)
    rep.add("restriction", {
        "group_dims": r.group_dims,
        "subgroup_dims": r.subgroup_dims,
        "contained": r.contained,
        "graded_injective": r.graded_injective,
    }, r.passed)
    return rep


def cmd_bound(config, docs):
    a = _action(config, docs)
    p = _load(config, docs, "presentation")
    q = a.dimension if config.max_order is None else config.max_order
    b = inv.dimension_bound_check(a, p, q)
    rep = Report(config.to_dict(), inputs=docs)
    rep.add("relators_act_trivially", {"relators": [format_word(w) for w in p.relators]}, b.relators_act_trivially)
    rep.add("dimension_bound", {
        "hom_dimension": b.hom_dimension,
        "invariant_dimension": b.invariant_dimension,
        "graded": b.graded,
        "bounds": b.bounds,
        "holds": b.holds,
    }, b.passed)
    return rep


def _transform(fn):
    def handler(config, docs):
        return family_to_doc(fn(_load(config, docs, "in")))
    return handler


def cmd_order(config, docs):
    t = _load(config, docs, "in")
    rep = Report(config.to_dict(), inputs=docs)
    rep.add("annihilation_order", {"order": cb.annihilation_order(t)}, True)
    return rep


def cmd_pairing(config, docs):
    t = _load(config, docs, "in")
    tol = 1e-9 if config.tol is None else config.tol
    r = cb.gaussian_pairing_check(t, tol)
    rep = Report(config.to_dict(), inputs=docs)
    rep.add("gaussian_pairing", {
        "lhs": r.lhs, "rhs": r.rhs, "difference": r.difference,
        "tolerance": tol, "radius": r.radius, "panels": r.panels,
    }, r.passed)
    return rep


def _fixture(config):
    return md.load_fixture(11 if config.level is None else config.level)


def cmd_periods(config, docs):
    fx = _fixture(config)
    tol = 1e-8 if config.tol is None else config.tol
    m = md.DEFAULT_TRUNCATION if config.truncation is None else config.truncation
    r = md.periods_report(fx, m)
    rep = Report(config.to_dict(), inputs=docs)
    rep.add("fixture", {
        "level": fx.level, "genus": fx.genus,
        "generators": {l: g.rows for l, g in fx.generators.items()},
        "parabolic_words": {n: format_word(w) for n, w in fx.parabolic_words.items()},
    }, True)
    rep.add("periods", {"values": r.periods, "truncation": r.truncation, "tail_tolerance": md.TAIL_TOL}, True)
    rep.add("base_point_independence", r.base_point_spread, max(r.base_point_spread.values()) < tol)
    rep.add("additivity", r.additivity_defects, max(r.additivity_defects.values()) < tol)
    rep.add("parabolic_vanishing", r.parabolic_periods, max(r.parabolic_periods.values()) < 1e-10)
    return rep


def cmd_residual(config, docs):
    fx = _fixture(config)
    tol = 1e-6 if config.tol is None else config.tol
    n = 20 if config.samples is None else config.samples
    if n < 1:
        raise MalformedInputError("--samples must be >= 1")
    m = md.DEFAULT_TRUNCATION if config.truncation is None else config.truncation
    r = md.residual_report(fx, n, config.seed, m)
    rep = Report(config.to_dict(), inputs=docs)
    for name, e in r.residuals.items():
        rep.add(f"residual[{name}]", {
            "period": e.period, "residual": e.residual, "slash_defect": e.slash_defect,
            "base_point": e.base_point, "samples": e.samples,
        }, e.residual < tol)
    biggest = max(e.slash_defect for e in r.residuals.values())
    rep.add("order_one_witness", {"max_slash_defect": biggest, "threshold": 1e-3, "truncation": r.truncation},
            biggest > 1e-3)
    return rep


def cmd_dims(config, docs):
    g = 1 if config.genus is None else config.genus
    q = 12 if config.max_order is None else config.max_order
    table = [md.graded_dimension(g, k) for k in range(q + 1)]
    closed = [md.closed_form_dimension(g, k) for k in range(q + 1)]
    rep = Report(config.to_dict(), inputs=docs)
    rep.add("recurrence_vs_closed_form", {"recurrence": table, "closed_form": closed}, table == closed)
    if q >= 1:
        rep.add("first_order_dimension", {"d1": table[1], "2g^2-1": 2 * g * g - 1}, table[1] == 2 * g * g - 1)
    return rep


HANDLERS = {
    "invariants compute": cmd_compute,
    "invariants homs": cmd_homs,
    "invariants restrict": cmd_restrict,
    "invariants bound": cmd_bound,
    "comb diff": _transform(cb.shift_difference),
    "comb antidiff": _transform(cb.antidifference),
    "comb order": cmd_order,
    "comb fourier": _transform(cb.fourier_to_comb),
    "comb invfourier": _transform(cb.comb_to_polyexp),
    "comb check-pairing": cmd_pairing,
    "modular periods": cmd_periods,
    "modular residual": cmd_residual,
    "modular dims": cmd_dims,
}


def execute(config: RunConfig, docs: dict) -> int:
    result = HANDLERS[config.command](config, docs)
    if isinstance(result, Report):
        emit_report(result, config.out)
        return 0 if result.passed else 1
    write_document(result, config.out)
    return 0


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--seed", type=int, default=0, help="random seed, recorded in the report")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hoinv", description="Higher-order invariants toolkit")
    groups = parser.add_subparsers(dest="group", required=True)

    g = groups.add_parser("invariants", help="exact invariant filtrations")
    sub = g.add_subparsers(dest="cmd", required=True)
    p = sub.add_parser("compute", help="filtration, graded pieces and order-lowering maps")
    p.add_argument("--action", required=True)
    p.add_argument("--max-order", type=int)
    p.add_argument("--closure-depth", type=int)
    _common(p)
    p = sub.add_parser("homs", help="homomorphisms to C vanishing on parabolic words")
    p.add_argument("--presentation", required=True)
    _common(p)
    p = sub.add_parser("restrict", help="graded injectivity of restriction to a subgroup")
    p.add_argument("--action", required=True)
    p.add_argument("--subgroup", required=True)
    p.add_argument("--max-order", type=int)
    p.add_argument("--closure-depth", type=int)
    _common(p)
    p = sub.add_parser("bound", help="dim Gr_q <= h^q dim H_0")
    p.add_argument("--action", required=True)
    p.add_argument("--presentation", required=True)
    p.add_argument("--max-order", type=int)
    p.add_argument("--closure-depth", type=int)
    _common(p)

    g = groups.add_parser("comb", help="polynomial-exponential sums and delta combs")
    sub = g.add_subparsers(dest="cmd", required=True)
    for name in ("diff", "antidiff", "order", "fourier", "invfourier"):
        p = sub.add_parser(name)
        p.add_argument("--in", dest="input", required=True)
        _common(p)
    p = sub.add_parser("check-pairing", help="Parseval check against exp(-pi x^2)")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--tol", type=float)
    _common(p)

    g = groups.add_parser("modular", help="level-11 weight-2 numerics")
    sub = g.add_subparsers(dest="cmd", required=True)
    p = sub.add_parser("periods")
    p.add_argument("--level", type=int, default=11)
    p.add_argument("--truncation", type=int)
    p.add_argument("--tol", type=float)
    _common(p)
    p = sub.add_parser("residual")
    p.add_argument("--level", type=int, default=11)
    p.add_argument("--samples", type=int)
    p.add_argument("--truncation", type=int)
    p.add_argument("--tol", type=float)
    _common(p)
    p = sub.add_parser("dims")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--max-order", type=int, required=True)
    _common(p)

    p = groups.add_parser("rerun", help="re-run the configuration recorded in a report")
    p.add_argument("--report", required=True)
    p.add_argument("--out")
    return parser


_PATH_FLAGS = {"action": "action", "presentation": "presentation", "subgroup": "subgroup", "in": "input"}


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    command = f"{ns.group} {ns.cmd}"
    paths = {role: getattr(ns, _PATH_FLAGS[role]) for role in INPUTS[command]}
    return RunConfig(
        command=command,
        paths=paths,
        out=ns.out,
        tol=getattr(ns, "tol", None),
        max_order=getattr(ns, "max_order", None),
        closure_depth=getattr(ns, "closure_depth", None),
        truncation=getattr(ns, "truncation", None),
        samples=getattr(ns, "samples", None),
        genus=getattr(ns, "genus", None),
        level=getattr(ns, "level", None),
        seed=ns.seed,
    )


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        if ns.group == "rerun":
            old = from_doc(read_document(ns.report), "report")
            config = RunConfig.from_dict(old.config)
            config.out = ns.out
            return execute(config, old.inputs)
        config = config_from_args(ns)
        docs = {role: read_document(path) for role, path in config.paths.items()}
        return execute(config, docs)
    except HoinvError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


def _group_main(group: str):
    def entry(argv=None) -> int:
        return main([group] + list(sys.argv[1:] if argv is None else argv))
    return entry


invariants_main = _group_main("invariants")
comb_main = _group_main("comb")
modular_main = _group_main("modular")

if __name__ == "__main__":
    sys.exit(main())
