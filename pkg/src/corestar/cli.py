"""Command-line surface: compute star-product coefficients, run verification
suites, and print generator commutator tables.  All I/O is JSON with rationals
as strings; exit codes are 0 success, 2 parse error, 3 validation error,
4 cost limit."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .errors import ValidationError, CostLimitExceeded
from .poly import ParseError, parse_poly, rat_to_str, mono_order_key
from .coresolution import Element, a_part, e_sub, e_is_zero
from .hochschild import evaluate_split
from .deformation import check_in_kernel_algebra, star
from .presets import (Preset, parse_config, build_preset, auto_cutoff,
                      reference_mu1, run_preset, star_drive)
from . import suites as suite_mod


# ---------------------------------------------------------------------------
# serialization helpers

def _group_elements_doc(preset: Preset) -> list:
    out = []
    for idx, M in enumerate(preset.group.elements):
        out.append({"index": idx,
                    "matrix": [[rat_to_str(v) for v in row] for row in M]})
    return out


def element_terms_doc(elem: Element) -> list:
    """Flat term list for a degree-0, p-free element, in canonical order."""
    rows = []
    for (gi, I), terms in sorted(elem.items()):
        if I:
            raise ValidationError("cannot serialize a form-valued coefficient")
        for m, c in sorted(terms.items(), key=lambda kv: mono_order_key(kv[0])):
            xe, pe = m
            if any(pe):
                raise ValidationError("cannot serialize a p-dependent coefficient")
            rows.append({"coeff": rat_to_str(c), "monomial": list(xe),
                         "group": gi})
    return rows


def element_from_terms_doc(dim: int, rows: list) -> Element:
    out: dict = {}
    for row in rows:
        key = (int(row["group"]), ())
        xe = tuple(int(e) for e in row["monomial"])
        if len(xe) != dim:
            raise ValidationError("monomial length does not match dimension")
        terms = out.setdefault(key, {})
        m = (xe, (0,) * dim)
        terms[m] = terms.get(m, Fraction(0)) + Fraction(row["coeff"])
    return {k: {m: c for m, c in v.items() if c} for k, v in out.items()
            if any(v.values())}


def parse_algebra_input(preset: Preset, src: str) -> Element:
    """Polynomial expression with an optional '#g<k>' group suffix."""
    gi = preset.group.identity_index
    body = src
    if "#" in src:
        body, _, tag = src.partition("#")
        tag = tag.strip()
        if not tag.startswith("g"):
            raise ParseError("group suffix must look like #g<k>",
                             pos=len(body) + 1)
        try:
            gi = int(tag[1:])
        except ValueError:
            raise ParseError("group suffix must look like #g<k>",
                             pos=len(body) + 1) from None
        if not 0 <= gi < len(preset.group.elements):
            raise ValidationError(
                f"group index {gi} out of range for a group of order "
                f"{len(preset.group.elements)}")
    pol = parse_poly(body, preset.cfg.dim)
    elem = {(gi, ()): dict(pol.terms)}
    check_in_kernel_algebra(elem)
    return elem


def _load_config(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"config is not valid JSON: {exc}",
                         pos=exc.pos) from exc
    return parse_config(raw)


def _emit(doc: dict, out_path: str | None) -> None:
    text = json.dumps(doc, indent=2)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


# ---------------------------------------------------------------------------
# compute

def compute_document(preset: Preset, a: Element, b: Element, order: int,
                     p_cutoff: int | None = None) -> dict:
    if p_cutoff is None:
        result, used = star_drive(preset, a, b, order, certify=True)
        stable = True
    else:
        result, used = star_drive(preset, a, b, order, p_cutoff=p_cutoff,
                                  certify=False)
        again, _ = star_drive(preset, a, b, order, p_cutoff=p_cutoff + 2,
                              certify=False)
        stable = result.coefficients == again.coefficients

    checks = {"inputs_in_kernel_algebra": True,
              "stable_under_cutoff_increase": stable}
    if order >= 1:
        ref = reference_mu1(preset, a, b)
        checks["order1_matches_reference"] = e_is_zero(
            e_sub(result.coefficients[1], ref))

    return {
        "preset": preset.cfg.preset,
        "order": order,
        "a": element_terms_doc(a),
        "b": element_terms_doc(b),
        "coefficients": [
            {"order": k, "terms": element_terms_doc(c)}
            for k, c in enumerate(result.coefficients)],
        "p_cutoff_used": used,
        "checks": checks,
        "group_elements": _group_elements_doc(preset),
    }


def cmd_compute(args) -> int:
    preset = build_preset(_load_config(args.config))
    a = parse_algebra_input(preset, args.a)
    b = parse_algebra_input(preset, args.b)
    doc = compute_document(preset, a, b, args.order, p_cutoff=args.p_cutoff)
    _emit(doc, args.out)
    return 0


# ---------------------------------------------------------------------------
# verify

def verify_document(preset: Preset, order: int, trials: int, seed: int,
                    which: str = "all", corrupt_sign: bool = False) -> dict:
    reports: dict = {}

    if which in ("cochain", "homotopy", "all"):
        # identity suites run on a deliberately generous jet cutoff so no
        # intermediate product is ever truncated; the flag check certifies it
        if which in ("cochain", "all"):
            ctx = preset.make_context(p_cutoff=26, overflow="flag")
            reports["cochain"] = suite_mod.cochain_suite(ctx, trials=trials,
                                                         seed=seed)
            if ctx.truncated:
                raise ValidationError("cochain suite overflowed its cutoff")
        if which in ("homotopy", "all"):
            ctx = preset.make_context(p_cutoff=10, overflow="flag")
            reports["homotopy"] = suite_mod.homotopy_suite(ctx, trials=trials,
                                                           seed=seed)

    if which in ("assoc", "reference", "all"):
        state = run_preset(preset, order, p_cutoff=auto_cutoff(3, order))
        if which in ("assoc", "all"):
            reports["assoc"] = suite_mod.assoc_suite(
                state, trials=trials, seed=seed, corrupt_sign=corrupt_sign)
        if which in ("reference", "all"):
            reports["reference"] = suite_mod.reference_suite(
                preset, state, trials=trials, seed=seed)

    all_passed = all(r.passed for group in reports.values()
                     for r in group.values())
    return {
        "preset": preset.cfg.preset,
        "order": order,
        "trials": trials,
        "seed": seed,
        "suites": {
            name: {"passed": all(r.passed for r in group.values()),
                   "identities": [r.as_json() for r in group.values()]}
            for name, group in reports.items()},
        "all_passed": all_passed,
        "group_elements": _group_elements_doc(preset),
    }


def cmd_verify(args) -> int:
    preset = build_preset(_load_config(args.config))
    doc = verify_document(preset, args.order, args.trials, args.seed,
                          which=args.suite, corrupt_sign=args.corrupt_sign)
    _emit(doc, args.out)
    return 0 if doc["all_passed"] else 1


# ---------------------------------------------------------------------------
# table

def table_document(preset: Preset, order: int) -> dict:
    def build(cutoff: int):
        state = run_preset(preset, order, p_cutoff=cutoff)
        ctx = state.ctx
        n = ctx.dim
        from .poly import p_xvar
        from .coresolution import e_from_poly
        rows = []
        for i in range(n):
            for j in range(n):
                xi = e_from_poly(ctx, p_xvar(n, i))
                xj = e_from_poly(ctx, p_xvar(n, j))
                sij = star(state, xi, xj)
                sji = star(state, xj, xi)
                entry = {"i": i + 1, "j": j + 1, "orders": []}
                for k in range(1, order + 1):
                    comm = e_sub(sij.coefficients[k], sji.coefficients[k])
                    entry["orders"].append(
                        {"order": k, "terms": element_terms_doc(comm)})
                rows.append(entry)
        return rows

    base = auto_cutoff(1, order)
    rows = build(base)
    if build(base + 2) != rows:
        raise ValidationError("commutator table failed to stabilize "
                              "under cutoff increase")
    return {
        "preset": preset.cfg.preset,
        "order": order,
        "p_cutoff_used": base,
        "table": rows,
        "group_elements": _group_elements_doc(preset),
    }


def cmd_table(args) -> int:
    preset = build_preset(_load_config(args.config))
    _emit(table_document(preset, args.order), args.out)
    return 0


# ---------------------------------------------------------------------------
# entry point

def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="corestar",
        description="Exact star-product coefficients for polynomial and "
                    "group-twisted polynomial algebras.")
    sub = top.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("compute", help="star-product coefficients of a pair")
    pc.add_argument("--config", required=True)
    pc.add_argument("--a", required=True)
    pc.add_argument("--b", required=True)
    pc.add_argument("--order", type=int, required=True)
    pc.add_argument("--out")
    pc.add_argument("--p-cutoff", type=int, dest="p_cutoff")
    pc.set_defaults(fn=cmd_compute)

    pv = sub.add_parser("verify", help="run randomized verification suites")
    pv.add_argument("--config", required=True)
    pv.add_argument("--order", type=int, required=True)
    pv.add_argument("--trials", type=int, default=10)
    pv.add_argument("--seed", type=int, default=0)
    pv.add_argument("--suite", default="all",
                    choices=["cochain", "homotopy", "assoc", "reference",
                             "all"])
    pv.add_argument("--out")
    pv.add_argument("--corrupt-sign", action="store_true",
                    dest="corrupt_sign", help=argparse.SUPPRESS)
    pv.set_defaults(fn=cmd_verify)

    pt = sub.add_parser("table", help="generator star-commutator table")
    pt.add_argument("--config", required=True)
    pt.add_argument("--order", type=int, required=True)
    pt.add_argument("--out")
    pt.set_defaults(fn=cmd_table)

    return top


def main(argv: list | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 3
    except CostLimitExceeded as exc:
        print(f"cost limit: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
