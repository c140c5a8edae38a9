"""Batch front end: one subcommand, one canonical JSON report, honest exit codes.

Exit codes: 0 = computed (the verdict itself may be negative), 1 = invalid
input, 2 = resource cap exceeded. Reports are byte-identical for identical
inputs and flags; wall time is only recorded under --timing so the default
output stays deterministic.
"""
from __future__ import annotations

import argparse
import hashlib
import sys
import time
from pathlib import Path

from .cauchy_isbell import (
    cauchy_completion,
    coyoneda,
    default_sample_grid,
    embedding_fully_faithful,
    isbell_adjunction_check,
    isbell_o,
    isbell_spec,
)
from .certificates import verify_certificate
from .closure import closure_iterate, saturation_member
from .core import opposite, product
from .documents import (
    canonical_json,
    category_doc,
    category_from_doc,
    functor_doc,
    load_entity,
    load_json,
    module_doc,
    module_from_doc,
    set_functor_doc,
    set_functor_from_doc,
    weight_doc,
    weight_from_doc,
)
from .errors import ResourceCapError, ShapeMismatchError, ValidationError, resolve_cap
from .promod import compose_modules, has_right_adjoint, rext, rlift
from .weighted import commutation_search, commutes_at, is_flat_finlim, weighted_colimit, weighted_limit


def _digest(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        h.update(fh.read())
    return "sha256:" + h.hexdigest()


def _base_dir(path: str) -> Path:
    return Path(path).resolve().parent


class _Run:
    def __init__(self, args: argparse.Namespace, input_paths: list[str]):
        self.args = args
        self.report: dict = {
            "command": [args.cmd] + [p for p in input_paths],
            "inputs": {p: _digest(p) for p in input_paths},
            "caps": {
                "max_candidates": resolve_cap(args.max_candidates),
                "max_set_size": getattr(args, "max_size", None),
                "depth": getattr(args, "depth", None),
            },
            "result": {},
            "certificates": [],
            "stamps": {},
            "wall_time_ms": None,
        }
        self.started = time.monotonic()

    def finish(self, code: int) -> int:
        if self.args.timing:
            self.report["wall_time_ms"] = round((time.monotonic() - self.started) * 1000.0, 3)
        text = canonical_json(self.report)
        sys.stdout.write(text)
        if self.args.out:
            Path(self.args.out).write_text(text, encoding="utf-8")
        return code


def _cmd_validate(run: _Run) -> int:
    args = run.args
    doc = load_json(args.document)
    base = _base_dir(args.document)
    if args.certificate:
        results = []
        all_ok = True
        for i, cert in enumerate(doc.get("certificates", [])):
            ok, detail = verify_certificate(cert, base)
            results.append({"index": i, "kind": cert.get("kind"), "ok": ok, "detail": detail})
            all_ok = all_ok and ok
        run.report["result"] = {"certificates_verified": len(results), "all_ok": all_ok, "details": results}
        return run.finish(0)
    kind, _ = load_entity(doc, base, use_opposite=args.op)
    run.report["result"] = {"valid": True, "kind": kind}
    return run.finish(0)


def _cmd_limit(run: _Run, colimit: bool) -> int:
    args = run.args
    cap = args.max_candidates
    w = weight_from_doc(load_json(args.weight), _base_dir(args.weight), use_opposite=args.op)
    d = set_functor_from_doc(load_json(args.diagram), _base_dir(args.diagram), use_opposite=args.op)
    res = (weighted_colimit if colimit else weighted_limit)(w, d, cap=cap)
    kind = "weighted_colimit" if colimit else "weighted_limit"
    legs = {e: dict(m) for e, m in res.legs.items()}
    run.report["result"] = {"carrier": list(res.carrier), "size": len(res.carrier), "legs": legs}
    run.report["stamps"]["verified"] = res.verified
    run.report["certificates"].append(
        {
            "kind": kind,
            "weight": weight_doc(w),
            "diagram": set_functor_doc(d),
            "carrier": list(res.carrier),
            "legs": legs,
        }
    )
    return run.finish(0)


def _cmd_commute(run: _Run) -> int:
    args = run.args
    cap = args.max_candidates
    phi = weight_from_doc(load_json(args.colimit_weight), _base_dir(args.colimit_weight))
    psi = weight_from_doc(load_json(args.limit_weight), _base_dir(args.limit_weight))
    if args.at:
        s = set_functor_from_doc(load_json(args.at), _base_dir(args.at))
        pc = product(opposite(phi.shape), psi.shape)
        if s.source != pc.cat:
            raise ShapeMismatchError("instance does not live on product(opposite(K), L)")
        v = commutes_at(phi, psi, s, pc, cap=cap)
        claim = {"invertible": v.invertible, "lhs_size": v.lhs_size, "rhs_size": v.rhs_size}
        run.report["result"] = dict(claim)
        run.report["result"]["witness"] = v.witness
        run.report["certificates"].append(
            {
                "kind": "commutation",
                "colimit_weight": weight_doc(phi),
                "limit_weight": weight_doc(psi),
                "instance": set_functor_doc(s),
                "claim": claim,
            }
        )
        return run.finish(0)
    if not args.search:
        raise ValidationError(["commute needs --at or --search"])
    out = commutation_search(phi, psi, args.max_size, cap=cap)
    run.report["stamps"]["bound"] = out.bound
    run.report["stamps"]["candidates_checked"] = out.candidates_checked
    if out.clean:
        run.report["result"] = {"counterexample": None, "clean_at_bound": out.bound}
        run.report["certificates"].append(
            {
                "kind": "exhaustion",
                "colimit_weight": weight_doc(phi),
                "limit_weight": weight_doc(psi),
                "bound": out.bound,
                "candidates_checked": out.candidates_checked,
            }
        )
        return run.finish(0)
    claim = {
        "invertible": False,
        "lhs_size": out.verdict.lhs_size,
        "rhs_size": out.verdict.rhs_size,
    }
    run.report["result"] = {
        "counterexample": set_functor_doc(out.counterexample),
        "lhs_size": out.verdict.lhs_size,
        "rhs_size": out.verdict.rhs_size,
        "witness": out.verdict.witness,
    }
    run.report["certificates"].append(
        {
            "kind": "commutation",
            "colimit_weight": weight_doc(phi),
            "limit_weight": weight_doc(psi),
            "instance": set_functor_doc(out.counterexample),
            "claim": claim,
        }
    )
    return run.finish(0)


def _cmd_flat(run: _Run) -> int:
    args = run.args
    w = weight_from_doc(load_json(args.weight), _base_dir(args.weight), use_opposite=args.op)
    v = is_flat_finlim(w)
    claim = {"ok": v.ok, "reason": v.reason, "witness": list(v.witness)}
    run.report["result"] = dict(claim)
    run.report["certificates"].append({"kind": "flatness", "weight": weight_doc(w), "claim": claim})
    return run.finish(0)


def _cmd_adjoint(run: _Run) -> int:
    args = run.args
    cap = args.max_candidates
    doc = load_json(args.module)
    f = module_from_doc(doc, _base_dir(args.module))
    res = has_right_adjoint(f, cap=cap)
    if res.ok:
        run.report["result"] = {
            "has_right_adjoint": True,
            "right_adjoint": module_doc(res.right_adjoint),
            "hom_form_agrees": res.hom_form_agrees,
            "triangles": res.triangles.ok,
        }
        run.report["certificates"].append(
            {
                "kind": "adjunction",
                "left": module_doc(f),
                "right": module_doc(res.right_adjoint),
                "unit": {o: dict(c) for o, c in res.unit.nt.components.items()},
                "counit": {o: dict(c) for o, c in res.counit.nt.components.items()},
            }
        )
        return run.finish(0)
    run.report["result"] = {
        "has_right_adjoint": False,
        "respect_failure": res.respect_failure,
        "refutation": res.refutation,
        "hom_form_agrees": res.hom_form_agrees,
    }
    run.report["certificates"].append(
        {
            "kind": "adjunction_refutation",
            "module": module_doc(f),
            "respect_failure": res.respect_failure,
        }
    )
    return run.finish(0)


def _cmd_module_op(run: _Run, op: str) -> int:
    args = run.args
    cap = args.max_candidates
    left = module_from_doc(load_json(args.left), _base_dir(args.left))
    right = module_from_doc(load_json(args.right), _base_dir(args.right))
    if op == "compose":
        out = compose_modules(left, right, cap=cap).module
    elif op == "rlift":
        out = rlift(left, right, cap=cap).module
    else:
        out = rext(left, right, cap=cap).module
    doc = module_doc(out)
    run.report["result"] = {"module": doc, "sizes": {o: len(v) for o, v in out.carrier.on_objects.items()}}
    run.report["certificates"].append(
        {
            "kind": "module_value",
            "operation": op,
            "left": module_doc(left),
            "right": module_doc(right),
            "result": doc,
        }
    )
    return run.finish(0)


def _cmd_cauchy(run: _Run) -> int:
    args = run.args
    cap = args.max_candidates
    b = category_from_doc(load_json(args.category), _base_dir(args.category))
    if args.op:
        b = opposite(b)
    res = cauchy_completion(b, cap=cap)
    q = res.completion
    hom_sizes = {
        f"{x}→{y}": len(q.hom(x, y)) for x in q.objects for y in q.objects
    }
    claim = {
        "completion": category_doc(q),
        "embedding": functor_doc(res.embedding),
        "comparison_fully_faithful": res.ff_ok,
        "embedding_fully_faithful": embedding_fully_faithful(res, b),
    }
    run.report["result"] = {
        "objects": list(q.objects),
        "hom_sizes": hom_sizes,
        "comparison_fully_faithful": res.ff_ok,
        "embedding_fully_faithful": claim["embedding_fully_faithful"],
    }
    run.report["certificates"].append({"kind": "cauchy", "base": category_doc(b), "claim": claim})
    return run.finish(0)


def _cmd_isbell(run: _Run) -> int:
    args = run.args
    cap = args.max_candidates
    b = category_from_doc(load_json(args.category), _base_dir(args.category))
    if args.op:
        b = opposite(b)
    if args.presheaf:
        phi = set_functor_from_doc(load_json(args.presheaf), _base_dir(args.presheaf))
        out = isbell_o(b, phi, cap=cap).functor
        run.report["result"] = {"transform": "o", "output": set_functor_doc(out)}
        run.report["certificates"].append(
            {
                "kind": "isbell_transform",
                "base": category_doc(b),
                "direction": "o",
                "input": set_functor_doc(phi),
                "output": set_functor_doc(out),
            }
        )
        return run.finish(0)
    if args.copresheaf:
        psi = set_functor_from_doc(load_json(args.copresheaf), _base_dir(args.copresheaf))
        out = isbell_spec(b, psi, cap=cap).functor
        run.report["result"] = {"transform": "spec", "output": set_functor_doc(out)}
        run.report["certificates"].append(
            {
                "kind": "isbell_transform",
                "base": category_doc(b),
                "direction": "spec",
                "input": set_functor_doc(psi),
                "output": set_functor_doc(out),
            }
        )
        return run.finish(0)
    if not args.check:
        raise ValidationError(["isbell needs --presheaf, --copresheaf, or --check"])
    presheaves = default_sample_grid(b, args.total)
    copresheaves = [coyoneda(b)[x] for x in b.objects]
    chk = isbell_adjunction_check(b, presheaves, copresheaves, cap=cap)
    claim = {
        "ok": chk.ok,
        "pairs_checked": chk.pairs_checked,
        "unit_invertible": chk.unit_invertible,
        "counit_invertible": chk.counit_invertible,
    }
    run.report["result"] = dict(claim)
    run.report["result"]["naturality"] = chk.naturality_note
    run.report["certificates"].append(
        {"kind": "isbell_check", "base": category_doc(b), "total": args.total, "claim": claim}
    )
    return run.finish(0)


def _cmd_closure(run: _Run) -> int:
    args = run.args
    cap = args.max_candidates
    b = category_from_doc(load_json(args.category), _base_dir(args.category))
    if args.op:
        b = opposite(b)
    weights = [
        weight_from_doc(load_json(p), _base_dir(p)) for p in args.weights
    ]
    if args.member:
        psi = set_functor_from_doc(load_json(args.member), _base_dir(args.member))
        mv = saturation_member(psi, weights, b, args.depth, cap=cap)
        claim = {
            "member": mv.member,
            "stage": mv.depth,
            "witness_chain": list(mv.witness_chain),
            "note": mv.note,
        }
        run.report["result"] = dict(claim)
        run.report["stamps"]["depth"] = args.depth
        run.report["certificates"].append(
            {
                "kind": "membership",
                "base": category_doc(b),
                "weights": [weight_doc(w) for w in weights],
                "depth": args.depth,
                "candidate": set_functor_doc(psi),
                "claim": claim,
            }
        )
        return run.finish(0)
    runc = closure_iterate(weights, b, args.depth, cap=cap)
    elements = [
        {
            "presheaf": set_functor_doc(el.presheaf),
            "stage": el.stage,
            "witness_kind": el.witness_kind,
            "representable": el.representable,
            "weight_index": el.weight_index,
            "diagram_values": list(el.diagram_values),
        }
        for el in runc.elements
    ]
    claim = {"stage_sizes": runc.stage_sizes, "fixpoint": runc.fixpoint, "elements": elements}
    run.report["result"] = {
        "element_count": len(runc.elements),
        "stage_sizes": runc.stage_sizes,
        "fixpoint": runc.fixpoint,
        "elements": elements,
    }
    run.report["stamps"]["depth"] = args.depth
    run.report["stamps"]["fixpoint"] = runc.fixpoint
    run.report["certificates"].append(
        {
            "kind": "closure",
            "base": category_doc(b),
            "weights": [weight_doc(w) for w in weights],
            "depth": args.depth,
            "claim": claim,
        }
    )
    return run.finish(0)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="also write the report to this path")
    common.add_argument(
        "--timing", action="store_true", help="record wall time (breaks byte-stability)"
    )
    common.add_argument(
        "--max-candidates",
        type=int,
        default=None,
        help="enumeration cap (default 10^7; env KANWEIGH_MAX_CANDIDATES)",
    )

    parser = argparse.ArgumentParser(
        prog="kanweigh",
        description="Exact computations on finite categories: weighted (co)limits, "
        "profunctor algebra, Cauchy completion, Isbell conjugation, weight-class closure.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("validate", parents=[common], help="validate a document or re-verify report certificates")
    p.add_argument("document")
    p.add_argument("--certificate", action="store_true", help="treat the document as a report and replay its certificates")
    p.add_argument("--op", action="store_true", help="apply opposite() to loaded categories")

    for name in ("limit", "colimit"):
        p = sub.add_parser(name, parents=[common], help=f"weighted {name} of a set-valued diagram")
        p.add_argument("--weight", required=True)
        p.add_argument("--diagram", required=True)
        p.add_argument("--op", action="store_true")

    p = sub.add_parser("commute", parents=[common], help="limit/colimit interchange: one instance or bounded search")
    p.add_argument("--colimit-weight", required=True)
    p.add_argument("--limit-weight", required=True)
    p.add_argument("--at", help="bifunctor instance document")
    p.add_argument("--search", action="store_true")
    p.add_argument("--max-size", type=int, default=1)

    p = sub.add_parser("flat", parents=[common], help="filteredness of the category of elements")
    p.add_argument("--weight", required=True)
    p.add_argument("--op", action="store_true")

    p = sub.add_parser("adjoint", parents=[common], help="decide whether a module has a right adjoint")
    p.add_argument("--module", required=True)

    for name in ("mod-compose", "rlift", "rext"):
        p = sub.add_parser(name, parents=[common], help=f"module {name}")
        p.add_argument("left")
        p.add_argument("right")

    p = sub.add_parser("cauchy", parents=[common], help="idempotent-splitting completion")
    p.add_argument("--category", required=True)
    p.add_argument("--op", action="store_true")

    p = sub.add_parser("isbell", parents=[common], help="Isbell conjugation and its adjunction check")
    p.add_argument("--category", required=True)
    p.add_argument("--presheaf")
    p.add_argument("--copresheaf")
    p.add_argument("--check", action="store_true")
    p.add_argument("--total", type=int, default=4, help="sample grid size bound")
    p.add_argument("--op", action="store_true")

    p = sub.add_parser("closure", parents=[common], help="bounded closure of representables under colimit weights")
    p.add_argument("--category", required=True)
    p.add_argument("--weights", nargs="+", required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--member", help="presheaf to test for membership")
    p.add_argument("--op", action="store_true")

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    input_paths = [
        v
        for k in (
            "document",
            "weight",
            "diagram",
            "colimit_weight",
            "limit_weight",
            "at",
            "module",
            "left",
            "right",
            "category",
            "presheaf",
            "copresheaf",
            "member",
        )
        for v in [getattr(args, k, None)]
        if v
    ] + list(getattr(args, "weights", []) or [])

    try:
        run = _Run(args, input_paths)
    except OSError as exc:
        sys.stdout.write(canonical_json({"error": "input", "detail": str(exc)}))
        return 1

    try:
        if args.cmd == "validate":
            return _cmd_validate(run)
        if args.cmd == "limit":
            return _cmd_limit(run, colimit=False)
        if args.cmd == "colimit":
            return _cmd_limit(run, colimit=True)
        if args.cmd == "commute":
            return _cmd_commute(run)
        if args.cmd == "flat":
            return _cmd_flat(run)
        if args.cmd == "adjoint":
            return _cmd_adjoint(run)
        if args.cmd == "mod-compose":
            return _cmd_module_op(run, "compose")
        if args.cmd == "rlift":
            return _cmd_module_op(run, "rlift")
        if args.cmd == "rext":
            return _cmd_module_op(run, "rext")
        if args.cmd == "cauchy":
            return _cmd_cauchy(run)
        if args.cmd == "isbell":
            return _cmd_isbell(run)
        if args.cmd == "closure":
            return _cmd_closure(run)
        raise ValidationError([f"unknown command {args.cmd}"])
    except ValidationError as exc:
        run.report["result"] = {"valid": False, "violations": exc.violations}
        run.finish(1)
        return 1
    except ShapeMismatchError as exc:
        run.report["result"] = {"valid": False, "violations": [str(exc)]}
        run.finish(1)
        return 1
    except ResourceCapError as exc:
        run.report["result"] = {
            "error": "resource_cap",
            "cap": exc.cap_name,
            "limit": exc.limit,
            "required": exc.required,
        }
        run.finish(2)
        return 2
    except (OSError, ValueError) as exc:
        run.report["result"] = {"valid": False, "violations": [f"{type(exc).__name__}: {exc}"]}
        run.finish(1)
        return 1


if __name__ == "__main__":
    sys.exit(main())
