"""Self-contained certificates and their replay verification.

Every verdict the batch front end emits carries a certificate that embeds the
entities it relates, so it can be re-verified later without the original
input files: ``verify_certificate`` recomputes the claim from the embedded
data and compares canonical serializations.
"""
from __future__ import annotations

from pathlib import Path

from .closure import closure_iterate, replay_witness, saturation_member
from .cauchy_isbell import (
    cauchy_completion,
    default_sample_grid,
    coyoneda,
    embedding_fully_faithful,
    isbell_adjunction_check,
    isbell_o,
    isbell_spec,
    is_small_projective,
)
from .core import opposite, product
from .documents import (
    canonical_json,
    category_doc,
    category_from_doc,
    functor_doc,
    module_doc,
    module_from_doc,
    set_functor_doc,
    set_functor_from_doc,
    weight_doc,
    weight_from_doc,
)
from .errors import ValidationError
from .promod import (
    ModMor,
    check_adjunction,
    compose_modules,
    has_right_adjoint,
    rext,
    rlift,
)
from .setfun import nat_trans, nt_compose
from .weighted import commutation_search, commutes_at, is_flat_finlim, weighted_colimit, weighted_limit


def _eq(a, b) -> bool:
    return canonical_json(a) == canonical_json(b)


def verify_certificate(cert: dict, base_dir: Path = Path(".")) -> tuple[bool, str]:
    """Replay one certificate; returns (ok, detail)."""
    kind = cert.get("kind")
    handler = _HANDLERS.get(kind)
    if handler is None:
        return False, f"unknown certificate kind {kind!r}"
    try:
        return handler(cert, base_dir)
    except ValidationError as exc:
        return False, f"embedded entity invalid: {exc}"


def _verify_natiso(cert: dict, base_dir: Path) -> tuple[bool, str]:
    src = set_functor_from_doc(cert["source"], base_dir)
    tgt = set_functor_from_doc(cert["target"], base_dir)
    nt = nat_trans(src, tgt, {o: dict(c) for o, c in cert["components"].items()})
    if not nt.is_iso():
        return False, "components are natural but not invertible"
    return True, "natural isomorphism replays"


def _verify_weighted(cert: dict, base_dir: Path) -> tuple[bool, str]:
    w = weight_from_doc(cert["weight"], base_dir)
    diagram = set_functor_from_doc(cert["diagram"], base_dir)
    op = weighted_limit if cert["kind"] == "weighted_limit" else weighted_colimit
    res = op(w, diagram)
    if list(res.carrier) != cert["carrier"]:
        return False, "carrier differs on replay"
    legs = {e: dict(m) for e, m in res.legs.items()}
    if not _eq(legs, cert["legs"]):
        return False, "legs differ on replay"
    return True, "universal object replays"


def _verify_commutation(cert: dict, base_dir: Path) -> tuple[bool, str]:
    phi = weight_from_doc(cert["colimit_weight"], base_dir)
    psi = weight_from_doc(cert["limit_weight"], base_dir)
    s = set_functor_from_doc(cert["instance"], base_dir)
    pc = product(opposite(phi.shape), psi.shape)
    if s.source != pc.cat:
        return False, "instance does not live on the expected product category"
    v = commutes_at(phi, psi, s, pc)
    claim = {"invertible": v.invertible, "lhs_size": v.lhs_size, "rhs_size": v.rhs_size}
    if not _eq(claim, cert["claim"]):
        return False, f"comparison differs on replay: {claim}"
    return True, "comparison replays"


def _verify_exhaustion(cert: dict, base_dir: Path) -> tuple[bool, str]:
    phi = weight_from_doc(cert["colimit_weight"], base_dir)
    psi = weight_from_doc(cert["limit_weight"], base_dir)
    out = commutation_search(phi, psi, cert["bound"])
    if not out.clean:
        return False, "replay found a counterexample"
    if out.candidates_checked != cert["candidates_checked"]:
        return False, f"candidate count differs: {out.candidates_checked}"
    return True, f"exhaustion at bound {cert['bound']} replays"


def _verify_flatness(cert: dict, base_dir: Path) -> tuple[bool, str]:
    w = weight_from_doc(cert["weight"], base_dir)
    v = is_flat_finlim(w)
    claim = {"ok": v.ok, "reason": v.reason, "witness": list(v.witness)}
    if not _eq(claim, cert["claim"]):
        return False, f"flatness differs on replay: {claim}"
    return True, "flatness verdict replays"


def _verify_adjunction(cert: dict, base_dir: Path) -> tuple[bool, str]:
    f = module_from_doc(cert["left"], base_dir)
    g = module_from_doc(cert["right"], base_dir)
    gf = compose_modules(g, f)
    fg = compose_modules(f, g)
    from .promod import hom_module

    one_a, one_b = hom_module(f.source), hom_module(f.target)
    eta = ModMor(one_a, gf.module, nat_trans(one_a.carrier, gf.module.carrier, cert["unit"]))
    eps = ModMor(fg.module, one_b, nat_trans(fg.module.carrier, one_b.carrier, cert["counit"]))
    rep = check_adjunction(f, g, eta, eps)
    if not rep.ok:
        return False, f"triangle identities fail on replay: {rep.failing}"
    return True, "adjunction certificate replays"


def _verify_adjunction_refutation(cert: dict, base_dir: Path) -> tuple[bool, str]:
    f = module_from_doc(cert["module"], base_dir)
    res = has_right_adjoint(f)
    if res.ok:
        return False, "replay found a right adjoint"
    if res.respect_failure != cert["respect_failure"]:
        return False, f"failure component differs: {res.respect_failure}"
    return True, "refutation replays"


def _verify_module_value(cert: dict, base_dir: Path) -> tuple[bool, str]:
    left = module_from_doc(cert["left"], base_dir)
    right = module_from_doc(cert["right"], base_dir)
    op = cert["operation"]
    if op == "compose":
        out = compose_modules(left, right).module
    elif op == "rlift":
        out = rlift(left, right).module
    elif op == "rext":
        out = rext(left, right).module
    else:
        return False, f"unknown module operation {op!r}"
    if not _eq(module_doc(out), cert["result"]):
        return False, "module value differs on replay"
    return True, f"{op} result replays"


def _verify_retract(cert: dict, base_dir: Path) -> tuple[bool, str]:
    from .setfun import yoneda

    b = category_from_doc(cert["base"], base_dir)
    phi = set_functor_from_doc(cert["presheaf"], base_dir)
    yb = yoneda(b).presheaves[cert["representable"]]
    s = nat_trans(phi, yb, {o: dict(c) for o, c in cert["section"].items()})
    r = nat_trans(yb, phi, {o: dict(c) for o, c in cert["retraction"].items()})
    rs = nt_compose(r, s)
    if any(v != k for comp in rs.components.values() for k, v in comp.items()):
        return False, "retraction does not split the section"
    return True, "retract witness replays"


def _verify_cauchy(cert: dict, base_dir: Path) -> tuple[bool, str]:
    b = category_from_doc(cert["base"], base_dir)
    res = cauchy_completion(b)
    claim = {
        "completion": category_doc(res.completion),
        "embedding": functor_doc(res.embedding),
        "comparison_fully_faithful": res.ff_ok,
        "embedding_fully_faithful": embedding_fully_faithful(res, b),
    }
    if not _eq(claim, cert["claim"]):
        return False, "completion differs on replay"
    return True, "completion replays"


def _verify_isbell_transform(cert: dict, base_dir: Path) -> tuple[bool, str]:
    b = category_from_doc(cert["base"], base_dir)
    inp = set_functor_from_doc(cert["input"], base_dir)
    if cert["direction"] == "o":
        out = isbell_o(b, inp).functor
    else:
        out = isbell_spec(b, inp).functor
    if not _eq(set_functor_doc(out), cert["output"]):
        return False, "transform differs on replay"
    return True, "transform replays"


def _verify_isbell_check(cert: dict, base_dir: Path) -> tuple[bool, str]:
    b = category_from_doc(cert["base"], base_dir)
    presheaves = default_sample_grid(b, cert["total"])
    copresheaves = [coyoneda(b)[x] for x in b.objects]
    chk = isbell_adjunction_check(b, presheaves, copresheaves)
    claim = {
        "ok": chk.ok,
        "pairs_checked": chk.pairs_checked,
        "unit_invertible": chk.unit_invertible,
        "counit_invertible": chk.counit_invertible,
    }
    if not _eq(claim, cert["claim"]):
        return False, "adjunction check differs on replay"
    return True, "adjunction check replays"


def _verify_closure(cert: dict, base_dir: Path) -> tuple[bool, str]:
    b = category_from_doc(cert["base"], base_dir)
    weights = [weight_from_doc(w, base_dir) for w in cert["weights"]]
    run = closure_iterate(weights, b, cert["depth"])
    claim = {
        "stage_sizes": run.stage_sizes,
        "fixpoint": run.fixpoint,
        "elements": [
            {
                "presheaf": set_functor_doc(el.presheaf),
                "stage": el.stage,
                "witness_kind": el.witness_kind,
                "representable": el.representable,
                "weight_index": el.weight_index,
                "diagram_values": list(el.diagram_values),
            }
            for el in run.elements
        ],
    }
    if not _eq(claim, cert["claim"]):
        return False, "closure differs on replay"
    for el in run.elements:
        if replay_witness(run, el) is None:
            return False, f"witness of stage-{el.stage} element does not replay"
    return True, "closure and all witnesses replay"


def _verify_membership(cert: dict, base_dir: Path) -> tuple[bool, str]:
    b = category_from_doc(cert["base"], base_dir)
    weights = [weight_from_doc(w, base_dir) for w in cert["weights"]]
    psi = set_functor_from_doc(cert["candidate"], base_dir)
    mv = saturation_member(psi, weights, b, cert["depth"])
    claim = {
        "member": mv.member,
        "stage": mv.depth,
        "witness_chain": list(mv.witness_chain),
        "note": mv.note,
    }
    if not _eq(claim, cert["claim"]):
        return False, "membership differs on replay"
    return True, "membership verdict replays"


def _verify_projectivity(cert: dict, base_dir: Path) -> tuple[bool, str]:
    b = category_from_doc(cert["base"], base_dir)
    phi = set_functor_from_doc(cert["presheaf"], base_dir)
    v = is_small_projective(b, phi)
    if v.ok != cert["claim"]["ok"]:
        return False, "projectivity differs on replay"
    return True, "projectivity verdict replays"


_HANDLERS = {
    "natural_isomorphism": _verify_natiso,
    "weighted_limit": _verify_weighted,
    "weighted_colimit": _verify_weighted,
    "commutation": _verify_commutation,
    "exhaustion": _verify_exhaustion,
    "flatness": _verify_flatness,
    "adjunction": _verify_adjunction,
    "adjunction_refutation": _verify_adjunction_refutation,
    "module_value": _verify_module_value,
    "retract": _verify_retract,
    "cauchy": _verify_cauchy,
    "isbell_transform": _verify_isbell_transform,
    "isbell_check": _verify_isbell_check,
    "closure": _verify_closure,
    "membership": _verify_membership,
    "projectivity": _verify_projectivity,
}
