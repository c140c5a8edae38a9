"""Weighted limits and colimits, preservation, commutation, flatness.

A weight is a set-valued functor on a shape category together with a variance
tag. A limit weight ψ on D is used against diagrams D → target (the weighted
limit {ψ,T}); a colimit weight φ on D is used against diagrams on opposite(D)
(the weighted colimit φ∗S). Both are computed by the category-of-elements
reduction: {ψ,T} is the conical limit of T restricted along el(ψ) → D, and
φ∗S the conical colimit over el(φ)^op.

Targets are either finite sets or a presheaf category, in which case the
computation is pointwise over the base.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

from .core import FinCat, Functor, ProductCat, opposite, product
from .errors import InternalCheckError, ShapeMismatchError, check_cap
from .names import pair, tup
from .setfun import (
    ColimitData,
    NatTrans,
    SetFunctor,
    conical_colimit,
    conical_limit,
    elements,
    enumerate_set_functors,
    nat_set,
    nat_trans,
    natiso,
    restrict_along,
    set_functor,
)


@dataclass(frozen=True)
class Weight:
    """A set-valued functor with a fixed variance tag."""

    functor: SetFunctor
    variance: str  # "limit" | "colimit"

    def __post_init__(self):
        if self.variance not in ("limit", "colimit"):
            raise ShapeMismatchError(f"unknown variance {self.variance!r}")

    @property
    def shape(self) -> FinCat:
        return self.functor.source


@dataclass(frozen=True)
class PresheafDiagram:
    """A functor from a shape category into presheaves on a base category."""

    shape: FinCat
    base: FinCat
    at_obj: dict[str, SetFunctor]
    at_mor: dict[str, NatTrans]

    def at(self, o: str) -> SetFunctor:
        return self.at_obj[o]


def presheaf_diagram(
    shape: FinCat,
    base: FinCat,
    at_obj: dict[str, SetFunctor],
    at_mor: dict[str, NatTrans],
) -> PresheafDiagram:
    bop = opposite(base)
    bad = []
    for o in shape.objects:
        if o not in at_obj:
            bad.append(f"object {o}: no presheaf")
        elif at_obj[o].source != bop:
            bad.append(f"object {o}: value is not a presheaf on the base")
    for m in shape.mors:
        if m not in at_mor:
            bad.append(f"morphism {m}: no transformation")
    if bad:
        raise ShapeMismatchError("; ".join(bad))
    for m in shape.mors:
        nt = at_mor[m]
        if nt.source != at_obj[shape.src[m]] or nt.target != at_obj[shape.tgt[m]]:
            bad.append(f"morphism {m}: transformation endpoints differ from values")
    if bad:
        raise ShapeMismatchError("; ".join(bad))
    for o in shape.objects:
        i = shape.identities[o]
        if any(
            at_mor[i].components[c][x] != x
            for c in bop.objects
            for x in at_obj[o].at(c)
        ):
            bad.append(f"identity of {o} is not the identity transformation")
    for (g, f), gf in shape.table.items():
        comp = at_mor[gf].components
        for c in bop.objects:
            for x in at_obj[shape.src[f]].at(c):
                if at_mor[g].components[c][at_mor[f].components[c][x]] != comp[c][x]:
                    bad.append(f"composition not preserved on ({g},{f})")
                    break
    if bad:
        raise ShapeMismatchError("; ".join(bad))
    return PresheafDiagram(shape, base, dict(at_obj), dict(at_mor))


def yoneda_diagram(b: FinCat) -> PresheafDiagram:
    """The Yoneda embedding as a diagram B → presheaves on B."""
    from .setfun import yoneda

    y = yoneda(b)
    return PresheafDiagram(b, b, dict(y.presheaves), dict(y.on_morphisms))


Diagram = Union[SetFunctor, PresheafDiagram]


@dataclass
class WeightedResult:
    """A computed weighted (co)limit with its universal wedge.

    ``legs`` is indexed by the objects ⟨k,w⟩ of the category of elements of
    the weight. For limits in sets a leg maps each carrier element to its
    component in T(k); for colimits it maps each S(k) element to its class.
    For presheaf targets each leg is a natural transformation.
    """

    kind: str  # "limit" | "colimit"
    weight: Weight
    diagram: Diagram
    el: FinCat
    proj: Functor
    carrier: tuple[str, ...] | SetFunctor
    legs: dict[str, dict[str, str] | NatTrans]
    class_of: dict[str, str] | None = None  # colimits in sets: tagged -> class
    rep_member: dict[str, tuple[str, str]] | None = None  # class -> (el obj, elem)
    members: dict[str, dict[str, str]] | None = None  # limits in sets: tuple decode
    verified: str = ""

    @property
    def in_presheaves(self) -> bool:
        return isinstance(self.carrier, SetFunctor)

    def carrier_size(self) -> int:
        if isinstance(self.carrier, SetFunctor):
            return self.carrier.total_elements()
        return len(self.carrier)


def _eval_diagram_at(t: PresheafDiagram, c: str) -> SetFunctor:
    """Evaluate a presheaf diagram at one base object."""
    return SetFunctor(
        t.shape,
        {o: t.at_obj[o].at(c) for o in t.shape.objects},
        {m: dict(t.at_mor[m].components[c]) for m in t.shape.mors},
    )


def _verify_limit(w: Weight, t: SetFunctor, res: WeightedResult, cap: int | None) -> str:
    """Check the representation: carrier elements ↔ natural families ψ ⇒ T."""
    nats = nat_set(w.functor, t, cap=cap)
    if len(nats) != len(res.carrier):
        raise InternalCheckError(
            f"weighted limit universal property failed: {len(res.carrier)} elements"
            f" vs {len(nats)} natural families"
        )
    seen = set()
    for x in res.carrier:
        comp = {
            k: {v: res.legs[pair(k, v)][x] for v in w.functor.at(k)}
            for k in w.shape.objects
        }
        nt = NatTrans(w.functor, t, comp)
        seen.add(nt.name())
    if seen != {n.name() for n in nats}:
        raise InternalCheckError("weighted limit cone families do not match nat-set")
    return f"verified against {len(nats)} natural families"


def weighted_limit(
    w: Weight,
    t: Diagram,
    cap: int | None = None,
    verify: bool = True,
) -> WeightedResult:
    """The weighted limit {w, t} with counit legs, via the elements reduction."""
    if w.variance != "limit":
        raise ShapeMismatchError("weighted_limit needs a limit-variance weight")
    el, proj = elements(w.functor, "limit")
    if isinstance(t, SetFunctor):
        if t.source != w.shape:
            raise ShapeMismatchError("diagram source differs from weight shape")
        lim = conical_limit(restrict_along(t, proj), cap=cap)
        res = WeightedResult(
            "limit", w, t, el, proj, lim.carrier, dict(lim.legs), members=lim.members
        )
        if verify:
            res.verified = _verify_limit(w, t, res, cap)
        return res
    if t.shape != w.shape:
        raise ShapeMismatchError("diagram shape differs from weight shape")
    bop = opposite(t.base)
    pointwise = {c: weighted_limit(w, _eval_diagram_at(t, c), cap=cap, verify=verify) for c in bop.objects}
    on_obj = {c: pointwise[c].carrier for c in bop.objects}
    on_mor: dict[str, dict[str, str]] = {}
    for u in bop.mors:
        c, c2 = bop.src[u], bop.tgt[u]
        mapping = {}
        for name in pointwise[c].carrier:
            member = pointwise[c].members[name]
            image = {e: t.at_obj[proj.on_objects[e]].map(u)[member[e]] for e in el.objects}
            mapping[name] = tup(image[e] for e in el.objects)
        on_mor[u] = mapping
    carrier = set_functor(bop, on_obj, on_mor)
    legs: dict[str, NatTrans] = {}
    for e in el.objects:
        k = proj.on_objects[e]
        legs[e] = nat_trans(
            carrier,
            t.at_obj[k],
            {
                c: {name: pointwise[c].members[name][e] for name in pointwise[c].carrier}
                for c in bop.objects
            },
        )
    note = "; ".join(f"{c}: {pointwise[c].verified}" for c in bop.objects if pointwise[c].verified)
    return WeightedResult("limit", w, t, el, proj, carrier, legs, verified=note)


def _verify_colimit(
    w: Weight, s: SetFunctor, res: WeightedResult, test_sizes=(2,), cap: int | None = None
) -> str:
    """Check cocones to small test sets biject with functions out of the carrier."""
    import itertools as _it

    from .errors import check_cap

    el, proj = res.el, res.proj
    for n in test_sizes:
        raw = 1
        for e in el.objects:
            raw *= max(n ** len(s.at(proj.on_objects[e])), 1)
            check_cap("max_candidates", raw, cap)
        xset = tuple(str(i) for i in range(n))
        count = 0

        def families(i: int, acc: dict):
            nonlocal count
            if i == len(el.objects):
                count += 1
                return
            e = el.objects[i]
            dom = s.at(proj.on_objects[e])
            for choice in _it.product(xset, repeat=len(dom)):
                acc[e] = dict(zip(dom, choice))
                ok = True
                for m in el.nonid_mors:
                    a, b = el.src[m], el.tgt[m]
                    if a in acc and b in acc and (a == e or b == e):
                        step = s.map(proj.on_morphisms[m])
                        if any(acc[b][step[x]] != acc[a][x] for x in s.at(proj.on_objects[a])):
                            ok = False
                            break
                if ok:
                    families(i + 1, acc)
                acc.pop(e, None)

        families(0, {})
        expected = n ** len(res.carrier)
        if count != expected:
            raise InternalCheckError(
                f"weighted colimit universal property failed at test size {n}: "
                f"{count} cocones vs {expected} functions"
            )
    return f"verified against cocones to test sets of sizes {list(test_sizes)}"


def weighted_colimit(
    w: Weight,
    s: Diagram,
    cap: int | None = None,
    verify: bool = True,
) -> WeightedResult:
    """The weighted colimit w∗s with unit legs, via the elements reduction."""
    if w.variance != "colimit":
        raise ShapeMismatchError("weighted_colimit needs a colimit-variance weight")
    elop, projop = elements(w.functor, "colimit")
    kop = opposite(w.shape)
    if isinstance(s, SetFunctor):
        if s.source != kop:
            raise ShapeMismatchError("diagram source is not the opposite of the weight shape")
        col = conical_colimit(restrict_along(s, projop))
        res = WeightedResult(
            "colimit", w, s, elop, projop, col.carrier, dict(col.legs),
            class_of=dict(col.class_of), rep_member=dict(col.rep_member),
        )
        if verify:
            res.verified = _verify_colimit(w, s, res, cap=cap)
        return res
    if s.shape != kop:
        raise ShapeMismatchError("diagram shape is not the opposite of the weight shape")
    bop = opposite(s.base)
    pointwise = {c: weighted_colimit(w, _eval_diagram_at(s, c), cap=cap, verify=verify) for c in bop.objects}
    on_obj = {c: pointwise[c].carrier for c in bop.objects}
    on_mor: dict[str, dict[str, str]] = {}
    for u in bop.mors:
        c, c2 = bop.src[u], bop.tgt[u]
        mapping = {}
        for cls in pointwise[c].carrier:
            e, x = pointwise[c].rep_member[cls]
            k = projop.on_objects[e]
            moved = s.at_obj[k].map(u)[x]
            mapping[cls] = pointwise[c2].class_of[pair(e, moved)]
        on_mor[u] = mapping
    carrier = set_functor(bop, on_obj, on_mor)
    legs: dict[str, NatTrans] = {}
    for e in elop.objects:
        k = projop.on_objects[e]
        legs[e] = nat_trans(
            s.at_obj[k],
            carrier,
            {
                c: {x: pointwise[c].class_of[pair(e, x)] for x in s.at_obj[k].at(c)}
                for c in bop.objects
            },
        )
    note = "; ".join(f"{c}: {pointwise[c].verified}" for c in bop.objects if pointwise[c].verified)
    return WeightedResult("colimit", w, s, elop, projop, carrier, legs, verified=note)


@dataclass(frozen=True)
class TargetFunctor:
    """A functor out of the ambient target, given by callables on values.

    ``on_object`` maps a carrier (a tuple of element names, or a presheaf) to
    a new carrier; ``on_morphism`` maps a function between carriers (a dict,
    or a natural transformation) to a function between the images.
    """

    label: str
    on_object: Callable
    on_morphism: Callable  # (mapping, dom_carrier, cod_carrier) -> mapping


def identity_target() -> TargetFunctor:
    return TargetFunctor("identity", lambda a: a, lambda f, dom, cod: f)


def evaluation_target(b: str) -> TargetFunctor:
    """Evaluation of presheaves at a base object b."""
    return TargetFunctor(
        f"evaluation@{b}",
        lambda p: p.at(b),
        lambda alpha, dom, cod: dict(alpha.components[b]),
    )


def hom_target(xs: tuple[str, ...]) -> TargetFunctor:
    """The covariant hom functor Fun(xs, -) on finite sets."""
    from .setfun import fun_set

    def on_object(a):
        return fun_set(xs, a)[0]

    def on_morphism(f, dom, cod):
        names_dom, decode_dom = fun_set(xs, dom)
        from .names import fun as fun_name

        return {
            n: fun_name({x: f[v] for x, v in decode_dom[n].items()}, xs)
            for n in names_dom
        }

    return TargetFunctor(f"hom({len(xs)},-)", on_object, on_morphism)


def nat_hom_target(a: SetFunctor, cap: int | None = None) -> TargetFunctor:
    """The hom functor Nat(a, -) out of the presheaf category."""

    def on_object(p: SetFunctor):
        return tuple(n.name() for n in nat_set(a, p, cap=cap))

    def on_morphism(alpha: NatTrans, dom: SetFunctor, cod: SetFunctor):
        from .setfun import nt_compose

        out = {}
        for n in nat_set(a, dom, cap=cap):
            out[n.name()] = nt_compose(alpha, n).name()
        return out

    return TargetFunctor("nat-hom", on_object, on_morphism)


@dataclass
class PreservationVerdict:
    ok: bool
    functor: str
    transported_size: int
    fresh_size: int
    comparison: dict[str, str]
    witness: str = ""


def preserves(tf: TargetFunctor, inst: WeightedResult, cap: int | None = None) -> PreservationVerdict:
    """Does the functor send the computed (co)limit to a (co)limit again?

    The transported wedge induces a canonical map against the freshly computed
    universal object; the verdict is its bijectivity, with a witness otherwise.
    """
    w = inst.weight
    el, proj = inst.el, inst.proj
    if isinstance(inst.diagram, SetFunctor):
        diag = inst.diagram
        new_diag = set_functor(
            diag.source,
            {o: tf.on_object(diag.at(o)) for o in diag.source.objects},
            {
                m: tf.on_morphism(diag.map(m), diag.at(diag.source.src[m]), diag.at(diag.source.tgt[m]))
                for m in diag.source.mors
            },
        )
        fx = tf.on_object(inst.carrier)
        legs_t = {
            e: tf.on_morphism(
                inst.legs[e],
                inst.carrier if inst.kind == "limit" else diag.at(proj.on_objects[e]),
                diag.at(proj.on_objects[e]) if inst.kind == "limit" else inst.carrier,
            )
            for e in el.objects
        }
    else:
        diag = inst.diagram
        new_diag = set_functor(
            diag.shape,
            {o: tf.on_object(diag.at_obj[o]) for o in diag.shape.objects},
            {
                m: tf.on_morphism(
                    diag.at_mor[m], diag.at_obj[diag.shape.src[m]], diag.at_obj[diag.shape.tgt[m]]
                )
                for m in diag.shape.mors
            },
        )
        fx = tf.on_object(inst.carrier)
        legs_t = {}
        for e in el.objects:
            leg = inst.legs[e]
            legs_t[e] = tf.on_morphism(leg, leg.source, leg.target)

    if inst.kind == "limit":
        fresh = weighted_limit(w, new_diag, cap=cap, verify=False)
        comparison = {}
        image = set()
        for z in fx:
            name = tup(legs_t[e][z] for e in el.objects)
            if name not in fresh.members:
                return PreservationVerdict(
                    False, tf.label, len(fx), len(fresh.carrier), comparison,
                    witness=f"transported cone of {z} is not a limit tuple",
                )
            comparison[z] = name
            image.add(name)
        if len(image) != len(fx):
            return PreservationVerdict(
                False, tf.label, len(fx), len(fresh.carrier), comparison,
                witness="canonical comparison not injective",
            )
        if len(image) != len(fresh.carrier):
            missing = next(n for n in fresh.carrier if n not in image)
            return PreservationVerdict(
                False, tf.label, len(fx), len(fresh.carrier), comparison,
                witness=f"competing cone {missing} not induced",
            )
        return PreservationVerdict(True, tf.label, len(fx), len(fresh.carrier), comparison)

    fresh = weighted_colimit(w, new_diag, cap=cap, verify=False)
    comparison = {}
    image = set()
    for cls in fresh.carrier:
        e, x = fresh.rep_member[cls]
        val = legs_t[e][x]
        comparison[cls] = val
        image.add(val)
    # well-definedness across the whole quotient
    for e in el.objects:
        k = proj.on_objects[e]
        for x in new_diag.at(k):
            cls = fresh.class_of[pair(e, x)]
            if legs_t[e][x] != comparison[cls]:
                return PreservationVerdict(
                    False, tf.label, len(fx), len(fresh.carrier), comparison,
                    witness=f"transported cocone not constant on class {cls}",
                )
    if len(image) != len(fresh.carrier):
        return PreservationVerdict(
            False, tf.label, len(fx), len(fresh.carrier), comparison,
            witness="canonical comparison not injective",
        )
    if len(image) != len(fx):
        missing = next(z for z in fx if z not in image)
        return PreservationVerdict(
            False, tf.label, len(fx), len(fresh.carrier), comparison,
            witness=f"element {missing} not reached by the transported cocone",
        )
    return PreservationVerdict(True, tf.label, len(fx), len(fresh.carrier), comparison)


@dataclass
class ComparisonVerdict:
    """The canonical comparison between a colimit of limits and a limit of colimits."""

    invertible: bool
    lhs_size: int
    rhs_size: int
    forward: dict[str, str]
    inverse: dict[str, str] | None
    witness: str = ""


def commutes_at(
    phi: Weight,
    psi: Weight,
    s: SetFunctor,
    pc: ProductCat,
    cap: int | None = None,
) -> ComparisonVerdict:
    """Build both sides of the interchange for one bifunctor S and compare.

    ``s`` lives on product(opposite(K), L) where K is the colimit weight's
    shape and L the limit weight's shape.
    """
    if phi.variance != "colimit" or psi.variance != "limit":
        raise ShapeMismatchError("commutes_at needs (colimit weight, limit weight)")
    k, l = phi.shape, psi.shape
    if pc.left != opposite(k) or pc.right != l or s.source != pc.cat:
        raise ShapeMismatchError("S must live on product(opposite(K), L)")
    kop = opposite(k)

    lims = {}
    for ko in k.objects:
        sk = SetFunctor(
            l,
            {lo: s.at(pc.obj_name[(ko, lo)]) for lo in l.objects},
            {m: dict(s.map(pc.mor_name[(k.identities[ko], m)])) for m in l.mors},
        )
        lims[ko] = weighted_limit(psi, sk, cap=cap, verify=False)
    on_mor = {}
    for u in kop.mors:
        k1, k2 = kop.src[u], kop.tgt[u]
        el_psi_objs = lims[k1].el.objects
        lproj = lims[k1].proj.on_objects
        mapping = {}
        for name in lims[k1].carrier:
            member = lims[k1].members[name]
            step = {
                e: s.map(pc.mor_name[(u, l.identities[lproj[e]])])[member[e]]
                for e in el_psi_objs
            }
            mapping[name] = tup(step[e] for e in el_psi_objs)
        on_mor[u] = mapping
    h_lim = set_functor(kop, {ko: lims[ko].carrier for ko in k.objects}, on_mor)
    lhs = weighted_colimit(phi, h_lim, cap=cap, verify=False)

    colims = {}
    for lo in l.objects:
        sl = SetFunctor(
            kop,
            {ko: s.at(pc.obj_name[(ko, lo)]) for ko in k.objects},
            {u: dict(s.map(pc.mor_name[(u, l.identities[lo])])) for u in kop.mors},
        )
        colims[lo] = weighted_colimit(phi, sl, cap=cap, verify=False)
    on_mor2 = {}
    for m in l.mors:
        l1, l2 = l.src[m], l.tgt[m]
        mapping = {}
        for cls in colims[l1].carrier:
            e, x = colims[l1].rep_member[cls]
            ko = colims[l1].proj.on_objects[e]
            mapping[cls] = colims[l2].class_of[pair(e, s.map(pc.mor_name[(k.identities[ko], m)])[x])]
        on_mor2[m] = mapping
    h_colim = set_functor(l, {lo: colims[lo].carrier for lo in l.objects}, on_mor2)
    rhs = weighted_limit(psi, h_colim, cap=cap, verify=False)

    forward: dict[str, str] = {}
    image = set()
    el_psi = rhs.el
    for cls in lhs.carrier:
        e_phi, tuple_name = lhs.rep_member[cls]
        ko = lhs.proj.on_objects[e_phi]
        member = lims[ko].members[tuple_name]
        comps = {}
        for e_psi in el_psi.objects:
            lo = rhs.proj.on_objects[e_psi]
            comps[e_psi] = colims[lo].class_of[pair(e_phi, member[e_psi])]
        name = tup(comps[e] for e in el_psi.objects)
        if name not in rhs.members:
            raise InternalCheckError("canonical comparison left the limit carrier")
        forward[cls] = name
        image.add(name)
    if len(image) == len(lhs.carrier) == len(rhs.carrier):
        inverse = {v: c for c, v in forward.items()}
        return ComparisonVerdict(True, len(lhs.carrier), len(rhs.carrier), forward, inverse)
    if len(image) < len(lhs.carrier):
        seen: dict[str, str] = {}
        wit = ""
        for c, v in forward.items():
            if v in seen:
                wit = f"classes {seen[v]} and {c} collide on {v}"
                break
            seen[v] = c
        return ComparisonVerdict(False, len(lhs.carrier), len(rhs.carrier), forward, None, wit)
    missing = next(n for n in rhs.carrier if n not in image)
    return ComparisonVerdict(
        False, len(lhs.carrier), len(rhs.carrier), forward, None,
        f"limit tuple {missing} not in the comparison image",
    )


@dataclass
class SearchOutcome:
    """Either a minimal counterexample or a bound-stamped exhaustion certificate."""

    counterexample: SetFunctor | None
    verdict: ComparisonVerdict | None
    bound: int
    candidates_checked: int

    @property
    def clean(self) -> bool:
        return self.counterexample is None


def commutation_search(
    phi: Weight,
    psi: Weight,
    max_set_size: int,
    cap: int | None = None,
) -> SearchOutcome:
    """First bifunctor (by total size, then encoding) breaking the interchange.

    Candidates isomorphic to an already-checked one are skipped; the outcome
    is independent of that pruning since the comparison is isomorphism-
    invariant.
    """
    pc = product(opposite(phi.shape), psi.shape)
    checked: list[SetFunctor] = []
    count = 0
    for s in enumerate_set_functors(pc.cat, max_set_size, cap=cap):
        if any(natiso(s, seen) is not None for seen in checked):
            continue
        checked.append(s)
        count += 1
        verdict = commutes_at(phi, psi, s, pc, cap=cap)
        if not verdict.invertible:
            return SearchOutcome(s, verdict, max_set_size, count)
    return SearchOutcome(None, None, max_set_size, count)


@dataclass
class FlatnessVerdict:
    ok: bool
    reason: str
    witness: tuple[str, ...] = ()


def is_flat_finlim(phi: Weight) -> FlatnessVerdict:
    """Filteredness of the category of elements of a colimit weight.

    Checks: nonempty; every object pair admits a cocone; every parallel pair
    of arrows is coequalized by some arrow. Fails with an explicit witness.
    """
    if phi.variance != "colimit":
        raise ShapeMismatchError("flatness applies to colimit weights")
    el, _ = elements(phi.functor, "limit")
    if not el.objects:
        return FlatnessVerdict(False, "category of elements is empty")
    for x in el.objects:
        for y in el.objects:
            if not any(
                el.hom(x, z) and el.hom(y, z) for z in el.objects
            ):
                return FlatnessVerdict(
                    False, "object pair admits no cocone", (x, y)
                )
    for x in el.objects:
        for y in el.objects:
            for u in el.hom(x, y):
                for v in el.hom(x, y):
                    if u >= v:
                        continue
                    if not any(
                        el.comp(h, u) == el.comp(h, v)
                        for z in el.objects
                        for h in el.hom(y, z)
                    ):
                        return FlatnessVerdict(
                            False, "parallel pair not coequalized", (u, v)
                        )
    return FlatnessVerdict(True, "category of elements is filtered")
