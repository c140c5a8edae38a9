"""Bounded closure of representables under weighted colimits.

The closure is built stage by stage: stage 0 is the representables, each
later stage adds every colimit (weighted by a member of the given class) of a
diagram valued in previously built presheaves, deduplicated up to certified
isomorphism. Iteration stops at the requested depth or at a fixpoint; every
element carries a witness that replays, and all negative membership answers
are depth-stamped, never absolute.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .core import FinCat, opposite
from .errors import DEFAULT_MAX_CLOSURE_ELEMENTS, ResourceCapError, ShapeMismatchError
from .setfun import NatTrans, SetFunctor, nat_set, natiso, yoneda
from .weighted import (
    PresheafDiagram,
    Weight,
    WeightedResult,
    nat_hom_target,
    preserves,
    weighted_colimit,
)


@dataclass
class ClosureElement:
    """A presheaf in the closure together with how it was built."""

    presheaf: SetFunctor
    stage: int
    witness_kind: str  # "representable" | "colimit"
    representable: str | None = None
    weight_index: int | None = None
    diagram: PresheafDiagram | None = None
    diagram_values: tuple[int, ...] = ()


@dataclass
class ClosureRun:
    base: FinCat
    weights: list[Weight]
    elements: list[ClosureElement]
    stage_sizes: list[int]
    fixpoint: bool
    depth: int


def _diagrams_into(
    shape: FinCat,
    pool: list[SetFunctor],
    base: FinCat,
    cap: int | None,
):
    """All functors from a shape into the full subcategory spanned by a pool.

    Yields (assignment indices, PresheafDiagram) in canonical order: object
    assignments in product order, then natural-transformation choices in
    enumeration order, filtered by functoriality.
    """
    import itertools

    objs = list(shape.objects)
    nonid = list(shape.nonid_mors)
    if not pool and objs:
        return
    hom_cache: dict[tuple[int, int], tuple[NatTrans, ...]] = {}

    def homs(i: int, j: int) -> tuple[NatTrans, ...]:
        if (i, j) not in hom_cache:
            hom_cache[(i, j)] = nat_set(pool[i], pool[j], cap=cap)
        return hom_cache[(i, j)]

    for assign in itertools.product(range(len(pool)), repeat=len(objs)):
        at_obj = {o: pool[assign[k]] for k, o in enumerate(objs)}
        idx = {o: assign[k] for k, o in enumerate(objs)}
        chosen: dict[str, NatTrans] = {
            shape.identities[o]: NatTrans(
                at_obj[o], at_obj[o], {c: {x: x for x in at_obj[o].at(c)} for c in at_obj[o].source.objects}
            )
            for o in objs
        }

        def consistent() -> bool:
            for (g, f), gf in shape.table.items():
                if g in chosen and f in chosen and gf in chosen:
                    left = chosen[gf]
                    a = shape.src[f]
                    for c in left.source.source.objects:
                        for x in at_obj[a].at(c):
                            if chosen[g].components[c][chosen[f].components[c][x]] != left.components[c][x]:
                                return False
            return True

        def rec(i: int):
            if i == len(nonid):
                yield PresheafDiagram(shape, base, dict(at_obj), dict(chosen))
                return
            m = nonid[i]
            for nt in homs(idx[shape.src[m]], idx[shape.tgt[m]]):
                chosen[m] = nt
                if consistent():
                    yield from rec(i + 1)
                del chosen[m]

        for diagram in rec(0):
            yield assign, diagram


def closure_iterate(
    weights: list[Weight],
    b: FinCat,
    depth: int,
    cap: int | None = None,
    max_elements: int = DEFAULT_MAX_CLOSURE_ELEMENTS,
) -> ClosureRun:
    """Stages of the closure of the representables under the given colimit weights."""
    for w in weights:
        if w.variance != "colimit":
            raise ShapeMismatchError("closure weights must have colimit variance")
    elements: list[ClosureElement] = []
    if b.objects:
        ydata = yoneda(b, cap=cap)
        for obj in b.objects:
            elements.append(
                ClosureElement(ydata.presheaves[obj], 0, "representable", representable=obj)
            )
    stage_sizes = [len(elements)]
    fixpoint = False
    for stage in range(1, depth + 1):
        pool = [el.presheaf for el in elements]
        added: list[ClosureElement] = []
        for wi, w in enumerate(weights):
            shape = opposite(w.shape)
            for assign, diagram in _diagrams_into(shape, pool, b, cap):
                out = weighted_colimit(w, diagram, cap=cap, verify=False)
                candidate = out.carrier
                known = any(
                    natiso(candidate, el.presheaf) is not None for el in elements
                ) or any(natiso(candidate, el.presheaf) is not None for el in added)
                if not known:
                    added.append(
                        ClosureElement(
                            candidate,
                            stage,
                            "colimit",
                            weight_index=wi,
                            diagram=diagram,
                            diagram_values=tuple(assign),
                        )
                    )
                    if len(elements) + len(added) > max_elements:
                        raise ResourceCapError(
                            "closure growth", max_elements, len(elements) + len(added)
                        )
        elements.extend(added)
        stage_sizes.append(len(elements))
        if not added:
            fixpoint = True
            break
    return ClosureRun(b, list(weights), elements, stage_sizes, fixpoint, depth)


def replay_witness(run: ClosureRun, element: ClosureElement, cap: int | None = None) -> NatTrans | None:
    """Recompute the element from its witness; the certified isomorphism, or None."""
    if element.witness_kind == "representable":
        ydata = yoneda(run.base, cap=cap)
        return natiso(element.presheaf, ydata.presheaves[element.representable])
    out = weighted_colimit(run.weights[element.weight_index], element.diagram, cap=cap, verify=False)
    return natiso(out.carrier, element.presheaf)


@dataclass
class MemberVerdict:
    member: bool
    depth: int
    element_index: int | None
    witness_chain: tuple[int, ...]
    note: str


def saturation_member(
    psi: SetFunctor,
    weights: list[Weight],
    b: FinCat,
    depth: int,
    cap: int | None = None,
) -> MemberVerdict:
    """Bounded membership of ψ in the closure; negatives are depth-stamped only."""
    run = closure_iterate(weights, b, depth, cap=cap)
    for i, el in enumerate(run.elements):
        if natiso(psi, el.presheaf) is not None:
            chain: list[int] = []
            frontier = [i]
            while frontier:
                j = frontier.pop()
                if j in chain:
                    continue
                chain.append(j)
                frontier.extend(run.elements[j].diagram_values)
            return MemberVerdict(
                True,
                run.elements[i].stage,
                i,
                tuple(chain),
                f"member at stage {run.elements[i].stage}",
            )
    return MemberVerdict(
        False,
        depth,
        None,
        (),
        f"not found by depth {depth}; no claim beyond this bound",
    )


def lan_extend(
    g: PresheafDiagram,
    element: ClosureElement,
    cap: int | None = None,
) -> WeightedResult:
    """Extend a functor into presheaves along the closure, at one element.

    The element's presheaf acts as the colimit weight; the result is the
    weighted colimit of the given diagram, computed pointwise in the target
    presheaf category. For a representable element this is the value of the
    diagram there, up to isomorphism.
    """
    w = Weight(element.presheaf, "colimit")
    if g.shape != opposite(w.shape):
        raise ShapeMismatchError("diagram domain must match the closure base")
    return weighted_colimit(w, g, cap=cap, verify=False)


@dataclass
class AtomVerdict:
    ok: bool
    failing: tuple[int, ...]
    details: tuple[str, ...]


def atom_check(a: SetFunctor, instances: list[WeightedResult], cap: int | None = None) -> AtomVerdict:
    """Does Nat(a, -) send each computed colimit instance to a colimit again?"""
    tf = nat_hom_target(a, cap=cap)
    failing = []
    details = []
    for i, inst in enumerate(instances):
        verdict = preserves(tf, inst, cap=cap)
        if not verdict.ok:
            failing.append(i)
            details.append(verdict.witness)
    return AtomVerdict(not failing, tuple(failing), tuple(details))


def find_reflection(b: FinCat, f: SetFunctor, cap: int | None = None) -> tuple[str, NatTrans] | None:
    """A reflection of a presheaf into the representables, by exhaustive search.

    Returns (object b, unit η: f → Yb) such that composing with η gives a
    bijection B(b, b2) ≅ Nat(f, Y b2) for every b2.
    """
    from .setfun import nt_compose

    ydata = yoneda(b, cap=cap)
    for obj in b.objects:
        for eta in nat_set(f, ydata.presheaves[obj], cap=cap):
            good = True
            for b2 in b.objects:
                target_names = {nt.name() for nt in nat_set(f, ydata.presheaves[b2], cap=cap)}
                images = {
                    nt_compose(
                        nat_trans_from_postcomposition(ydata, g, obj, b2), eta
                    ).name()
                    for g in b.hom(obj, b2)
                }
                if images != target_names or len(images) != len(b.hom(obj, b2)):
                    good = False
                    break
            if good:
                return obj, eta
    return None


def nat_trans_from_postcomposition(ydata, g: str, src_obj: str, tgt_obj: str) -> NatTrans:
    """Postcomposition Y(src) → Y(tgt) by a morphism g: src → tgt."""
    return ydata.on_morphisms[g]
