"""Finite-set-valued functors and their universal constructions.

Conventions used throughout the package:

* a *presheaf* on B is a SetFunctor on ``opposite(B)``; a *copresheaf* is a
  SetFunctor on B itself;
* elements of derived sets carry canonical names: tuples ``⟨x,y⟩`` in the
  ambient object order, disjoint-union tags ``⟨obj,elem⟩``, quotient classes
  named by their least (first in ambient order) representative;
* subsets keep the ambient enumeration order, so certificates reproduce.

Enumerations refuse to run when the raw candidate space exceeds the cap
(default 10^7, overridable per call or via KANWEIGH_MAX_CANDIDATES).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .core import FinCat, Functor, ProductCat, fincat, functor, opposite, product
from .errors import ShapeMismatchError, ValidationError, check_cap
from .names import fun, pair, tup


@dataclass(frozen=True)
class SetFunctor:
    """A functor from a finite category to finite sets."""

    source: FinCat
    on_objects: dict[str, tuple[str, ...]]
    on_morphisms: dict[str, dict[str, str]]

    def at(self, obj: str) -> tuple[str, ...]:
        return self.on_objects[obj]

    def map(self, mor: str) -> dict[str, str]:
        return self.on_morphisms[mor]

    def total_elements(self) -> int:
        return sum(len(v) for v in self.on_objects.values())


def set_functor(
    source: FinCat,
    on_objects: dict[str, list[str] | tuple[str, ...]],
    on_morphisms: dict[str, dict[str, str]],
) -> SetFunctor:
    """Validate functoriality exhaustively (identities, composites, totality)."""
    bad: list[str] = []
    obs = {o: tuple(v) for o, v in on_objects.items()}
    for o in source.objects:
        if o not in obs:
            bad.append(f"object {o}: no value set")
        elif len(set(obs[o])) != len(obs[o]):
            bad.append(f"object {o}: duplicate elements")
    for m in source.mors:
        if m not in on_morphisms:
            bad.append(f"morphism {m}: no function")
    if bad:
        raise ValidationError(bad)
    for m in source.mors:
        dom, cod = obs[source.src[m]], set(obs[source.tgt[m]])
        fn = on_morphisms[m]
        if set(fn.keys()) != set(dom):
            bad.append(f"morphism {m}: function domain differs from value set")
            continue
        for x, y in fn.items():
            if y not in cod:
                bad.append(f"morphism {m}: image {y} of {x} outside target set")
    if bad:
        raise ValidationError(bad)
    for o in source.objects:
        i = source.identities[o]
        if any(on_morphisms[i][x] != x for x in obs[o]):
            bad.append(f"identity of {o} not the identity function")
    for (g, f), gf in source.table.items():
        fg, ff, fgf = on_morphisms[g], on_morphisms[f], on_morphisms[gf]
        if any(fg[ff[x]] != fgf[x] for x in obs[source.src[f]]):
            bad.append(f"composition not preserved on ({g},{f})")
    if bad:
        raise ValidationError(bad)
    return SetFunctor(source, obs, {m: dict(v) for m, v in on_morphisms.items()})


@dataclass(frozen=True)
class NatTrans:
    """An object-indexed family of functions, natural in every morphism."""

    source: SetFunctor
    target: SetFunctor
    components: dict[str, dict[str, str]]

    def at(self, obj: str) -> dict[str, str]:
        return self.components[obj]

    def is_iso(self) -> bool:
        return all(
            len(set(c.values())) == len(c) == len(self.target.at(o))
            for o, c in self.components.items()
        )

    def name(self) -> str:
        """Canonical name: the component family in ambient order."""
        cat = self.source.source
        return tup(
            fun(self.components[o], self.source.at(o)) for o in cat.objects
        )


def nat_trans(source: SetFunctor, target: SetFunctor, components: dict[str, dict[str, str]]) -> NatTrans:
    if source.source != target.source:
        raise ShapeMismatchError("natural transformation: sources differ")
    bad: list[str] = []
    cat = source.source
    for o in cat.objects:
        comp = components.get(o)
        if comp is None:
            bad.append(f"object {o}: missing component")
            continue
        if set(comp.keys()) != set(source.at(o)):
            bad.append(f"object {o}: component domain differs from value set")
        elif any(y not in set(target.at(o)) for y in comp.values()):
            bad.append(f"object {o}: component lands outside target set")
    if bad:
        raise ValidationError(bad)
    for m in cat.mors:
        a, b = cat.src[m], cat.tgt[m]
        for x in source.at(a):
            if components[b][source.map(m)[x]] != target.map(m)[components[a][x]]:
                bad.append(f"naturality fails at {m} on {x}")
                break
    if bad:
        raise ValidationError(bad)
    return NatTrans(source, target, {o: dict(c) for o, c in components.items()})


def nt_identity(f: SetFunctor) -> NatTrans:
    return NatTrans(f, f, {o: {x: x for x in f.at(o)} for o in f.source.objects})


def nt_compose(beta: NatTrans, alpha: NatTrans) -> NatTrans:
    """beta after alpha."""
    if alpha.target != beta.source:
        raise ShapeMismatchError("vertical composition: middle functors differ")
    return NatTrans(
        alpha.source,
        beta.target,
        {
            o: {x: beta.components[o][alpha.components[o][x]] for x in alpha.source.at(o)}
            for o in alpha.source.source.objects
        },
    )


def nt_inverse(alpha: NatTrans) -> NatTrans:
    if not alpha.is_iso():
        raise ShapeMismatchError("not an isomorphism")
    return NatTrans(
        alpha.target,
        alpha.source,
        {o: {y: x for x, y in c.items()} for o, c in alpha.components.items()},
    )


def nt_equal(a: NatTrans, b: NatTrans) -> bool:
    return a.components == b.components


def nat_set(f: SetFunctor, g: SetFunctor, cap: int | None = None) -> tuple[NatTrans, ...]:
    """All natural transformations f ⇒ g, in lexicographic order.

    Component families are enumerated with naturality pruning (objects are
    visited in a constraint-greedy order so squares close early) and the
    canonical lexicographic ordering over the ambient object order is imposed
    after collection. The raw family space is cap-checked up front.
    """
    if f.source != g.source:
        raise ShapeMismatchError("nat_set: sources differ")
    cat = f.source
    raw = 1
    for o in cat.objects:
        nx, ny = len(f.at(o)), len(g.at(o))
        if nx > 0 and ny == 0:
            return ()
        raw *= ny ** nx
        check_cap("max_candidates", raw, cap)

    ambient = list(cat.objects)
    nonid = list(cat.nonid_mors)
    # visit objects so that each step closes as many squares as possible
    order: list[str] = []
    remaining = list(ambient)
    incident = {o: sum(1 for m in nonid if o in (cat.src[m], cat.tgt[m])) for o in ambient}
    while remaining:
        best = max(
            remaining,
            key=lambda o: (
                sum(1 for m in nonid if {cat.src[m], cat.tgt[m]} <= set(order + [o])),
                incident[o],
                -ambient.index(o),
            ),
        )
        order.append(best)
        remaining.remove(best)
    pos = {o: i for i, o in enumerate(order)}
    schedule: list[list[str]] = [[] for _ in order]
    for m in nonid:
        schedule[max(pos[cat.src[m]], pos[cat.tgt[m]])].append(m)

    g_index = {o: {y: i for i, y in enumerate(g.at(o))} for o in ambient}
    results: list[dict[str, dict[str, str]]] = []
    components: dict[str, dict[str, str]] = {}

    def assign(i: int) -> None:
        if i == len(order):
            results.append({o: dict(c) for o, c in components.items()})
            return
        o = order[i]
        xs, ys = f.at(o), g.at(o)
        for choice in itertools.product(ys, repeat=len(xs)):
            comp = dict(zip(xs, choice))
            components[o] = comp
            ok = True
            for m in schedule[i]:
                a, b = cat.src[m], cat.tgt[m]
                fm, gm = f.map(m), g.map(m)
                ca, cb = components[a], components[b]
                if any(cb[fm[x]] != gm[ca[x]] for x in f.at(a)):
                    ok = False
                    break
            if ok:
                assign(i + 1)
        components.pop(o, None)

    assign(0)
    results.sort(
        key=lambda comps: tuple(
            tuple(g_index[o][comps[o][x]] for x in f.at(o)) for o in ambient
        )
    )
    return tuple(NatTrans(f, g, comps) for comps in results)


def natiso(f: SetFunctor, g: SetFunctor) -> NatTrans | None:
    """First natural isomorphism f ≅ g in canonical order, or None.

    Backtracks over bijective components only, pruning on naturality; a cheap
    size screen rejects most non-isomorphic pairs immediately.
    """
    if f.source != g.source:
        return None
    cat = f.source
    if any(len(f.at(o)) != len(g.at(o)) for o in cat.objects):
        return None
    objs = list(cat.objects)
    pos = {o: i for i, o in enumerate(objs)}
    schedule: list[list[str]] = [[] for _ in objs]
    for m in cat.nonid_mors:
        schedule[max(pos[cat.src[m]], pos[cat.tgt[m]])].append(m)
    components: dict[str, dict[str, str]] = {}

    def assign(i: int) -> NatTrans | None:
        if i == len(objs):
            return NatTrans(f, g, {o: dict(c) for o, c in components.items()})
        o = objs[i]
        xs = f.at(o)
        for perm in itertools.permutations(g.at(o)):
            components[o] = dict(zip(xs, perm))
            ok = True
            for m in schedule[i]:
                a, b = cat.src[m], cat.tgt[m]
                fm, gm = f.map(m), g.map(m)
                ca, cb = components[a], components[b]
                if any(cb[fm[x]] != gm[ca[x]] for x in f.at(a)):
                    ok = False
                    break
            if ok:
                out = assign(i + 1)
                if out is not None:
                    return out
        components.pop(o, None)
        return None

    return assign(0)


@dataclass(frozen=True)
class LimitData:
    """A conical limit: carrier of compatible tuples plus projection legs."""

    diagram: SetFunctor
    carrier: tuple[str, ...]
    members: dict[str, dict[str, str]]  # carrier elem -> (object -> component)
    legs: dict[str, dict[str, str]]  # object -> (carrier elem -> diagram elem)


def conical_limit(d: SetFunctor, cap: int | None = None) -> LimitData:
    """Compatible tuples of the diagram, named ⟨..⟩ in ambient object order."""
    cat = d.source
    raw = 1
    for o in cat.objects:
        raw *= max(len(d.at(o)), 1)
        check_cap("max_candidates", raw, cap)
    objs = list(cat.objects)
    pos = {o: i for i, o in enumerate(objs)}
    schedule: list[list[str]] = [[] for _ in objs]
    for m in cat.nonid_mors:
        schedule[max(pos[cat.src[m]], pos[cat.tgt[m]])].append(m)

    tuples: list[dict[str, str]] = []
    partial: dict[str, str] = {}

    def assign(i: int) -> None:
        if i == len(objs):
            tuples.append(dict(partial))
            return
        o = objs[i]
        for x in d.at(o):
            partial[o] = x
            if all(
                partial[cat.tgt[m]] == d.map(m)[partial[cat.src[m]]]
                for m in schedule[i]
            ):
                assign(i + 1)
        partial.pop(o, None)

    assign(0)
    carrier = tuple(tup(t[o] for o in objs) for t in tuples)
    members = dict(zip(carrier, tuples))
    legs = {
        o: {name: members[name][o] for name in carrier} for o in objs
    }
    return LimitData(d, carrier, members, legs)


class _UnionFind:
    """Union-find keyed by ambient position; roots are least positions."""

    def __init__(self, items: list[str]):
        self.index = {x: i for i, x in enumerate(items)}
        self.items = items
        self.parent = list(range(len(items)))

    def find(self, x: str) -> int:
        i = self.index[x]
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def unite(self, x: str, y: str) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return
        if rx > ry:
            rx, ry = ry, rx
        self.parent[ry] = rx

    def classes(self) -> dict[str, str]:
        """Map each item to the name of its class representative."""
        return {x: self.items[self.find(x)] for x in self.items}


@dataclass(frozen=True)
class ColimitData:
    """A conical colimit: quotient classes of the tagged disjoint union."""

    diagram: SetFunctor
    carrier: tuple[str, ...]
    class_of: dict[str, str]  # tagged elem ⟨obj,x⟩ -> class name
    legs: dict[str, dict[str, str]]  # object -> (diagram elem -> class name)
    rep_member: dict[str, tuple[str, str]]  # class name -> (object, elem)


def conical_colimit(d: SetFunctor) -> ColimitData:
    """Quotient of the disjoint union by the relation generated by the diagram."""
    cat = d.source
    tagged = [pair(o, x) for o in cat.objects for x in d.at(o)]
    uf = _UnionFind(tagged)
    for m in cat.nonid_mors:
        a, b = cat.src[m], cat.tgt[m]
        for x in d.at(a):
            uf.unite(pair(a, x), pair(b, d.map(m)[x]))
    class_of = uf.classes()
    carrier: list[str] = []
    rep_member: dict[str, tuple[str, str]] = {}
    for o in cat.objects:
        for x in d.at(o):
            t = pair(o, x)
            if class_of[t] == t:
                carrier.append(t)
                rep_member[t] = (o, x)
    legs = {
        o: {x: class_of[pair(o, x)] for x in d.at(o)} for o in cat.objects
    }
    return ColimitData(d, tuple(carrier), class_of, legs, rep_member)


@dataclass(frozen=True)
class EndData:
    """An end: the subset of diagonal tuples equalizing both actions."""

    carrier: tuple[str, ...]
    members: dict[str, dict[str, str]]  # tuple name -> (object k -> element of H(k,k))
    legs: dict[str, dict[str, str]]  # object k -> (tuple name -> element)


def end(pc: ProductCat, h: SetFunctor, cap: int | None = None) -> EndData:
    """End of ``h`` on product(opposite(K), K): equalized diagonal tuples."""
    k = pc.right
    if pc.left != opposite(k):
        raise ShapeMismatchError("end: source is not product(opposite(K), K)")
    if h.source != pc.cat:
        raise ShapeMismatchError("end: functor not on the given product category")
    raw = 1
    for o in k.objects:
        raw *= max(len(h.at(pc.obj_name[(o, o)])), 1)
        check_cap("max_candidates", raw, cap)
    objs = list(k.objects)
    pos = {o: i for i, o in enumerate(objs)}
    schedule: list[list[str]] = [[] for _ in objs]
    for m in k.nonid_mors:
        schedule[max(pos[k.src[m]], pos[k.tgt[m]])].append(m)

    tuples: list[dict[str, str]] = []
    partial: dict[str, str] = {}

    def cond(m: str) -> bool:
        a, b = k.src[m], k.tgt[m]
        # h(m, id_b): H(b,b) -> H(a,b); h(id_a, m): H(a,a) -> H(a,b)
        left = h.map(pc.mor_name[(m, k.identities[b])])
        right = h.map(pc.mor_name[(k.identities[a], m)])
        return left[partial[b]] == right[partial[a]]

    def assign(i: int) -> None:
        if i == len(objs):
            tuples.append(dict(partial))
            return
        o = objs[i]
        for x in h.at(pc.obj_name[(o, o)]):
            partial[o] = x
            if all(cond(m) for m in schedule[i]):
                assign(i + 1)
        partial.pop(o, None)

    assign(0)
    carrier = tuple(tup(t[o] for o in objs) for t in tuples)
    members = dict(zip(carrier, tuples))
    legs = {o: {name: members[name][o] for name in carrier} for o in objs}
    return EndData(carrier, members, legs)


@dataclass(frozen=True)
class CoendData:
    """A coend: quotient of the tagged diagonal by the two-sided action relation."""

    carrier: tuple[str, ...]
    class_of: dict[str, str]  # ⟨k,y⟩ -> class name
    rep_member: dict[str, tuple[str, str]]  # class name -> (k, y)


def coend(pc: ProductCat, h: SetFunctor) -> CoendData:
    k = pc.right
    if pc.left != opposite(k):
        raise ShapeMismatchError("coend: source is not product(opposite(K), K)")
    tagged = [pair(o, y) for o in k.objects for y in h.at(pc.obj_name[(o, o)])]
    uf = _UnionFind(tagged)
    for m in k.nonid_mors:
        a, b = k.src[m], k.tgt[m]
        # y ranges over H(b, a); identify H(m,id_a)(y) in H(a,a) with H(id_b,m)(y) in H(b,b).
        to_diag_left = h.map(pc.mor_name[(m, k.identities[a])])
        to_diag_right = h.map(pc.mor_name[(k.identities[b], m)])
        for y in h.at(pc.obj_name[(b, a)]):
            uf.unite(pair(a, to_diag_left[y]), pair(b, to_diag_right[y]))
    class_of = uf.classes()
    carrier: list[str] = []
    rep_member: dict[str, tuple[str, str]] = {}
    for o in k.objects:
        for y in h.at(pc.obj_name[(o, o)]):
            t = pair(o, y)
            if class_of[t] == t:
                carrier.append(t)
                rep_member[t] = (o, y)
    return CoendData(tuple(carrier), class_of, rep_member)


def fun_set(xs: tuple[str, ...], ys: tuple[str, ...]) -> tuple[tuple[str, ...], dict[str, dict[str, str]]]:
    """All functions xs -> ys with canonical names, plus a decode table."""
    names: list[str] = []
    decode: dict[str, dict[str, str]] = {}
    if len(xs) == 0:
        mapping: dict[str, str] = {}
        name = fun(mapping, xs)
        return (name,), {name: mapping}
    if len(ys) == 0:
        return (), {}
    for choice in itertools.product(ys, repeat=len(xs)):
        mapping = dict(zip(xs, choice))
        name = fun(mapping, xs)
        names.append(name)
        decode[name] = mapping
    return tuple(names), decode


@dataclass(frozen=True)
class YonedaData:
    """The representable presheaves with their action and faithfulness witness."""

    base: FinCat
    op: FinCat
    presheaves: dict[str, SetFunctor]  # b -> B(-, b) on opposite(B)
    on_morphisms: dict[str, NatTrans]  # g: b -> b' -> postcomposition
    full_faithfulness: dict[tuple[str, str], dict[str, str]]  # (b,b') -> mor -> nat name


_YONEDA_CACHE: dict[tuple, "YonedaData"] = {}


def yoneda(b: FinCat, cap: int | None = None) -> YonedaData:
    """Representables Yb = B(-,b), their functorial action, and the Yoneda bijections."""
    key = b.structural_key()
    hit = _YONEDA_CACHE.get(key)
    if hit is not None:
        return hit
    bop = opposite(b)
    presheaves: dict[str, SetFunctor] = {}
    for obj in b.objects:
        on_obj = {c: b.hom(c, obj) for c in b.objects}
        on_mor = {
            u: {m: b.comp(m, u) for m in b.hom(bop.src[u], obj)}
            for u in bop.mors
        }
        # in opposite(B), u: c -> c' means u: c' -> c in B; precomposition maps hom(c,obj) to hom(c',obj)
        presheaves[obj] = set_functor(bop, on_obj, on_mor)
    on_morphisms = {
        g: nat_trans(
            presheaves[b.src[g]],
            presheaves[b.tgt[g]],
            {c: {m: b.comp(g, m) for m in b.hom(c, b.src[g])} for c in b.objects},
        )
        for g in b.mors
    }
    ff: dict[tuple[str, str], dict[str, str]] = {}
    for x in b.objects:
        for y in b.objects:
            nats = nat_set(presheaves[x], presheaves[y], cap=cap)
            by_name = {n.name(): n for n in nats}
            table: dict[str, str] = {}
            for g in b.hom(x, y):
                n = nat_trans(
                    presheaves[x],
                    presheaves[y],
                    {c: {m: b.comp(g, m) for m in b.hom(c, x)} for c in b.objects},
                )
                table[g] = n.name()
            if len(set(table.values())) != len(table) or set(table.values()) != set(by_name):
                raise ValidationError([f"Yoneda bijection fails between {x} and {y}"])
            ff[(x, y)] = table
    out = YonedaData(b, bop, presheaves, on_morphisms, ff)
    _YONEDA_CACHE[key] = out
    return out


def elements(phi: SetFunctor, variance: str) -> tuple[FinCat, Functor]:
    """Category of elements of a set-valued functor with its projection.

    ``variance='limit'`` returns el(φ) → K; ``variance='colimit'`` returns the
    opposite form el(φ)^op → K^op used for reducing weighted colimits.
    """
    k = phi.source
    objs: list[str] = []
    proj_obj: dict[str, str] = {}
    for o in k.objects:
        for x in phi.at(o):
            objs.append(pair(o, x))
            proj_obj[pair(o, x)] = o
    morphisms = []
    proj_mor: dict[str, str] = {}
    identities = {}
    for m in k.mors:
        a, b = k.src[m], k.tgt[m]
        for x in phi.at(a):
            name = pair(m, x)
            morphisms.append((name, pair(a, x), pair(b, phi.map(m)[x])))
            proj_mor[name] = m
            if m == k.identities[a]:
                identities[pair(a, x)] = name
    compose = {}
    for m in k.mors:
        a = k.src[m]
        for m2 in k.mors:
            if k.tgt[m] != k.src[m2]:
                continue
            for x in phi.at(a):
                compose[(pair(m2, phi.map(m)[x]), pair(m, x))] = pair(k.table[(m2, m)], x)
    el = fincat(objs, morphisms, identities, compose)
    proj = functor(el, k, proj_obj, proj_mor)
    if variance == "limit":
        return el, proj
    if variance == "colimit":
        elop = opposite(el)
        kop = opposite(k)
        proj_op = functor(elop, kop, dict(proj.on_objects), dict(proj.on_morphisms))
        return elop, proj_op
    raise ShapeMismatchError(f"unknown variance {variance!r}")


def enumerate_set_functors(
    j: FinCat, max_size: int, cap: int | None = None
):
    """All SetFunctors on j with value sets of size ≤ max_size, canonical order.

    Candidates are ordered by (total element count, size tuple, function
    tables); value sets use canonical elements "0", "1", ... per object.
    Yields lazily; the caller bounds consumption. The raw space is cap-checked
    up front.
    """
    objs = list(j.objects)
    n = len(objs)
    raw = (max_size + 1) ** n
    per_fun = max_size ** max_size if max_size > 1 else 1
    for _ in j.nonid_mors:
        raw *= per_fun
        check_cap("max_candidates", raw, cap)
    check_cap("max_candidates", raw, cap)

    size_tuples = sorted(
        itertools.product(range(max_size + 1), repeat=n),
        key=lambda t: (sum(t), t),
    )
    pos = {o: i for i, o in enumerate(objs)}
    nonid = list(j.nonid_mors)

    for sizes in size_tuples:
        on_obj = {o: tuple(str(i) for i in range(sizes[pos[o]])) for o in objs}
        if any(
            len(on_obj[j.src[m]]) > 0 and len(on_obj[j.tgt[m]]) == 0 for m in nonid
        ):
            continue
        assigned: dict[str, dict[str, str]] = {
            j.identities[o]: {x: x for x in on_obj[o]} for o in objs
        }

        def consistent() -> bool:
            for (g, f), gf in j.table.items():
                if g in assigned and f in assigned and gf in assigned:
                    ff = assigned[f]
                    if any(assigned[g][ff[x]] != assigned[gf][x] for x in ff):
                        return False
            return True

        def rec(i: int):
            if i == len(nonid):
                yield SetFunctor(
                    j, dict(on_obj), {m: dict(v) for m, v in assigned.items()}
                )
                return
            m = nonid[i]
            dom, cod = on_obj[j.src[m]], on_obj[j.tgt[m]]
            if len(dom) == 0:
                assigned[m] = {}
                if consistent():
                    yield from rec(i + 1)
                del assigned[m]
                return
            for choice in itertools.product(cod, repeat=len(dom)):
                assigned[m] = dict(zip(dom, choice))
                if consistent():
                    yield from rec(i + 1)
                del assigned[m]

        yield from rec(0)


def restrict_along(d: SetFunctor, f: Functor) -> SetFunctor:
    """Compose a set-valued functor with a functor into its source."""
    if f.target != d.source:
        raise ShapeMismatchError("restriction: functor target differs from diagram source")
    return SetFunctor(
        f.source,
        {o: d.at(f.on_objects[o]) for o in f.source.objects},
        {m: d.map(f.on_morphisms[m]) for m in f.source.mors},
    )
