"""Finite categories and functors, with eager exhaustive validation.

A category is a plain table: objects, morphisms with sources and targets, an
identity per object, and a total composition table on composable pairs.
Nothing is ever checked lazily; every constructor validates all laws and
raises :class:`~kanweigh.errors.ValidationError` naming the offending entries.

Equality of categories is structural (identifier equality); isomorphism and
equivalence are witnessed explicitly by searched functors.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import ShapeMismatchError, ValidationError
from .names import pair


@dataclass(frozen=True)
class FinCat:
    """A finite category given by explicit tables. Immutable after validation."""

    objects: tuple[str, ...]
    mors: tuple[str, ...]
    src: dict[str, str]
    tgt: dict[str, str]
    identities: dict[str, str]
    table: dict[tuple[str, str], str]  # (g, f) -> g∘f, for tgt(f) == src(g)
    homs: dict[tuple[str, str], tuple[str, ...]] = field(default_factory=dict, compare=False)

    def hom(self, a: str, b: str) -> tuple[str, ...]:
        return self.homs[(a, b)]

    def structural_key(self) -> tuple:
        """A hashable canonical key; equal categories share it."""
        return (
            self.objects,
            self.mors,
            tuple(self.src[m] for m in self.mors),
            tuple(self.tgt[m] for m in self.mors),
            tuple(self.identities[o] for o in self.objects),
            tuple(sorted(self.table.items())),
        )

    def comp(self, g: str, f: str) -> str:
        """g after f."""
        return self.table[(g, f)]

    def id_of(self, obj: str) -> str:
        return self.identities[obj]

    def is_id(self, f: str) -> bool:
        return self.identities.get(self.src[f]) == f and self.src[f] == self.tgt[f]

    @property
    def nonid_mors(self) -> tuple[str, ...]:
        return tuple(f for f in self.mors if not self.is_id(f))


def fincat(
    objects: list[str] | tuple[str, ...],
    morphisms: list[tuple[str, str, str]],
    identities: dict[str, str],
    compose: dict[tuple[str, str], str],
) -> FinCat:
    """Validate all category laws exhaustively and return the category.

    ``morphisms`` lists (id, src, tgt) triples; ``compose`` maps composable
    pairs (g, f) with tgt(f) == src(g) to the composite "g after f".
    """
    bad: list[str] = []
    objs = tuple(objects)
    if len(set(objs)) != len(objs):
        bad.append("duplicate object identifiers")
    ids = [m for m, _, _ in morphisms]
    if len(set(ids)) != len(ids):
        bad.append("duplicate morphism identifiers")
    src = {m: s for m, s, _ in morphisms}
    tgt = {m: t for m, _, t in morphisms}
    obj_set = set(objs)
    for m in ids:
        if src[m] not in obj_set:
            bad.append(f"morphism {m}: dangling source {src[m]}")
        if tgt[m] not in obj_set:
            bad.append(f"morphism {m}: dangling target {tgt[m]}")
    if bad:
        raise ValidationError(bad)

    mor_set = set(ids)
    for o in objs:
        i = identities.get(o)
        if i is None:
            bad.append(f"object {o}: missing identity")
        elif i not in mor_set:
            bad.append(f"object {o}: identity {i} not among morphisms")
        elif src[i] != o or tgt[i] != o:
            bad.append(f"object {o}: identity {i} is not an endomorphism of {o}")
    extra = set(identities) - obj_set
    if extra:
        bad.append(f"identities declared for unknown objects {sorted(extra)}")
    if bad:
        raise ValidationError(bad)

    # Totality and typing of the composition table.
    for f in ids:
        for g in ids:
            if tgt[f] == src[g]:
                gf = compose.get((g, f))
                if gf is None:
                    bad.append(f"compose missing entry ({g},{f})")
                elif gf not in mor_set:
                    bad.append(f"compose ({g},{f}) = {gf} not a morphism")
                elif src[gf] != src[f] or tgt[gf] != tgt[g]:
                    bad.append(f"compose ({g},{f}) = {gf} has wrong source/target")
            elif (g, f) in compose:
                bad.append(f"compose declared on non-composable pair ({g},{f})")
    if bad:
        raise ValidationError(bad)

    # Identity laws.
    for f in ids:
        if compose[(f, identities[src[f]])] != f:
            bad.append(f"identity law: {f}∘id_{src[f]} ≠ {f}")
        if compose[(identities[tgt[f]], f)] != f:
            bad.append(f"identity law: id_{tgt[f]}∘{f} ≠ {f}")

    # Associativity over all composable triples.
    out_of: dict[str, list[str]] = {o: [] for o in objs}
    for m in ids:
        out_of[src[m]].append(m)
    for f in ids:
        for g in out_of[tgt[f]]:
            gf = compose[(g, f)]
            for h in out_of[tgt[g]]:
                if compose[(h, gf)] != compose[(compose[(h, g)], f)]:
                    bad.append(
                        f"associativity fails on ({h},{g},{f}): "
                        f"{compose[(h, compose[(g, f)])]} ≠ {compose[(compose[(h, g)], f)]}"
                    )
    if bad:
        raise ValidationError(bad)

    homs: dict[tuple[str, str], tuple[str, ...]] = {
        (a, b): tuple(m for m in ids if src[m] == a and tgt[m] == b)
        for a in objs
        for b in objs
    }
    return FinCat(objs, tuple(ids), src, tgt, dict(identities), dict(compose), homs)


_OPPOSITE_CACHE: dict[tuple, FinCat] = {}


def opposite(c: FinCat) -> FinCat:
    """Reverse all morphisms; identifiers are kept, so the operation is an involution."""
    key = c.structural_key()
    hit = _OPPOSITE_CACHE.get(key)
    if hit is not None:
        return hit
    table = {(g, f): c.table[(f, g)] for (f, g) in c.table}
    out = fincat(
        list(c.objects),
        [(m, c.tgt[m], c.src[m]) for m in c.mors],
        dict(c.identities),
        table,
    )
    _OPPOSITE_CACHE[key] = out
    _OPPOSITE_CACHE[out.structural_key()] = c
    return out


@dataclass(frozen=True)
class ProductCat:
    """A product category together with its pairing tables and projections."""

    cat: FinCat
    left: FinCat
    right: FinCat
    obj_name: dict[tuple[str, str], str]
    obj_split: dict[str, tuple[str, str]]
    mor_name: dict[tuple[str, str], str]
    mor_split: dict[str, tuple[str, str]]
    proj_left: "Functor"
    proj_right: "Functor"


_PRODUCT_CACHE: dict[tuple, ProductCat] = {}


def product(c: FinCat, d: FinCat) -> ProductCat:
    """Cartesian product category with canonical pair names ⟨x,y⟩."""
    cache_key = (c.structural_key(), d.structural_key())
    hit = _PRODUCT_CACHE.get(cache_key)
    if hit is not None:
        return hit
    obj_name = {(x, y): pair(x, y) for x in c.objects for y in d.objects}
    mor_name = {(f, g): pair(f, g) for f in c.mors for g in d.mors}
    objects = [obj_name[(x, y)] for x in c.objects for y in d.objects]
    morphisms = [
        (mor_name[(f, g)], obj_name[(c.src[f], d.src[g])], obj_name[(c.tgt[f], d.tgt[g])])
        for f in c.mors
        for g in d.mors
    ]
    identities = {
        obj_name[(x, y)]: mor_name[(c.identities[x], d.identities[y])]
        for x in c.objects
        for y in d.objects
    }
    compose = {}
    for (f1, g1) in mor_name:
        for (f2, g2) in mor_name:
            if c.tgt[f2] == c.src[f1] and d.tgt[g2] == d.src[g1]:
                compose[(mor_name[(f1, g1)], mor_name[(f2, g2)])] = mor_name[
                    (c.table[(f1, f2)], d.table[(g1, g2)])
                ]
    cat = fincat(objects, morphisms, identities, compose)
    obj_split = {v: k for k, v in obj_name.items()}
    mor_split = {v: k for k, v in mor_name.items()}
    pl = functor(cat, c, {o: obj_split[o][0] for o in cat.objects},
                 {m: mor_split[m][0] for m in cat.mors})
    pr = functor(cat, d, {o: obj_split[o][1] for o in cat.objects},
                 {m: mor_split[m][1] for m in cat.mors})
    out = ProductCat(cat, c, d, obj_name, obj_split, mor_name, mor_split, pl, pr)
    _PRODUCT_CACHE[cache_key] = out
    return out


@dataclass(frozen=True)
class Functor:
    """A functor between finite categories, validated exhaustively."""

    source: FinCat
    target: FinCat
    on_objects: dict[str, str]
    on_morphisms: dict[str, str]

    def ob(self, x: str) -> str:
        return self.on_objects[x]

    def mor(self, f: str) -> str:
        return self.on_morphisms[f]


def functor(
    source: FinCat,
    target: FinCat,
    on_objects: dict[str, str],
    on_morphisms: dict[str, str],
) -> Functor:
    bad: list[str] = []
    for x in source.objects:
        if x not in on_objects:
            bad.append(f"object {x}: no image")
        elif on_objects[x] not in set(target.objects):
            bad.append(f"object {x}: image {on_objects[x]} not in target")
    for f in source.mors:
        if f not in on_morphisms:
            bad.append(f"morphism {f}: no image")
        elif on_morphisms[f] not in set(target.mors):
            bad.append(f"morphism {f}: image {on_morphisms[f]} not in target")
    if bad:
        raise ValidationError(bad)
    for f in source.mors:
        ff = on_morphisms[f]
        if target.src[ff] != on_objects[source.src[f]] or target.tgt[ff] != on_objects[source.tgt[f]]:
            bad.append(f"morphism {f}: image {ff} has wrong source/target")
    for x in source.objects:
        if on_morphisms[source.identities[x]] != target.identities[on_objects[x]]:
            bad.append(f"identity of {x} not preserved")
    for (g, f), gf in source.table.items():
        if target.table[(on_morphisms[g], on_morphisms[f])] != on_morphisms[gf]:
            bad.append(f"composition not preserved on ({g},{f})")
    if bad:
        raise ValidationError(bad)
    return Functor(source, target, dict(on_objects), dict(on_morphisms))


def identity_functor(c: FinCat) -> Functor:
    return functor(c, c, {o: o for o in c.objects}, {m: m for m in c.mors})


def compose_functors(g: Functor, f: Functor) -> Functor:
    """g after f."""
    if f.target != g.source:
        raise ShapeMismatchError("functor composition: middle categories differ")
    return functor(
        f.source,
        g.target,
        {x: g.on_objects[f.on_objects[x]] for x in f.source.objects},
        {m: g.on_morphisms[f.on_morphisms[m]] for m in f.source.mors},
    )


def opposite_functor(f: Functor) -> Functor:
    """The same tables read as a functor between the opposite categories."""
    return functor(opposite(f.source), opposite(f.target), dict(f.on_objects), dict(f.on_morphisms))


def iso_objects(c: FinCat, x: str, y: str) -> tuple[str, str] | None:
    """An isomorphism pair (u: x→y, v: y→x) in c, or None."""
    for u in c.hom(x, y):
        for v in c.hom(y, x):
            if c.comp(v, u) == c.id_of(x) and c.comp(u, v) == c.id_of(y):
                return (u, v)
    return None


def _functor_search(c: FinCat, d: FinCat, bijective: bool) -> Functor | None:
    """Backtracking search for a structure map c→d; bijective=True finds an isomorphism."""
    cobjs = list(c.objects)

    def extend_mors(on_obj: dict[str, str]) -> Functor | None:
        mors = list(c.mors)
        on_mor: dict[str, str] = {}
        used: set[str] = set()

        def assign(i: int) -> Functor | None:
            if i == len(mors):
                try:
                    return functor(c, d, on_obj, on_mor)
                except ValidationError:
                    return None
            f = mors[i]
            if c.is_id(f):
                img = d.identities[on_obj[c.src[f]]]
                if bijective and img in used:
                    return None
                on_mor[f] = img
                used.add(img)
                out = assign(i + 1)
                if out is not None:
                    return out
                used.discard(img)
                del on_mor[f]
                return None
            for img in d.hom(on_obj[c.src[f]], on_obj[c.tgt[f]]):
                if bijective and img in used:
                    continue
                on_mor[f] = img
                used.add(img)
                ok = True
                for (g2, f2), gf2 in c.table.items():
                    if g2 in on_mor and f2 in on_mor and gf2 in on_mor:
                        if d.table[(on_mor[g2], on_mor[f2])] != on_mor[gf2]:
                            ok = False
                            break
                if ok:
                    out = assign(i + 1)
                    if out is not None:
                        return out
                used.discard(img)
                del on_mor[f]
            return None

        return assign(0)

    if bijective:
        if len(c.objects) != len(d.objects) or len(c.mors) != len(d.mors):
            return None
        for perm in itertools.permutations(d.objects):
            on_obj = dict(zip(cobjs, perm))
            if any(
                len(c.hom(a, b)) != len(d.hom(on_obj[a], on_obj[b]))
                for a in cobjs
                for b in cobjs
            ):
                continue
            out = extend_mors(on_obj)
            if out is not None:
                return out
        return None
    for imgs in itertools.product(d.objects, repeat=len(cobjs)):
        out = extend_mors(dict(zip(cobjs, imgs)))
        if out is not None:
            return out
    return None


def iso_categories(c: FinCat, d: FinCat) -> tuple[Functor, Functor] | None:
    """An isomorphism of categories with its inverse, found by exhaustive search."""
    f = _functor_search(c, d, bijective=True)
    if f is None:
        return None
    inv_o = {v: k for k, v in f.on_objects.items()}
    inv_m = {v: k for k, v in f.on_morphisms.items()}
    return (f, functor(d, c, inv_o, inv_m))


@dataclass(frozen=True)
class EquivalenceCertificate:
    """Witness that a functor is an equivalence: hom bijections and iso hits."""

    ok: bool
    functor: Functor
    fully_faithful: bool
    ess_surjective: bool
    iso_witness: dict[str, tuple[str, tuple[str, str]]]
    failures: tuple[str, ...]


def equivalence_certificate(f: Functor) -> EquivalenceCertificate:
    """Check exhaustively that f is fully faithful and essentially surjective."""
    c, d = f.source, f.target
    failures: list[str] = []
    for a in c.objects:
        for b in c.objects:
            images = [f.on_morphisms[m] for m in c.hom(a, b)]
            if len(set(images)) != len(images):
                failures.append(f"not faithful on hom({a},{b})")
            if set(images) != set(d.hom(f.on_objects[a], f.on_objects[b])):
                failures.append(f"not full on hom({a},{b})")
    ff = not failures
    witness: dict[str, tuple[str, tuple[str, str]]] = {}
    for y in d.objects:
        hit = None
        for a in c.objects:
            isop = iso_objects(d, f.on_objects[a], y)
            if isop is not None:
                hit = (a, isop)
                break
        if hit is None:
            failures.append(f"object {y} not reached up to isomorphism")
        else:
            witness[y] = hit
    ess = all(y in witness for y in d.objects)
    return EquivalenceCertificate(ff and ess, f, ff, ess, witness, tuple(failures))
