"""The module (profunctor) algebra: composition, liftings, extensions, adjoints.

A module f: A ⇸ B is a set-valued functor on product(opposite(B), A); its
value at ⟨b,a⟩ is written f(b,a), contravariant in b and covariant in a.
Composition is the pointwise coend (g∘f)(c,a) = ∫^b g(c,b) × f(b,a); the two
internal homs are the pointwise ends

    rext(f,h)(c,b)  = ∫_a [f(b,a), h(c,a)]   (right Kan extension of h along f)
    rlift(g,h)(b,a) = ∫_c [g(c,b), h(c,a)]   (right lifting of h through g)

with elements stored as encoded component families so every transposition is
replayable. Adjointness of a module is decided constructively: compute the
right lifting of the identity module through f and check that composition
with f respects it; a positive answer produces a unit/counit pair with
verified triangle identities, a negative one the failing component plus a
colimit-preservation refutation when one is found at fixture scale.
"""
from __future__ import annotations

from dataclasses import dataclass

from .core import FinCat, Functor, ProductCat, opposite, product
from .errors import InternalCheckError, ShapeMismatchError
from .names import fun as fun_name
from .names import pair, tup
from .setfun import (
    CoendData,
    EndData,
    NatTrans,
    SetFunctor,
    coend,
    end,
    fun_set,
    nat_set,
    natiso,
    nat_trans,
    set_functor,
    yoneda,
)


@dataclass(frozen=True)
class Module:
    """A module (profunctor) A ⇸ B with carrier on product(opposite(B), A)."""

    source: FinCat  # A
    target: FinCat  # B
    pc: ProductCat
    carrier: SetFunctor

    def value(self, b: str, a: str) -> tuple[str, ...]:
        return self.carrier.at(self.pc.obj_name[(b, a)])

    def act(self, beta: str, alpha: str) -> dict[str, str]:
        """Carrier action along the pair (beta in B read backwards, alpha in A)."""
        return self.carrier.map(self.pc.mor_name[(beta, alpha)])


def module(source: FinCat, target: FinCat, on_objects, on_morphisms) -> Module:
    """Build and validate a module from value tables keyed by (b, a) pairs."""
    pc = product(opposite(target), source)
    carrier = set_functor(
        pc.cat,
        {pc.obj_name[(b, a)]: on_objects[(b, a)] for b in target.objects for a in source.objects},
        {
            pc.mor_name[(u, v)]: on_morphisms[(u, v)]
            for u in target.mors
            for v in source.mors
        },
    )
    return Module(source, target, pc, carrier)


def module_from_carrier(source: FinCat, target: FinCat, carrier: SetFunctor) -> Module:
    pc = product(opposite(target), source)
    if carrier.source != pc.cat:
        raise ShapeMismatchError("carrier does not live on product(opposite(B), A)")
    revalidated = set_functor(pc.cat, dict(carrier.on_objects), dict(carrier.on_morphisms))
    return Module(source, target, pc, revalidated)


def hom_module(a: FinCat) -> Module:
    """The identity module: hom(x, y) with composition on both sides."""
    on_obj = {(x, y): a.hom(x, y) for x in a.objects for y in a.objects}
    on_mor = {}
    for u in a.mors:  # read backwards: acts by precomposition
        for v in a.mors:
            on_mor[(u, v)] = {
                m: a.comp(v, a.comp(m, u)) for m in a.hom(a.tgt[u], a.src[v])
            }
    return module(a, a, on_obj, on_mor)


def functor_modules(t: Functor) -> tuple[Module, Module]:
    """The two modules of a functor T: A → B.

    T_lower(b,a) = B(b, Ta) as a module A ⇸ B, and T_upper(a,b) = B(Ta, b) as
    a module B ⇸ A.
    """
    a, b = t.source, t.target
    lower_obj = {(y, x): b.hom(y, t.ob(x)) for y in b.objects for x in a.objects}
    lower_mor = {}
    for u in b.mors:
        for v in a.mors:
            lower_mor[(u, v)] = {
                m: b.comp(t.mor(v), b.comp(m, u))
                for m in b.hom(b.tgt[u], t.ob(a.src[v]))
            }
    lower = module(a, b, lower_obj, lower_mor)
    upper_obj = {(x, y): b.hom(t.ob(x), y) for x in a.objects for y in b.objects}
    upper_mor = {}
    for v in a.mors:
        for u in b.mors:
            upper_mor[(v, u)] = {
                m: b.comp(u, b.comp(m, t.mor(v)))
                for m in b.hom(t.ob(a.tgt[v]), b.src[u])
            }
    upper = module(b, a, upper_obj, upper_mor)
    return lower, upper


def module_of_presheaf(b: FinCat, unit: FinCat, phi: SetFunctor) -> Module:
    """A presheaf on B as a module unit ⇸ B."""
    star = unit.objects[0]
    idstar = unit.identities[star]
    on_obj = {(y, star): phi.at(y) for y in b.objects}
    on_mor = {(u, idstar): dict(phi.map(u)) for u in b.mors}
    return module(unit, b, on_obj, on_mor)


def module_of_copresheaf(b: FinCat, unit: FinCat, g: SetFunctor) -> Module:
    """A copresheaf on B as a module B ⇸ unit."""
    star = unit.objects[0]
    idstar = unit.identities[star]
    on_obj = {(star, y): g.at(y) for y in b.objects}
    on_mor = {(idstar, v): dict(g.map(v)) for v in b.mors}
    return module(b, unit, on_obj, on_mor)


def transpose_module(m: Module) -> Module:
    """The same table read as a module opposite(B) ⇸ opposite(A)."""
    aop, bop = opposite(m.source), opposite(m.target)
    on_obj = {(x, y): m.value(y, x) for x in m.source.objects for y in m.target.objects}
    on_mor = {}
    for v in m.source.mors:
        for u in m.target.mors:
            on_mor[(v, u)] = dict(m.act(u, v))
    return module(bop, aop, on_obj, on_mor)


def presheaf_slice(m: Module, a: str) -> SetFunctor:
    """The presheaf m(-, a) on the target category."""
    bop = opposite(m.target)
    return SetFunctor(
        bop,
        {y: m.value(y, a) for y in m.target.objects},
        {u: dict(m.act(u, m.source.identities[a])) for u in m.target.mors},
    )


@dataclass(frozen=True)
class ModMor:
    """A morphism of modules: a natural transformation of the carriers."""

    src: Module
    tgt: Module
    nt: NatTrans

    def at(self, b: str, a: str) -> dict[str, str]:
        return self.nt.components[self.src.pc.obj_name[(b, a)]]

    def is_iso(self) -> bool:
        return self.nt.is_iso()


def mod_mor(src: Module, tgt: Module, components: dict[str, dict[str, str]]) -> ModMor:
    if src.pc.cat != tgt.pc.cat:
        raise ShapeMismatchError("module morphism: different product categories")
    return ModMor(src, tgt, nat_trans(src.carrier, tgt.carrier, components))


def mod_identity(m: Module) -> ModMor:
    comps = {o: {x: x for x in m.carrier.at(o)} for o in m.pc.cat.objects}
    return ModMor(m, m, NatTrans(m.carrier, m.carrier, comps))


def mod_vcompose(beta: ModMor, alpha: ModMor) -> ModMor:
    if alpha.tgt.carrier != beta.src.carrier:
        raise ShapeMismatchError("module morphisms do not compose")
    comps = {
        o: {x: beta.nt.components[o][alpha.nt.components[o][x]] for x in alpha.src.carrier.at(o)}
        for o in alpha.src.pc.cat.objects
    }
    return ModMor(alpha.src, beta.tgt, NatTrans(alpha.src.carrier, beta.tgt.carrier, comps))


def mod_inverse(alpha: ModMor) -> ModMor:
    if not alpha.is_iso():
        raise ShapeMismatchError("module morphism is not invertible")
    comps = {o: {y: x for x, y in c.items()} for o, c in alpha.nt.components.items()}
    return ModMor(alpha.tgt, alpha.src, NatTrans(alpha.tgt.carrier, alpha.src.carrier, comps))


def mod_equal(a: ModMor, b: ModMor) -> bool:
    return a.nt.components == b.nt.components


def mod_morphisms(m: Module, n: Module, cap: int | None = None) -> tuple[ModMor, ...]:
    """All module morphisms m → n, enumerated canonically."""
    if m.pc.cat != n.pc.cat:
        raise ShapeMismatchError("mod_morphisms: different product categories")
    return tuple(ModMor(m, n, nt) for nt in nat_set(m.carrier, n.carrier, cap=cap))


def module_iso(m: Module, n: Module) -> ModMor | None:
    """An explicit invertible module morphism, or None."""
    if m.pc.cat != n.pc.cat:
        return None
    nt = natiso(m.carrier, n.carrier)
    return None if nt is None else ModMor(m, n, nt)


def nat_trans_modules(rho_components: dict[str, str], t: Functor, s: Functor) -> tuple[ModMor, ModMor]:
    """The module morphisms of a natural transformation ρ: T ⇒ S.

    ``rho_components`` assigns to each source object x a target morphism
    ρ_x: Tx → Sx. Returns (ρ_lower: T_lower → S_lower, ρ_upper: S_upper → T_upper);
    validation of both certifies naturality of ρ.
    """
    a, b = t.source, t.target
    t_low, t_up = functor_modules(t)
    s_low, s_up = functor_modules(s)
    low_comps = {
        t_low.pc.obj_name[(y, x)]: {m: b.comp(rho_components[x], m) for m in b.hom(y, t.ob(x))}
        for y in b.objects
        for x in a.objects
    }
    lower = mod_mor(t_low, s_low, low_comps)
    up_comps = {
        s_up.pc.obj_name[(x, y)]: {m: b.comp(m, rho_components[x]) for m in b.hom(s.ob(x), y)}
        for x in a.objects
        for y in b.objects
    }
    upper = mod_mor(s_up, t_up, up_comps)
    return lower, upper


@dataclass(frozen=True)
class Composite:
    """A composed module with its coend bookkeeping.

    For each pair object ⟨c,a⟩ the coend over the middle category is kept:
    ``class_of[(c,a)]`` maps a tagged pair ⟨b,⟨y,x⟩⟩ to its class and
    ``reps[(c,a)]`` decodes a class back to its least representative (b, y, x).
    """

    module: Module
    left: Module  # g : B ⇸ C
    right: Module  # f : A ⇸ B
    class_tables: dict[tuple[str, str], dict[str, str]]
    rep_tables: dict[tuple[str, str], dict[str, tuple[str, str, str]]]

    def cls(self, c: str, a: str, b: str, y: str, x: str) -> str:
        return self.class_tables[(c, a)][pair(b, pair(y, x))]

    def rep(self, c: str, a: str, clsname: str) -> tuple[str, str, str]:
        return self.rep_tables[(c, a)][clsname]


def compose_modules(g: Module, f: Module, cap: int | None = None) -> Composite:
    """The coend composite g∘f; bifunctoriality is re-verified on the result."""
    if f.target != g.source:
        raise ShapeMismatchError("compose_modules: middle categories differ")
    a_cat, b_cat, c_cat = f.source, f.target, g.target
    pcb = product(opposite(b_cat), b_cat)

    class_tables: dict[tuple[str, str], dict[str, str]] = {}
    rep_tables: dict[tuple[str, str], dict[str, tuple[str, str, str]]] = {}
    carriers: dict[tuple[str, str], tuple[str, ...]] = {}
    for c in c_cat.objects:
        for a in a_cat.objects:
            on_obj = {}
            on_mor = {}
            for b1 in b_cat.objects:
                for b2 in b_cat.objects:
                    on_obj[pcb.obj_name[(b1, b2)]] = tuple(
                        pair(y, x) for y in g.value(c, b2) for x in f.value(b1, a)
                    )
            for u in b_cat.mors:
                for v in b_cat.mors:
                    gmap = g.act(c_cat.identities[c], v)
                    fmap = f.act(u, a_cat.identities[a])
                    on_mor[pcb.mor_name[(u, v)]] = {
                        pair(y, x): pair(gmap[y], fmap[x])
                        for y in g.value(c, b_cat.src[v])
                        for x in f.value(b_cat.tgt[u], a)
                    }
            integrand = set_functor(pcb.cat, on_obj, on_mor)
            data = coend(pcb, integrand)
            class_tables[(c, a)] = dict(data.class_of)
            rep_tables[(c, a)] = {
                cls: (b, yx[0], yx[1])
                for cls, (b, yxname) in data.rep_member.items()
                for yx in (_split_pair(yxname),)
            }
            carriers[(c, a)] = data.carrier

    on_objects = {(c, a): carriers[(c, a)] for c in c_cat.objects for a in a_cat.objects}
    on_morphisms = {}
    for u in c_cat.mors:  # read backwards in C
        for v in a_cat.mors:
            c1, a1 = c_cat.tgt[u], a_cat.src[v]
            c2, a2 = c_cat.src[u], a_cat.tgt[v]
            mapping = {}
            for cls in carriers[(c1, a1)]:
                b, y, x = rep_tables[(c1, a1)][cls]
                y2 = g.act(u, b_cat.identities[b])[y]
                x2 = f.act(b_cat.identities[b], v)[x]
                mapping[cls] = class_tables[(c2, a2)][pair(b, pair(y2, x2))]
            on_morphisms[(u, v)] = mapping
    composed = module(a_cat, c_cat, on_objects, on_morphisms)
    return Composite(composed, g, f, class_tables, rep_tables)


def _split_pair(name: str) -> tuple[str, str]:
    """Split a canonical ⟨x,y⟩ name at its top-level comma."""
    body = name[1:-1]
    depth = 0
    for i, ch in enumerate(body):
        if ch == "⟨":
            depth += 1
        elif ch == "⟩":
            depth -= 1
        elif ch == "," and depth == 0:
            return body[:i], body[i + 1 :]
    raise ValueError(f"not a pair name: {name}")


@dataclass(frozen=True)
class HomLike:
    """A pointwise-end module whose elements decode to component families.

    ``decode[(b,a)][element][c]`` is the component function at c (a dict), for
    an element of the value at ⟨b,a⟩; ``domains[(b,a)][c]`` fixes the encoding
    order of each component's domain.
    """

    module: Module
    left: Module
    right: Module
    decode: dict[tuple[str, str], dict[str, dict[str, dict[str, str]]]]
    domains: dict[tuple[str, str], dict[str, tuple[str, ...]]]
    mid: FinCat

    def encode(self, key: tuple[str, str], family: dict[str, dict[str, str]]) -> str:
        doms = self.domains[key]
        return tup(fun_name(family[c], doms[c]) for c in self.mid.objects)


def rlift(g: Module, h: Module, cap: int | None = None) -> HomLike:
    """Right lifting {g,h}: A ⇸ B of h: A ⇸ C through g: B ⇸ C.

    Value at ⟨b,a⟩: the end over c of [g(c,b), h(c,a)], computed as the set
    of natural families θ with θ_c: g(c,b) → h(c,a); element names coincide
    with the generic end's tuple encoding.
    """
    if g.target != h.target:
        raise ShapeMismatchError("rlift: target categories differ")
    a_cat, b_cat, c_cat = h.source, g.source, g.target
    cop = opposite(c_cat)

    decode: dict[tuple[str, str], dict[str, dict[str, dict[str, str]]]] = {}
    domains: dict[tuple[str, str], dict[str, tuple[str, ...]]] = {}
    values: dict[tuple[str, str], tuple[str, ...]] = {}
    for b in b_cat.objects:
        g_slice = SetFunctor(
            cop,
            {c: g.value(c, b) for c in c_cat.objects},
            {u: g.act(u, b_cat.identities[b]) for u in c_cat.mors},
        )
        for a in a_cat.objects:
            h_slice = SetFunctor(
                cop,
                {c: h.value(c, a) for c in c_cat.objects},
                {u: h.act(u, a_cat.identities[a]) for u in c_cat.mors},
            )
            nats = nat_set(g_slice, h_slice, cap=cap)
            values[(b, a)] = tuple(nt.name() for nt in nats)
            domains[(b, a)] = {c: g.value(c, b) for c in c_cat.objects}
            decode[(b, a)] = {nt.name(): nt.components for nt in nats}

    on_objects = {(b, a): values[(b, a)] for b in b_cat.objects for a in a_cat.objects}
    on_morphisms = {}
    for u in b_cat.mors:  # u read backwards in B: from tgt(u) to src(u)
        for v in a_cat.mors:
            b1, a1 = b_cat.tgt[u], a_cat.src[v]
            b2, a2 = b_cat.src[u], a_cat.tgt[v]
            mapping = {}
            for name in values[(b1, a1)]:
                theta = decode[(b1, a1)][name]
                fam = {}
                for c in c_cat.objects:
                    gmap = g.act(c_cat.identities[c], u)
                    hmap = h.act(c_cat.identities[c], v)
                    fam[c] = {x: hmap[theta[c][gmap[x]]] for x in g.value(c, b2)}
                mapping[name] = tup(
                    fun_name(fam[c], g.value(c, b2)) for c in c_cat.objects
                )
            on_morphisms[(u, v)] = mapping
    lifted = module(a_cat, b_cat, on_objects, on_morphisms)
    return HomLike(lifted, g, h, decode, domains, c_cat)


def rext(f: Module, h: Module, cap: int | None = None) -> HomLike:
    """Right Kan extension [f,h]: B ⇸ C of h: A ⇸ C along f: A ⇸ B.

    Value at ⟨c,b⟩: the end over a of [f(b,a), h(c,a)], computed as natural
    families θ with θ_a: f(b,a) → h(c,a); same encoding as the generic end.
    """
    if f.source != h.source:
        raise ShapeMismatchError("rext: source categories differ")
    a_cat, b_cat, c_cat = f.source, f.target, h.target

    decode: dict[tuple[str, str], dict[str, dict[str, dict[str, str]]]] = {}
    domains: dict[tuple[str, str], dict[str, tuple[str, ...]]] = {}
    values: dict[tuple[str, str], tuple[str, ...]] = {}
    for b in b_cat.objects:
        f_slice = SetFunctor(
            a_cat,
            {a: f.value(b, a) for a in a_cat.objects},
            {v: f.act(b_cat.identities[b], v) for v in a_cat.mors},
        )
        for c in c_cat.objects:
            h_slice = SetFunctor(
                a_cat,
                {a: h.value(c, a) for a in a_cat.objects},
                {v: h.act(c_cat.identities[c], v) for v in a_cat.mors},
            )
            nats = nat_set(f_slice, h_slice, cap=cap)
            values[(c, b)] = tuple(nt.name() for nt in nats)
            domains[(c, b)] = {a: f.value(b, a) for a in a_cat.objects}
            decode[(c, b)] = {nt.name(): nt.components for nt in nats}

    on_objects = {(c, b): values[(c, b)] for c in c_cat.objects for b in b_cat.objects}
    on_morphisms = {}
    for u in c_cat.mors:  # u read backwards in C
        for v in b_cat.mors:
            c1, b1 = c_cat.tgt[u], b_cat.src[v]
            c2, b2 = c_cat.src[u], b_cat.tgt[v]
            mapping = {}
            for name in values[(c1, b1)]:
                theta = decode[(c1, b1)][name]
                fam = {}
                for a in a_cat.objects:
                    fmap = f.act(v, a_cat.identities[a])
                    hmap = h.act(u, a_cat.identities[a])
                    fam[a] = {x: hmap[theta[a][fmap[x]]] for x in f.value(b2, a)}
                mapping[name] = tup(
                    fun_name(fam[a], f.value(b2, a)) for a in a_cat.objects
                )
            on_morphisms[(u, v)] = mapping
    extended = module(b_cat, c_cat, on_objects, on_morphisms)
    return HomLike(extended, f, h, decode, domains, a_cat)


# ---------------------------------------------------------------------------
# Transposition along the universal bijections of composition/lifting/extension
# ---------------------------------------------------------------------------

def to_lift_form(comp: Composite, lifted: HomLike, mu: ModMor) -> ModMor:
    """Transpose μ: g∘m → h into m → rlift(g,h) by pasting."""
    g, m, h = comp.left, comp.right, lifted.right
    out: dict[str, dict[str, str]] = {}
    for b in m.target.objects:
        for a in m.source.objects:
            table = {}
            for x in m.value(b, a):
                fam = {
                    c: {
                        y: mu.at(c, a)[comp.cls(c, a, b, y, x)]
                        for y in g.value(c, b)
                    }
                    for c in lifted.mid.objects
                }
                name = lifted.encode((b, a), fam)
                if name not in set(lifted.module.value(b, a)):
                    raise InternalCheckError("transpose left the lifting carrier")
                table[x] = name
            out[m.pc.obj_name[(b, a)]] = table
    return mod_mor(m, lifted.module, out)


def from_lift_form(comp: Composite, lifted: HomLike, nu: ModMor) -> ModMor:
    """Transpose ν: m → rlift(g,h) into g∘m → h."""
    g, m, h = comp.left, comp.right, lifted.right
    out: dict[str, dict[str, str]] = {}
    for c in g.target.objects:
        for a in m.source.objects:
            table = {}
            for cls in comp.module.value(c, a):
                b, y, x = comp.rep(c, a, cls)
                theta = lifted.decode[(b, a)][nu.at(b, a)[x]]
                table[cls] = theta[c][y]
            out[comp.module.pc.obj_name[(c, a)]] = table
    return mod_mor(comp.module, h, out)


def to_ext_form(comp: Composite, extended: HomLike, mu: ModMor) -> ModMor:
    """Transpose μ: g∘f → h into g → rext(f,h)."""
    g, f, h = comp.left, comp.right, extended.right
    out: dict[str, dict[str, str]] = {}
    for c in g.target.objects:
        for b in g.source.objects:
            table = {}
            for y in g.value(c, b):
                fam = {
                    a: {
                        x: mu.at(c, a)[comp.cls(c, a, b, y, x)]
                        for x in f.value(b, a)
                    }
                    for a in extended.mid.objects
                }
                name = extended.encode((c, b), fam)
                if name not in set(extended.module.value(c, b)):
                    raise InternalCheckError("transpose left the extension carrier")
                table[y] = name
            out[g.pc.obj_name[(c, b)]] = table
    return mod_mor(g, extended.module, out)


def from_ext_form(comp: Composite, extended: HomLike, nu: ModMor) -> ModMor:
    """Transpose ν: g → rext(f,h) into g∘f → h."""
    g, f, h = comp.left, comp.right, extended.right
    out: dict[str, dict[str, str]] = {}
    for c in g.target.objects:
        for a in f.source.objects:
            table = {}
            for cls in comp.module.value(c, a):
                b, y, x = comp.rep(c, a, cls)
                theta = extended.decode[(c, b)][nu.at(c, b)[y]]
                table[cls] = theta[a][x]
            out[comp.module.pc.obj_name[(c, a)]] = table
    return mod_mor(comp.module, h, out)


def rlift_counit(lifted: HomLike, comp: Composite | None = None) -> tuple[Composite, ModMor]:
    """The universal 2-cell ε: g ∘ rlift(g,h) → h."""
    if comp is None:
        comp = compose_modules(lifted.left, lifted.module)
    return comp, from_lift_form(comp, lifted, mod_identity(lifted.module))


def rext_counit(extended: HomLike, comp: Composite | None = None) -> tuple[Composite, ModMor]:
    """The universal 2-cell ε: rext(f,h) ∘ f → h."""
    if comp is None:
        comp = compose_modules(extended.module, extended.left)
    return comp, from_ext_form(comp, extended, mod_identity(extended.module))


# ---------------------------------------------------------------------------
# Coherence plumbing: whiskering, associator, unitors
# ---------------------------------------------------------------------------

def whisker_left(k: Module, alpha: ModMor, comp_src: Composite, comp_tgt: Composite) -> ModMor:
    """k ∘ α : k∘m → k∘m' for α: m → m'."""
    out: dict[str, dict[str, str]] = {}
    for c in k.target.objects:
        for a in alpha.src.source.objects:
            table = {}
            for cls in comp_src.module.value(c, a):
                b, y, x = comp_src.rep(c, a, cls)
                table[cls] = comp_tgt.cls(c, a, b, y, alpha.at(b, a)[x])
            out[comp_src.module.pc.obj_name[(c, a)]] = table
    return mod_mor(comp_src.module, comp_tgt.module, out)


def whisker_right(alpha: ModMor, m: Module, comp_src: Composite, comp_tgt: Composite) -> ModMor:
    """α ∘ m : k∘m → k'∘m for α: k → k'."""
    out: dict[str, dict[str, str]] = {}
    for c in alpha.src.target.objects:
        for a in m.source.objects:
            table = {}
            for cls in comp_src.module.value(c, a):
                b, y, x = comp_src.rep(c, a, cls)
                table[cls] = comp_tgt.cls(c, a, b, alpha.at(c, b)[y], x)
            out[comp_src.module.pc.obj_name[(c, a)]] = table
    return mod_mor(comp_src.module, comp_tgt.module, out)


def associator(
    hg: Composite, hg_f: Composite, gf: Composite, h_gf: Composite
) -> ModMor:
    """(h∘g)∘f → h∘(g∘f) on coend classes, via representatives."""
    h, g, f = hg.left, hg.right, gf.right
    out: dict[str, dict[str, str]] = {}
    for d in h.target.objects:
        for a in f.source.objects:
            table = {}
            for cls in hg_f.module.value(d, a):
                b, w, x = hg_f.rep(d, a, cls)  # w in (h∘g)(d,b), x in f(b,a)
                c, z, y = hg.rep(d, b, w)  # z in h(d,c), y in g(c,b)
                table[cls] = h_gf.cls(d, a, c, z, gf.cls(c, a, b, y, x))
            out[hg_f.module.pc.obj_name[(d, a)]] = table
    return mod_mor(hg_f.module, h_gf.module, out)


def left_unitor(m: Module, comp: Composite) -> ModMor:
    """1_B ∘ m → m."""
    out: dict[str, dict[str, str]] = {}
    for b in m.target.objects:
        for a in m.source.objects:
            table = {}
            for cls in comp.module.value(b, a):
                b2, n, x = comp.rep(b, a, cls)  # n: b -> b2 in B, x in m(b2, a)
                table[cls] = m.act(n, m.source.identities[a])[x]
            out[comp.module.pc.obj_name[(b, a)]] = table
    return mod_mor(comp.module, m, out)


def left_unitor_inv(m: Module, comp: Composite) -> ModMor:
    out: dict[str, dict[str, str]] = {}
    hom = comp.left
    for b in m.target.objects:
        for a in m.source.objects:
            table = {
                x: comp.cls(b, a, b, m.target.identities[b], x) for x in m.value(b, a)
            }
            out[m.pc.obj_name[(b, a)]] = table
    return mod_mor(m, comp.module, out)


def right_unitor(m: Module, comp: Composite) -> ModMor:
    """m ∘ 1_A → m."""
    out: dict[str, dict[str, str]] = {}
    for b in m.target.objects:
        for a in m.source.objects:
            table = {}
            for cls in comp.module.value(b, a):
                a2, x, n = comp.rep(b, a, cls)  # x in m(b, a2), n: a2 -> a in A
                table[cls] = m.act(m.target.identities[b], n)[x]
            out[comp.module.pc.obj_name[(b, a)]] = table
    return mod_mor(comp.module, m, out)


def right_unitor_inv(m: Module, comp: Composite) -> ModMor:
    out: dict[str, dict[str, str]] = {}
    for b in m.target.objects:
        for a in m.source.objects:
            table = {
                x: comp.cls(b, a, a, x, m.source.identities[a]) for x in m.value(b, a)
            }
            out[m.pc.obj_name[(b, a)]] = table
    return mod_mor(m, comp.module, out)


# ---------------------------------------------------------------------------
# Adjunctions
# ---------------------------------------------------------------------------

@dataclass
class TriangleReport:
    ok: bool
    failing: str = ""


def check_adjunction(f: Module, g: Module, eta: ModMor, eps: ModMor) -> TriangleReport:
    """Verify the two triangle identities of a candidate adjunction f ⊣ g.

    ``eta``: 1_A → g∘f and ``eps``: f∘g → 1_B, both as module morphisms whose
    endpoints must structurally match the canonical composites.
    """
    a_cat, b_cat = f.source, f.target
    if g.source != b_cat or g.target != a_cat:
        raise ShapeMismatchError("check_adjunction: g is not a module B ⇸ A")
    one_a, one_b = hom_module(a_cat), hom_module(b_cat)
    gf = compose_modules(g, f)
    fg = compose_modules(f, g)
    if eta.src.carrier != one_a.carrier or eta.tgt.carrier != gf.module.carrier:
        raise ShapeMismatchError("unit endpoints do not match 1_A → g∘f")
    if eps.src.carrier != fg.module.carrier or eps.tgt.carrier != one_b.carrier:
        raise ShapeMismatchError("counit endpoints do not match f∘g → 1_B")

    # triangle on f: f → f∘1_A → f∘(g∘f) → (f∘g)∘f → 1_B∘f → f
    f_onea = compose_modules(f, one_a)
    f_gf = compose_modules(f, gf.module)
    fg_f = compose_modules(fg.module, f)
    oneb_f = compose_modules(one_b, f)
    chain_f = mod_vcompose(
        left_unitor(f, oneb_f),
        mod_vcompose(
            whisker_right(eps, f, fg_f, oneb_f),
            mod_vcompose(
                mod_inverse(associator(fg, fg_f, gf, f_gf)),
                mod_vcompose(
                    whisker_left(f, eta, f_onea, f_gf),
                    right_unitor_inv(f, f_onea),
                ),
            ),
        ),
    )
    if not mod_equal(chain_f, mod_identity(f)):
        for o, comp in chain_f.nt.components.items():
            for x, y in comp.items():
                if x != y:
                    return TriangleReport(False, f"triangle on f fails at {o}: {x} ↦ {y}")

    # triangle on g: g → 1_A∘g → (g∘f)∘g → g∘(f∘g) → g∘1_B → g
    onea_g = compose_modules(one_a, g)
    gf_g = compose_modules(gf.module, g)
    g_fg = compose_modules(g, fg.module)
    g_oneb = compose_modules(g, one_b)
    chain_g = mod_vcompose(
        right_unitor(g, g_oneb),
        mod_vcompose(
            whisker_left(g, eps, g_fg, g_oneb),
            mod_vcompose(
                associator(gf, gf_g, fg, g_fg),
                mod_vcompose(
                    whisker_right(eta, g, onea_g, gf_g),
                    left_unitor_inv(g, onea_g),
                ),
            ),
        ),
    )
    if not mod_equal(chain_g, mod_identity(g)):
        for o, comp in chain_g.nt.components.items():
            for x, y in comp.items():
                if x != y:
                    return TriangleReport(False, f"triangle on g fails at {o}: {x} ↦ {y}")
    return TriangleReport(True)


@dataclass
class AdjointnessResult:
    """Outcome of the adjointness decision for a module."""

    ok: bool
    right_adjoint: Module | None
    unit: ModMor | None
    counit: ModMor | None
    triangles: TriangleReport | None
    hom_form_agrees: bool
    respect_failure: str = ""
    refutation: dict | None = None


def _hom_form_crosscheck(f: Module, lifted: HomLike, cap: int | None) -> bool:
    """Compare each value of the computed right adjoint with Nat(f(-,a), Yb)."""
    ydata = yoneda(f.target, cap=cap)
    for a in f.source.objects:
        slice_a = presheaf_slice(f, a)
        for b in f.target.objects:
            nats = nat_set(slice_a, ydata.presheaves[b], cap=cap)
            names = set()
            for elem in lifted.module.value(a, b):
                fam = lifted.decode[(a, b)][elem]
                nt = NatTrans(slice_a, ydata.presheaves[b], {c: dict(fam[c]) for c in f.target.objects})
                names.add(nt.name())
            if names != {n.name() for n in nats}:
                return False
    return True


def _colimit_refutation(f: Module, cap: int | None) -> dict | None:
    """Search small colimits in presheaves on B that some hom functor fails.

    Candidates: binary coproducts of representables and of the terminal
    presheaf, exactly the desk-scale instances. Returns the first failure.
    """
    from .fixtures import delta1, discrete_pair
    from .weighted import PresheafDiagram, nat_hom_target, preserves, weighted_colimit

    b_cat = f.target
    bop = opposite(b_cat)
    ydata = yoneda(b_cat, cap=cap)
    terminal = SetFunctor(
        bop,
        {o: ("*",) for o in bop.objects},
        {m: {"*": "*"} for m in bop.mors},
    )
    candidates: list[tuple[str, SetFunctor]] = [
        (f"Y{b}", ydata.presheaves[b]) for b in b_cat.objects
    ]
    candidates.append(("Δ1", terminal))
    d2 = discrete_pair()
    w = delta1(d2, "colimit")
    for na, pa in candidates:
        for nb, pb in candidates:
            diagram = PresheafDiagram(
                opposite(d2),
                b_cat,
                {"a": pa, "b": pb},
                {
                    "ida": nt_identity_for(pa),
                    "idb": nt_identity_for(pb),
                },
            )
            inst = weighted_colimit(w, diagram, cap=cap, verify=False)
            for a in f.source.objects:
                tf = nat_hom_target(presheaf_slice(f, a), cap=cap)
                verdict = preserves(tf, inst, cap=cap)
                if not verdict.ok:
                    return {
                        "component": a,
                        "colimit": f"{na} ⊔ {nb}",
                        "transported_size": verdict.transported_size,
                        "fresh_size": verdict.fresh_size,
                        "witness": verdict.witness,
                    }
    return None


def nt_identity_for(p: SetFunctor) -> NatTrans:
    return NatTrans(p, p, {o: {x: x for x in p.at(o)} for o in p.source.objects})


def has_right_adjoint(f: Module, cap: int | None = None, refute: bool = True) -> AdjointnessResult:
    """Decide whether the module f has a right adjoint, with certificates.

    Constructive route: compute t = rlift(f, 1_B) with its counit, then check
    that composition with f respects the lifting (the canonical 2-cell
    t∘f → rlift(f,f) must be invertible). On success the unit is assembled
    from the inverse and the triangle identities are verified; on failure the
    failing component is reported together with a colimit-preservation
    refutation when the desk-scale search finds one.
    """
    a_cat, b_cat = f.source, f.target
    one_b = hom_module(b_cat)
    lifted = rlift(f, one_b, cap=cap)
    t = lifted.module
    comp_ft, eps = rlift_counit(lifted)
    hom_ok = _hom_form_crosscheck(f, lifted, cap)

    lift_ff = rlift(f, f, cap=cap)
    comp_tf = compose_modules(t, f, cap=cap)
    # canonical pasting: the M1.4 image of ε whiskered by f
    chi_comps: dict[str, dict[str, str]] = {}
    for a1 in a_cat.objects:
        for a2 in a_cat.objects:
            table = {}
            for cls in comp_tf.module.value(a1, a2):
                b, theta_name, x = comp_tf.rep(a1, a2, cls)
                theta = lifted.decode[(a1, b)][theta_name]
                fam = {}
                for c in b_cat.objects:
                    fam[c] = {
                        y: f.act(theta[c][y], a_cat.identities[a2])[x]
                        for y in f.value(c, a1)
                    }
                name = lift_ff.encode((a1, a2), fam)
                if name not in set(lift_ff.module.value(a1, a2)):
                    raise InternalCheckError("respect pasting left the lifting carrier")
                table[cls] = name
            chi_comps[comp_tf.module.pc.obj_name[(a1, a2)]] = table
    chi = mod_mor(comp_tf.module, lift_ff.module, chi_comps)

    if not chi.is_iso():
        failing = ""
        for o, comp in chi.nt.components.items():
            image = set(comp.values())
            if len(image) != len(comp) or len(image) != len(lift_ff.module.carrier.at(o)):
                failing = f"lifting not respected at {o}: {len(comp)} vs {len(lift_ff.module.carrier.at(o))}"
                break
        return AdjointnessResult(
            False, None, None, None, None, hom_ok,
            respect_failure=failing,
            refutation=_colimit_refutation(f, cap) if refute else None,
        )

    one_a = hom_module(a_cat)
    comp_f_onea = compose_modules(f, one_a)
    upsilon = to_lift_form(comp_f_onea, lift_ff, right_unitor(f, comp_f_onea))
    eta = mod_vcompose(mod_inverse(chi), upsilon)
    triangles = check_adjunction(f, t, eta, eps)
    if not triangles.ok:
        raise InternalCheckError(
            f"respected lifting produced failing triangles: {triangles.failing}"
        )
    return AdjointnessResult(True, t, eta, eps, triangles, hom_ok)


def has_left_adjoint(g: Module, cap: int | None = None, refute: bool = True) -> AdjointnessResult:
    """Left adjoints are decided by running the right-sided procedure on opposites."""
    return has_right_adjoint(transpose_module(g), cap=cap, refute=refute)
