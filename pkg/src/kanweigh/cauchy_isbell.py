"""Small projectives, Karoubi envelope, and the Isbell adjunction.

Small projectivity of a presheaf is decided twice, by independent routes that
must agree: adjointness of the corresponding module out of the unit category,
and an exhaustive search for a retract of a representable. The completion
under small-projective colimits is constructed as the idempotent-splitting
envelope and cross-validated against the category of retracts of
representables by a certified equivalence.
"""
from __future__ import annotations

from dataclasses import dataclass

from .core import FinCat, Functor, fincat, functor, opposite
from .errors import InternalCheckError, ShapeMismatchError
from .fixtures import terminal_category
from .names import pair, tup
from .promod import (
    AdjointnessResult,
    Module,
    has_right_adjoint,
    module_of_presheaf,
)
from .setfun import (
    NatTrans,
    SetFunctor,
    nat_set,
    nat_trans,
    natiso,
    nt_compose,
    set_functor,
    yoneda,
)


@dataclass
class RetractWitness:
    """A splitting of a presheaf through a representable."""

    representable: str
    section: NatTrans  # phi -> Y b
    retraction: NatTrans  # Y b -> phi

    def idempotent(self) -> NatTrans:
        return nt_compose(self.section, self.retraction)


@dataclass
class ProjectivityVerdict:
    ok: bool
    retract: RetractWitness | None
    adjointness: AdjointnessResult
    refutation: dict | None


def retract_search(b: FinCat, phi: SetFunctor, cap: int | None = None) -> RetractWitness | None:
    """Exhaustive search for a retract presentation through some representable."""
    ydata = yoneda(b, cap=cap)
    ident = {o: {x: x for x in phi.at(o)} for o in phi.source.objects}
    for obj in b.objects:
        yb = ydata.presheaves[obj]
        sections = nat_set(phi, yb, cap=cap)
        if not sections:
            continue
        retractions = nat_set(yb, phi, cap=cap)
        for s in sections:
            for r in retractions:
                if nt_compose(r, s).components == ident:
                    return RetractWitness(obj, s, r)
    return None


def is_small_projective(
    b: FinCat, phi: SetFunctor, cap: int | None = None, refute: bool = True
) -> ProjectivityVerdict:
    """Decide projectivity by module adjointness and by retract search; both must agree."""
    if phi.source != opposite(b):
        raise ShapeMismatchError("is_small_projective: not a presheaf on the given category")
    unit = terminal_category()
    adj = has_right_adjoint(module_of_presheaf(b, unit, phi), cap=cap, refute=refute)
    witness = retract_search(b, phi, cap=cap)
    if adj.ok != (witness is not None):
        raise InternalCheckError(
            "projectivity procedures disagree: module adjointness says "
            f"{adj.ok}, retract search says {witness is not None}"
        )
    return ProjectivityVerdict(adj.ok, witness, adj, adj.refutation)


@dataclass
class CauchyResult:
    """The idempotent-splitting completion with its validation data."""

    completion: FinCat
    embedding: Functor
    retract_category: FinCat
    comparison: Functor
    comparison_ok: bool
    ff_ok: bool
    split_presheaves: dict[str, SetFunctor]


def _karoubi(b: FinCat) -> tuple[FinCat, Functor, dict[str, tuple[str, str]]]:
    idems = [
        (x, e)
        for x in b.objects
        for e in b.hom(x, x)
        if b.comp(e, e) == e
    ]
    objects = [pair(x, e) for x, e in idems]
    split = dict(zip(objects, idems))
    morphisms = []
    identities = {}
    for (x, e) in idems:
        for (y, e2) in idems:
            for f in b.hom(x, y):
                if b.comp(e2, b.comp(f, e)) == f:
                    name = tup([f, pair(x, e), pair(y, e2)])
                    morphisms.append((name, pair(x, e), pair(y, e2)))
                    if (x, e) == (y, e2) and f == e:
                        identities[pair(x, e)] = name
    compose = {}
    for (mid, msrc, mtgt) in morphisms:
        for (nid, nsrc, ntgt) in morphisms:
            if mtgt == nsrc:
                f = split_mor_name(mid)
                g = split_mor_name(nid)
                compose[(nid, mid)] = tup([b.comp(g, f), msrc, ntgt])
    q = fincat(objects, morphisms, identities, compose)
    embed = functor(
        b,
        q,
        {x: pair(x, b.identities[x]) for x in b.objects},
        {
            f: tup([f, pair(b.src[f], b.identities[b.src[f]]), pair(b.tgt[f], b.identities[b.tgt[f]])])
            for f in b.mors
        },
    )
    return q, embed, split


def split_mor_name(name: str) -> str:
    """The underlying base morphism of an envelope morphism ⟨f,src,tgt⟩."""
    body = name[1:-1]
    depth = 0
    for i, ch in enumerate(body):
        if ch == "⟨":
            depth += 1
        elif ch == "⟩":
            depth -= 1
        elif ch == "," and depth == 0:
            return body[:i]
    raise ValueError(f"not an envelope morphism name: {name}")


def _image_presheaf(yb: SetFunctor, e_hat: NatTrans) -> SetFunctor:
    """The fixed points of an idempotent transformation, ambient order kept."""
    src = yb.source
    on_obj = {
        o: tuple(x for x in yb.at(o) if e_hat.components[o][x] == x)
        for o in src.objects
    }
    on_mor = {
        m: {x: e_hat.components[src.tgt[m]][yb.map(m)[x]] for x in on_obj[src.src[m]]}
        for m in src.mors
    }
    return set_functor(src, on_obj, on_mor)


def cauchy_completion(b: FinCat, cap: int | None = None) -> CauchyResult:
    """Split all idempotents; cross-validate against retracts of representables.

    The comparison functor sends (x, e) to the fixed-point presheaf of the
    induced idempotent on Y x; its hom tables are checked bijective against
    brute-forced natural transformation sets.
    """
    q, embed, split = _karoubi(b)
    ydata = yoneda(b, cap=cap)

    split_presheaves: dict[str, SetFunctor] = {}
    for obj in q.objects:
        x, e = split[obj]
        e_hat = nat_trans(
            ydata.presheaves[x],
            ydata.presheaves[x],
            {c: {m: b.comp(e, m) for m in b.hom(c, x)} for c in b.objects},
        )
        split_presheaves[obj] = _image_presheaf(ydata.presheaves[x], e_hat)

    # Retract category: objects are the split presheaves, homs brute-forced.
    r_objects = list(q.objects)
    r_morphisms = []
    r_ids = {}
    hom_tables: dict[tuple[str, str], dict[str, NatTrans]] = {}
    for o1 in r_objects:
        for o2 in r_objects:
            nats = nat_set(split_presheaves[o1], split_presheaves[o2], cap=cap)
            table = {}
            for nt in nats:
                name = tup(["nat", o1, o2, nt.name()])
                r_morphisms.append((name, o1, o2))
                table[name] = nt
                if o1 == o2 and all(
                    v == k for comp in nt.components.values() for k, v in comp.items()
                ):
                    r_ids[o1] = name
            hom_tables[(o1, o2)] = table
    r_compose = {}
    for (n1, s1, t1) in r_morphisms:
        for (n2, s2, t2) in r_morphisms:
            if t1 == s2:
                comp = nt_compose(hom_tables[(s2, t2)][n2], hom_tables[(s1, t1)][n1])
                r_compose[(n2, n1)] = tup(["nat", s1, t2, comp.name()])
    rcat = fincat(r_objects, r_morphisms, r_ids, r_compose)

    comp_obj = {o: o for o in q.objects}
    comp_mor = {}
    for m in q.mors:
        f = split_mor_name(m)
        s, t = q.src[m], q.tgt[m]
        nt = nat_trans(
            split_presheaves[s],
            split_presheaves[t],
            {
                c: {x: b.comp(f, x) for x in split_presheaves[s].at(c)}
                for c in b.objects
            },
        )
        comp_mor[m] = tup(["nat", s, t, nt.name()])
    comparison = functor(q, rcat, comp_obj, comp_mor)

    ff_ok = all(
        len(q.hom(o1, o2)) == len(rcat.hom(o1, o2))
        and len({comp_mor[m] for m in q.hom(o1, o2)}) == len(q.hom(o1, o2))
        for o1 in q.objects
        for o2 in q.objects
    )
    return CauchyResult(q, embed, rcat, comparison, ff_ok, ff_ok, split_presheaves)


def embedding_fully_faithful(res: CauchyResult, b: FinCat) -> bool:
    em = res.embedding
    return all(
        len(b.hom(x, y))
        == len(res.completion.hom(em.on_objects[x], em.on_objects[y]))
        and len({em.on_morphisms[m] for m in b.hom(x, y)}) == len(b.hom(x, y))
        for x in b.objects
        for y in b.objects
    )


def idempotents_split_in(c: FinCat) -> bool:
    """Every idempotent splits: e = s∘r with r∘s an identity."""
    for x in c.objects:
        for e in c.hom(x, x):
            if c.comp(e, e) != e:
                continue
            found = False
            for y in c.objects:
                for r in c.hom(x, y):
                    for s in c.hom(y, x):
                        if c.comp(s, r) == e and c.comp(r, s) == c.identities[y]:
                            found = True
            if not found:
                return False
    return True


# ---------------------------------------------------------------------------
# Isbell conjugation
# ---------------------------------------------------------------------------

@dataclass
class IsbellComponent:
    """One side of the conjugation with decode tables for its elements."""

    functor: SetFunctor
    decode: dict[str, dict[str, NatTrans]]  # object -> element name -> nat


def isbell_o(b: FinCat, phi: SetFunctor, cap: int | None = None) -> IsbellComponent:
    """O(φ): the copresheaf x ↦ Nat(φ, Yx)."""
    if phi.source != opposite(b):
        raise ShapeMismatchError("isbell_o expects a presheaf on the given category")
    ydata = yoneda(b, cap=cap)
    decode: dict[str, dict[str, NatTrans]] = {}
    on_obj = {}
    for x in b.objects:
        nats = nat_set(phi, ydata.presheaves[x], cap=cap)
        decode[x] = {nt.name(): nt for nt in nats}
        on_obj[x] = tuple(nt.name() for nt in nats)
    on_mor = {}
    for g in b.mors:
        x, y = b.src[g], b.tgt[g]
        post = ydata.on_morphisms[g]
        on_mor[g] = {
            name: nt_compose(post, decode[x][name]).name() for name in on_obj[x]
        }
    out = set_functor(b, on_obj, on_mor)
    return IsbellComponent(out, decode)


def coyoneda(b: FinCat) -> dict[str, SetFunctor]:
    """The corepresentables Y'x = B(x,-) as copresheaves on B."""
    out = {}
    for x in b.objects:
        on_obj = {c: b.hom(x, c) for c in b.objects}
        on_mor = {
            v: {m: b.comp(v, m) for m in b.hom(x, b.src[v])} for v in b.mors
        }
        out[x] = set_functor(b, on_obj, on_mor)
    return out


def isbell_spec(b: FinCat, psi: SetFunctor, cap: int | None = None) -> IsbellComponent:
    """Spec(ψ): the presheaf x ↦ Nat(ψ, Y'x)."""
    if psi.source != b:
        raise ShapeMismatchError("isbell_spec expects a copresheaf on the given category")
    bop = opposite(b)
    coy = coyoneda(b)
    decode: dict[str, dict[str, NatTrans]] = {}
    on_obj = {}
    for x in b.objects:
        nats = nat_set(psi, coy[x], cap=cap)
        decode[x] = {nt.name(): nt for nt in nats}
        on_obj[x] = tuple(nt.name() for nt in nats)
    on_mor = {}
    for u in bop.mors:  # u: x -> x2 in opposite(b), i.e. u: x2 -> x in b
        x, x2 = bop.src[u], bop.tgt[u]
        pre = nat_trans(
            coy[x],
            coy[x2],
            {c: {m: b.comp(m, u) for m in b.hom(x, c)} for c in b.objects},
        )
        on_mor[u] = {
            name: nt_compose(pre, decode[x][name]).name() for name in on_obj[x]
        }
    out = set_functor(bop, on_obj, on_mor)
    return IsbellComponent(out, decode)


def isbell_unit(b: FinCat, phi: SetFunctor, cap: int | None = None) -> NatTrans:
    """The unit φ → Spec(O(φ)) of the conjugation."""
    o_phi = isbell_o(b, phi, cap=cap)
    spec_o = isbell_spec(b, o_phi.functor, cap=cap)
    coy = coyoneda(b)
    comps = {}
    for x in b.objects:
        table = {}
        for elem in phi.at(x):
            candidate = {
                c: {name: o_phi.decode[c][name].components[x][elem] for name in o_phi.functor.at(c)}
                for c in b.objects
            }
            nt = NatTrans(o_phi.functor, coy[x], candidate)
            table[elem] = nt.name()
        comps[x] = table
    return nat_trans(phi, spec_o.functor, comps)


def isbell_counit(b: FinCat, psi: SetFunctor, cap: int | None = None) -> NatTrans:
    """The counit component ψ → O(Spec(ψ)), written in the copresheaf category."""
    spec_psi = isbell_spec(b, psi, cap=cap)
    o_spec = isbell_o(b, spec_psi.functor, cap=cap)
    ydata = yoneda(b, cap=cap)
    comps = {}
    for x in b.objects:
        table = {}
        for elem in psi.at(x):
            candidate = {
                c: {
                    name: spec_psi.decode[c][name].components[x][elem]
                    for name in spec_psi.functor.at(c)
                }
                for c in b.objects
            }
            nt = NatTrans(spec_psi.functor, ydata.presheaves[x], candidate)
            table[elem] = nt.name()
        comps[x] = table
    return nat_trans(psi, o_spec.functor, comps)


@dataclass
class IsbellCheck:
    ok: bool
    pairs_checked: int
    bijection_failures: tuple[str, ...]
    unit_invertible: dict[str, bool]
    counit_invertible: dict[str, bool]
    naturality_note: str


def isbell_bijection(
    b: FinCat,
    phi: SetFunctor,
    psi: SetFunctor,
    cap: int | None = None,
) -> tuple[bool, int, int]:
    """Check Nat(φ, Spec ψ) ≅ Nat(ψ, O φ) via the pairing transform."""
    o_phi = isbell_o(b, phi, cap=cap)
    spec_psi = isbell_spec(b, psi, cap=cap)
    ydata = yoneda(b, cap=cap)
    left = nat_set(phi, spec_psi.functor, cap=cap)
    right = nat_set(psi, o_phi.functor, cap=cap)
    transported = set()
    for alpha in left:
        comps = {}
        for x in b.objects:
            table = {}
            for w in psi.at(x):
                fam = {
                    c: {
                        elem: spec_psi.decode[c][alpha.components[c][elem]].components[x][w]
                        for elem in phi.at(c)
                    }
                    for c in b.objects
                }
                table[w] = NatTrans(phi, ydata.presheaves[x], fam).name()
            comps[x] = table
        nt = nat_trans(psi, o_phi.functor, comps)
        transported.add(nt.name())
    return (
        transported == {r.name() for r in right} and len(transported) == len(left),
        len(left),
        len(right),
    )


def isbell_adjunction_check(
    b: FinCat,
    presheaf_samples: list[SetFunctor],
    copresheaf_samples: list[SetFunctor],
    cap: int | None = None,
) -> IsbellCheck:
    """Hom-set bijection on the sample grid plus unit/counit invertibility.

    Invertibility of the unit is recorded for every presheaf sample and of
    the counit for every copresheaf sample; the caller compares these with
    projectivity. Naturality of the bijection is certified by the validity of
    the pairing transform on every grid pair.
    """
    failures = []
    pairs = 0
    for phi in presheaf_samples:
        for psi in copresheaf_samples:
            ok, nl, nr = isbell_bijection(b, phi, psi, cap=cap)
            pairs += 1
            if not ok:
                failures.append(f"pair sizes {nl} vs {nr}")
    unit_inv = {}
    for i, phi in enumerate(presheaf_samples):
        unit_inv[f"presheaf#{i}"] = isbell_unit(b, phi, cap=cap).is_iso()
    counit_inv = {}
    for i, psi in enumerate(copresheaf_samples):
        counit_inv[f"copresheaf#{i}"] = isbell_counit(b, psi, cap=cap).is_iso()
    return IsbellCheck(
        not failures,
        pairs,
        tuple(failures),
        unit_inv,
        counit_inv,
        "pairing transform validated naturally on every grid pair",
    )


def default_sample_grid(b: FinCat, total: int = 4) -> list[SetFunctor]:
    """All representables plus all presheaves with at most ``total`` elements."""
    from .fixtures import presheaves_with_total_at_most

    ydata = yoneda(b)
    samples = list(ydata.presheaves.values())
    samples.extend(presheaves_with_total_at_most(b, total))
    return samples
