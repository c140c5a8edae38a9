"""Standard small categories, weights, and presheaf builders.

These are the desk-scale categories the test suite and the demos revolve
around; all have at most four objects and sixteen morphisms.
"""
from __future__ import annotations

import itertools

from .core import FinCat, fincat, opposite
from .setfun import SetFunctor, set_functor
from .weighted import Weight


def terminal_category() -> FinCat:
    """One object, one identity."""
    return fincat(["*"], [("id*", "*", "*")], {"*": "id*"}, {("id*", "id*"): "id*"})


def arrow_category() -> FinCat:
    """Two objects a → b."""
    return fincat(
        ["a", "b"],
        [("ida", "a", "a"), ("idb", "b", "b"), ("f", "a", "b")],
        {"a": "ida", "b": "idb"},
        {
            ("ida", "ida"): "ida",
            ("idb", "idb"): "idb",
            ("f", "ida"): "f",
            ("idb", "f"): "f",
        },
    )


def discrete_pair() -> FinCat:
    return fincat(
        ["a", "b"],
        [("ida", "a", "a"), ("idb", "b", "b")],
        {"a": "ida", "b": "idb"},
        {("ida", "ida"): "ida", ("idb", "idb"): "idb"},
    )


def parallel_pair() -> FinCat:
    """Two objects with two parallel arrows a ⇉ b."""
    return fincat(
        ["a", "b"],
        [("ida", "a", "a"), ("idb", "b", "b"), ("f", "a", "b"), ("g", "a", "b")],
        {"a": "ida", "b": "idb"},
        {
            ("ida", "ida"): "ida",
            ("idb", "idb"): "idb",
            ("f", "ida"): "f",
            ("idb", "f"): "f",
            ("g", "ida"): "g",
            ("idb", "g"): "g",
        },
    )


def walking_idempotent() -> FinCat:
    """One object with a non-identity idempotent e, e∘e = e."""
    return fincat(
        ["x"],
        [("id", "x", "x"), ("e", "x", "x")],
        {"x": "id"},
        {("id", "id"): "id", ("id", "e"): "e", ("e", "id"): "e", ("e", "e"): "e"},
    )


def cospan_category() -> FinCat:
    """Three objects 0 → j ← 1; as a poset it has all binary joins."""
    return fincat(
        ["0", "1", "j"],
        [
            ("id0", "0", "0"),
            ("id1", "1", "1"),
            ("idj", "j", "j"),
            ("l", "0", "j"),
            ("r", "1", "j"),
        ],
        {"0": "id0", "1": "id1", "j": "idj"},
        {
            ("id0", "id0"): "id0",
            ("id1", "id1"): "id1",
            ("idj", "idj"): "idj",
            ("l", "id0"): "l",
            ("idj", "l"): "l",
            ("r", "id1"): "r",
            ("idj", "r"): "r",
        },
    )


def span_category() -> FinCat:
    return opposite(cospan_category())


def empty_category() -> FinCat:
    return fincat([], [], {}, {})


def delta1(shape: FinCat, variance: str) -> Weight:
    """The constant singleton weight on a shape; conical (co)limits."""
    f = set_functor(
        shape,
        {o: ("*",) for o in shape.objects},
        {m: {"*": "*"} for m in shape.mors},
    )
    return Weight(f, variance)


def representable_weight(k: FinCat, obj: str, variance: str) -> Weight:
    """The covariant representable K(obj, -) as a weight on K."""
    f = set_functor(
        k,
        {c: k.hom(obj, c) for c in k.objects},
        {m: {x: k.comp(m, x) for x in k.hom(obj, k.src[m])} for m in k.mors},
    )
    return Weight(f, variance)


def finite_set_presheaf(n: int) -> SetFunctor:
    """An n-element set as a presheaf on the terminal category."""
    i = terminal_category()
    elems = tuple(str(k) for k in range(n))
    return set_functor(opposite(i), {"*": elems}, {"id*": {x: x for x in elems}})


def presheaves_with_total_at_most(b: FinCat, total: int):
    """All presheaves on b whose element counts sum to ≤ total, canonical order."""
    bop = opposite(b)
    objs = list(bop.objects)
    n = len(objs)
    size_tuples = sorted(
        (t for t in itertools.product(range(total + 1), repeat=n) if sum(t) <= total),
        key=lambda t: (sum(t), t),
    )
    nonid = list(bop.nonid_mors)
    for sizes in size_tuples:
        on_obj = {o: tuple(str(i) for i in range(s)) for o, s in zip(objs, sizes)}
        if any(len(on_obj[bop.src[m]]) > 0 and len(on_obj[bop.tgt[m]]) == 0 for m in nonid):
            continue
        assigned = {bop.identities[o]: {x: x for x in on_obj[o]} for o in objs}

        def consistent() -> bool:
            for (g, f), gf in bop.table.items():
                if g in assigned and f in assigned and gf in assigned:
                    ff = assigned[f]
                    if any(assigned[g][ff[x]] != assigned[gf][x] for x in ff):
                        return False
            return True

        def rec(i: int):
            if i == len(nonid):
                yield SetFunctor(bop, dict(on_obj), {m: dict(v) for m, v in assigned.items()})
                return
            m = nonid[i]
            dom, cod = on_obj[bop.src[m]], on_obj[bop.tgt[m]]
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


def fixture_categories() -> dict[str, FinCat]:
    """The standard fixture family used across the test and acceptance suites."""
    return {
        "terminal": terminal_category(),
        "arrow": arrow_category(),
        "discrete_pair": discrete_pair(),
        "parallel_pair": parallel_pair(),
        "idempotent": walking_idempotent(),
        "cospan": cospan_category(),
    }
