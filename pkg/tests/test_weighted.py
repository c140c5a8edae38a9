from __future__ import annotations

import pytest

from kanweigh.core import functor, opposite, product
from kanweigh.errors import ResourceCapError, ShapeMismatchError
from kanweigh.fixtures import (
    arrow_category,
    cospan_category,
    delta1,
    discrete_pair,
    finite_set_presheaf,
    parallel_pair,
    presheaves_with_total_at_most,
    representable_weight,
    terminal_category,
    walking_idempotent,
)
from kanweigh.setfun import natiso, nt_identity, set_functor, yoneda
from kanweigh.weighted import (
    PresheafDiagram,
    Weight,
    commutation_search,
    commutes_at,
    evaluation_target,
    hom_target,
    identity_target,
    is_flat_finlim,
    presheaf_diagram,
    preserves,
    weighted_colimit,
    weighted_limit,
    yoneda_diagram,
)

import oracles


def sizes_diagram(shape, table):
    on_obj = {o: tuple(f"{o}{i}" for i in range(n)) for o, n in table.items()}
    on_mor = {m: {x: x for x in on_obj[shape.src[m]]} for m in shape.mors if shape.src[m] == shape.tgt[m]}
    return on_obj, on_mor


def test_weighted_limit_product():
    d2 = discrete_pair()
    w = delta1(d2, "limit")
    t = set_functor(
        d2,
        {"a": ("0", "1"), "b": ("x",)},
        {"ida": {"0": "0", "1": "1"}, "idb": {"x": "x"}},
    )
    res = weighted_limit(w, t)
    assert len(res.carrier) == 2
    assert len(oracles.weighted_cone_families(w, t)) == 2


def test_weighted_limit_representable_is_evaluation():
    two = arrow_category()
    w = representable_weight(two, "a", "limit")
    t = set_functor(
        two,
        {"a": ("0", "1", "2"), "b": ("x", "y")},
        {
            "ida": {str(i): str(i) for i in range(3)},
            "idb": {"x": "x", "y": "y"},
            "f": {"0": "x", "1": "y", "2": "x"},
        },
    )
    res = weighted_limit(w, t)
    assert len(res.carrier) == len(t.at("a"))


def test_weighted_limit_swap_equalizer_empty(swap_diagram):
    pp = parallel_pair()
    w = delta1(pp, "limit")
    t = set_functor(
        pp,
        {"a": ("0", "1"), "b": ("0", "1")},
        {
            "ida": {"0": "0", "1": "1"},
            "idb": {"0": "0", "1": "1"},
            "f": {"0": "0", "1": "1"},
            "g": {"0": "1", "1": "0"},
        },
    )
    res = weighted_limit(w, t)
    assert len(res.carrier) == 0
    assert len(oracles.weighted_cone_families(w, t)) == 0


def test_weighted_colimit_coproduct():
    d2 = discrete_pair()
    w = delta1(d2, "colimit")
    s = set_functor(
        opposite(d2),
        {"a": ("0", "1"), "b": ("x",)},
        {"ida": {"0": "0", "1": "1"}, "idb": {"x": "x"}},
    )
    res = weighted_colimit(w, s)
    assert len(res.carrier) == 3
    assert oracles.weighted_colimit_classes(w, s).class_count() == 3


def test_weighted_colimit_coequalizer(swap_diagram):
    pp = parallel_pair()
    w = delta1(pp, "colimit")
    res = weighted_colimit(w, swap_diagram)
    assert len(res.carrier) == 1
    assert oracles.weighted_colimit_classes(w, swap_diagram).class_count() == 1


def test_conical_reduction_matches_oracle_across_fixture_instances(cats):
    # weighted limits and colimits via elements() versus direct enumeration
    for shape in (discrete_pair(), parallel_pair(), arrow_category(), walking_idempotent()):
        for total in (2, 3):
            count = 0
            for wf in presheaves_with_total_at_most(opposite(shape), total):
                # wf is a set functor on shape (presheaf on opposite(shape))
                w = Weight(wf, "limit")
                for t in presheaves_with_total_at_most(opposite(shape), 2):
                    res = weighted_limit(w, t, verify=False)
                    assert len(res.carrier) == len(oracles.weighted_cone_families(w, t))
                    count += 1
                    if count > 12:
                        break
                if count > 12:
                    break


def test_colimit_reduction_matches_oracle():
    for shape in (discrete_pair(), parallel_pair(), arrow_category()):
        shaped = opposite(shape)
        count = 0
        for wf in presheaves_with_total_at_most(opposite(shape), 3):
            w = Weight(wf, "colimit")
            for s in presheaves_with_total_at_most(shape, 3):
                res = weighted_colimit(w, s, verify=False)
                assert len(res.carrier) == oracles.weighted_colimit_classes(w, s).class_count()
                count += 1
                if count > 16:
                    break
            if count > 16:
                break


def test_colimit_of_yoneda_is_the_weight(cats):
    for name, b in cats.items():
        y = yoneda_diagram(b)
        for phi in presheaves_with_total_at_most(b, 3):
            out = weighted_colimit(Weight(phi, "colimit"), y, verify=False)
            assert natiso(out.carrier, phi) is not None


def test_weighted_limit_presheaf_target_pointwise():
    # limit of the Yoneda diagram weighted by a representable is a representable
    two = arrow_category()
    w = representable_weight(two, "b", "limit")
    y = yoneda_diagram(two)
    res = weighted_limit(w, y, verify=False)
    assert natiso(res.carrier, yoneda(two).presheaves["b"]) is not None


def test_identity_functor_preserves_everything(swap_diagram):
    pp = parallel_pair()
    w = delta1(pp, "colimit")
    inst = weighted_colimit(w, swap_diagram)
    assert preserves(identity_target(), inst).ok


def test_hom2_fails_coproduct():
    d2 = discrete_pair()
    w = delta1(d2, "colimit")
    s = set_functor(
        opposite(d2),
        {"a": ("p",), "b": ("q",)},
        {"ida": {"p": "p"}, "idb": {"q": "q"}},
    )
    inst = weighted_colimit(w, s)
    verdict = preserves(hom_target(("0", "1")), inst)
    assert not verdict.ok
    # |Fun(2, 1⊔1)| = 4 while the coproduct of the transported values is 1+1 = 2
    assert verdict.transported_size == 4
    assert verdict.fresh_size == 2


def test_evaluation_preserves_fixture_colimits(cats):
    for name, b in cats.items():
        y = yoneda_diagram(b)
        count = 0
        for phi in presheaves_with_total_at_most(b, 2):
            inst = weighted_colimit(Weight(phi, "colimit"), y, verify=False)
            for obj in b.objects:
                assert preserves(evaluation_target(obj), inst).ok
            count += 1
            if count >= 4:
                break


def test_commutes_at_constant_singleton_2_vs_4():
    d2 = discrete_pair()
    phi, psi = delta1(d2, "colimit"), delta1(d2, "limit")
    pc = product(opposite(d2), d2)
    s = set_functor(
        pc.cat,
        {o: ("*",) for o in pc.cat.objects},
        {m: {"*": "*"} for m in pc.cat.mors},
    )
    v = commutes_at(phi, psi, s, pc)
    assert (v.lhs_size, v.rhs_size, v.invertible) == (2, 4, False)


def test_commutes_at_representable_colimit_weight_always_invertible():
    idem = walking_idempotent()
    d2 = discrete_pair()
    phi = representable_weight(idem, "x", "colimit")
    psi = delta1(d2, "limit")
    pc = product(opposite(idem), d2)
    count = 0
    from kanweigh.setfun import enumerate_set_functors

    for s in enumerate_set_functors(pc.cat, 2):
        v = commutes_at(phi, psi, s, pc)
        assert v.invertible, s.on_objects
        count += 1
        if count >= 60:
            break


def test_commutes_at_terminal_shape_colimit_invertible():
    # Δ1 on the arrow category: colimit is evaluation at the terminal object
    two = arrow_category()
    d2 = discrete_pair()
    phi = delta1(two, "colimit")
    psi = delta1(d2, "limit")
    pc = product(opposite(two), d2)
    from kanweigh.setfun import enumerate_set_functors

    count = 0
    for s in enumerate_set_functors(pc.cat, 2):
        v = commutes_at(phi, psi, s, pc)
        assert v.invertible
        count += 1
        if count >= 40:
            break


def test_commutation_search_minimal_counterexample_frozen():
    """The minimal failing bifunctor for (coproduct, product) at bound 1.

    Frozen from the direct two-sided computation: the anti-diagonal
    singletons give colim-of-lims = 0 but lim-of-colims = 1.
    """
    d2 = discrete_pair()
    out = commutation_search(delta1(d2, "colimit"), delta1(d2, "limit"), 1)
    assert not out.clean
    sizes = {o: len(out.counterexample.at(o)) for o in out.counterexample.source.objects}
    assert sorted(sizes.values()) == [0, 0, 1, 1]
    assert (out.verdict.lhs_size, out.verdict.rhs_size) == (0, 1)
    # independent confirmation that this bifunctor genuinely fails
    k = delta1(d2, "colimit")
    lims = []
    s = out.counterexample
    pc = product(opposite(d2), d2)
    for ko in d2.objects:
        prod_size = 1
        for lo in d2.objects:
            prod_size *= len(s.at(pc.obj_name[(ko, lo)]))
        lims.append(prod_size)
    lhs = sum(lims)
    rhs = 1
    for lo in d2.objects:
        rhs *= sum(len(s.at(pc.obj_name[(ko, lo)])) for ko in d2.objects)
    assert (lhs, rhs) == (0, 1)


def test_commutation_search_representable_clean():
    idem = walking_idempotent()
    d2 = discrete_pair()
    out = commutation_search(
        representable_weight(idem, "x", "colimit"), delta1(d2, "limit"), 2
    )
    assert out.clean
    assert out.candidates_checked > 0


def test_commutation_search_filtered_weight_clean_against_pullbacks():
    # Δ1 on the walking idempotent has filtered elements; pullback shape is a finite limit
    idem = walking_idempotent()
    vee = cospan_category()
    out = commutation_search(delta1(idem, "colimit"), delta1(vee, "limit"), 1)
    assert out.clean


def test_flatness_representable():
    two = arrow_category()
    assert is_flat_finlim(representable_weight(two, "b", "colimit")).ok


def test_flatness_two_element_set_fails():
    w = Weight(finite_set_presheaf(2), "colimit")
    v = is_flat_finlim(w)
    assert not v.ok
    assert v.reason == "object pair admits no cocone"


def test_flatness_terminal_shape():
    assert is_flat_finlim(delta1(arrow_category(), "colimit")).ok


def test_flatness_parallel_pair_fails():
    v = is_flat_finlim(delta1(parallel_pair(), "colimit"))
    assert not v.ok
    assert v.reason == "parallel pair not coequalized"


def test_flat_colimit_of_flat_weights_is_flat():
    """A colimit of pointwise-flat presheaves weighted by a flat weight stays flat."""
    two = arrow_category()
    y = yoneda(two)
    # weight: representable on the arrow category; diagram: representable presheaves
    g = representable_weight(two, "a", "colimit")
    diag = presheaf_diagram(
        opposite(two),
        two,
        {"a": y.presheaves["b"], "b": y.presheaves["a"]},
        {
            "ida": nt_identity(y.presheaves["b"]),
            "idb": nt_identity(y.presheaves["a"]),
            "f": y.on_morphisms["f"],
        },
    )
    out = weighted_colimit(g, diag, verify=False)
    assert is_flat_finlim(Weight(out.carrier, "colimit")).ok


def test_saturation_compatibility_bounded():
    """Commutation survives passing to depth-1 closure weights, at the tested bound."""
    from kanweigh.closure import closure_iterate

    idem = walking_idempotent()
    d2 = discrete_pair()
    phi = representable_weight(idem, "x", "colimit")  # clean against everything
    psi = delta1(d2, "limit")
    assert commutation_search(phi, psi, 1).clean
    # close the limit-weight class at depth 1 and retest each derived weight
    run = closure_iterate([Weight(psi.functor, "colimit")], opposite(d2), 1)
    for el in run.elements:
        psi2 = Weight(el.presheaf, "limit")
        assert commutation_search(phi, psi2, 1).clean


def test_weight_variance_enforced():
    d2 = discrete_pair()
    with pytest.raises(ShapeMismatchError):
        weighted_limit(delta1(d2, "colimit"), set_functor(d2, {"a": (), "b": ()}, {"ida": {}, "idb": {}}))


def test_commutation_search_cap():
    two = arrow_category()
    vee = cospan_category()
    with pytest.raises(ResourceCapError):
        commutation_search(delta1(two, "colimit"), delta1(vee, "limit"), 2, cap=1000)
