from __future__ import annotations

import pytest

from kanweigh.core import compose_functors, functor, identity_functor, opposite
from kanweigh.errors import InternalCheckError, ShapeMismatchError
from kanweigh.fixtures import (
    arrow_category,
    finite_set_presheaf,
    parallel_pair,
    terminal_category,
    walking_idempotent,
)
from kanweigh.promod import (
    check_adjunction,
    compose_modules,
    from_ext_form,
    from_lift_form,
    functor_modules,
    has_left_adjoint,
    has_right_adjoint,
    hom_module,
    mod_equal,
    mod_identity,
    mod_morphisms,
    module,
    module_iso,
    module_of_copresheaf,
    module_of_presheaf,
    nat_trans_modules,
    rext,
    rlift,
    to_ext_form,
    to_lift_form,
    transpose_module,
)
from kanweigh.setfun import yoneda


def set_module(n, tag="m"):
    i = terminal_category()
    elems = tuple(f"{tag}{k}" for k in range(n))
    return module(i, i, {("*", "*"): elems}, {("id*", "id*"): {e: e for e in elems}})


@pytest.fixture(scope="module")
def basic():
    i = terminal_category()
    two = arrow_category()
    idem = walking_idempotent()
    t = functor(i, two, {"*": "a"}, {"id*": "ida"})
    s = functor(two, idem, {"a": "x", "b": "x"}, {"ida": "id", "idb": "id", "f": "e"})
    return i, two, idem, t, s


def test_modules_over_point_are_sets():
    comp = compose_modules(set_module(3, "y"), set_module(2, "x"))
    assert len(comp.module.value("*", "*")) == 6
    assert len(rext(set_module(2, "f"), set_module(3, "h")).module.value("*", "*")) == 9
    assert len(rlift(set_module(2, "g"), set_module(3, "h")).module.value("*", "*")) == 9


def test_unit_laws_up_to_certified_iso(basic):
    i, two, idem, t, s = basic
    low, _ = functor_modules(t)
    assert module_iso(compose_modules(low, hom_module(i)).module, low) is not None
    assert module_iso(compose_modules(hom_module(two), low).module, low) is not None
    assert module_iso(rext(hom_module(i), low).module, low) is not None
    assert module_iso(rlift(hom_module(two), low).module, low) is not None


def test_associativity_up_to_certified_iso(basic):
    i, two, idem, t, s = basic
    low, _ = functor_modules(t)
    slow, _ = functor_modules(s)
    h = hom_module(i)
    left = compose_modules(slow, compose_modules(low, h).module).module
    right = compose_modules(compose_modules(slow, low).module, h).module
    assert module_iso(left, right) is not None


def test_functoriality_of_lower_upper(basic):
    i, two, idem, t, s = basic
    st = compose_functors(s, t)
    st_low, st_up = functor_modules(st)
    t_low, t_up = functor_modules(t)
    s_low, s_up = functor_modules(s)
    assert module_iso(compose_modules(s_low, t_low).module, st_low) is not None
    assert module_iso(compose_modules(t_up, s_up).module, st_up) is not None


def test_identity_functor_modules_are_hom(basic):
    i, two, idem, t, s = basic
    low, up = functor_modules(identity_functor(two))
    assert module_iso(low, hom_module(two)) is not None
    assert module_iso(up, hom_module(two)) is not None


def test_t_lower_value_is_hom_into_image():
    i, idem = terminal_category(), walking_idempotent()
    t = functor(i, idem, {"*": "x"}, {"id*": "id"})
    low, up = functor_modules(t)
    assert low.value("x", "*") == ("id", "e")


def test_nat_trans_modules_directions():
    i, two = terminal_category(), arrow_category()
    t = functor(i, two, {"*": "a"}, {"id*": "ida"})
    s = functor(i, two, {"*": "b"}, {"id*": "idb"})
    lower, upper = nat_trans_modules({"*": "f"}, t, s)
    assert lower.src.value("a", "*") == ("ida",)
    assert lower.tgt.value("a", "*") == ("f",)
    # upper runs the other way: S_upper -> T_upper
    assert upper.src.value("*", "b") == ("idb",)
    assert upper.tgt.value("*", "b") == ("f",)


def test_m14_bijections_by_pasting(basic):
    i, two, idem, t, s = basic
    f_mod, _ = functor_modules(t)  # I ⇸ 2
    g_mod, _ = functor_modules(s)  # 2 ⇸ Idem
    h_mod = compose_modules(g_mod, f_mod).module  # I ⇸ Idem
    gf = compose_modules(g_mod, f_mod)
    ext = rext(f_mod, h_mod)
    lift = rlift(g_mod, h_mod)
    direct = mod_morphisms(gf.module, h_mod)
    via_ext = mod_morphisms(g_mod, ext.module)
    via_lift = mod_morphisms(f_mod, lift.module)
    assert len(direct) == len(via_ext) == len(via_lift) > 0
    for mu in direct:
        assert mod_equal(from_lift_form(gf, lift, to_lift_form(gf, lift, mu)), mu)
        assert mod_equal(from_ext_form(gf, ext, to_ext_form(gf, ext, mu)), mu)
    # and the transposes are jointly injective
    lift_names = {tuple(sorted(to_lift_form(gf, lift, mu).nt.components["⟨a,*⟩"].items())) for mu in direct}
    assert len(lift_names) == len(direct) or len(direct) <= 1


def test_functor_module_adjunction(fixture_functors):
    for name, t in fixture_functors.items():
        low, up = functor_modules(t)
        res = has_right_adjoint(low)
        assert res.ok, name
        assert res.hom_form_agrees, name
        assert res.triangles.ok, name
        assert module_iso(res.right_adjoint, up) is not None, name


def test_m110_and_m111(basic):
    i, two, idem, t, s = basic
    t_low, t_up = functor_modules(t)
    s_low, s_up = functor_modules(s)
    # rext(T_upper, g) recovers g∘T_lower
    assert (
        module_iso(compose_modules(s_low, t_low).module, rext(t_up, s_low).module)
        is not None
    )
    # rlift(T_lower, h) recovers T_upper∘h
    t2 = functor(i, two, {"*": "b"}, {"id*": "idb"})
    h_low, _ = functor_modules(t2)
    assert (
        module_iso(compose_modules(t_up, h_low).module, rlift(t_low, h_low).module)
        is not None
    )


def test_homladj_right_adjoint_composes(basic):
    i, two, idem, t, s = basic
    y = yoneda(two)
    f_mod = module_of_presheaf(two, i, y.presheaves["a"])
    h_mod = module_of_presheaf(two, i, y.presheaves["b"])
    res = has_right_adjoint(f_mod)
    assert res.ok
    lhs = rlift(f_mod, h_mod).module
    rhs = compose_modules(res.right_adjoint, h_mod).module
    assert module_iso(lhs, rhs) is not None


def test_two_element_presheaf_has_no_right_adjoint():
    i = terminal_category()
    m = module_of_presheaf(i, i, finite_set_presheaf(2))
    res = has_right_adjoint(m)
    assert not res.ok
    assert res.refutation is not None
    assert res.refutation["transported_size"] == 4
    assert res.refutation["fresh_size"] == 2


def test_representable_presheaf_module_is_adjoint():
    i, two = terminal_category(), arrow_category()
    y = yoneda(two)
    for b in two.objects:
        res = has_right_adjoint(module_of_presheaf(two, i, y.presheaves[b]))
        assert res.ok


def test_check_adjunction_positive(basic):
    i, two, idem, t, s = basic
    low, up = functor_modules(t)
    res = has_right_adjoint(low)
    rep = check_adjunction(low, res.right_adjoint, res.unit, res.counit)
    assert rep.ok


def test_check_adjunction_hom_identities():
    two = arrow_category()
    h = hom_module(two)
    gf = compose_modules(h, h)
    from kanweigh.promod import left_unitor_inv, right_unitor

    eta = left_unitor_inv(h, gf)
    eps = right_unitor(h, gf)
    rep = check_adjunction(h, h, eta, eps)
    assert rep.ok


def test_exhaustive_wrong_way_adjunction_search_fails():
    i, two = terminal_category(), arrow_category()
    t = functor(i, two, {"*": "a"}, {"id*": "ida"})
    low, up = functor_modules(t)
    one_b, one_a = hom_module(two), hom_module(i)
    gf = compose_modules(low, up)
    fg = compose_modules(up, low)
    found = False
    for eta in mod_morphisms(one_b, gf.module):
        for eps in mod_morphisms(fg.module, one_a):
            if check_adjunction(up, low, eta, eps).ok:
                found = True
    assert not found


def test_street_crosscheck_left_adjoint_weight_is_absolute():
    """A copresheaf module with a left adjoint commutes with every tested limit."""
    from kanweigh.fixtures import delta1, discrete_pair
    from kanweigh.weighted import Weight, commutation_search

    i, two = terminal_category(), arrow_category()
    # G = 2(a, -): the copresheaf module 2 ⇸ I of a corepresentable
    g_fun = yoneda(opposite(two)).presheaves["a"]  # B(a,-) as functor on two
    g_mod = module_of_copresheaf(two, i, g_fun)
    res = has_left_adjoint(g_mod)
    assert res.ok
    phi = Weight(g_fun, "colimit")
    for psi in (delta1(discrete_pair(), "limit"), delta1(two, "limit")):
        assert commutation_search(phi, psi, 2).clean


def test_transpose_involution(basic):
    i, two, idem, t, s = basic
    low, _ = functor_modules(t)
    assert module_iso(transpose_module(transpose_module(low)), low) is not None


def test_compose_shape_mismatch():
    i, idem = terminal_category(), walking_idempotent()
    m1 = hom_module(i)
    m2 = hom_module(idem)
    with pytest.raises(ShapeMismatchError):
        compose_modules(m1, m2)
