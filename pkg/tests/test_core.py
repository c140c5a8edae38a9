from __future__ import annotations

import pytest

from kanweigh.core import (
    equivalence_certificate,
    fincat,
    functor,
    identity_functor,
    iso_categories,
    opposite,
    product,
)
from kanweigh.errors import ValidationError
from kanweigh.fixtures import (
    arrow_category,
    discrete_pair,
    fixture_categories,
    parallel_pair,
    terminal_category,
    walking_idempotent,
)


def test_walking_idempotent_validates():
    c = walking_idempotent()
    assert c.comp("e", "e") == "e"


def test_z2_table_is_a_lawful_category():
    # flipping e∘e to the identity gives the two-element group, not an error
    c = fincat(
        ["x"],
        [("id", "x", "x"), ("e", "x", "x")],
        {"x": "id"},
        {("id", "id"): "id", ("id", "e"): "e", ("e", "id"): "e", ("e", "e"): "id"},
    )
    assert c.comp("e", "e") == "id"


def test_associativity_violation_rejected():
    with pytest.raises(ValidationError) as exc:
        fincat(
            ["x"],
            [("id", "x", "x"), ("s", "x", "x"), ("t", "x", "x")],
            {"x": "id"},
            {
                ("id", "id"): "id", ("id", "s"): "s", ("s", "id"): "s",
                ("id", "t"): "t", ("t", "id"): "t",
                ("s", "s"): "t", ("s", "t"): "id", ("t", "s"): "s", ("t", "t"): "s",
            },
        )
    assert any("associativity" in v for v in exc.value.violations)


def test_dangling_identifier_rejected():
    with pytest.raises(ValidationError) as exc:
        fincat(["x"], [("id", "x", "y")], {"x": "id"}, {("id", "id"): "id"})
    assert any("dangling" in v for v in exc.value.violations)


def test_missing_compose_entry_rejected():
    with pytest.raises(ValidationError) as exc:
        fincat(
            ["x"],
            [("id", "x", "x"), ("e", "x", "x")],
            {"x": "id"},
            {("id", "id"): "id", ("id", "e"): "e", ("e", "id"): "e"},
        )
    assert any("missing entry" in v for v in exc.value.violations)


def test_identity_law_violation_rejected():
    with pytest.raises(ValidationError):
        fincat(
            ["x"],
            [("id", "x", "x"), ("e", "x", "x")],
            {"x": "id"},
            {("id", "id"): "id", ("id", "e"): "id", ("e", "id"): "e", ("e", "e"): "e"},
        )


def test_constant_functor_validates():
    two, i = arrow_category(), terminal_category()
    f = functor(two, i, {"a": "*", "b": "*"}, {"ida": "id*", "idb": "id*", "f": "id*"})
    assert f.ob("a") == "*"


def test_non_functor_rejected():
    i, idem = terminal_category(), walking_idempotent()
    with pytest.raises(ValidationError):
        functor(i, idem, {"*": "x"}, {"id*": "e"})


def test_opposite_involution_on_the_nose():
    for c in fixture_categories().values():
        assert opposite(opposite(c)) == c


def test_opposite_terminal_is_terminal():
    i = terminal_category()
    assert opposite(i) == i


def test_opposite_arrow_reverses_homs():
    two = arrow_category()
    op = opposite(two)
    assert len(op.hom("b", "a")) == 1
    assert len(op.hom("a", "b")) == 0


def test_opposite_idempotent_isomorphic_to_itself():
    idem = walking_idempotent()
    assert iso_categories(opposite(idem), idem) is not None


def test_product_counts():
    two = arrow_category()
    pc = product(two, two)
    assert len(pc.cat.objects) == 4
    assert len(pc.cat.mors) == 9


def test_product_with_terminal_is_identity_up_to_iso():
    i = terminal_category()
    for c in (arrow_category(), walking_idempotent(), parallel_pair()):
        pc = product(i, c)
        assert iso_categories(pc.cat, c) is not None


def test_projections_are_functors():
    pc = product(arrow_category(), walking_idempotent())
    assert pc.proj_left.target == arrow_category()
    assert pc.proj_right.target == walking_idempotent()


def test_product_associative_up_to_iso():
    a, b, c = terminal_category(), arrow_category(), discrete_pair()
    left = product(product(a, b).cat, c).cat
    right = product(a, product(b, c).cat).cat
    assert iso_categories(left, right) is not None


def test_all_fixtures_within_desk_scale():
    for c in fixture_categories().values():
        assert len(c.objects) <= 4
        assert len(c.mors) <= 16


def test_equivalence_certificate_identity():
    for c in fixture_categories().values():
        cert = equivalence_certificate(identity_functor(c))
        assert cert.ok


def test_equivalence_certificate_detects_failure():
    i, two = terminal_category(), arrow_category()
    f = functor(i, two, {"*": "a"}, {"id*": "ida"})
    cert = equivalence_certificate(f)
    assert not cert.ok
    assert not cert.ess_surjective
