from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from kanweigh.core import functor, identity_functor, opposite
from kanweigh.fixtures import (
    arrow_category,
    cospan_category,
    discrete_pair,
    fixture_categories,
    parallel_pair,
    terminal_category,
    walking_idempotent,
)
from kanweigh.setfun import set_functor


@pytest.fixture(scope="session")
def cats():
    return fixture_categories()


@pytest.fixture(scope="session")
def fixture_functors():
    """A spread of functors between the fixture categories."""
    i = terminal_category()
    two = arrow_category()
    d2 = discrete_pair()
    pp = parallel_pair()
    idem = walking_idempotent()
    vee = cospan_category()
    return {
        "pick_a": functor(i, two, {"*": "a"}, {"id*": "ida"}),
        "pick_b": functor(i, two, {"*": "b"}, {"id*": "idb"}),
        "pick_x": functor(i, idem, {"*": "x"}, {"id*": "id"}),
        "collapse": functor(two, i, {"a": "*", "b": "*"}, {"ida": "id*", "idb": "id*", "f": "id*"}),
        "id_two": identity_functor(two),
        "id_idem": identity_functor(idem),
        "d2_into_two": functor(
            d2, two, {"a": "a", "b": "b"}, {"ida": "ida", "idb": "idb"}
        ),
        "pp_onto_two": functor(
            pp, two, {"a": "a", "b": "b"}, {"ida": "ida", "idb": "idb", "f": "f", "g": "f"}
        ),
        "two_into_vee": functor(
            two, vee, {"a": "0", "b": "j"}, {"ida": "id0", "idb": "idj", "f": "l"}
        ),
        "idem_to_i": functor(idem, i, {"x": "*"}, {"id": "id*", "e": "id*"}),
    }


@pytest.fixture(scope="session")
def swap_diagram():
    """Identity vs swap on a two-element set, on the opposite parallel pair."""
    pp = parallel_pair()
    return set_functor(
        opposite(pp),
        {"a": ("0", "1"), "b": ("0", "1")},
        {
            "ida": {"0": "0", "1": "1"},
            "idb": {"0": "0", "1": "1"},
            "f": {"0": "0", "1": "1"},
            "g": {"0": "1", "1": "0"},
        },
    )
