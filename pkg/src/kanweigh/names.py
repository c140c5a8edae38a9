"""Deterministic names for generated entities.

Every derived element (pair, tuple, function, quotient class) is named by a
fixed scheme so that all outputs are byte-stable across runs and platforms.
"""
from __future__ import annotations

from typing import Iterable, Mapping

LANGLE = "⟨"  # ⟨
RANGLE = "⟩"  # ⟩
MAPSTO = "↦"  # ↦


def pair(x: str, y: str) -> str:
    return f"{LANGLE}{x},{y}{RANGLE}"


def tup(items: Iterable[str]) -> str:
    return LANGLE + ",".join(items) + RANGLE


def fun(mapping: Mapping[str, str], domain: Iterable[str]) -> str:
    """Name of a function, listed in a fixed domain order."""
    return LANGLE + ",".join(f"{x}{MAPSTO}{mapping[x]}" for x in domain) + RANGLE
