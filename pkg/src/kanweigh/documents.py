"""JSON document schemas: loading, validation dispatch, canonical output.

Document shapes:

* category: ``{"objects": [...], "morphisms": [{"id","src","tgt"}...],
  "identities": {obj: morId}, "compose": {"g|f": "gf"}}``; the key ``"g|f"``
  means g after f. Wrappers ``{"opposite_of": <cat>}`` and
  ``{"product_of": [<cat>, <cat>]}`` build derived categories; a plain string
  is a path, resolved relative to the containing document.
* functor: ``{"source": <cat>, "target": <cat>, "on_objects": {...},
  "on_morphisms": {...}}``.
* set-valued functor: ``{"source": <cat>, "on_objects": {obj: [elem...]},
  "on_morphisms": {mor: {elem: elem}}}``; with a ``"variance"`` field it is a
  weight; when the source is a product of an opposite with another category
  it is a module.
* natural transformation: ``{"source_functor": <sf>, "target_functor": <sf>,
  "components": {obj: {elem: elem}}}``.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .core import FinCat, Functor, fincat, functor, opposite, product
from .errors import ValidationError
from .promod import Module, module_from_carrier
from .setfun import NatTrans, SetFunctor, nat_trans, set_functor
from .weighted import Weight


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def load_json(path: str | Path) -> Any:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _resolve(doc: Any, base_dir: Path) -> Any:
    if isinstance(doc, str):
        p = Path(doc)
        if not p.is_absolute():
            p = base_dir / p
        return load_json(p)
    return doc


def category_from_doc(doc: Any, base_dir: Path = Path(".")) -> FinCat:
    doc = _resolve(doc, base_dir)
    if not isinstance(doc, dict):
        raise ValidationError(["category document must be an object"])
    if "opposite_of" in doc:
        return opposite(category_from_doc(doc["opposite_of"], base_dir))
    if "product_of" in doc:
        left, right = doc["product_of"]
        return product(
            category_from_doc(left, base_dir), category_from_doc(right, base_dir)
        ).cat
    missing = [k for k in ("objects", "morphisms", "identities", "compose") if k not in doc]
    if missing:
        raise ValidationError([f"category document missing field {k}" for k in missing])
    morphisms = []
    for m in doc["morphisms"]:
        extra = set(m) - {"id", "src", "tgt"}
        if extra or set(m) != {"id", "src", "tgt"}:
            raise ValidationError([f"morphism entry must have exactly id/src/tgt: {m}"])
        morphisms.append((m["id"], m["src"], m["tgt"]))
    compose = {}
    for key, val in doc["compose"].items():
        if "|" not in key:
            raise ValidationError([f"compose key must be 'g|f': {key}"])
        g, f = key.split("|", 1)
        compose[(g, f)] = val
    return fincat(doc["objects"], morphisms, dict(doc["identities"]), compose)


def category_doc(c: FinCat) -> dict:
    return {
        "objects": list(c.objects),
        "morphisms": [{"id": m, "src": c.src[m], "tgt": c.tgt[m]} for m in c.mors],
        "identities": dict(c.identities),
        "compose": {f"{g}|{f}": gf for (g, f), gf in sorted(c.table.items())},
    }


def functor_from_doc(doc: Any, base_dir: Path = Path(".")) -> Functor:
    doc = _resolve(doc, base_dir)
    src = category_from_doc(doc["source"], base_dir)
    tgt = category_from_doc(doc["target"], base_dir)
    return functor(src, tgt, dict(doc["on_objects"]), dict(doc["on_morphisms"]))


def functor_doc(f: Functor) -> dict:
    return {
        "source": category_doc(f.source),
        "target": category_doc(f.target),
        "on_objects": dict(f.on_objects),
        "on_morphisms": dict(f.on_morphisms),
    }


def set_functor_from_doc(doc: Any, base_dir: Path = Path("."), use_opposite: bool = False) -> SetFunctor:
    doc = _resolve(doc, base_dir)
    src = category_from_doc(doc["source"], base_dir)
    if use_opposite:
        src = opposite(src)
    on_objects = {o: tuple(v) for o, v in doc["on_objects"].items()}
    on_morphisms = {m: dict(v) for m, v in doc["on_morphisms"].items()}
    return set_functor(src, on_objects, on_morphisms)


def set_functor_doc(f: SetFunctor) -> dict:
    return {
        "source": category_doc(f.source),
        "on_objects": {o: list(v) for o, v in f.on_objects.items()},
        "on_morphisms": {m: dict(v) for m, v in f.on_morphisms.items()},
    }


def weight_from_doc(doc: Any, base_dir: Path = Path("."), use_opposite: bool = False) -> Weight:
    doc = _resolve(doc, base_dir)
    variance = doc.get("variance")
    if variance not in ("limit", "colimit"):
        raise ValidationError(["weight document needs variance 'limit' or 'colimit'"])
    body = {k: v for k, v in doc.items() if k != "variance"}
    return Weight(set_functor_from_doc(body, base_dir, use_opposite), variance)


def weight_doc(w: Weight) -> dict:
    out = set_functor_doc(w.functor)
    out["variance"] = w.variance
    return out


def nat_trans_from_doc(doc: Any, base_dir: Path = Path(".")) -> NatTrans:
    doc = _resolve(doc, base_dir)
    src = set_functor_from_doc(doc["source_functor"], base_dir)
    tgt = set_functor_from_doc(doc["target_functor"], base_dir)
    return nat_trans(src, tgt, {o: dict(c) for o, c in doc["components"].items()})


def nat_trans_doc(nt: NatTrans) -> dict:
    return {
        "source_functor": set_functor_doc(nt.source),
        "target_functor": set_functor_doc(nt.target),
        "components": {o: dict(c) for o, c in nt.components.items()},
    }


def module_from_doc(doc: Any, base_dir: Path = Path(".")) -> Module:
    """A module document: a set-functor whose source is product(opposite(B), A)."""
    doc = _resolve(doc, base_dir)
    src_doc = doc.get("source")
    if not (isinstance(src_doc, dict) and "product_of" in src_doc):
        raise ValidationError(["module document: source must be a product category document"])
    left_doc, right_doc = src_doc["product_of"]
    if not (isinstance(left_doc, dict) and "opposite_of" in left_doc):
        raise ValidationError(
            ["module document: the left factor must be an opposite category document"]
        )
    target = category_from_doc(left_doc["opposite_of"], base_dir)
    source = category_from_doc(right_doc, base_dir)
    carrier = set_functor_from_doc(doc, base_dir)
    return module_from_carrier(source, target, carrier)


def module_doc(m: Module) -> dict:
    return {
        "source": {
            "product_of": [
                {"opposite_of": category_doc(m.target)},
                category_doc(m.source),
            ]
        },
        "on_objects": {o: list(v) for o, v in m.carrier.on_objects.items()},
        "on_morphisms": {mm: dict(v) for mm, v in m.carrier.on_morphisms.items()},
    }


def detect_kind(doc: Any) -> str:
    if not isinstance(doc, dict):
        raise ValidationError(["document must be a JSON object"])
    if "certificates" in doc and "command" in doc:
        return "report"
    if "opposite_of" in doc or "product_of" in doc:
        return "category"
    if "objects" in doc and "morphisms" in doc:
        return "category"
    if "components" in doc and "source_functor" in doc:
        return "nat_trans"
    if "on_objects" in doc and "target" in doc:
        return "functor"
    if "on_objects" in doc and "variance" in doc:
        return "weight"
    if "on_objects" in doc and isinstance(doc.get("source"), dict) and "product_of" in doc["source"]:
        return "module"
    if "on_objects" in doc:
        return "set_functor"
    raise ValidationError(["unrecognized document shape"])


def load_entity(doc: Any, base_dir: Path = Path("."), use_opposite: bool = False):
    """Validate a document of any supported kind; returns (kind, entity)."""
    doc = _resolve(doc, base_dir)
    kind = detect_kind(doc)
    if kind == "category":
        cat = category_from_doc(doc, base_dir)
        if use_opposite:
            cat = opposite(cat)
        return kind, cat
    if kind == "functor":
        return kind, functor_from_doc(doc, base_dir)
    if kind == "weight":
        return kind, weight_from_doc(doc, base_dir, use_opposite)
    if kind == "module":
        return kind, module_from_doc(doc, base_dir)
    if kind == "set_functor":
        return kind, set_functor_from_doc(doc, base_dir, use_opposite)
    if kind == "nat_trans":
        return kind, nat_trans_from_doc(doc, base_dir)
    raise ValidationError([f"cannot load document of kind {kind}"])
