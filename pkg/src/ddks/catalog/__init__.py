"""Shipped group catalog: presentation files plus a JSON manifest."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any

from ..group import FiniteGroup, SubgroupSet, subgroup_generated
from ..presentation import (
    Presentation,
    _Parser,
    evaluate_word,
    parse_presentations,
    todd_coxeter,
)


class CatalogError(LookupError):
    """Unknown label, or a catalog entry that fails its own checks."""


@dataclass(frozen=True)
class CatalogEntry:
    label: str
    file: str
    order: int
    annotations: dict[str, Any] = field(default_factory=dict)


def _root():
    return resources.files(__name__)


@lru_cache(maxsize=None)
def manifest() -> dict[str, Any]:
    return json.loads((_root() / "manifest.json").read_text(encoding="utf-8"))


def labels() -> list[str]:
    return list(manifest()["groups"])


def resolve(label: str) -> str:
    m = manifest()
    label = m["aliases"].get(label, label)
    if label in m["groups"]:
        return label
    if label in m.get("external", {}):
        raise CatalogError(f"{label}: {m['external'][label]['status']}; supply a presentation file")
    raise CatalogError(f"unknown catalog label {label!r}")


def entry(label: str) -> CatalogEntry:
    label = resolve(label)
    d = manifest()["groups"][label]
    return CatalogEntry(label, d["file"], d["order"], dict(d.get("annotations", {})))


@lru_cache(maxsize=None)
def _file_presentations(rel: str) -> dict[str, Presentation]:
    text = (_root() / rel).read_text(encoding="utf-8")
    return {P.label: P for P in parse_presentations(text)}


def presentation(label: str) -> Presentation:
    e = entry(label)
    try:
        return _file_presentations(e.file)[e.label]
    except KeyError:
        raise CatalogError(f"{e.label} missing from {e.file}") from None


@lru_cache(maxsize=None)
def load_group(label: str) -> FiniteGroup:
    """Parse, enumerate and order-check a catalog group."""
    e = entry(label)
    G = todd_coxeter(presentation(e.label))
    if G.order != e.order:
        raise CatalogError(f"{e.label}: enumerated order {G.order}, catalog says {e.order}")
    G.label = e.label
    return G


def load_group_file(path: str | Path, label: str | None = None) -> FiniteGroup:
    """Realize a user-supplied presentation file (first block, or the named one)."""
    Ps = parse_presentations(Path(path).read_text(encoding="utf-8"))
    if not Ps:
        raise CatalogError(f"{path}: no group blocks")
    if label is None:
        P = Ps[0]
    else:
        match = [P for P in Ps if P.label == label]
        if not match:
            raise CatalogError(f"{path}: no group labelled {label!r}")
        P = match[0]
    G = todd_coxeter(P)
    G.label = P.label
    return G


def element(G: FiniteGroup, word: str) -> int:
    """Evaluate a DSL word over the group's defining generators."""
    names = list(G.generators)
    p = _Parser(word)
    p.names = {nm: i for i, nm in enumerate(names)}
    p.gens = names
    w = p.parse_word()
    if p.cur.kind != "eof":
        raise p.error("trailing input after word")
    return evaluate_word(G, [G.generators[nm] for nm in names], w)


def subgroup(G: FiniteGroup, words: list[str]) -> SubgroupSet:
    return subgroup_generated(G, [element(G, w) for w in words])
