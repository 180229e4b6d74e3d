"""Named tree and set recipes, as used on the command line and in JSON dumps.

Trees: ``full``, ``binary``, ``cylinder:N``, ``prefix:a,b,...``, ``adtree``,
``residue:R:<tree>``.  Sets: ``all``, ``empty``, ``cylinder:N``,
``cone:a,b,...``, ``~<set>`` for the complement and ``<set>+<set>`` for unions.
"""

from __future__ import annotations

from typing import Mapping

from .errors import DomainError
from .families import ad_tree, residue_embed
from .oracles import PrefixSet, complement, cone, cylinder_set, empty, everything, union
from .trees import LazyTree, binary_tree, cylinder_tree, full_tree, prefix_tree

TREE_NAMES = ("full", "binary", "cylinder", "prefix", "adtree", "residue")


def _nat(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise DomainError(f"expected a natural number, got {text!r}") from None
    if v < 0:
        raise DomainError(f"expected a natural number, got {text!r}")
    return v


def _node(text: str) -> tuple:
    text = text.strip()
    return tuple(_nat(p) for p in text.split(",")) if text else ()


def parse_tree(spec: str) -> LazyTree:
    name, _, rest = spec.strip().partition(":")
    if name == "full" and not rest:
        return full_tree()
    if name == "binary" and not rest:
        return binary_tree()
    if name == "adtree" and not rest:
        return ad_tree().lazy()
    if name == "cylinder":
        return cylinder_tree(_nat(rest))
    if name == "prefix":
        return prefix_tree(_node(rest))
    if name == "residue":
        r, _, inner = rest.partition(":")
        return residue_embed(parse_tree(inner), _nat(r))
    raise DomainError(f"unknown tree recipe {spec!r}; known: {', '.join(TREE_NAMES)}")


def tree_from_recipe(recipe: Mapping) -> LazyTree:
    """Rebuild a built-in tree from the ``recipe`` dict it carries."""
    name = recipe.get("recipe")
    if name in ("full", "binary", "adtree"):
        return parse_tree(name)
    if name == "cylinder":
        return cylinder_tree(int(recipe["n"]))
    if name == "prefix":
        return prefix_tree(recipe["node"])
    if name == "residue":
        return residue_embed(tree_from_recipe(recipe["tree"]), int(recipe["r"]))
    raise DomainError(f"cannot rebuild tree from recipe {dict(recipe)!r}")


def parse_set(spec: str) -> PrefixSet:
    spec = spec.strip()
    if "+" in spec:
        return union(*(parse_set(p) for p in spec.split("+")))
    if spec.startswith("~"):
        return complement(parse_set(spec[1:]))
    name, _, rest = spec.partition(":")
    if name == "all" and not rest:
        return everything()
    if name == "empty" and not rest:
        return empty()
    if name == "cylinder":
        return cylinder_set(_nat(rest))
    if name == "cone":
        return cone(_node(rest))
    raise DomainError(f"unknown set recipe {spec!r}")
