"""Canonical rooted trees and forests.

A tree is a tuple of its (canonically sorted) subtrees; the single vertex is
``()``.  A forest is a sorted tuple of trees; the empty forest ``()`` is the
unit.  Trees are ordered by vertex count, then by comparing their sorted child
lists lexicographically under the same order.

Literal syntax: ``*`` is one vertex, ``[t1 t2 ...]`` is a root grafted on the
subtrees ``t1, t2, ...``; a forest is a whitespace-separated list of trees and
``1`` denotes the empty forest.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations_with_replacement

Tree = tuple
Forest = tuple

VERTEX: Tree = ()


@lru_cache(maxsize=None)
def size(tree: Tree) -> int:
    return 1 + sum(size(c) for c in tree)


@lru_cache(maxsize=None)
def sort_key(tree: Tree) -> tuple:
    return (size(tree), tuple(sort_key(c) for c in tree))


def forest_size(forest: Forest) -> int:
    return sum(size(t) for t in forest)


def canonical_forest(trees) -> Forest:
    return tuple(sorted(trees, key=sort_key))


def graft(forest: Forest) -> Tree:
    """Attach a new root below the trees of ``forest`` (the B+ operator)."""
    return canonical_forest(forest)


def forest_key(forest: Forest) -> tuple:
    return (forest_size(forest), tuple(sort_key(t) for t in forest))


@lru_cache(maxsize=None)
def trees_of_size(n: int) -> tuple[Tree, ...]:
    if n < 1:
        return ()
    return tuple(sorted((graft(f) for f in forests_of_size(n - 1)), key=sort_key))


@lru_cache(maxsize=None)
def forests_of_size(n: int) -> tuple[Forest, ...]:
    """All forests with exactly ``n`` vertices, in canonical order."""
    if n == 0:
        return ((),)
    out = set()
    # forests as multisets of trees: choose a partition of n into tree sizes
    for parts in _partitions(n):
        pools = []
        for s in sorted(set(parts)):
            k = parts.count(s)
            pools.append(list(combinations_with_replacement(trees_of_size(s), k)))
        for choice in _product(pools):
            out.add(canonical_forest(t for group in choice for t in group))
    return tuple(sorted(out, key=forest_key))


def _partitions(n: int, largest: int | None = None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def _product(pools):
    if not pools:
        yield ()
        return
    for head in pools[0]:
        for tail in _product(pools[1:]):
            yield (head,) + tail


# ---------------------------------------------------------------- literals


def format_tree(tree: Tree) -> str:
    if not tree:
        return "*"
    return "[" + " ".join(format_tree(c) for c in tree) + "]"


def format_forest(forest: Forest) -> str:
    if not forest:
        return "1"
    return " ".join(format_tree(t) for t in forest)


def parse_forest(text: str) -> Forest:
    s = text.strip()
    if s in ("", "1"):
        return ()
    trees, pos = [], 0
    while True:
        while pos < len(s) and s[pos].isspace():
            pos += 1
        if pos >= len(s):
            break
        tree, pos = _parse_tree(s, pos)
        trees.append(tree)
    return canonical_forest(trees)


def parse_tree(text: str) -> Tree:
    forest = parse_forest(text)
    if len(forest) != 1:
        raise ValueError(f"expected a single tree, got {text!r}")
    return forest[0]


def _parse_tree(s: str, pos: int) -> tuple[Tree, int]:
    if s[pos] == "*":
        return VERTEX, pos + 1
    if s[pos] != "[":
        raise ValueError(f"unexpected {s[pos]!r} at {pos} in tree literal {s!r}")
    pos += 1
    children = []
    while True:
        while pos < len(s) and s[pos].isspace():
            pos += 1
        if pos >= len(s):
            raise ValueError(f"unterminated tree literal {s!r}")
        if s[pos] == "]":
            return graft(children), pos + 1
        child, pos = _parse_tree(s, pos)
        children.append(child)
