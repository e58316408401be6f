"""Pre-order tree traversal over model nodes.

Any object exposing a `child_nodes` sequence participates; models built by
the parsers expose children in declaration order, so traversal order equals
source order.
"""

from __future__ import annotations

from typing import Any, Callable, Iterable, Optional


def children_of(node: Any) -> Iterable:
    return getattr(node, "child_nodes", ())


def traverse_depth_first(
    tree: Any,
    visitor: Optional[Callable[[Any, int], None]] = None,
    children: Callable[[Any], Iterable] = children_of,
) -> list:
    """Visit `tree` pre-order (node before its children, children in
    declaration order) and return the nodes in visit order."""
    visited: list = []

    def walk(node, depth):
        if visitor is not None:
            visitor(node, depth)
        visited.append(node)
        for child in children(node):
            walk(child, depth + 1)

    walk(tree, 0)
    return visited
