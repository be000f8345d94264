"""Small combinatorial helpers on adjacency dictionaries."""
from __future__ import annotations

from itertools import combinations
from typing import Dict, Iterable, List, Set


def adjacency(vertices: Iterable[str], edges: Iterable) -> Dict[str, Set[str]]:
    adj: Dict[str, Set[str]] = {v: set() for v in vertices}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def is_connected(adj: Dict[str, Set[str]], removed: Iterable[str] = ()) -> bool:
    removed = set(removed)
    rest = [v for v in adj if v not in removed]
    if not rest:
        return True
    seen = {rest[0]}
    stack = [rest[0]]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in removed and y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(rest)


def _masks(adj: Dict[str, Set[str]]) -> List[int]:
    index = {v: i for i, v in enumerate(adj)}
    return [sum(1 << index[u] for u in adj[v]) for v in adj]


def _connected_mask(masks: List[int], alive: int) -> bool:
    if not alive:
        return True
    seen = frontier = alive & -alive
    while frontier:
        grow = 0
        while frontier:
            low = frontier & -frontier
            grow |= masks[low.bit_length() - 1]
            frontier ^= low
        frontier = grow & alive & ~seen
        seen |= frontier
    return seen == alive


def is_triconnected(adj: Dict[str, Set[str]]) -> bool:
    """Brute force: the graph stays connected after deleting any one or two vertices."""
    n = len(adj)
    if n < 4:
        return False
    masks, full = _masks(adj), (1 << n) - 1
    if not _connected_mask(masks, full):
        return False
    return all(_connected_mask(masks, full & ~(1 << i) & ~(1 << j)) for i, j in combinations(range(n), 2))
