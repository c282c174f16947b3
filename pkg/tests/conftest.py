"""Shared tree builders and independent brute-force oracles.

The oracles here deliberately avoid the library's fast paths: weights come
from per-vertex branch enumeration, and gain matrices come straight from the
diffusion simulation, so the O(n) production code is always checked against
something slower and simpler.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from itertools import product

from treegame import Tree, simulate_diffusion


def path_tree(n: int) -> Tree:
    return Tree.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def star_tree(leaves: int) -> Tree:
    return Tree.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def prufer_decode(seq: tuple[int, ...], n: int) -> list[tuple[int, int]]:
    degree = [1] * n
    for s in seq:
        degree[s] += 1
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for s in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, s))
        degree[s] -= 1
        if degree[s] == 1:
            heapq.heappush(leaves, s)
    u = heapq.heappop(leaves)
    v = heapq.heappop(leaves)
    edges.append((u, v))
    return edges


def all_labeled_trees(n: int):
    """Every labeled tree on n vertices (n^(n-2) of them), via Prufer codes."""
    if n == 1:
        yield Tree.from_edges(1, [])
        return
    if n == 2:
        yield Tree.from_edges(2, [(0, 1)])
        return
    for seq in product(range(n), repeat=n - 2):
        yield Tree.from_edges(n, prufer_decode(seq, n))


def brute_weight(t: Tree, v: int) -> int:
    """Max branch edge count at v by explicit component enumeration."""
    best = 0
    for start in t.adj[v]:
        seen = {v, start}
        stack = [start]
        while stack:
            w = stack.pop()
            for u in t.adj[w]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        best = max(best, len(seen) - 1)
    return best


def brute_weights(t: Tree) -> list[int]:
    return [brute_weight(t, v) for v in range(t.n)]


def simulation_matrix(t: Tree) -> list[list[int]]:
    """Pure-pair gains straight from the diffusion simulation."""
    return [
        [simulate_diffusion(t, x, y).player1_gain for y in range(t.n)] for x in range(t.n)
    ]


def brute_guaranteed_gain(t: Tree, strategy) -> Fraction:
    """Worst reply value from the simulation-based matrix."""
    a = simulation_matrix(t)
    best = None
    for y in range(t.n):
        g = sum(p * a[v][y] for v, p in strategy.probs.items())
        if best is None or g < best:
            best = g
    return best
