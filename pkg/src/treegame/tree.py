"""Tree structure, branch weights and the centroid.

A ``Tree`` is immutable after construction, so every function here is pure
and safe to call from concurrent workers.
"""

from __future__ import annotations

from dataclasses import dataclass


class TreeFormatError(ValueError):
    """Raised when an edge-list document is malformed; message carries the line number."""


@dataclass(frozen=True)
class Tree:
    """Undirected tree on vertices 0..n-1 with symmetric adjacency lists.

    ``labels`` is an optional side table used only for reporting; vertex ids
    stay dense 0-based integers everywhere.
    """

    n: int
    adj: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] | None = None

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: list[tuple[int, int]],
        labels: tuple[str, ...] | None = None,
    ) -> "Tree":
        if n < 1:
            raise ValueError(f"vertex count must be >= 1, got {n}")
        if len(edges) != n - 1:
            raise ValueError(f"a tree on {n} vertices needs {n - 1} edges, got {len(edges)}")
        neighbours: list[list[int]] = [[] for _ in range(n)]
        parent_uf = list(range(n))

        def find(a: int) -> int:
            while parent_uf[a] != a:
                parent_uf[a] = parent_uf[parent_uf[a]]
                a = parent_uf[a]
            return a

        seen: set[tuple[int, int]] = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"vertex id out of range on edge ({u}, {v})")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge ({u}, {v})")
            seen.add(key)
            ru, rv = find(u), find(v)
            if ru == rv:
                raise ValueError(f"edge ({u}, {v}) creates a cycle")
            parent_uf[ru] = rv
            neighbours[u].append(v)
            neighbours[v].append(u)
        return cls(n, tuple(tuple(sorted(ns)) for ns in neighbours), labels)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)


@dataclass(frozen=True)
class Branch:
    """A maximal subtree having some vertex v as a leaf: the vertices on one
    side of v (v itself excluded) plus the branch's edge count."""

    root_neighbor: int
    vertices: frozenset[int]
    edge_count: int


@dataclass(frozen=True)
class WeightTable:
    w: tuple[int, ...]
    co_weight: tuple[int, ...]


@dataclass(frozen=True)
class CentroidInfo:
    vertices: tuple[int, ...]
    kind: str  # "centroidal" | "bicentroidal"
    root: int


def parse_tree(text: str) -> Tree:
    """Parse an edge-list document: first line n, then n-1 lines "u v".

    Every error names the offending 1-based line number.
    """
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise TreeFormatError("line 1: expected vertex count")
    try:
        n = int(lines[0].strip())
    except ValueError:
        raise TreeFormatError(f"line 1: expected vertex count, got {lines[0].strip()!r}") from None
    if n < 1:
        raise TreeFormatError(f"line 1: vertex count must be >= 1, got {n}")

    edges: list[tuple[int, int]] = []
    parent_uf = list(range(n))

    def find(a: int) -> int:
        while parent_uf[a] != a:
            parent_uf[a] = parent_uf[parent_uf[a]]
            a = parent_uf[a]
        return a

    seen: set[tuple[int, int]] = set()
    lineno = 1
    for raw in lines[1:]:
        lineno += 1
        stripped = raw.strip()
        if not stripped:
            continue
        parts = stripped.split()
        if len(parts) != 2:
            raise TreeFormatError(f"line {lineno}: malformed edge line {stripped!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise TreeFormatError(f"line {lineno}: malformed edge line {stripped!r}") from None
        if not (0 <= u < n and 0 <= v < n):
            raise TreeFormatError(f"line {lineno}: vertex id out of range on edge ({u}, {v})")
        if u == v:
            raise TreeFormatError(f"line {lineno}: self-loop at vertex {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise TreeFormatError(f"line {lineno}: duplicate edge ({u}, {v})")
        seen.add(key)
        ru, rv = find(u), find(v)
        if ru == rv:
            raise TreeFormatError(f"line {lineno}: edge ({u}, {v}) creates a cycle")
        parent_uf[ru] = rv
        edges.append((u, v))

    if len(edges) != n - 1:
        raise TreeFormatError(
            f"line {lineno}: expected {n - 1} edge lines, found {len(edges)}; tree is disconnected"
        )
    return Tree.from_edges(n, edges)


def bfs_tables(t: Tree, root: int) -> tuple[list[int], list[int], list[int]]:
    """Breadth-first traversal from ``root``: (visit order, parent, depth)."""
    n = t.n
    parent = [-1] * n
    depth = [0] * n
    order = [root]
    parent[root] = root
    for v in order:
        for w in t.adj[v]:
            if parent[w] == -1:
                parent[w] = v
                depth[w] = depth[v] + 1
                order.append(w)
    parent[root] = -1
    return order, parent, depth


def subtree_sizes(t: Tree, root: int) -> list[int]:
    """Subtree sizes when the tree is rooted at ``root``."""
    order, parent, _ = bfs_tables(t, root)
    sz = [1] * t.n
    for v in reversed(order[1:]):
        sz[parent[v]] += sz[v]
    return sz


def distances_from(t: Tree, v: int) -> tuple[int, ...]:
    """Breadth-first distances from ``v``; d(v, v) = 0."""
    if not (0 <= v < t.n):
        raise ValueError(f"vertex {v} out of range")
    _, _, depth = bfs_tables(t, v)
    return tuple(depth)


def branches_at(t: Tree, v: int) -> list[Branch]:
    """All branches of the tree at ``v``, one per neighbor.

    The branch edge count equals the number of vertices on that side of v,
    and the branches partition V minus v.
    """
    if not (0 <= v < t.n):
        raise ValueError(f"vertex {v} out of range")
    order, parent, _ = bfs_tables(t, v)
    top = [-1] * t.n  # depth-1 ancestor when rooted at v
    groups: dict[int, list[int]] = {u: [u] for u in t.adj[v]}
    for w in order[1:]:
        if parent[w] == v:
            top[w] = w
        else:
            top[w] = top[parent[w]]
            groups[top[w]].append(w)
    return [
        Branch(root_neighbor=u, vertices=frozenset(groups[u]), edge_count=len(groups[u]))
        for u in t.adj[v]
    ]


def weight_table(t: Tree) -> WeightTable:
    """Per-vertex weight: the maximum edge count over the branches at the vertex.

    Computed in O(n): one subtree-size pass from an arbitrary root, then the
    parent-side branch of each vertex is n - size(v). For n = 1 the weight is
    defined as 0 (co-weight 1).
    """
    n = t.n
    if n == 1:
        return WeightTable((0,), (1,))
    order, parent, _ = bfs_tables(t, 0)
    sz = [1] * n
    for v in reversed(order[1:]):
        sz[parent[v]] += sz[v]
    w = [0] * n
    for v in range(n):
        best = 0
        for u in t.adj[v]:
            cand = n - sz[v] if u == parent[v] else sz[u]
            if cand > best:
                best = cand
        w[v] = best
    return WeightTable(tuple(w), tuple(n - x for x in w))


def centroid(t: Tree, wt: WeightTable | None = None) -> CentroidInfo:
    """Weight-minimizing vertices: a single vertex or two adjacent ones.

    For a bicentroidal tree the reported root is the smaller vertex id, which
    keeps downstream algorithms deterministic.
    """
    if t.n == 1:
        return CentroidInfo((0,), "centroidal", 0)
    wt = wt or weight_table(t)
    mn = min(wt.w)
    verts = tuple(v for v in range(t.n) if wt.w[v] == mn)
    if len(verts) not in (1, 2):
        raise RuntimeError(f"centroid has {len(verts)} vertices; tree invariant broken")
    if len(verts) == 2 and verts[1] not in t.adj[verts[0]]:
        raise RuntimeError("bicentroidal vertices are not adjacent; tree invariant broken")
    # Cross-check: a centroid vertex has no branch with more than n/2 edges.
    for v in verts:
        if 2 * wt.w[v] > t.n:
            raise RuntimeError(f"vertex {v} minimizes weight but has a branch above n/2")
    kind = "centroidal" if len(verts) == 1 else "bicentroidal"
    return CentroidInfo(verts, kind, verts[0])
