"""Two-player competitive diffusion on a tree: simulation, pure gains,
the game matrix and mixed-strategy gain functionals.

Colors spread one hop per round. A white vertex adjacent to exactly one
player color takes it; adjacent to both colors in the same round it turns
grey, and grey blocks all further spread. If both players start on the same
vertex, that vertex is immediately grey and nobody gains anything.

All gains are exact: integers for pure strategy pairs, ``Fraction`` for
mixed strategies built from rational probabilities. Strategies with float
probabilities are accepted and produce float gains.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from typing import Iterable, Mapping

from .tree import Tree, bfs_tables, distances_from


class Color(IntEnum):
    WHITE = 0
    PLAYER1 = 1
    PLAYER2 = 2
    GREY = 3


_COLOR_NAMES = {Color.WHITE: "white", Color.PLAYER1: "player1", Color.PLAYER2: "player2", Color.GREY: "grey"}


@dataclass(frozen=True)
class Coloring:
    """Final vertex states after diffusion has terminated."""

    states: tuple[Color, ...]
    rounds: int

    def count(self, color: Color) -> int:
        return sum(1 for s in self.states if s == color)

    @property
    def player1_gain(self) -> int:
        return self.count(Color.PLAYER1)

    @property
    def player2_gain(self) -> int:
        return self.count(Color.PLAYER2)

    def names(self) -> list[str]:
        return [_COLOR_NAMES[s] for s in self.states]


def simulate_diffusion(t: Tree, x1: int, x2: int) -> Coloring:
    """Run the round-based diffusion until no vertex changes."""
    n = t.n
    for v in (x1, x2):
        if not (0 <= v < n):
            raise ValueError(f"vertex {v} out of range")
    states = [Color.WHITE] * n
    if x1 == x2:
        states[x1] = Color.GREY
        return Coloring(tuple(states), 0)
    states[x1] = Color.PLAYER1
    states[x2] = Color.PLAYER2
    frontier = [x1, x2]
    rounds = 0
    while frontier:
        rounds += 1
        if rounds > n:
            raise RuntimeError("diffusion failed to terminate within n rounds")
        claims: dict[int, Color] = {}
        for v in frontier:
            col = states[v]
            for w in t.adj[v]:
                if states[w] is Color.WHITE:
                    prev = claims.get(w)
                    if prev is None or prev is col:
                        claims[w] = col
                    else:
                        claims[w] = Color.GREY
        frontier = []
        for w, col in claims.items():
            states[w] = col
            if col is not Color.GREY:
                frontier.append(w)
    return Coloring(tuple(states), rounds)


def pure_gain(t: Tree, x1: int, x2: int) -> int:
    """Player 1's gain for a pure pair: the vertices strictly closer to x1.

    Equals the Player-1 count of ``simulate_diffusion`` on trees; the two
    computations are independent and cross-checked in the test suite.
    """
    if x1 == x2:
        if not (0 <= x1 < t.n):
            raise ValueError(f"vertex {x1} out of range")
        return 0
    d1 = distances_from(t, x1)
    d2 = distances_from(t, x2)
    return sum(1 for a, b in zip(d1, d2) if a < b)


@dataclass(frozen=True)
class GameMatrix:
    """Player 1's gains for all pure strategy pairs: entry [i][j] is her gain
    when she starts at vertex i and the opponent at vertex j."""

    n: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.n or any(len(r) != self.n for r in self.entries):
            raise ValueError("matrix must be n x n")
        for i in range(self.n):
            if self.entries[i][i] != 0:
                raise ValueError("diagonal entries must be zero")
            if any(x < 0 for x in self.entries[i]):
                raise ValueError("entries must be non-negative")

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(self.entries[i][j] for i in range(self.n))

    def to_csv(self) -> str:
        return "\n".join(",".join(str(x) for x in row) for row in self.entries) + "\n"


def gain_row(t: Tree, x: int) -> list[int]:
    """The full matrix row A[x][.] in O(n).

    With the tree rooted at x, the opponent at y (at depth k) confines
    Player 1 to the component left after cutting the path edge just past its
    midpoint, so A[x][y] = n - size(ancestor of y at depth ceil(k/2)).
    """
    n = t.n
    order, parent, depth = bfs_tables(t, x)
    sz = [1] * n
    for v in reversed(order[1:]):
        sz[parent[v]] += sz[v]
    row = [0] * n
    path: list[int] = []
    stack: list[tuple[int, bool]] = [(x, False)]
    while stack:
        v, done = stack.pop()
        if done:
            path.pop()
            continue
        stack.append((v, True))
        path.append(v)
        k = depth[v]
        if v != x:
            row[v] = n - sz[path[(k + 1) // 2]]
        for w in t.adj[v]:
            if w != parent[v]:
                stack.append((w, False))
    return row


def gain_column(t: Tree, y: int) -> list[int]:
    """The full matrix column A[.][y] in O(n), rooted at the opponent."""
    n = t.n
    order, parent, depth = bfs_tables(t, y)
    sz = [1] * n
    for v in reversed(order[1:]):
        sz[parent[v]] += sz[v]
    col = [0] * n
    path: list[int] = []
    stack: list[tuple[int, bool]] = [(y, False)]
    while stack:
        v, done = stack.pop()
        if done:
            path.pop()
            continue
        stack.append((v, True))
        path.append(v)
        k = depth[v]
        if v != y:
            col[v] = sz[path[k - (k + 1) // 2 + 1]]
        for w in t.adj[v]:
            if w != parent[v]:
                stack.append((w, False))
    return col


def game_matrix(t: Tree) -> GameMatrix:
    """All pure-pair gains; rows computed independently in O(n) each."""
    n = t.n
    rows = []
    for x in range(n):
        row = gain_row(t, x)
        rows.append(tuple(row))
    m = GameMatrix(n, tuple(rows))
    for i in range(n):
        for j in range(n):
            if m.entries[i][j] > n - 1 or m.entries[i][j] + m.entries[j][i] > n:
                raise RuntimeError(f"gain bounds violated at pair ({i}, {j})")
    return m


class MixedStrategy:
    """A probability distribution over starting vertices.

    Probabilities are exact ``Fraction``s (or ints) in rational mode, or
    floats in floating mode; zero entries are dropped. The distribution must
    sum to 1 (exactly when rational, within 1e-12 when floating).
    """

    __slots__ = ("n", "probs")

    def __init__(self, n: int, probs: Mapping[int, Fraction | int | float]):
        if n < 1:
            raise ValueError("strategy needs at least one vertex")
        cleaned: dict[int, Fraction | float] = {}
        for v, p in probs.items():
            if not (0 <= v < n):
                raise ValueError(f"vertex {v} out of range")
            if isinstance(p, float):
                if p < 0:
                    raise ValueError(f"negative probability at vertex {v}")
                if p != 0.0:
                    cleaned[v] = p
            else:
                p = Fraction(p)
                if p < 0:
                    raise ValueError(f"negative probability at vertex {v}")
                if p != 0:
                    cleaned[v] = p
        total = sum(cleaned.values())
        if self._is_exact(cleaned):
            if total != 1:
                raise ValueError(f"probabilities sum to {total}, expected 1")
        elif abs(total - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {total!r}, expected 1 within 1e-12")
        self.n = n
        self.probs = dict(sorted(cleaned.items()))

    @staticmethod
    def _is_exact(probs: Mapping[int, Fraction | float]) -> bool:
        return all(not isinstance(p, float) for p in probs.values())

    @property
    def is_rational(self) -> bool:
        return self._is_exact(self.probs)

    def support(self) -> tuple[int, ...]:
        return tuple(self.probs.keys())

    def __getitem__(self, v: int) -> Fraction | float:
        return self.probs.get(v, Fraction(0))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, MixedStrategy) and self.n == other.n and self.probs == other.probs
        )

    def __hash__(self) -> int:
        return hash((self.n, tuple(self.probs.items())))

    def __repr__(self) -> str:
        inner = ", ".join(f"{v}: {p}" for v, p in self.probs.items())
        return f"MixedStrategy(n={self.n}, {{{inner}}})"

    @classmethod
    def pure(cls, n: int, v: int) -> "MixedStrategy":
        return cls(n, {v: Fraction(1)})

    @classmethod
    def uniform(cls, n: int) -> "MixedStrategy":
        return cls(n, {v: Fraction(1, n) for v in range(n)})


def format_fraction(value: Fraction | int) -> str:
    f = Fraction(value)
    return f"{f.numerator}/{f.denominator}"


def parse_probability(text: str | int | float) -> Fraction | float:
    if isinstance(text, float):
        return text
    if isinstance(text, int):
        return Fraction(text)
    return Fraction(text)


def strategy_to_pairs(x: MixedStrategy, as_float: bool = False) -> list[list]:
    """Sparse JSON form: a list of [vertex, probability] pairs."""
    if as_float or not x.is_rational:
        return [[v, float(p)] for v, p in x.probs.items()]
    return [[v, format_fraction(p)] for v, p in x.probs.items()]


def strategy_from_pairs(n: int, pairs: Iterable[Iterable]) -> MixedStrategy:
    """Inverse of ``strategy_to_pairs``; accepts "p/q" strings, ints or floats."""
    probs: dict[int, Fraction | float] = {}
    for item in pairs:
        v, p = list(item)
        v = int(v)
        if v in probs:
            raise ValueError(f"duplicate vertex {v} in strategy")
        probs[v] = parse_probability(p)
    return MixedStrategy(n, probs)


def _check_dims(t: Tree, *strategies: MixedStrategy) -> None:
    for s in strategies:
        if s.n != t.n:
            raise ValueError(f"dimension mismatch: strategy over {s.n} vertices, tree has {t.n}")


def gain(t: Tree, x: MixedStrategy, y: MixedStrategy):
    """Expected Player-1 gain of mixed strategies: the bilinear form X A Y^T."""
    _check_dims(t, x, y)
    total = 0
    for v, px in x.probs.items():
        row = gain_row(t, v)
        total += px * sum(py * row[w] for w, py in y.probs.items())
    return total


def reply_gains(t: Tree, x: MixedStrategy) -> list:
    """Player 1's expected gain against every pure opposing vertex."""
    _check_dims(t, x)
    acc = [0] * t.n
    for v, px in x.probs.items():
        row = gain_row(t, v)
        for w in range(t.n):
            acc[w] = acc[w] + px * row[w]
    return acc


def start_gains(t: Tree, y: MixedStrategy) -> list:
    """Player 1's expected gain for every pure start against opposing mix y."""
    _check_dims(t, y)
    acc = [0] * t.n
    for v, py in y.probs.items():
        col = gain_column(t, v)
        for w in range(t.n):
            acc[w] = acc[w] + py * col[w]
    return acc


def guaranteed_gain(t: Tree, x: MixedStrategy):
    """Worst-case expected gain of x over all pure opposing vertices.

    Returns (value, tuple of minimizing vertices). Works from per-support
    matrix rows, so the full n x n matrix is never materialized.
    """
    g = reply_gains(t, x)
    best = min(g)
    return best, tuple(v for v in range(t.n) if g[v] == best)


def maximal_gain(t: Tree, y: MixedStrategy):
    """Best expected gain of any pure start against opposing mix y.

    Returns (value, tuple of maximizing vertices).
    """
    g = start_gains(t, y)
    best = max(g)
    return best, tuple(v for v in range(t.n) if g[v] == best)
