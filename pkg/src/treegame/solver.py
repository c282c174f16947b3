"""Exact zero-sum solver for the safe game.

The safety value of a non-negative payoff matrix A is computed through the
standard scaling transform: with value v > 0, maximizing the total mass of
w = Y / v subject to A w <= 1 gives v = 1 / sum(w), the optimal opposing mix
Y = v * w, and the dual prices of the constraints scale to the maxmin mix X.
Because diffusion matrices are non-negative with a positive entry in every
column (any neighbour of a vertex gains at least itself), the LP is bounded
and no offset shift is required; restricted subgames solved inside the
support-generation loop are shifted by +1 to guard all-zero columns.

Everything runs over exact rationals. The simplex uses a most-improving
entering rule for speed but switches permanently to Bland's anti-cycling
rule after a fixed number of pivots, which guarantees termination.

For matrices beyond a small size the full LP is never built. Instead a
support-generation loop solves exact subgames on growing candidate supports
and expands them with exact best responses until neither player can improve;
at that point the weak-duality certificate (worst reply against X equals the
best start against Y equals the subgame value) proves optimality on the full
game.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .diffusion import GameMatrix, MixedStrategy

_DIRECT_LIMIT = 12
_BLAND_AFTER = 200


class SolverError(RuntimeError):
    """Raised when the LP machinery reaches a state it never should."""


def _exact_div(num: int, den: int) -> int:
    q, rem = divmod(num, den)
    if rem:
        raise SolverError("inexact division in integer pivot")
    return q


def _simplex_max(
    a_rows: Sequence[Sequence[int]],
    b: Sequence[int],
    c: Sequence[int],
) -> tuple[Fraction, list[Fraction], list[Fraction]]:
    """Maximize c.x subject to A x <= b, x >= 0, with integer data and b >= 0.

    Returns (objective, x, duals). The slack basis is feasible because
    b >= 0, so no phase-1 is needed.

    The tableau is kept fraction-free: an integer matrix M and a positive
    denominator d represent the true tableau M / d. A pivot on (r, c) maps
    every other row i to (M[i][j] * M[r][c] - M[i][c] * M[r][j]) / d, which
    is an exact integer division (entries stay minors of the original
    system), leaves row r unchanged, and sets d to M[r][c]. All sign tests
    against M are valid because d > 0 throughout. Verifies the primal and
    dual objectives agree exactly before returning.
    """
    m = len(a_rows)
    nv = len(c)
    ncols = m + nv
    rows: list[list[int]] = []
    for i in range(m):
        if any(x != int(x) for x in a_rows[i]):
            raise SolverError("integer tableau required")
        row = [int(x) for x in a_rows[i]]
        row.extend(1 if j == i else 0 for j in range(m))
        row.append(int(b[i]))
        rows.append(row)
    z = [int(x) for x in c] + [0] * m
    basis = [nv + i for i in range(m)]
    den = 1

    pivots = 0
    while True:
        if pivots < _BLAND_AFTER:
            enter = -1
            best_rc = 0
            for j in range(ncols):
                if z[j] > best_rc:
                    best_rc = z[j]
                    enter = j
        else:
            enter = next((j for j in range(ncols) if z[j] > 0), -1)
        if enter < 0:
            break
        leave = -1
        best_key: tuple[Fraction, int] | None = None
        for i in range(m):
            coef = rows[i][enter]
            if coef > 0:
                key = (Fraction(rows[i][ncols], coef), basis[i])
                if best_key is None or key < best_key:
                    best_key = key
                    leave = i
        if leave < 0:
            raise SolverError("linear program is unbounded")
        prow = rows[leave]
        piv = prow[enter]
        for i in range(m):
            if i != leave:
                ri = rows[i]
                f = ri[enter]
                if f:
                    rows[i] = [
                        _exact_div(ri[j] * piv - f * prow[j], den) for j in range(ncols + 1)
                    ]
                else:
                    rows[i] = [_exact_div(v * piv, den) for v in ri]
        f = z[enter]
        if f:
            z = [_exact_div(z[j] * piv - f * prow[j], den) for j in range(ncols)]
        else:
            z = [_exact_div(v * piv, den) for v in z]
        basis[leave] = enter
        den = piv
        pivots += 1

    zero = Fraction(0)
    x = [zero] * nv
    for i in range(m):
        if basis[i] < nv:
            x[basis[i]] = Fraction(rows[i][ncols], den)
    duals = [Fraction(-z[nv + i], den) for i in range(m)]
    obj = sum((c[j] * x[j] for j in range(nv)), zero)
    dual_obj = sum((duals[i] * b[i] for i in range(m)), zero)
    if obj != dual_obj:
        raise SolverError("primal and dual objectives disagree")
    return obj, x, duals


def solve_matrix_game(
    matrix: Sequence[Sequence[int]],
) -> tuple[Fraction, list[Fraction], list[Fraction]]:
    """Exact value and optimal mixes of the zero-sum game on a non-negative
    matrix (rows: maximizer's pure strategies).

    A +1 shift is applied only when some column is all zero, which would make
    the scaled LP unbounded; the shift moves the value, not the strategies.
    """
    m = len(matrix)
    k = len(matrix[0])
    shift = 0
    for j in range(k):
        if all(matrix[i][j] <= 0 for i in range(m)):
            shift = 1
            break
    rows = [[matrix[i][j] + shift for j in range(k)] for i in range(m)]
    obj, w, duals = _simplex_max(rows, [1] * m, [1] * k)
    if obj <= 0:
        raise SolverError("degenerate game LP: zero optimal mass")
    v = 1 / obj
    y = [wj * v for wj in w]
    x = [ui * v for ui in duals]
    return v - shift, x, y


@dataclass(frozen=True)
class ZeroSumSolution:
    """Value, maxmin/minmax strategies, and the reply-value certificate.

    ``p2_reply_gains[y]`` is the gain of the maxmin mix against the pure
    opposing vertex y; ``p1_reply_gains[x]`` is the gain of the pure start x
    against the minmax mix. Optimality is certified by
    min(p2_reply_gains) == value == max(p1_reply_gains).
    """

    value: Fraction
    maxmin: MixedStrategy
    minmax: MixedStrategy
    p2_reply_gains: tuple[Fraction, ...]
    p1_reply_gains: tuple[Fraction, ...]

    @property
    def primal_value(self) -> Fraction:
        return min(self.p2_reply_gains)

    @property
    def dual_value(self) -> Fraction:
        return max(self.p1_reply_gains)


def _matrix_reply_gains(a: GameMatrix, x: MixedStrategy) -> list[Fraction]:
    acc = [Fraction(0)] * a.n
    for v, p in x.probs.items():
        row = a.entries[v]
        for w in range(a.n):
            acc[w] += p * row[w]
    return acc


def _matrix_start_gains(a: GameMatrix, y: MixedStrategy) -> list[Fraction]:
    acc = [Fraction(0)] * a.n
    for v, p in y.probs.items():
        for w in range(a.n):
            acc[w] += p * a.entries[w][v]
    return acc


def _finish(a: GameMatrix, value: Fraction, x: MixedStrategy, y: MixedStrategy) -> ZeroSumSolution:
    g2 = _matrix_reply_gains(a, x)
    g1 = _matrix_start_gains(a, y)
    if min(g2) != value or max(g1) != value:
        raise SolverError("optimality certificate failed")
    return ZeroSumSolution(value, x, y, tuple(g2), tuple(g1))


def _support_seed(a: GameMatrix, warm_start: Iterable[int]) -> list[int]:
    seed = sorted({v for v in warm_start if 0 <= v < a.n})
    if seed:
        return seed
    best = max(range(a.n), key=lambda i: (sum(a.entries[i]), -i))
    return [best]


def solve_value(
    a: GameMatrix,
    method: str = "auto",
    warm_start: Iterable[int] = (),
) -> ZeroSumSolution:
    """Safety value with maxmin/minmax strategies and an exact certificate.

    ``method`` is "direct" (full LP), "oracle" (support generation) or
    "auto". ``warm_start`` optionally seeds the candidate supports, e.g. with
    the centroid and its neighbourhood.
    """
    n = a.n
    if n == 1:
        one = MixedStrategy.pure(1, 0)
        return ZeroSumSolution(Fraction(0), one, one, (Fraction(0),), (Fraction(0),))
    if method not in ("auto", "direct", "oracle"):
        raise ValueError(f"unknown method {method!r}")
    if method == "direct" or (method == "auto" and n <= _DIRECT_LIMIT):
        value, xs, ys = solve_matrix_game(a.entries)
        x = MixedStrategy(n, {i: p for i, p in enumerate(xs) if p})
        y = MixedStrategy(n, {i: p for i, p in enumerate(ys) if p})
        return _finish(a, value, x, y)

    sx = _support_seed(a, warm_start)
    sy = list(sx)
    entries = a.entries
    # The number of best responses admitted per side doubles every round, so
    # games whose optima need nearly full support (stars, say) converge in
    # O(log n) rounds while small-support games keep their subgames tiny.
    budget = 2
    for _ in range(2 * n + 4):
        sub = [[entries[i][j] for j in sy] for i in sx]
        v, xr, yr = solve_matrix_game(sub)
        x = MixedStrategy(n, {sx[i]: p for i, p in enumerate(xr) if p})
        y = MixedStrategy(n, {sy[j]: p for j, p in enumerate(yr) if p})
        g1 = _matrix_start_gains(a, y)
        g2 = _matrix_reply_gains(a, x)
        b1 = max(g1)
        b2 = min(g2)
        if b1 == v and b2 == v:
            return ZeroSumSolution(v, x, y, tuple(g2), tuple(g1))
        if b1 > v:
            movers = sorted((i for i in range(n) if g1[i] > v), key=lambda i: (-g1[i], i))
            sx = sorted(set(sx) | set(movers[:budget]))
        if b2 < v:
            movers = sorted((j for j in range(n) if g2[j] < v), key=lambda j: (g2[j], j))
            sy = sorted(set(sy) | set(movers[:budget]))
        budget *= 2
    raise SolverError("support generation did not converge")


def verify_solution(a: GameMatrix, sol: ZeroSumSolution, tol: float = 1e-9) -> bool:
    """Recompute both reply sweeps from the matrix and check that the worst
    reply against the maxmin mix and the best start against the minmax mix
    both equal the claimed value (exactly in rational mode, within ``tol``
    for float strategies)."""
    if sol.maxmin.n != a.n or sol.minmax.n != a.n:
        return False
    g2 = _matrix_reply_gains(a, sol.maxmin)
    g1 = _matrix_start_gains(a, sol.minmax)
    if sol.maxmin.is_rational and sol.minmax.is_rational:
        return min(g2) == sol.value == max(g1)
    return abs(min(g2) - sol.value) <= tol and abs(max(g1) - sol.value) <= tol


def solve_column_restricted(
    columns: Mapping[int, Sequence[int]],
    n: int,
    warm_start: Iterable[int] = (),
) -> tuple[Fraction, MixedStrategy]:
    """Best opposing mix supported on the given columns, against all n starts.

    ``columns[y]`` is the full matrix column for candidate vertex y. Returns
    (bound, Y) with bound = max over every pure start of its gain against Y,
    i.e. the tightest upper bound on the safety value achievable on that
    support. Only the listed columns are ever needed, so the full matrix is
    not required.
    """
    sy = sorted(columns.keys())
    if not sy:
        raise ValueError("need at least one candidate column")
    sx = sorted({v for v in warm_start if 0 <= v < n} | set(sy))
    budget = 2
    for _ in range(n + 4):
        sub = [[columns[y][i] for y in sy] for i in sx]
        v, _, yr = solve_matrix_game(sub)
        ymix = {sy[j]: p for j, p in enumerate(yr) if p}
        g1 = [Fraction(0)] * n
        for y, p in ymix.items():
            col = columns[y]
            for i in range(n):
                g1[i] += p * col[i]
        b1 = max(g1)
        if b1 == v:
            return v, MixedStrategy(n, ymix)
        movers = sorted((i for i in range(n) if g1[i] > v), key=lambda i: (-g1[i], i))
        sx = sorted(set(sx) | set(movers[:budget]))
        budget *= 2
    raise SolverError("column-restricted solve did not converge")
