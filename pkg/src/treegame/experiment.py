"""Random-tree evaluation harness: sample centroidal trees, compare the
centroidal strategy's guaranteed gain against an upper bound on the safety
value, and histogram the normalized differences.

Runs are reproducible bit-for-bit: trial i derives its seed from a SHA-256
hash of (master seed, i), so trials are order-independent.
"""

from __future__ import annotations

import csv
import hashlib
import math
import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .css import CSSResult, css_run
from .diffusion import format_fraction, gain_column, game_matrix
from .solver import solve_column_restricted, solve_value
from .tree import Tree, centroid, weight_table


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    trials: int
    seed: int
    exact_threshold: int = 150
    bin_width: Fraction = Fraction(1, 100)
    bin_max: Fraction = Fraction(30, 100)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("tree size must be >= 1")
        if self.trials < 1:
            raise ValueError("need at least one trial")
        if not (0 < self.bin_width <= self.bin_max):
            raise ValueError("need 0 < bin_width <= bin_max")


@dataclass(frozen=True)
class TrialRecord:
    index: int
    tree_seed: int
    n: int
    centroid: int
    centroid_weight: int
    css_gain: Fraction
    upper_bound: Fraction
    upper_bound_kind: str  # "exact-LP" | "opposing-strategy"
    diff_ratio: Fraction


@dataclass(frozen=True)
class TrialFailure:
    index: int
    tree_seed: int
    error: str


@dataclass(frozen=True)
class Histogram:
    """Counts over [0,0], (0,w], (w,2w], ... up to bin_max, plus an overflow
    bucket for ratios above bin_max."""

    bin_width: Fraction
    bin_max: Fraction
    counts: tuple[int, ...]  # counts[0] is the exact-zero bin
    overflow: int

    def rows(self) -> list[tuple[Fraction, Fraction, int]]:
        out = [(Fraction(0), Fraction(0), self.counts[0])]
        for k in range(1, len(self.counts)):
            out.append(((k - 1) * self.bin_width, k * self.bin_width, self.counts[k]))
        return out


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    records: list[TrialRecord] = field(default_factory=list)
    failures: list[TrialFailure] = field(default_factory=list)
    histogram: Histogram | None = None
    mean_ratio: Fraction | None = None
    median_ratio: Fraction | None = None


def trial_seed(master: int, i: int) -> int:
    digest = hashlib.sha256(f"{master}:{i}".encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def random_tree(n: int, seed: int) -> Tree:
    """Draw uniform vertex pairs and keep an edge whenever it joins two
    components, until n - 1 edges are in place. Deterministic in the seed."""
    if n < 1:
        raise ValueError("tree size must be >= 1")
    rng = random.Random(seed)
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    edges: list[tuple[int, int]] = []
    while len(edges) < n - 1:
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u == v:
            continue
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            edges.append((u, v))
    return Tree.from_edges(n, edges)


def sample_centroidal(n: int, seed: int, max_attempts: int = 10_000) -> Tree:
    """Rejection-sample random trees until one has a single-vertex centroid;
    the seed advances deterministically with each rejection."""
    for attempt in range(max_attempts):
        t = random_tree(n, trial_seed(seed, attempt))
        if centroid(t).kind == "centroidal":
            return t
    raise RuntimeError(f"no centroidal tree of size {n} found in {max_attempts} attempts")


def upper_bound(
    t: Tree,
    exact_threshold: int = 150,
    css_result: CSSResult | None = None,
) -> tuple[Fraction, str]:
    """An exact upper bound on the safety value.

    Small trees get the exact LP value. Larger ones get the best opposing
    mix supported on the centroid plus the vertices the centroidal strategy
    covers (all within distance 2 of the centroid); its worst case over every
    pure start bounds the value from above.
    """
    if t.n <= exact_threshold:
        cinfo = centroid(t)
        warm = {cinfo.root, *t.adj[cinfo.root]}
        sol = solve_value(game_matrix(t), warm_start=warm)
        return sol.value, "exact-LP"
    res = css_result or css_run(t)
    support = {res.root}
    for ub in res.branches_used:
        support.add(ub.info.u)
        if ub.info.t is not None and ub.gamma:
            support.add(ub.info.t)
        if ub.info.s is not None and ub.delta:
            support.add(ub.info.s)
    columns = {y: gain_column(t, y) for y in sorted(support)}
    bound, _ = solve_column_restricted(columns, t.n, warm_start=support)
    return bound, "opposing-strategy"


def _build_histogram(ratios: list[Fraction], width: Fraction, top: Fraction) -> Histogram:
    nbins = int(top / width)
    counts = [0] * (nbins + 1)
    overflow = 0
    for r in ratios:
        if r == 0:
            counts[0] += 1
        elif r <= top:
            counts[math.ceil(r / width)] += 1
        else:
            overflow += 1
    if overflow:
        warnings.warn(f"{overflow} ratio(s) above {float(top)} landed in the overflow bin")
    return Histogram(width, top, tuple(counts), overflow)


def run_experiment(
    cfg: ExperimentConfig,
    tree_source: Callable[[int, int], Tree] | None = None,
) -> ExperimentResult:
    """Run all trials and aggregate. ``tree_source(i, seed)`` may be injected
    to pin specific trees; by default centroidal trees of size cfg.n are
    sampled. Individual trial failures are recorded, not fatal."""
    result = ExperimentResult(cfg)
    ratios: list[Fraction] = []
    for i in range(cfg.trials):
        seed_i = trial_seed(cfg.seed, i)
        try:
            t = tree_source(i, seed_i) if tree_source else sample_centroidal(cfg.n, seed_i)
            res = css_run(t)
            wt = weight_table(t)
            cw = wt.w[res.root]
            bound, kind = upper_bound(t, cfg.exact_threshold, css_result=res)
            ratio = (bound - res.guaranteed_gain) / cw
            if ratio < 0:
                raise RuntimeError(f"negative gap {ratio}; bound below guaranteed gain")
            result.records.append(
                TrialRecord(i, seed_i, t.n, res.root, cw, res.guaranteed_gain, bound, kind, ratio)
            )
            ratios.append(ratio)
        except Exception as exc:  # noqa: BLE001 - per-trial isolation is the contract
            result.failures.append(TrialFailure(i, seed_i, repr(exc)))
    result.histogram = _build_histogram(ratios, cfg.bin_width, cfg.bin_max)
    if ratios:
        result.mean_ratio = sum(ratios) / len(ratios)
        ordered = sorted(ratios)
        mid = len(ordered) // 2
        if len(ordered) % 2:
            result.median_ratio = ordered[mid]
        else:
            result.median_ratio = (ordered[mid - 1] + ordered[mid]) / 2
    return result


def _dec(x: Fraction) -> str:
    return f"{float(x):.12f}"


def write_records_csv(records: list[TrialRecord], path: str) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(
            [
                "trial",
                "tree_seed",
                "n",
                "centroid",
                "centroid_weight",
                "css_gain",
                "css_gain_exact",
                "upper_bound",
                "upper_bound_exact",
                "upper_bound_kind",
                "diff_ratio",
                "diff_ratio_exact",
            ]
        )
        for r in records:
            w.writerow(
                [
                    r.index,
                    r.tree_seed,
                    r.n,
                    r.centroid,
                    r.centroid_weight,
                    _dec(r.css_gain),
                    format_fraction(r.css_gain),
                    _dec(r.upper_bound),
                    format_fraction(r.upper_bound),
                    r.upper_bound_kind,
                    _dec(r.diff_ratio),
                    format_fraction(r.diff_ratio),
                ]
            )


def write_histogram_csv(histogram: Histogram, path: str) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["bin_low", "bin_high", "count"])
        for low, high, count in histogram.rows():
            w.writerow([f"{float(low):.6g}", f"{float(high):.6g}", count])
        w.writerow([f"{float(histogram.bin_max):.6g}", "inf", histogram.overflow])


_CONFIG_KEYS = {"n": int, "trials": int, "seed": int, "exact_threshold": int}


def parse_config_file(path: str) -> dict:
    """Plain key=value config: n, trials, seed, exact_threshold, bin_width,
    bin_max. Blank lines and #-comments are skipped."""
    out: dict = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key in _CONFIG_KEYS:
                out[key] = _CONFIG_KEYS[key](value)
            elif key in ("bin_width", "bin_max"):
                out[key] = Fraction(value)
            else:
                raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
    return out
