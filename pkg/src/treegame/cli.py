"""Command-line front end.

Data goes to stdout, diagnostics to stderr. Exit codes: 0 success, 1 input
error, 2 internal verification failure. Rational mode renders fractions as
"p/q" strings; --float switches to decimals. Identical invocations produce
byte-identical output.
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction
from pathlib import Path

import click

from . import __version__
from .css import css_run, verify_centroid_reply
from .diffusion import (
    Color,
    format_fraction,
    game_matrix,
    guaranteed_gain,
    maximal_gain,
    simulate_diffusion,
    strategy_to_pairs,
)
from .experiment import (
    ExperimentConfig,
    parse_config_file,
    run_experiment,
    write_histogram_csv,
    write_records_csv,
)
from .families import (
    CompleteTreeSpec,
    SpiderSpec,
    build_complete_tree,
    build_spider,
    complete_tree_opposing_strategy,
    complete_tree_safe_strategy,
    complete_tree_value,
    spider_body_reply_gain,
    spider_optimal_depth,
    spider_safe_strategy,
)
from .solver import solve_value, verify_solution
from .tree import Tree, centroid, parse_tree, weight_table


class VerificationFailure(RuntimeError):
    """An internal consistency check failed; maps to exit status 2."""


def _num(x, as_float: bool):
    if as_float:
        return float(x)
    if isinstance(x, int):
        return x
    return format_fraction(x)


def _emit(doc: dict) -> None:
    click.echo(json.dumps(doc, indent=2))


_INPUT_OPTIONS = [
    click.option("--tree", "tree_file", type=click.Path(exists=True, dir_okay=False), help="Edge-list tree file."),
    click.option("--spider", "spider_spec", nargs=2, type=int, metavar="M L", help="Spider with M legs of L vertices."),
    click.option("--ctree", "ctree_spec", nargs=2, type=int, metavar="M H", help="Complete M-ary tree of height H."),
]


def _with_input_options(fn):
    for opt in reversed(_INPUT_OPTIONS):
        fn = opt(fn)
    return fn


def _load_tree(tree_file, spider_spec, ctree_spec) -> Tree:
    given = [x for x in (tree_file, spider_spec or None, ctree_spec or None) if x]
    if len(given) != 1:
        raise click.UsageError("exactly one of --tree, --spider, --ctree is required")
    if tree_file:
        return parse_tree(Path(tree_file).read_text())
    if spider_spec:
        return build_spider(SpiderSpec(*spider_spec))
    return build_complete_tree(CompleteTreeSpec(*ctree_spec))


@click.group()
@click.version_option(__version__)
def cli() -> None:
    """Safe strategies for two-player competitive diffusion on trees."""


@cli.command("centroid")
@_with_input_options
def centroid_cmd(tree_file, spider_spec, ctree_spec) -> None:
    """Vertex weights, co-weights and the centroid."""
    t = _load_tree(tree_file, spider_spec, ctree_spec)
    wt = weight_table(t)
    info = centroid(t, wt)
    doc = {
        "schema": "treegame.centroid/1",
        "n": t.n,
        "weights": list(wt.w),
        "co_weights": list(wt.co_weight),
        "centroid": {"vertices": list(info.vertices), "kind": info.kind, "root": info.root},
    }
    if t.labels is not None:
        doc["labels"] = list(t.labels)
    _emit(doc)


@cli.command("matrix")
@_with_input_options
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
def matrix_cmd(tree_file, spider_spec, ctree_spec, fmt) -> None:
    """Gain matrix for all pure pairs, one row per own starting vertex."""
    t = _load_tree(tree_file, spider_spec, ctree_spec)
    a = game_matrix(t)
    if fmt == "csv":
        click.echo(a.to_csv(), nl=False)
    else:
        _emit({"schema": "treegame.matrix/1", "n": a.n, "entries": [list(r) for r in a.entries]})


@cli.command("simulate")
@_with_input_options
@click.option("--x", "x1", type=int, required=True, help="Player 1 start vertex.")
@click.option("--y", "x2", type=int, required=True, help="Player 2 start vertex.")
def simulate_cmd(tree_file, spider_spec, ctree_spec, x1, x2) -> None:
    """Run one diffusion and print the final per-vertex colors."""
    t = _load_tree(tree_file, spider_spec, ctree_spec)
    col = simulate_diffusion(t, x1, x2)
    _emit(
        {
            "schema": "treegame.simulate/1",
            "n": t.n,
            "x": x1,
            "y": x2,
            "colors": col.names(),
            "gain": col.player1_gain,
            "counts": {
                "player1": col.player1_gain,
                "player2": col.player2_gain,
                "grey": col.count(Color.GREY),
                "white": col.count(Color.WHITE),
            },
            "rounds": col.rounds,
        }
    )


@cli.command("value")
@_with_input_options
@click.option("--float", "as_float", is_flag=True, help="Render numbers as decimals.")
def value_cmd(tree_file, spider_spec, ctree_spec, as_float) -> None:
    """Exact safety value with maxmin and minmax strategies."""
    t = _load_tree(tree_file, spider_spec, ctree_spec)
    sol = solve_value(game_matrix(t))
    ok = verify_solution(game_matrix(t), sol)
    _emit(
        {
            "schema": "treegame.value/1",
            "n": t.n,
            "value": _num(sol.value, as_float),
            "maxmin": strategy_to_pairs(sol.maxmin, as_float),
            "minmax": strategy_to_pairs(sol.minmax, as_float),
            "primal_value": _num(sol.primal_value, as_float),
            "dual_value": _num(sol.dual_value, as_float),
            "verified": ok,
        }
    )
    if not ok:
        raise VerificationFailure("solver certificate failed")


@cli.command("css")
@_with_input_options
@click.option("--strict-centroidal", is_flag=True, help="Reject bicentroidal trees.")
@click.option("--float", "as_float", is_flag=True, help="Render numbers as decimals.")
def css_cmd(tree_file, spider_spec, ctree_spec, strict_centroidal, as_float) -> None:
    """Centroidal safe strategy with its verification report."""
    t = _load_tree(tree_file, spider_spec, ctree_spec)
    res = css_run(t, strict_centroidal=strict_centroidal)
    report = verify_centroid_reply(t, res)
    doc = {
        "schema": "treegame.css/1",
        "n": t.n,
        "root": res.root,
        "strategy": strategy_to_pairs(res.strategy, as_float),
        "alpha": _num(res.alpha, as_float),
        "branches": [
            {
                "index": ub.info.index,
                "class": ub.info.cls.value,
                "criterion": _num(ub.info.criterion, as_float),
                "beta": _num(ub.beta, as_float),
                "gamma": _num(ub.gamma, as_float),
                "delta": _num(ub.delta, as_float),
                "u": ub.info.u,
                "t": ub.info.t,
                "s": ub.info.s,
            }
            for ub in res.branches_used
        ],
        "guaranteed_gain": _num(res.guaranteed_gain, as_float),
        "centroid_gain": _num(res.centroid_gain, as_float),
        "theorem4": "pass" if report.passed else "fail",
        "trace": [_num(g, as_float) for g in res.trace],
    }
    _emit(doc)
    if not report.passed:
        raise VerificationFailure("centroid does not minimize the reply gain")


@cli.command("spider")
@click.option("--m", "legs", type=int, required=True, help="Number of legs (>= 3).")
@click.option("--l", "leg_length", type=int, required=True, help="Vertices per leg.")
@click.option("--k", type=int, default=None, help="Covered depth; defaults to the optimal one.")
@click.option("--exact-threshold", type=int, default=150, show_default=True)
@click.option("--float", "as_float", is_flag=True, help="Render numbers as decimals.")
def spider_cmd(legs, leg_length, k, exact_threshold, as_float) -> None:
    """Spider safe strategy plus a bound report."""
    spec = SpiderSpec(legs, leg_length)
    t = build_spider(spec)
    if k is None:
        k, ggain = spider_optimal_depth(spec)
    else:
        ggain = guaranteed_gain(t, spider_safe_strategy(spec, k))[0]
    strat = spider_safe_strategy(spec, k)
    body_gain = spider_body_reply_gain(spec, k)
    value = None
    if spec.n <= exact_threshold:
        value = solve_value(game_matrix(t)).value
    sandwich_ok = ggain <= (value if value is not None else Fraction(leg_length)) <= leg_length
    doc = {
        "schema": "treegame.spider/1",
        "spec": {"m": legs, "l": leg_length, "n": spec.n},
        "k": k,
        "strategy": strategy_to_pairs(strat, as_float),
        "guaranteed_gain": _num(ggain, as_float),
        "body_reply_gain": _num(body_gain, as_float),
        "value": _num(value, as_float) if value is not None else None,
        "upper_bound": leg_length,
        "sandwich_ok": sandwich_ok,
    }
    _emit(doc)
    if not sandwich_ok:
        raise VerificationFailure("bound sandwich failed")


@cli.command("ctree")
@click.option("--m", "arity", type=int, required=True, help="Arity (>= 2).")
@click.option("--h", "height", type=int, required=True, help="Height (>= 1).")
@click.option("--float", "as_float", is_flag=True, help="Render numbers as decimals.")
def ctree_cmd(arity, height, as_float) -> None:
    """Closed-form strategies and safety value on a complete m-ary tree."""
    spec = CompleteTreeSpec(arity, height)
    t = build_complete_tree(spec)
    safe = complete_tree_safe_strategy(spec)
    oppose = complete_tree_opposing_strategy(spec)
    value = complete_tree_value(spec)
    ggain = guaranteed_gain(t, safe)[0]
    mgain = maximal_gain(t, oppose)[0]
    ok = ggain == value == mgain
    _emit(
        {
            "schema": "treegame.complete-tree/1",
            "spec": {"m": arity, "h": height, "n": spec.n},
            "value": _num(value, as_float),
            "safe_strategy": strategy_to_pairs(safe, as_float),
            "opposing_strategy": strategy_to_pairs(oppose, as_float),
            "guaranteed_gain": _num(ggain, as_float),
            "maximal_gain": _num(mgain, as_float),
            "verified": ok,
        }
    )
    if not ok:
        raise VerificationFailure("closed-form gains do not match the safety value")


@cli.command("experiment")
@click.option("--n", type=int, default=None, help="Tree size per trial.")
@click.option("--trials", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--exact-threshold", type=int, default=None)
@click.option("--config", "config_file", type=click.Path(exists=True, dir_okay=False), help="key=value config file.")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=".", show_default=True)
def experiment_cmd(n, trials, seed, exact_threshold, config_file, out_dir) -> None:
    """Run the random-tree evaluation; writes records.csv and histogram.csv."""
    settings: dict = {}
    if config_file:
        settings.update(parse_config_file(config_file))
    for key, val in (("n", n), ("trials", trials), ("seed", seed), ("exact_threshold", exact_threshold)):
        if val is not None:
            settings[key] = val
    missing = [k for k in ("n", "trials", "seed") if k not in settings]
    if missing:
        raise click.UsageError(f"missing required settings: {', '.join(missing)}")
    cfg = ExperimentConfig(**settings)
    result = run_experiment(cfg)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_records_csv(result.records, str(out / "records.csv"))
    assert result.histogram is not None
    write_histogram_csv(result.histogram, str(out / "histogram.csv"))
    _emit(
        {
            "schema": "treegame.experiment-summary/1",
            "n": cfg.n,
            "trials": cfg.trials,
            "seed": cfg.seed,
            "completed": len(result.records),
            "failed": len(result.failures),
            "mean_ratio": format_fraction(result.mean_ratio) if result.mean_ratio is not None else None,
            "median_ratio": format_fraction(result.median_ratio) if result.median_ratio is not None else None,
            "overflow": result.histogram.overflow,
            "records_csv": str(out / "records.csv"),
            "histogram_csv": str(out / "histogram.csv"),
        }
    )
    if result.failures:
        for f in result.failures:
            click.echo(f"trial {f.index} failed: {f.error}", err=True)


def main() -> None:
    try:
        cli.main(standalone_mode=False)
    except VerificationFailure as exc:
        click.echo(f"verification failure: {exc}", err=True)
        sys.exit(2)
    except click.exceptions.Exit as exc:
        sys.exit(exc.exit_code)
    except click.Abort:
        sys.exit(1)
    except click.ClickException as exc:
        exc.show()
        sys.exit(1)
    except (ValueError, OSError, RuntimeError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


if __name__ == "__main__":
    main()
