import argparse
import json
import sys

import numpy as np

from . import __version__
from .cone import ConeSpec, ElementaryTriplet, build_reduced_matrix, elements_mask, f_J
from .config import ADJACENCY_TESTS, INTEGER_BACKENDS, budget, effective_threads, get_config
from .dd import DDOptions, DDState, dd_step, harvest, run_dd
from .display import (
    dd_progress,
    estimate_table,
    histogram_table,
    orbit_table,
    show,
    summary_table,
    trajectory_table,
)
from .errors import BudgetExhaustedError, InputMalformedError, SubddError
from .formats import (
    load_rays,
    open_text,
    parse_ints,
    read_dd_pair,
    read_matrix,
    read_order,
    read_orbit_pool,
    write_binary_rays,
    write_dd_pair,
    write_histogram_csv,
    write_matrix,
    write_order,
    write_orbit_pool,
    write_rays,
    write_trajectory_csv,
)
from .journal import ProbeJournal, load_journal, probed_set
from .linalg import int_array, int_matrix
from .logger import console, debug, error
from .manifest import RunManifest
from .neighbors import neighbors, orbit_bfs, random_extremal_sample, verify_extremal
from .orders import InsertionOrder, OrderKind, build_order, cstar_prefix, omit_row
from .stats import (
    capture_recapture,
    capture_recapture_counts,
    format_estimate,
    orbit_size_histogram,
    orbit_weight_histogram,
    weight_histogram,
    weight_histogram_from_orbits,
)
from .symmetry import SymmetryGroup
from .validators import (
    processed_rank,
    validate_dd_pair,
    validate_dimension,
    validate_n,
    validate_order,
    validate_rays,
)

ORDER_KINDS = [k.value for k in OrderKind]


def str_to_bool(value):
    """Convert string to boolean for CLI arguments."""
    if isinstance(value, bool):
        return value
    if value.lower() in ("yes", "true", "t", "y", "1"):
        return True
    elif value.lower() in ("no", "false", "f", "n", "0"):
        return False
    else:
        raise argparse.ArgumentTypeError(f"Boolean value expected, got: {value}")


def _common_parser() -> argparse.ArgumentParser:
    """Flags shared by every subcommand."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--debug", "-d", action="store_true", help="Enable debug output on stderr"
    )
    common.add_argument(
        "--quiet", "-q", action="store_true", help="Suppress summary tables and progress bars"
    )
    common.add_argument(
        "--threads",
        "-j",
        type=int,
        default=None,
        metavar="N",
        help="Worker threads (0 = all cores, default: from config)",
    )

    config_group = common.add_argument_group("configuration overrides")
    config_group.add_argument(
        "--integer-backend",
        choices=INTEGER_BACKENDS,
        default=None,
        help="exact (auto-promoting) or int64 (fails on overflow) (default: from config)",
    )
    config_group.add_argument(
        "--adjacency-test",
        choices=ADJACENCY_TESTS,
        default=None,
        help="Adjacency test used by DD steps (default: from config)",
    )
    config_group.add_argument(
        "--max-rays", type=int, default=None, metavar="N", help="Ray budget (0 = unlimited)"
    )
    config_group.add_argument(
        "--max-probes", type=int, default=None, metavar="N", help="Probe budget (0 = unlimited)"
    )
    config_group.add_argument(
        "--max-weight",
        type=int,
        default=None,
        metavar="W",
        help="Leave orbits heavier than W unprobed (0 = no limit)",
    )
    config_group.add_argument(
        "--depth",
        dest="neighbor_depth",
        type=int,
        default=None,
        metavar="K",
        help="Recursion depth of adjacency decomposition (default: 1)",
    )
    config_group.add_argument(
        "--incidence-check-rate",
        type=float,
        default=None,
        metavar="RATE",
        help="Fraction of rays whose incidence bits are rechecked after each step",
    )
    config_group.add_argument(
        "--save-manifest",
        dest="save_manifest",
        type=str_to_bool,
        default=None,
        metavar="BOOL",
        help="Write a JSON run manifest (true/false, default: from config)",
    )
    return common


def _cone_parser() -> argparse.ArgumentParser:
    cone = argparse.ArgumentParser(add_help=False)
    source = cone.add_mutually_exclusive_group(required=True)
    source.add_argument("-n", type=int, help="Size of the base set")
    source.add_argument("--matrix", metavar="PATH", help="Read the cone from a matrix file")
    return cone


def _add_order_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--order", choices=ORDER_KINDS, default=None, help="Insertion order (default: from config)"
    )
    parser.add_argument("--order-file", metavar="PATH", help="Read a static order from a file")
    parser.add_argument(
        "--shuffle-seed",
        type=int,
        default=None,
        metavar="SEED",
        help="Column shuffle for the lexmin order",
    )


def create_parser() -> argparse.ArgumentParser:
    """Create and configure the argument parser."""
    parser = argparse.ArgumentParser(
        prog="subdd",
        description="Extremal rays of the cone of p-standardized submodular functions",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""

Example usage:
  subdd matrix -n 4 -o c4.mat                       # Write the reduced inequality matrix
  subdd dd -n 4 -o c4.rays --trajectory c4.csv      # Full double description run
  subdd dd -n 5 --order recursive --stop-after 50   # Truncated run
  subdd dd -n 4 --stop-after 11 --pair-out - | subdd dd-step --row "..."   # Pipe mode
  subdd harvest -n 5 --cstar -o found.rays          # Harvest rays from the C* cone
  subdd orbits canonicalize -n 4 --rays c4.rays     # One line per orbit
  subdd bfs -n 5 --max-probes 100 -o c5.pool        # Orbit search by adjacency decomposition
  subdd estimate --pool-size 260000000 --probe-size 2797684 --overlap 154170
        """,
    )
    parser.add_argument("--version", "-v", action="version", version=f"subdd {__version__}")
    parser.add_argument(
        "--show-config",
        action="store_true",
        help="Print the current effective configuration as JSON and exit",
    )

    common = _common_parser()
    cone = _cone_parser()
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("matrix", parents=[common, cone], help="Write the reduced matrix")
    p.add_argument("-o", "--output", default="-", metavar="PATH")
    p.add_argument("--order", choices=ORDER_KINDS, default=None, help="Also write this order")
    p.add_argument("--order-out", metavar="PATH", help="Order file (default: <output>.order)")
    p.add_argument("--shuffle-seed", type=int, default=None, metavar="SEED")

    p = sub.add_parser("order", parents=[common, cone], help="Write a static insertion order")
    p.add_argument("--kind", choices=ORDER_KINDS, required=True)
    p.add_argument("--shuffle-seed", type=int, default=None, metavar="SEED")
    p.add_argument("-o", "--output", default="-", metavar="PATH")

    p = sub.add_parser("dd", parents=[common, cone], help="Run the double description method")
    _add_order_args(p)
    p.add_argument("--stop-after", type=int, default=None, metavar="K", help="Stop at K rows")
    p.add_argument("--omit-row", metavar='"I J K"', help="Leave one elementary row out")
    p.add_argument("-o", "--output", default="-", metavar="PATH", help="Ray file")
    p.add_argument("--binary", action="store_true", help="Write rays in the SDDR1 format")
    p.add_argument("--trajectory", metavar="CSV", help="Write (rows, rays) per iteration")
    p.add_argument("--show-trajectory", action="store_true", help="Print the trajectory")
    p.add_argument("--pair-out", metavar="PATH", help="Write the final DD pair (pipe format)")
    p.add_argument("--orbits", metavar="PATH", help="Write the orbit pool of a complete run")
    p.add_argument("--seed", type=int, default=0, help="Seed for incidence rechecks")

    p = sub.add_parser("dd-step", parents=[common], help="One DD step in pipe mode")
    p.add_argument("-i", "--input", default="-", metavar="PATH", help="DD pair (default stdin)")
    p.add_argument("--row", metavar='"A1 ... Ad"', help="New row, if not in the input")
    p.add_argument("-o", "--output", default="-", metavar="PATH")

    p = sub.add_parser("harvest", parents=[common, cone], help="Harvest rays of the full cone")
    p.add_argument(
        "--rays", metavar="PATH", help="Rays of the intermediate cone (--cstar computes them)"
    )
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--processed", metavar="PATH", help="Order file of processed rows")
    source.add_argument(
        "--cstar", action="store_true", help="The intermediate cone is C* of the recursive order"
    )
    p.add_argument("--candidates", metavar="PATH", help="Rows to try (default: unprocessed)")
    p.add_argument("-o", "--output", default="-", metavar="PATH")

    p = sub.add_parser("neighbors", parents=[common, cone], help="Neighbors of extremal rays")
    p.add_argument("--rays", required=True, metavar="PATH")
    p.add_argument("--index", type=int, default=None, help="Probe only this ray of the file")
    _add_order_args(p)
    p.add_argument("-o", "--output", default="-", metavar="PATH")
    p.add_argument("--orbits", metavar="PATH", help="Write the neighbor orbit pool")

    p = sub.add_parser("bfs", parents=[common, cone], help="Orbit search by adjacency")
    p.add_argument("--seeds", metavar="PATH", help="Seed rays (default: f_J with J = {0,1})")
    p.add_argument("--pool", metavar="PATH", help="Resume from this orbit pool")
    p.add_argument("--journal", metavar="PATH", help="Append-only probe journal")
    _add_order_args(p)
    p.add_argument("-o", "--output", default="-", metavar="PATH", help="Orbit pool file")

    p = sub.add_parser("orbits", help="Orbit canonicalization and expansion")
    orbit_sub = p.add_subparsers(dest="orbit_command", metavar="ACTION", required=True)
    q = orbit_sub.add_parser("canonicalize", parents=[common, cone], help="Rays to orbit pool")
    q.add_argument("--rays", required=True, metavar="PATH")
    q.add_argument("-o", "--output", default="-", metavar="PATH")
    q = orbit_sub.add_parser("expand", parents=[common, cone], help="Orbit pool to rays")
    q.add_argument("--pool", required=True, metavar="PATH")
    q.add_argument("-o", "--output", default="-", metavar="PATH")

    p = sub.add_parser("stats", parents=[common, cone], help="Weight and orbit histograms")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--rays", metavar="PATH")
    source.add_argument("--pool", metavar="PATH")
    p.add_argument("--weights-csv", metavar="PATH")
    p.add_argument("--sizes-csv", metavar="PATH")

    p = sub.add_parser("estimate", parents=[common], help="Capture-recapture orbit estimate")
    p.add_argument("--pool-size", type=int)
    p.add_argument("--probe-size", type=int)
    p.add_argument("--overlap", type=int)
    p.add_argument("--mean-orbit-size", type=float)
    p.add_argument("-n", type=int, help="Base set size for --pool/--probe files")
    p.add_argument("--pool", metavar="PATH", help="Orbit pool file")
    p.add_argument("--probe", metavar="PATH", help="Orbit pool of the independent probe")

    p = sub.add_parser("verify", parents=[common, cone], help="Check rays are extremal")
    p.add_argument("--rays", required=True, metavar="PATH")

    p = sub.add_parser("sample", parents=[common, cone], help="Random extremal sampling")
    p.add_argument("--attempts", type=int, default=10000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--anchor", metavar="PATH", help="Bias toward the first ray of this file")
    p.add_argument("-o", "--output", default="-", metavar="PATH")

    return parser


def merge_config_with_cli_args(config, args):
    """Merge CLI arguments with config, CLI args take precedence.

    Args:
        config: SubddConfig instance
        args: argparse.Namespace with CLI arguments

    Returns:
        dict: Merged configuration with CLI args overriding config file values
    """
    merged = config.config.copy()

    arg_mapping = {
        "threads": "threads",
        "integer_backend": "integerBackend",
        "adjacency_test": "adjacencyTest",
        "max_rays": "maxRays",
        "max_probes": "maxProbes",
        "max_weight": "maxWeight",
        "neighbor_depth": "neighborDepth",
        "incidence_check_rate": "incidenceCheckRate",
        "save_manifest": "saveRunManifests",
    }

    for arg_name, config_key in arg_mapping.items():
        arg_value = getattr(args, arg_name, None)
        if arg_value is not None:  # Only override if explicitly provided
            merged[config_key] = arg_value

    return merged


def _load_spec(args, manifest: RunManifest) -> ConeSpec:
    if getattr(args, "matrix", None):
        manifest.add_input(args.matrix)
        return read_matrix(args.matrix)
    return build_reduced_matrix(validate_n(args.n))


def _parse_triplet_arg(text: str) -> ElementaryTriplet:
    i, j, K = parse_ints(text, None, 3)
    try:
        return ElementaryTriplet(min(i, j), max(i, j), K)
    except ValueError as e:
        raise InputMalformedError(str(e)) from e


def _resolve_order(args, spec: ConeSpec, config: dict, manifest: RunManifest):
    if getattr(args, "order_file", None):
        manifest.add_input(args.order_file)
        rows = read_order(args.order_file, spec)
        validate_order(rows, spec, complete=False)
        return rows
    kind = args.order or config.get("defaultOrder", "topt")
    return build_order(kind, spec, args.shuffle_seed)


def _order_name(order) -> str:
    if isinstance(order, InsertionOrder):
        return str(order.kind)
    return "file"


def _row_count(order, spec: ConeSpec) -> int:
    if isinstance(order, InsertionOrder):
        return len(order.rows) if order.rows is not None else spec.m
    return len(order)


def _dd_options(config: dict, **overrides) -> DDOptions:
    settings = {
        "adjacency_test": config["adjacencyTest"],
        "max_rays": budget(config["maxRays"]),
        "threads": effective_threads(config["threads"]),
        "integer_backend": config["integerBackend"],
        "incidence_check_rate": float(config["incidenceCheckRate"]),
    }
    settings.update(overrides)
    return DDOptions(**settings)


def _budgets(config: dict) -> dict:
    return {k: config[k] for k in ("maxRays", "maxProbes", "maxWeight")}


def _load_ray_arg(path, spec: ConeSpec, manifest: RunManifest) -> np.ndarray:
    manifest.add_input(path)
    rays = load_rays(path)
    validate_dimension(rays, spec, str(path))
    return rays


def _write_ray_output(rays: np.ndarray, args, manifest: RunManifest, comment=None) -> None:
    if getattr(args, "binary", False):
        if args.output == "-":
            raise ValueError("--binary needs an output file")
        write_binary_rays(rays, args.output)
    else:
        write_rays(rays, args.output, comment)
    manifest.add_output(args.output)


def cmd_matrix(args, config, manifest):
    spec = _load_spec(args, manifest)
    manifest.set_run_info(vars(args), n=spec.n, order=args.order, seed=args.shuffle_seed)
    write_matrix(spec, args.output)
    manifest.add_output(args.output)
    if args.order:
        order = build_order(args.order, spec, args.shuffle_seed)
        if order.is_dynamic:
            raise ValueError(f"{order.kind} is decided during the run and has no order file")
        target = args.order_out or (f"{args.output}.order" if args.output != "-" else None)
        if target is None:
            raise ValueError("--order with output to stdout needs --order-out")
        write_order(order.rows, spec, target)
        manifest.add_output(target)
    show(summary_table("Cone", {"n": spec.n, "d": spec.d, "m": spec.m}), args.quiet)


def cmd_order(args, config, manifest):
    spec = _load_spec(args, manifest)
    manifest.set_run_info(vars(args), n=spec.n, order=args.kind, seed=args.shuffle_seed)
    order = build_order(args.kind, spec, args.shuffle_seed)
    if order.is_dynamic:
        raise ValueError(f"{order.kind} is decided during the run and has no order file")
    write_order(order.rows, spec, args.output)
    manifest.add_output(args.output)


def cmd_dd(args, config, manifest):
    spec = _load_spec(args, manifest)
    order = _resolve_order(args, spec, config, manifest)
    if args.omit_row:
        omitted = spec.row_of.get(_parse_triplet_arg(args.omit_row))
        if omitted is None:
            raise InputMalformedError(f"{args.omit_row!r} is not a row for n={spec.n}")
        if isinstance(order, InsertionOrder):
            rows = order.rows if order.rows is not None else tuple(range(spec.m))
            order = InsertionOrder(order.kind, omit_row(rows, omitted), order.seed)
        else:
            order = omit_row(order, omitted)
    manifest.set_run_info(
        vars(args), n=spec.n, order=_order_name(order), seed=args.seed, budgets=_budgets(config)
    )

    total = _row_count(order, spec)
    if args.stop_after is not None:
        total = min(total, args.stop_after)
    with dd_progress(total, spec, args.quiet) as progress:
        options = _dd_options(
            config, stop_after=args.stop_after, seed=args.seed, progress_callback=progress
        )
        result = run_dd(spec, order, options)

    rays = result.rays
    complete_cone = result.complete and len(result.order) == spec.m
    comment = f"n={spec.n} rows={len(result.order)} rays={rays.shape[0]}"
    # in pipe mode stdout carries the DD pair only
    if not (args.pair_out == "-" and args.output == "-"):
        _write_ray_output(rays, args, manifest, comment)
    if args.trajectory:
        write_trajectory_csv(result.trajectory, args.trajectory)
        manifest.add_output(args.trajectory)
    if args.pair_out:
        with open_text(args.pair_out, "w") as f:
            write_dd_pair(f, spec.matrix[list(result.order)], rays)
        manifest.add_output(args.pair_out)

    summary = {
        "n": spec.n,
        "order": _order_name(order),
        "rows processed": len(result.order),
        "rays": rays.shape[0],
        "complete": result.complete,
    }
    weights = result.state.weights()
    if weights.size:
        summary["weights"] = f"{int(weights.min())}..{int(weights.max())}"
    if args.orbits:
        if not complete_cone:
            raise ValueError("--orbits needs a complete run over every row")
        records = SymmetryGroup(spec).orbit_pool(rays, effective_threads(config["threads"]))
        write_orbit_pool(records, args.orbits)
        manifest.add_output(args.orbits)
        summary["orbits"] = len(records)
    manifest.record(
        rays=int(rays.shape[0]), rows=len(result.order), complete=result.complete,
        trajectory=result.trajectory,
    )
    show(summary_table("DD run", summary), args.quiet)
    if args.show_trajectory:
        show(trajectory_table(result.trajectory, spec, result.order), args.quiet)
    debug.print(f"[DD] counters {result.counters}")

    if result.budget_exhausted:
        raise BudgetExhaustedError(
            f"ray budget exceeded after {len(result.order)} rows; partial outputs kept"
        )


def cmd_dd_step(args, config, manifest):
    manifest.add_input(args.input)
    with open_text(args.input) as f:
        pair = read_dd_pair(f)
    if args.row is not None:
        if pair.new_row is not None:
            raise InputMalformedError("new row given both in the input and with --row")
        pair.new_row = int_array(parse_ints(args.row, None, pair.dimension))
    if pair.new_row is None:
        raise InputMalformedError("no new row: append it to the input or pass --row")
    validate_dd_pair(pair)
    if processed_rank(pair) != pair.dimension:
        raise InputMalformedError(f"processed rows must have rank {pair.dimension}")
    manifest.set_run_info(vars(args), budgets=_budgets(config))

    m = pair.rows.shape[0]
    matrix = int_matrix([*pair.rows, pair.new_row], pair.dimension)
    state = DDState.from_rays(matrix, range(m), pair.rays)
    state = dd_step(
        state,
        m,
        adjacency_test=config["adjacencyTest"],
        threads=effective_threads(config["threads"]),
        integer_backend=config["integerBackend"],
    )
    with open_text(args.output, "w") as f:
        write_dd_pair(f, matrix, state.rays)
    manifest.add_output(args.output)
    manifest.record(rays_in=int(pair.rays.shape[0]), rays_out=state.size)
    debug.print(f"[DD] pipe step: {pair.rays.shape[0]} -> {state.size} rays")


def cmd_harvest(args, config, manifest):
    spec = _load_spec(args, manifest)
    if args.cstar:
        processed = cstar_prefix(spec)
    else:
        manifest.add_input(args.processed)
        processed = read_order(args.processed, spec)
    if args.rays:
        rays = _load_ray_arg(args.rays, spec, manifest)
    elif args.cstar:
        rays = run_dd(spec, processed, _dd_options(config, emit_intermediate_sizes=False)).rays
    else:
        raise InputMalformedError("--rays is required unless --cstar is given")
    if args.candidates:
        manifest.add_input(args.candidates)
        candidates = read_order(args.candidates, spec)
    else:
        done = set(processed)
        candidates = tuple(r for r in range(spec.m) if r not in done)
    manifest.set_run_info(vars(args), n=spec.n)

    state = DDState.from_rays(spec.matrix, processed, rays)
    found = harvest(
        state,
        candidates,
        spec,
        adjacency_test=config["adjacencyTest"],
        integer_backend=config["integerBackend"],
    )
    _write_ray_output(found, args, manifest)
    manifest.record(rays=int(found.shape[0]), candidates=len(candidates))
    show(
        summary_table(
            "Harvest",
            {"input rays": state.size, "candidate rows": len(candidates), "found": found.shape[0]},
        ),
        args.quiet,
    )


def cmd_neighbors(args, config, manifest):
    spec = _load_spec(args, manifest)
    rays = _load_ray_arg(args.rays, spec, manifest)
    if args.index is not None:
        if not 0 <= args.index < rays.shape[0]:
            raise ValueError(f"--index {args.index} outside 0..{rays.shape[0] - 1}")
        rays = rays[args.index : args.index + 1]
    order = _resolve_order(args, spec, config, manifest)
    depth = int(config["neighborDepth"])
    manifest.set_run_info(vars(args), n=spec.n, order=_order_name(order))
    options = _dd_options(config, emit_intermediate_sizes=False)

    group = SymmetryGroup(spec)
    found: set[tuple[int, ...]] = set()
    incomplete = False
    summary = {}
    for k, ray in enumerate(rays):
        if not verify_extremal(ray, spec):
            raise ValueError(f"ray {k} is not extremal")
        result = neighbors(ray, spec, order, depth=depth, options=options)
        incomplete |= not result.complete
        found.update(tuple(int(v) for v in r) for r in result.rays)
        touched = group.orbit_pool(result.rays)
        summary[f"ray {k} (weight {spec.weight(ray)})"] = (
            f"{result.rays.shape[0]} neighbors, {len(touched)} orbits"
        )
    out = int_matrix(sorted(found), spec.d)
    _write_ray_output(out, args, manifest)
    if args.orbits:
        write_orbit_pool(group.orbit_pool(out), args.orbits)
        manifest.add_output(args.orbits)
    manifest.record(neighbors=int(out.shape[0]), complete=not incomplete)
    show(summary_table("Neighbors", summary), args.quiet)
    if incomplete:
        raise BudgetExhaustedError("a neighbor subproblem exceeded the ray budget")


def cmd_bfs(args, config, manifest):
    spec = _load_spec(args, manifest)
    group = SymmetryGroup(spec)
    if args.seeds:
        seeds = _load_ray_arg(args.seeds, spec, manifest)
    else:
        seeds = f_J(spec.n, elements_mask((0, 1)))[None, :]
    pool = []
    if args.pool:
        manifest.add_input(args.pool)
        pool = read_orbit_pool(args.pool, spec.d, group)
    probed = set()
    if args.journal:
        probed = probed_set(load_journal(args.journal))
    order = _resolve_order(args, spec, config, manifest)
    threads = effective_threads(config["threads"])
    manifest.set_run_info(
        vars(args), n=spec.n, order=_order_name(order), budgets=_budgets(config)
    )
    for k, seed in enumerate(seeds):
        if not verify_extremal(seed, spec):
            raise ValueError(f"seed {k} is not extremal")

    result = orbit_bfs(
        seeds,
        spec,
        group=group,
        max_probes=budget(config["maxProbes"]),
        max_weight=budget(config["maxWeight"]),
        order=order,
        depth=int(config["neighborDepth"]),
        options=_dd_options(config, emit_intermediate_sizes=False, threads=1),
        journal=ProbeJournal(args.journal) if args.journal else None,
        pool=pool,
        probed=probed,
        threads=threads,
        progress_callback=debug.probe,
    )
    write_orbit_pool(result.orbits, args.output)
    manifest.add_output(args.output)
    if args.journal:
        manifest.add_output(args.journal)
    manifest.record(orbits=len(result.orbits), probes=result.probes, closed=result.closed)
    show(
        summary_table(
            "Orbit search",
            {
                "orbits": len(result.orbits),
                "probes": result.probes,
                "probed total": len(result.probed),
                "closed": result.closed,
            },
        ),
        args.quiet,
    )
    if result.budget_exhausted:
        raise BudgetExhaustedError(f"probe budget spent after {result.probes} probes")


def cmd_orbits(args, config, manifest):
    spec = _load_spec(args, manifest)
    group = SymmetryGroup(spec)
    manifest.set_run_info(vars(args), n=spec.n)
    if args.orbit_command == "canonicalize":
        rays = _load_ray_arg(args.rays, spec, manifest)
        records = group.orbit_pool(rays, effective_threads(config["threads"]))
        write_orbit_pool(records, args.output)
        manifest.add_output(args.output)
        manifest.record(orbits=len(records))
        show(orbit_table(records), args.quiet)
        return
    manifest.add_input(args.pool)
    records = read_orbit_pool(args.pool, spec.d, group)
    expanded = {tuple(int(v) for v in r) for rec in records for r in group.orbit_expand(rec.ray)}
    rays = int_matrix(sorted(expanded), spec.d)
    write_rays(rays, args.output)
    manifest.add_output(args.output)
    manifest.record(rays=int(rays.shape[0]))


def cmd_stats(args, config, manifest):
    spec = _load_spec(args, manifest)
    manifest.set_run_info(vars(args), n=spec.n)
    sizes = None
    if args.rays:
        rays = _load_ray_arg(args.rays, spec, manifest)
        weights = weight_histogram(rays, spec)
        show(histogram_table(weights, "Ray weights"), args.quiet)
    else:
        manifest.add_input(args.pool)
        records = read_orbit_pool(args.pool, spec.d, SymmetryGroup(spec))
        weights = weight_histogram_from_orbits(records)
        sizes = orbit_size_histogram(records)
        show(histogram_table(weights, "Ray weights (orbits x size)"), args.quiet)
        show(histogram_table(orbit_weight_histogram(records), "Orbit weights"), args.quiet)
        show(histogram_table(sizes, "Orbit sizes", bucket="Size"), args.quiet)
    if args.weights_csv:
        write_histogram_csv(weights, args.weights_csv, "weight")
        manifest.add_output(args.weights_csv)
    if args.sizes_csv:
        if sizes is None:
            raise ValueError("--sizes-csv needs --pool")
        write_histogram_csv(sizes, args.sizes_csv, "size")
        manifest.add_output(args.sizes_csv)
    manifest.record(total=weights.total, min_weight=weights.min, max_weight=weights.max)


def cmd_estimate(args, config, manifest):
    manifest.set_run_info(vars(args), n=args.n)
    if args.pool or args.probe:
        if not (args.pool and args.probe and args.n):
            raise ValueError("file mode needs -n, --pool and --probe")
        spec = build_reduced_matrix(validate_n(args.n))
        group = SymmetryGroup(spec)
        manifest.add_input(args.pool)
        manifest.add_input(args.probe)
        pool = read_orbit_pool(args.pool, spec.d, group)
        probe = read_orbit_pool(args.probe, spec.d, group)
        estimate = capture_recapture(
            [rec.canonical for rec in pool],
            [rec.canonical for rec in probe],
            orbit_size_histogram(pool),
        )
    else:
        if None in (args.pool_size, args.probe_size, args.overlap):
            raise ValueError("give --pool-size, --probe-size and --overlap, or pool files")
        estimate = capture_recapture_counts(
            args.pool_size, args.probe_size, args.overlap, args.mean_orbit_size
        )
    print(format_estimate(estimate))
    show(estimate_table(estimate), args.quiet)
    manifest.record(orbits=estimate.orbits, rays=estimate.rays)


def cmd_verify(args, config, manifest):
    spec = _load_spec(args, manifest)
    rays = _load_ray_arg(args.rays, spec, manifest)
    manifest.set_run_info(vars(args), n=spec.n)
    report = validate_rays(rays, spec)
    manifest.record(**{k.replace(" ", "_"): v for k, v in report.summary().items()})
    show(summary_table("Verification", report.summary()), args.quiet)
    if not report.ok:
        raise SubddError(f"{report.total} rays checked, not all are distinct extremal rays")


def cmd_sample(args, config, manifest):
    spec = _load_spec(args, manifest)
    anchor = None
    if args.anchor:
        anchor_rays = _load_ray_arg(args.anchor, spec, manifest)
        if anchor_rays.shape[0] == 0:
            raise InputMalformedError(f"{args.anchor}: no ray")
        anchor = anchor_rays[0]
    manifest.set_run_info(vars(args), n=spec.n, seed=args.seed)
    result = random_extremal_sample(spec, args.seed, args.attempts, anchor)
    _write_ray_output(result.rays, args, manifest)
    manifest.record(attempts=result.attempts, hits=result.hits, distinct=int(result.rays.shape[0]))
    show(
        summary_table(
            "Random sampling",
            {
                "attempts": result.attempts,
                "hits": result.hits,
                "hit rate": f"{100 * result.hit_rate:.3f}%",
                "distinct rays": result.rays.shape[0],
            },
        ),
        args.quiet,
    )


COMMANDS = {
    "matrix": cmd_matrix,
    "order": cmd_order,
    "dd": cmd_dd,
    "dd-step": cmd_dd_step,
    "harvest": cmd_harvest,
    "neighbors": cmd_neighbors,
    "bfs": cmd_bfs,
    "orbits": cmd_orbits,
    "stats": cmd_stats,
    "estimate": cmd_estimate,
    "verify": cmd_verify,
    "sample": cmd_sample,
}


def main(argv=None):
    """Main CLI entry point."""
    parser = create_parser()
    args = parser.parse_args(argv)

    if args.show_config:
        cfg = get_config()
        console.print(f"[dim]Config file: {cfg.get_config_path()}[/dim]")
        console.print_json(json.dumps(cfg.config, indent=2))
        sys.exit(0)

    if args.command is None:
        parser.print_help(sys.stderr)
        sys.exit(1)

    if args.debug:
        debug.enabled = True
        console.print("Debug mode enabled", style="dim cyan")

    # Load configuration and merge with CLI args
    config = get_config()
    merged_config = merge_config_with_cli_args(config, args)
    manifest = RunManifest(args.command, merged_config)

    try:
        COMMANDS[args.command](args, merged_config, manifest)
    except KeyboardInterrupt:
        manifest.finalize("user_interrupt")
        console.print("\nOperation cancelled by user (Ctrl+C)", style="yellow")
        sys.exit(130)
    except BudgetExhaustedError as e:
        manifest.finalize("budget_exhausted")
        console.print(f"[yellow]Budget exhausted: {e}[/yellow]")
        sys.exit(e.exit_code)
    except SubddError as e:
        manifest.finalize("error")
        error(str(e))
        sys.exit(e.exit_code)
    except Exception as e:  # noqa: BLE001
        manifest.finalize("error")
        error(str(e))
        sys.exit(1)

    path = manifest.finalize("complete")
    if path is not None:
        debug.print(f"Run manifest written to {path}")


if __name__ == "__main__":
    main()
