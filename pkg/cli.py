"""
Command-line front end: stable matchings, certificates, solvers, generators and oracles
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from config import EXIT_CODES, LOG_LEVEL, PROBLEM_METHODS, RANDOM_INSTANCE_DEFAULTS, SAT_GADGET_ETA
from core import CapacityVector, Instance, matching_to_dict, parse_increase, parse_instance, parse_matching
from deferred_acceptance import enumerate_stable_matchings, student_optimal_stable
from documents import (
    EfficiencyOracleDocument, FormulaDocument, GraphDocument, MatchingDocument, SetSystemDocument,
    dump_document, load_document,
)
from efficiency import efficiency_oracle, is_efficient
from exceptions import CapacityPlanningError, GuardExceededError
from export_utils import CHECKS, ReportExporter
from generators import (
    EXAMPLES, formula_from_document, gen_example, gen_mcc, gen_random, gen_sat22, gen_se_mcc,
    gen_set_cover, gen_vertex_cover, graph_from_document, sets_from_document, type1_gadget, type2_gadget,
)
from minmax_sp import solve_minmax_sp
from minsum_sp import SolveResult, solve_minsum_sp
from se_solvers import solve_minmax_se, solve_minsum_se

# Set up logging
logging.basicConfig(stream=sys.stderr, level=LOG_LEVEL)
logger = logging.getLogger(__name__)

REDUCTIONS = ["vertex-cover", "set-cover", "mcc", "se-mcc", "sat22"]
GADGETS = ["type1", "type2"]


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _load_instance(args: argparse.Namespace) -> Instance:
    return parse_instance(_read(args.instance))


def _load_increase(args: argparse.Namespace, instance: Instance) -> Optional[CapacityVector]:
    if getattr(args, "increase", None) is None:
        return None
    return parse_increase(instance, _read(args.increase))


def run_solver(instance: Instance, problem: str, method: str, budget: Optional[int] = None,
               guard: Optional[int] = None, threads: Optional[int] = None) -> SolveResult:
    """
    Dispatch a (problem, method) pair

    Args:
        instance: Instance
        problem: minsum-sp, minmax-sp, minsum-se or minmax-se
        method: One of PROBLEM_METHODS[problem]
        budget: k+ or k^max
        guard: Search guard
        threads: joblib workers

    Returns:
        SolveResult
    """
    if problem not in PROBLEM_METHODS:
        raise ValueError(f"unknown problem {problem!r}")
    if method not in PROBLEM_METHODS[problem]:
        raise ValueError(
            f"method {method!r} does not apply to {problem}; choose from {', '.join(PROBLEM_METHODS[problem])}"
        )
    if problem == "minsum-sp":
        return solve_minsum_sp(instance, method, budget, guard=guard, threads=threads)
    if problem == "minmax-sp":
        result = solve_minmax_sp(instance, budget)
    elif problem == "minsum-se":
        result = solve_minsum_se(instance, budget, guard=guard, threads=threads)
    else:
        result = solve_minmax_se(instance, budget, guard=guard, threads=threads)
    if method == "auto":
        result.path = result.method
    return result


def cmd_stable(args: argparse.Namespace) -> int:
    instance = _load_instance(args)
    r = _load_increase(args, instance)
    ctx = student_optimal_stable(instance, r)
    exporter = ReportExporter(instance)
    document = MatchingDocument(assignment=matching_to_dict(instance, ctx.matching))
    table = exporter.matching_table(ctx.matching) if args.format == "table" else None
    sys.stdout.write(exporter.render(document, args.format, table))
    return EXIT_CODES["success"]


def cmd_check(args: argparse.Namespace) -> int:
    instance = _load_instance(args)
    r = _load_increase(args, instance)
    matching = parse_matching(instance, _read(args.matching))
    exporter = ReportExporter(instance)
    report = exporter.certificate_report(matching, r, args.what)
    table = exporter.schools_table(matching, r) if args.format == "table" else None
    sys.stdout.write(exporter.render(report, args.format, table))
    return EXIT_CODES["success"]


def cmd_solve(args: argparse.Namespace) -> int:
    instance = _load_instance(args)
    result = run_solver(instance, args.problem, args.method, args.budget, args.guard, args.threads)
    exporter = ReportExporter(instance)
    document = exporter.result_document(result)
    table = exporter.schools_table(result.witness, result.increase)
    if args.csv:
        exporter.export_to_csv(table, args.csv)
    sys.stdout.write(exporter.render(document, args.format, table if args.format == "table" else None))
    return EXIT_CODES["success"] if result.feasible else EXIT_CODES["infeasible"]


def _generate(args: argparse.Namespace) -> Instance:
    name = args.name
    if name == "greedy-tight":
        return gen_example(name, s_hat=args.s_hat, n=args.n)
    if name in EXAMPLES:
        return gen_example(name)
    if name == "type1":
        return type1_gadget(args.eta)
    if name == "type2":
        return type2_gadget(args.eta)
    if name == "random":
        return gen_random(
            args.students, args.schools,
            cap_range=(args.cap_min, args.cap_max),
            pref_len_range=(args.len_min, args.len_max),
            seed=args.seed,
        )
    if args.source is None:
        raise ValueError(f"gen {name} needs --source with the source problem document")
    text = _read(args.source)
    if name in ("vertex-cover", "mcc", "se-mcc"):
        graph, coloring = graph_from_document(load_document(GraphDocument, text))
        if name == "vertex-cover":
            reduction = gen_vertex_cover(graph, args.cover_size)
        elif name == "mcc":
            reduction = gen_mcc(graph, coloring)
        else:
            reduction = gen_se_mcc(graph, coloring)
    elif name == "set-cover":
        sets, universe = sets_from_document(load_document(SetSystemDocument, text))
        reduction = gen_set_cover(sets, universe, args.cover_size)
    else:
        formula = formula_from_document(load_document(FormulaDocument, text))
        reduction = gen_sat22(formula, args.eta)
    logger.info(f"Reduction budget: {reduction.budget}")
    return reduction.instance


def cmd_gen(args: argparse.Namespace) -> int:
    instance = _generate(args)
    exporter = ReportExporter(instance)
    sys.stdout.write(dump_document(instance.to_document()) if args.format == "json"
                     else exporter.schools_table(None).to_string(index=False) + "\n")
    return EXIT_CODES["success"]


def cmd_oracle(args: argparse.Namespace) -> int:
    instance = _load_instance(args)
    r = _load_increase(args, instance)
    exporter = ReportExporter(instance)
    if args.what == "enumerate-stable":
        matchings = enumerate_stable_matchings(instance, r, guard=args.guard, threads=args.threads)
        document = exporter.stable_matchings_document(matchings)
        sys.stdout.write(exporter.render(document, args.format))
        return EXIT_CODES["success"]

    if args.matching is not None:
        matching = parse_matching(instance, _read(args.matching))
    else:
        matching = student_optimal_stable(instance, r).matching
    brute = efficiency_oracle(instance, matching, r, guard=args.guard)
    graph = is_efficient(instance, matching, r).efficient
    if brute != graph:
        logger.error("Efficiency oracle and improvement graph disagree")
    document = EfficiencyOracleDocument(
        matching=matching_to_dict(instance, matching),
        efficient=brute,
        improvement_graph=graph,
        agree=brute == graph,
    )
    table = exporter.matching_table(matching) if args.format == "table" else None
    sys.stdout.write(exporter.render(document, args.format, table))
    return EXIT_CODES["success"]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "table"], default="json")
    common.add_argument("--threads", type=int, default=None, help="joblib workers (default 1)")
    common.add_argument("--guard", type=int, default=None, help="maximum search-space size")
    common.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING, ...")

    parser = argparse.ArgumentParser(
        prog="capacity-planner",
        description="Minimal capacity increases for stable perfect or stable efficient school matchings",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    stable = sub.add_parser("stable", parents=[common], help="student-optimal stable matching")
    stable.add_argument("--instance", required=True)
    stable.add_argument("--increase")
    stable.set_defaults(handler=cmd_stable)

    check = sub.add_parser("check", parents=[common], help="certificate report for a matching")
    check.add_argument("--instance", required=True)
    check.add_argument("--matching", required=True)
    check.add_argument("--increase")
    check.add_argument("--what", choices=CHECKS, default="all")
    check.set_defaults(handler=cmd_check)

    solve = sub.add_parser("solve", parents=[common], help="minimal capacity increase")
    solve.add_argument("--instance", required=True)
    solve.add_argument("--problem", choices=list(PROBLEM_METHODS), required=True)
    solve.add_argument("--method", default="auto",
                       choices=sorted({m for methods in PROBLEM_METHODS.values() for m in methods}))
    solve.add_argument("--budget", type=int, default=None)
    solve.add_argument("--csv", default=None, help="also write the per-school table to this CSV file")
    solve.set_defaults(handler=cmd_solve)

    gen = sub.add_parser("gen", parents=[common], help="generate an instance document")
    gen.add_argument("name", choices=list(EXAMPLES) + REDUCTIONS + GADGETS + ["random"])
    gen.add_argument("--source", help="graph, set-system or formula document for reductions")
    gen.add_argument("--s-hat", type=int, default=2)
    gen.add_argument("--n", type=int, default=3)
    gen.add_argument("--cover-size", type=int, default=1, help="cover size h (vertex-cover) or k (set-cover)")
    gen.add_argument("--eta", type=int, default=SAT_GADGET_ETA)
    gen.add_argument("--students", type=int, default=5)
    gen.add_argument("--schools", type=int, default=4)
    gen.add_argument("--cap-min", type=int, default=RANDOM_INSTANCE_DEFAULTS["cap_range"][0])
    gen.add_argument("--cap-max", type=int, default=RANDOM_INSTANCE_DEFAULTS["cap_range"][1])
    gen.add_argument("--len-min", type=int, default=1)
    gen.add_argument("--len-max", type=int, default=None)
    gen.add_argument("--seed", type=int, default=RANDOM_INSTANCE_DEFAULTS["seed"])
    gen.set_defaults(handler=cmd_gen)

    oracle = sub.add_parser("oracle", parents=[common], help="brute-force oracles")
    oracle.add_argument("--instance", required=True)
    oracle.add_argument("--what", choices=["enumerate-stable", "efficiency"], required=True)
    oracle.add_argument("--increase")
    oracle.add_argument("--matching", help="matching to test (student-optimal stable by default)")
    oracle.set_defaults(handler=cmd_oracle)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run the command line

    Args:
        argv: Arguments without the program name (sys.argv[1:] when None)

    Returns:
        Exit code: 0 success, 1 usage or input error, 2 infeasible within budget, 3 guard exceeded
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CODES["success"] if exc.code == 0 else EXIT_CODES["error"]
    if args.log_level:
        logging.getLogger().setLevel(args.log_level.upper())

    try:
        return args.handler(args)
    except GuardExceededError as exc:
        logger.error(str(exc))
        return EXIT_CODES["guard"]
    except (CapacityPlanningError, ValueError, OSError) as exc:
        logger.error(str(exc))
        return EXIT_CODES["error"]


if __name__ == "__main__":
    sys.exit(main())
