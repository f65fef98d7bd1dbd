import argparse
import json
import logging
import sys

from pathlib import Path
from typing import Callable, Optional

from . import Workbench, __version__
from .algebra import (
    BoundedWidthTester,
    CoreFinder,
    SupportTester,
    add_constants,
    is_fractional_polymorphism,
    load_operations,
    named_fractional,
    named_operation,
    opt_gadget,
    serialize_fractional,
)
from .algebra.formats import serialize_operations
from .generators import Generator, LanguageShape, gen_min_uncut
from .model import load_instance, load_language, save_instance, save_language, serialize_language
from .oracle import brute_force
from .pipeline import AuditConfig, Pipeline
from .relaxation import CrispNetwork, Relaxation, establish_minimality
from .utils import FormatError, ResourceCapError, StructuralError, VCSPError, format_fraction

LOG = logging.getLogger(__name__)

EXIT_OK, EXIT_UNSAT, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

Report = tuple[int, dict, list[str]]


def _caps(args: argparse.Namespace) -> dict:
    return {"max_assignments": args.max_assignments, "max_ops": args.max_ops, "lp_dump": args.dump_lp}


def _fractional(args: argparse.Namespace, domain_size: int):
    if args.fpol:
        ops = load_operations(args.fpol)

        if not ops.fractional:
            raise StructuralError(f"{args.fpol} holds no fpol block")

        return ops.fractional[0]

    if args.named:
        return named_fractional(args.named, domain_size)

    raise StructuralError("give either --fpol or --named")


def _operation(args: argparse.Namespace, domain_size: int):
    if args.op:
        ops = load_operations(args.op)
        return ops.operation(args.name) if args.name else ops.first_operation()

    if args.named:
        return named_operation(args.named, domain_size)

    raise StructuralError("give either --op or --named")


def _tup(values) -> str:
    return " ".join(map(str, values))


def cmd_solve(args: argparse.Namespace) -> Report:
    instance = load_instance(args.instance)
    pipeline = Pipeline(**_caps(args))
    result = pipeline.solve_value(instance, args.k, args.l)
    report = {"value": str(result.value), "status": result.status}
    lines = [f"value {result.value}", f"status {result.status}"]

    if result.status == "unsatisfiable":
        return EXIT_UNSAT, report, lines

    if args.assign:
        found = pipeline.solve_assignment(instance, args.k, args.l, force=args.force)
        report.update(assignment=list(found.assignment), lp_solves=found.lp_solves, slackness=found.slackness)
        lines.extend(
            [f"assignment {_tup(found.assignment)}", f"lp-solves {found.lp_solves}", f"slackness {found.slackness}"]
        )

    return EXIT_OK, report, lines


def cmd_relax(args: argparse.Namespace) -> Report:
    relaxation = Relaxation(**_caps(args))
    program = relaxation.build_sa(load_instance(args.instance), args.k, args.l)
    solution = relaxation.solve_sa(program)
    terms = []

    for term, lam in zip(program.terms, solution.lambdas):
        weights = {_tup(s): format_fraction(v) for s, v in sorted(lam.items()) if v > 0}
        terms.append({"index": term.index, "relation": term.relation, "scope": list(term.scope), "lambda": weights})

    report = {
        "status": solution.status,
        "objective": str(solution.objective),
        "terms": terms,
        "z": [format_fraction(v) for v in solution.z],
    }
    lines = solution.dump().splitlines()

    if args.lp:
        lines = program.lp.to_lp_text().splitlines() + lines

    return (EXIT_OK if solution.is_feasible else EXIT_UNSAT), report, lines


def cmd_minimal(args: argparse.Namespace) -> Report:
    network = CrispNetwork.from_instance(load_instance(args.instance))
    result = establish_minimality(network, args.k, args.l)

    if result.is_empty:
        return EXIT_UNSAT, {"empty": True}, ["EMPTY"]

    constraints, lines = [], []

    for scope, allowed in result.constraints:
        constraints.append({"scope": list(scope), "tuples": [list(s) for s in sorted(allowed)]})
        scope_text = " ".join(f"x{v}" for v in scope)
        lines.append(f"scope {scope_text}: {'; '.join(_tup(s) for s in sorted(allowed))}")

    return EXIT_OK, {"empty": False, "constraints": constraints}, lines


def cmd_oracle(args: argparse.Namespace) -> Report:
    result = brute_force(load_instance(args.instance), args.max_assignments or Workbench.MAX_ASSIGNMENTS)
    report = {"value": str(result.value), "optima": [list(a) for a in result.optima]}
    lines = [f"value {result.value}", f"optima {len(result.optima)}"]
    lines.extend(f"optimum {_tup(a)}" for a in result.optima)

    return (EXIT_OK if result.satisfiable else EXIT_UNSAT), report, lines


def cmd_check_fpol(args: argparse.Namespace) -> Report:
    language = load_language(args.language)
    check = is_fractional_polymorphism(_fractional(args, language.domain_size), language)

    if check.ok:
        return EXIT_OK, {"fpol": True}, ["yes"]

    report = {
        "fpol": False,
        "relation": check.relation,
        "rows": [list(r) for r in check.rows or ()],
        "expected": str(check.expected),
        "average": str(check.average),
    }
    lines = ["no", f"relation {check.relation}"]
    lines.extend(f"row {_tup(r)}" for r in check.rows or ())
    lines.extend([f"expected {check.expected}", f"average {check.average}"])

    return EXIT_OK, report, lines


def cmd_supp_member(args: argparse.Namespace) -> Report:
    language = load_language(args.language)
    f = _operation(args, language.domain_size)
    answer = SupportTester(**_caps(args)).supp_membership(f, language)

    if answer.member:
        report = {"member": True, "weight": format_fraction(answer.weight)}
        lines = ["yes", f"weight {format_fraction(answer.weight)}"]

        if args.witness_out:
            Path(args.witness_out).write_text(serialize_fractional(answer.witness_fpol), encoding="utf-8")
            report["witness"] = str(args.witness_out)
            lines.append(f"witness {args.witness_out}")

        return EXIT_OK, report, lines

    path = Path(args.witness_out or f"{f.name}.witness.vcsp")
    save_instance(answer.witness_instance, path, Path(args.language).resolve())
    report = {"member": False, "witness": str(path), "variables": answer.witness_instance.num_vars}

    return EXIT_OK, report, ["no", f"witness {path}"]


def cmd_core(args: argparse.Namespace) -> Report:
    core = CoreFinder(**_caps(args)).core_of(load_language(args.language))
    report = {"labels": list(core.labels), "domain": core.domain_size}

    if args.out:
        save_language(core.language, args.out)
        report["out"] = str(args.out)

    return EXIT_OK, report, [f"domain {core.domain_size}", f"labels {_tup(core.labels)}"]


def cmd_bwc(args: argparse.Namespace) -> Report:
    tester = BoundedWidthTester(**_caps(args))
    language = load_language(args.language)

    if args.search == "fast":
        verdict = tester.bwc_test(add_constants(language), search="fast")
    else:
        verdict = tester.bwc_verdict(language)

    report = {"verdict": verdict.verdict, "path": verdict.path, "reason": verdict.reason}
    lines = [verdict.verdict, f"path {verdict.path}"]

    if verdict.is_yes:
        f, g = verdict.ternary.renamed("f"), verdict.quaternary.renamed("g")
        report["witness"] = serialize_operations([f, g])
        lines.extend(report["witness"].splitlines())
    elif verdict.reason:
        lines.append(f"reason {verdict.reason}")

    return EXIT_OK, report, lines


def cmd_opt_gadget(args: argparse.Namespace) -> Report:
    language = load_language(args.language)
    inner = load_instance(args.inner, language)
    outer = load_instance(args.outer)
    gadget = opt_gadget(language, inner, outer, args.opt_name, args.max_assignments or Workbench.MAX_ASSIGNMENTS)
    gap = "none" if gadget.gap is None else format_fraction(gadget.gap)
    report = {
        "multiplier": gadget.multiplier,
        "occurrences": gadget.occurrences,
        "upper": format_fraction(gadget.upper),
        "lower": format_fraction(gadget.lower),
        "gap": gap,
    }
    lines = [f"C {gadget.multiplier}", f"N {gadget.occurrences}", f"U {report['upper']}", f"L {report['lower']}"]
    lines.append(f"delta {gap}")

    if args.out:
        save_instance(gadget.instance, args.out, Path(args.language).resolve())
        report["out"] = str(args.out)

    if args.evaluate:
        oracle = brute_force(gadget.instance, args.max_assignments or Workbench.MAX_ASSIGNMENTS)
        value = gadget.recover_value(oracle.value)
        report["value"] = str(value)
        lines.append(f"value {value}")

    return EXIT_OK, report, lines


def cmd_gen(args: argparse.Namespace) -> Report:
    generator = Generator(**_caps(args))
    instance, language = None, None

    if args.family == "min-uncut":
        instance = gen_min_uncut(args.graph, args.domain)
    elif args.family == "submodular":
        language, instance = generator.gen_submodular(args.seed, args.n, args.arity, args.count)
    elif args.family == "improved":
        omega = _fractional(args, args.domain)
        shape = LanguageShape(tuple(int(a) for a in args.arities.split(",")), p_inf=args.p_inf, crisp=args.crisp)
        language = generator.gen_improved(args.seed, omega, shape)
    elif args.family == "majority-closed":
        language = generator.gen_majority_closed(args.seed, args.domain, args.arity, args.count)
    else:
        instance = generator.gen_instance(args.seed, load_language(args.language), args.n, args.count)

    language = language or instance.language
    report, lines = {}, []

    if args.out_language:
        save_language(language, args.out_language)
        report["language"] = str(args.out_language)
        lines.append(f"language {args.out_language}")

    if instance is not None and args.out_instance:
        if not (args.out_language or args.language):
            raise StructuralError("--out-instance needs --out-language to reference")

        language_path = Path(args.out_language).resolve() if args.out_language else Path(args.language).resolve()
        save_instance(instance, args.out_instance, language_path)
        report["instance"] = str(args.out_instance)
        lines.append(f"instance {args.out_instance}")

    if not lines:
        lines = serialize_language(language).splitlines()

    return EXIT_OK, report, lines


def cmd_audit(args: argparse.Namespace) -> Report:
    pipeline = Pipeline(**_caps(args))
    instances = [gen_min_uncut(spec) for spec in args.graphs.split(";")] if args.graphs else None

    if args.language:
        language = load_language(args.language)
    elif instances:
        language = instances[0].language
    else:
        raise StructuralError("audit needs --language or --graphs")

    config = AuditConfig(args.seed, args.samples, args.n, args.count)
    report = pipeline.width_audit(language, config, instances, args.k, args.l)
    rows = [
        {"instance_id": r.instance_id, "oracle_value": str(r.oracle_value), "sa_value": str(r.sa_value), "gap": r.gap}
        for r in report.rows
    ]
    verdict = report.verdict.verdict if report.verdict else "unknown"

    return EXIT_OK, {"rows": rows, "gaps": len(report.gaps), "bwc": verdict}, report.to_csv(args.timings).splitlines()


COMMANDS: dict[str, Callable[[argparse.Namespace], Report]] = {
    "solve": cmd_solve,
    "relax": cmd_relax,
    "minimal": cmd_minimal,
    "oracle": cmd_oracle,
    "check-fpol": cmd_check_fpol,
    "supp-member": cmd_supp_member,
    "core": cmd_core,
    "bwc": cmd_bwc,
    "opt-gadget": cmd_opt_gadget,
    "gen": cmd_gen,
    "audit": cmd_audit,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG on stderr")
    common.add_argument("--json", action="store_true", help="emit a stable JSON rendering of the report")
    common.add_argument("--max-assignments", type=int, default=None, help="cap on d^n for enumeration")
    common.add_argument("--max-ops", type=int, default=None, help="cap on enumerated operations")
    common.add_argument("--dump-lp", default=None, help="directory every solved LP is written to")

    levels = argparse.ArgumentParser(add_help=False)
    levels.add_argument("--k", type=int, default=Workbench.DEFAULT_K)
    levels.add_argument("--l", type=int, default=Workbench.DEFAULT_L)

    fpol = argparse.ArgumentParser(add_help=False)
    fpol.add_argument("--fpol", help="operation file holding a fpol block")
    fpol.add_argument("--named", help="library operation or fractional operation name")

    parser = argparse.ArgumentParser(prog="savcsp", description="Exact VCSP solving via Sherali-Adams relaxations.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[common, levels], help="SA(k,l) value, optionally an optimal assignment")
    p.add_argument("--instance", required=True)
    p.add_argument("--assign", action="store_true", help="recover an assignment by self-reduction")
    p.add_argument("--force", action="store_true", help="self-reduce even without a bounded width verdict")

    p = sub.add_parser("relax", parents=[common, levels], help="dump the SA program solution")
    p.add_argument("--instance", required=True)
    p.add_argument("--lp", action="store_true", help="print the LP in text layout first")

    p = sub.add_parser("minimal", parents=[common, levels], help="establish (k,l)-minimality of a crisp instance")
    p.add_argument("--instance", required=True)

    p = sub.add_parser("oracle", parents=[common], help="brute-force minimum")
    p.add_argument("--instance", required=True)

    p = sub.add_parser("check-fpol", parents=[common, fpol], help="check a fractional polymorphism")
    p.add_argument("--language", required=True)

    p = sub.add_parser("supp-member", parents=[common], help="decide membership in the support clone")
    p.add_argument("--language", required=True)
    p.add_argument("--op", help="operation file")
    p.add_argument("--name", help="operation name inside --op; defaults to the first one")
    p.add_argument("--named", help="library operation name")
    p.add_argument("--witness-out", help="where the witness is written")

    p = sub.add_parser("core", parents=[common], help="core of a language")
    p.add_argument("--language", required=True)
    p.add_argument("--out", help="write the core language here")

    p = sub.add_parser("bwc", parents=[common], help="bounded width condition verdict")
    p.add_argument("--language", required=True)
    p.add_argument("--search", choices=["full", "fast"], default="full")

    p = sub.add_parser("opt-gadget", parents=[common], help="replace opt(I) constraints by copies of I")
    p.add_argument("--language", required=True)
    p.add_argument("--inner", required=True, help="instance I over the language")
    p.add_argument("--outer", required=True, help="instance J' over the language and opt(I)")
    p.add_argument("--opt-name", default="opt")
    p.add_argument("--out", help="write J here")
    p.add_argument("--evaluate", action="store_true", help="brute-force J and read back min(J')")

    p = sub.add_parser("gen", parents=[common, fpol], help="generate languages and instances")
    p.add_argument(
        "--family", required=True, choices=["min-uncut", "submodular", "improved", "majority-closed", "instance"]
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--graph", default="triangle", help="graph specification for min-uncut")
    p.add_argument("--domain", type=int, default=2)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--arity", type=int, default=2)
    p.add_argument("--arities", default="2", help="comma separated arities for 'improved'")
    p.add_argument("--count", type=int, default=3)
    p.add_argument("--p-inf", type=float, default=0.0)
    p.add_argument("--crisp", action="store_true")
    p.add_argument("--language", help="language file for the 'instance' family")
    p.add_argument("--out-language")
    p.add_argument("--out-instance")

    p = sub.add_parser("audit", parents=[common, levels], help="SA value against brute force, as CSV")
    p.add_argument("--language")
    p.add_argument("--graphs", help="';' separated graph specifications of Min-UnCut instances to audit")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--count", type=int, default=4)
    p.add_argument("--timings", action="store_true", help="add a runtime column")

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s %(name)s: %(message)s")

    try:
        code, report, lines = COMMANDS[args.command](args)
    except (FormatError, StructuralError, OSError) as e:
        LOG.error("%s", e)
        return EXIT_USAGE
    except ResourceCapError as e:
        LOG.error("resource cap: %s", e)
        return EXIT_CAP
    except (VCSPError, TypeError, ValueError) as e:
        LOG.error("%s", e)
        return EXIT_USAGE

    if args.json:
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        print("\n".join(lines))

    return code
