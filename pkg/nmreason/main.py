"""
Command-line front end.

    nmreason [--json] [--verbose] [--workers N] COMMAND ...

Commands:
- clone FUNC...                          clone [B] plus a property profile per function
- classify-relations FILE                Schaefer flags per relation and for the set
- default extensions|count|credulous|skeptical FILE [--query F]
- ael expansions|count|credulous|skeptical FILE [--query F]
- circ check|infer|minmodels|count FILE [--assign BITS] [--query F]
- abduce exists|list|minimal|count FILE
- reduce sat2default|qbf2ael|sat2minmodels FILE [--monotone]
- predict PROBLEM (--funcs a,b | --clone NAME | --relations FILE)

Exit codes: 0 success, 1 negative decision answer, 2 usage/parse error,
3 enumeration cap exceeded.
"""
import argparse
import logging
import sys
from typing import Callable, Dict, List, Optional, Sequence

from pydantic import BaseModel

from . import config
from .errors import EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE, FormulaError, ReasoningError
from .models import Assignment, Explanation
from .schemas import (
    CountOut,
    DecisionOut,
    ExpansionListOut,
    ExpansionOut,
    ExplanationListOut,
    ExtensionListOut,
    ExtensionOut,
    ModelListOut,
    ReductionOut,
)
from .services import abduction, autoepistemic, circumscription, default_logic, dispatcher, loaders
from .services.formula_core import format_formula, literal_formula
from .services.post_lattice import describe_functions, parse_clone_name
from .services.schaefer import classification_report, classify_set

logger = logging.getLogger(__name__)


# ============================================================================
# OUTPUT
# ============================================================================

def _emit(args: argparse.Namespace, payload: BaseModel, plain: str) -> None:
    if args.json:
        print(payload.model_dump_json(indent=2, by_alias=True))
    elif plain:
        print(plain)


def _decision(args: argparse.Namespace, answer: bool) -> int:
    _emit(args, DecisionOut(answer=answer), "yes" if answer else "no")
    return EXIT_OK if answer else EXIT_NEGATIVE


def _count(args: argparse.Namespace, count: int) -> int:
    _emit(args, CountOut(count=count), str(count))
    return EXIT_OK


def _true_set(assignment: Assignment) -> List[str]:
    return sorted(assignment.true_set)


def _explanation_text(explanation: Explanation) -> List[str]:
    return [format_formula(literal_formula(literal)) for literal in explanation.literals]


def _require_query(args: argparse.Namespace) -> str:
    if not args.query:
        raise FormulaError(f"{args.command} {args.action} needs --query")
    return args.query


# ============================================================================
# COMMANDS
# ============================================================================

def run_clone(args: argparse.Namespace) -> int:
    functions = [loaders.parse_function_spec(spec) for spec in args.functions]
    report = describe_functions(functions)
    lines = [report.clone]
    for row in report.functions:
        flags = [name for name, value in row.profile.model_dump().items() if value is True]
        lines.append(
            f"  {row.name}/{row.arity} {row.bits}: {' '.join(flags)} "
            f"sep0={row.profile.sep0_degree} sep1={row.profile.sep1_degree}"
        )
    _emit(args, report, "\n".join(lines))
    return EXIT_OK


def run_classify_relations(args: argparse.Namespace) -> int:
    relations, _ = loaders.load_relations(loaders.read_text(args.file))
    report = classification_report(relations)
    lines = []
    for row in report.relations:
        flags = [name for name, value in row.flags.model_dump().items() if value]
        lines.append(f"{row.name}/{row.arity}: {' '.join(flags) or '-'}")
    lines.append(f"schaefer: {'yes' if report.summary.schaefer else 'no'}")
    _emit(args, report, "\n".join(lines))
    return EXIT_OK


def run_default(args: argparse.Namespace) -> int:
    theory, declarations = loaders.load_default_theory(loaders.read_text(args.file))
    if args.action == "extensions":
        witnesses = default_logic.stable_extensions(theory, workers=args.workers)
        rows = [
            ExtensionOut(
                generating=list(w.generating),
                conclusions=[format_formula(f) for f in w.closure_base],
                inconsistent=w.inconsistent,
            )
            for w in witnesses
        ]
        plain = "\n".join(
            f"[{','.join(map(str, row.generating))}] {'; '.join(row.conclusions)}"
            + (" (inconsistent)" if row.inconsistent else "")
            for row in rows
        )
        _emit(args, ExtensionListOut(extensions=rows), plain)
        return EXIT_OK
    if args.action == "count":
        return _count(args, default_logic.count_stable_extensions(theory, workers=args.workers))
    query = declarations.formula(_require_query(args))
    reason = default_logic.credulous if args.action == "credulous" else default_logic.skeptical
    return _decision(args, reason(theory, query, workers=args.workers))


def run_ael(args: argparse.Namespace) -> int:
    theory, declarations = loaders.load_ae_theory(loaders.read_text(args.file))
    if args.action == "expansions":
        found = autoepistemic.stable_expansions(theory, workers=args.workers)
        rows = [
            ExpansionOut(
                positive=[format_formula(b) for b in full.positive],
                negative=[format_formula(b) for b in full.negative],
            )
            for full in found
        ]
        plain = "\n".join(
            " ".join([f"+{b}" for b in row.positive] + [f"-{b}" for b in row.negative]) or "(no beliefs)"
            for row in rows
        )
        _emit(args, ExpansionListOut(expansions=rows), plain)
        return EXIT_OK
    if args.action == "count":
        return _count(args, autoepistemic.count_expansions(theory, workers=args.workers))
    query = declarations.formula(_require_query(args), beliefs=True)
    reason = autoepistemic.credulous if args.action == "credulous" else autoepistemic.skeptical
    return _decision(args, reason(theory, query, workers=args.workers))


def run_circ(args: argparse.Namespace) -> int:
    problem, declarations = loaders.load_circ_problem(loaders.read_text(args.file))
    if args.action == "check":
        if args.assign is None:
            raise FormulaError("circ check needs --assign BITS over " + " ".join(problem.universe))
        assignment = Assignment.from_bits(args.assign.strip(), problem.universe)
        return _decision(args, circumscription.is_circ_model(problem, assignment))
    if args.action == "infer":
        query = declarations.formula(_require_query(args))
        return _decision(args, circumscription.circ_entails(problem, query, workers=args.workers))
    if args.action == "count":
        return _count(args, circumscription.count_minimal_models(problem, workers=args.workers))
    found = circumscription.minimal_models(problem, workers=args.workers)
    payload = ModelListOut(universe=list(problem.universe), models=[_true_set(m) for m in found])
    plain = "\n".join("{" + ", ".join(model) + "}" for model in payload.models)
    _emit(args, payload, plain)
    return EXIT_OK


def run_abduce(args: argparse.Namespace) -> int:
    instance, _ = loaders.load_abduction_instance(loaders.read_text(args.file))
    if args.action == "exists":
        return _decision(args, abduction.explanation_exists(instance))
    if args.action == "count":
        return _count(args, abduction.count_explanations(instance, workers=args.workers))
    if args.action == "count-minimal":
        return _count(args, abduction.count_subset_minimal(instance, workers=args.workers))
    if args.action == "minimal":
        found = abduction.subset_minimal_explanations(instance, workers=args.workers)
    else:
        found = abduction.explanations(instance, workers=args.workers)
    payload = ExplanationListOut(explanations=[_explanation_text(e) for e in found])
    plain = "\n".join("{" + ", ".join(e) + "}" for e in payload.explanations)
    _emit(args, payload, plain)
    return EXIT_OK


def _default_theory_text(theory) -> str:
    lines = ["W:"] + [format_formula(f) for f in theory.W.formulas] + ["D:"]
    lines += [
        f"{format_formula(r.premise)} : {format_formula(r.justification)} / {format_formula(r.conclusion)}"
        for r in theory.D
    ]
    return "\n".join(lines)


def run_reduce(args: argparse.Namespace) -> int:
    text = loaders.read_text(args.file)
    if args.reduction == "sat2default":
        _, clauses = loaders.load_dimacs(text)
        output = _default_theory_text(default_logic.sat_to_default(clauses))
    elif args.reduction == "qbf2ael":
        qbf = loaders.load_qbf(text)
        theory = autoepistemic.qbf_to_monotone_ael(qbf) if args.monotone else autoepistemic.qbf_to_ael(qbf)
        output = "\n".join(format_formula(f) for f in theory.formulas)
    else:
        problem = circumscription.sat_to_minmodels(loaders.load_single_formula(text))
        lines = [format_formula(f) for f in problem.theory.formulas]
        lines.append("P: " + " ".join(sorted(problem.partition.P)))
        output = "\n".join(lines)
    _emit(args, ReductionOut(reduction=args.reduction, text=output), output)
    return EXIT_OK


def run_predict(args: argparse.Namespace) -> int:
    chosen = [value for value in (args.funcs, args.clone, args.relations) if value]
    if len(chosen) != 1:
        raise FormulaError("predict needs exactly one of --funcs, --clone, --relations")
    if args.funcs:
        functions = [loaders.parse_function_spec(spec) for spec in args.funcs.split(",") if spec.strip()]
        verdict = dispatcher.predict_from_functions(args.problem, functions)
    elif args.clone:
        verdict = dispatcher.predict(args.problem, parse_clone_name(args.clone))
    else:
        relations, _ = loaders.load_relations(loaders.read_text(args.relations))
        verdict = dispatcher.predict(args.problem, classify_set(relations))
    _emit(args, verdict, str(verdict))
    return EXIT_OK


COMMANDS: Dict[str, Callable[[argparse.Namespace], int]] = {
    "clone": run_clone,
    "classify-relations": run_classify_relations,
    "default": run_default,
    "ael": run_ael,
    "circ": run_circ,
    "abduce": run_abduce,
    "reduce": run_reduce,
    "predict": run_predict,
}


# ============================================================================
# ARGUMENTS
# ============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nmreason", description="Exact desk-scale non-monotonic reasoning")
    parser.add_argument("--json", action="store_true", help="structured output")
    parser.add_argument("--verbose", action="store_true", help="debug logging on stderr")
    parser.add_argument("--workers", type=int, default=config.WORKERS, help="worker threads for enumeration")
    commands = parser.add_subparsers(dest="command", required=True)

    clone = commands.add_parser("clone", help="identify the clone generated by functions")
    clone.add_argument("functions", nargs="+", help="function names or NAME/ARITY=BITS")

    classify = commands.add_parser("classify-relations", help="Schaefer classification of a relation file")
    classify.add_argument("file")

    default = commands.add_parser("default", help="default logic")
    default.add_argument("action", choices=["extensions", "count", "credulous", "skeptical"])
    default.add_argument("file")
    default.add_argument("--query")

    ael = commands.add_parser("ael", help="autoepistemic logic")
    ael.add_argument("action", choices=["expansions", "count", "credulous", "skeptical"])
    ael.add_argument("file")
    ael.add_argument("--query")

    circ = commands.add_parser("circ", help="circumscription")
    circ.add_argument("action", choices=["check", "infer", "minmodels", "count"])
    circ.add_argument("file")
    circ.add_argument("--assign", help="assignment bits over the sorted propositions")
    circ.add_argument("--query")

    abduce = commands.add_parser("abduce", help="propositional abduction")
    abduce.add_argument("action", choices=["exists", "list", "minimal", "count", "count-minimal"])
    abduce.add_argument("file")

    reduce_ = commands.add_parser("reduce", help="print a hardness reduction's output")
    reduce_.add_argument("reduction", choices=["sat2default", "qbf2ael", "sat2minmodels"])
    reduce_.add_argument("file")
    reduce_.add_argument("--monotone", action="store_true", help="negation-free variant of qbf2ael")

    predict = commands.add_parser("predict", help="complexity verdict for a problem and fragment")
    predict.add_argument("problem", choices=sorted(dispatcher.PROBLEMS))
    predict.add_argument("--funcs", help="comma separated function names")
    predict.add_argument("--clone", help="clone name such as V2 or S02^3")
    predict.add_argument("--relations", help="relation file")
    return parser


def _configure_logging(verbose: bool) -> None:
    level = logging.DEBUG if verbose else getattr(logging, config.LOG_LEVEL, logging.WARNING)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def cli_main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    _configure_logging(args.verbose)
    try:
        return COMMANDS[args.command](args)
    except ReasoningError as exc:
        print(f"✗ {exc.detail}", file=sys.stderr)
        return exc.exit_code


def main() -> None:
    sys.exit(cli_main())
