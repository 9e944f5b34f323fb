"""Command-line surface: validate, check, recognize, intersect, diagram, enumerate and quiver."""

import argparse
import json
import logging
import os
import sys
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ValidationError

from config import settings
from .delocalize import intersect_generators, is_right_delocalization, proof_step_report, right_intersect
from .diagram_pipeline import DiagramPipeline
from .errors import EnumerationIncompleteError, FinModelError
from .explorer import (build_quiver, census_table, component_analysis, corollary_check,
                       enumerate_model_structures, export_to_csv, quiver_dump,
                       same_fibration_pairs, to_dot)
from .fincat import functor_category
from .loaders import FileLoader, parse_class_argument
from .modelstruct import generators_of, is_model_structure, is_wfs, kan_recognition, verify
from .models import (CensusReport, ConditionReport, ConditionResult, DiagramReport,
                     IntersectionReport, StructureReport, Verdict)

logger = logging.getLogger(__name__)

EXIT_VERIFIED = 0
EXIT_REFUTED = 1
EXIT_INPUT_ERROR = 2

Outcome = Tuple[int, str]


# -- rendering ---------------------------------------------------------------------

def _witness_text(witness: Sequence[str]) -> str:
    return f" [{', '.join(witness)}]" if witness else ""


def _render_conditions(report: ConditionReport) -> List[str]:
    lines = [f"{report.title}: {report.status}"]
    for c in report.conditions:
        message = f" {c.message}" if c.message else ""
        lines.append(f"  ({c.name}) {c.status}{message}{_witness_text(c.witness)}")
    for note in report.notes:
        lines.append(f"  note: {note}")
    return lines


def _render_classes(summary) -> List[str]:
    return [f"  C = {{{', '.join(summary.cof)}}}",
            f"  F = {{{', '.join(summary.fib)}}}",
            f"  W = {{{', '.join(summary.weq)}}}"]


def render_human(report: BaseModel) -> str:
    """Plain-text rendering of a report, for reading rather than diffing."""
    lines: List[str] = []
    if isinstance(report, Verdict):
        clause = f" at {report.clause}" if report.clause else ""
        lines.append(f"{report.status}{clause}: {report.message}{_witness_text(report.witness)}")
    elif isinstance(report, StructureReport):
        name = f" {report.structure.name}" if report.structure.name else ""
        lines.append(f"structure{name} on {report.structure.category}")
        lines.extend(_render_classes(report.structure))
        lines.append(render_human(report.verdict).rstrip("\n"))
    elif isinstance(report, ConditionReport):
        lines.extend(_render_conditions(report))
        if report.structure is not None:
            lines.extend(_render_classes(report.structure))
    elif isinstance(report, IntersectionReport):
        lines.append(f"M₁ ∩ M₂ on {report.structure.category}: {report.verdict.status}")
        lines.extend(_render_classes(report.structure))
        for verdict in report.localizations:
            lines.append(f"  {verdict.status}: {verdict.message}{_witness_text(verdict.witness)}")
        for section in (report.proof_steps, report.generators):
            if section is not None:
                lines.extend(_render_conditions(section))
        lines.extend(f"note: {note}" for note in report.notes)
    elif isinstance(report, DiagramReport):
        lines.append(f"{report.category}^{report.shape}: {report.total_objects} objects, "
                     f"{report.total_morphisms} morphisms")
        for section in report.reports:
            lines.extend(_render_conditions(section))
    elif isinstance(report, CensusReport):
        lines.append(f"{report.count} model structures on {report.category}")
        for i, summary in enumerate(report.structures):
            lines.append(f"[{i}]")
            lines.extend(_render_classes(summary))
    else:
        return report.model_dump_json(indent=2) + "\n"
    return "\n".join(lines) + "\n"


def _render(report: BaseModel, human: bool) -> str:
    if human:
        return render_human(report)
    return report.model_dump_json(indent=2) + "\n"


def _emit(text: str, output: Optional[str]) -> None:
    if output is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(output)
    if directory and not os.path.exists(directory):
        os.makedirs(directory)
    with open(output, "w", encoding="utf-8") as handle:
        handle.write(text)
    logger.info(f"Wrote report to {output}")


def _exit_code(verified: bool) -> int:
    return EXIT_VERIFIED if verified else EXIT_REFUTED


# -- subcommands ---------------------------------------------------------------------

def cmd_validate(args: argparse.Namespace, loader: FileLoader) -> Outcome:
    data, _ = loader.read_json(args.file)
    if isinstance(data, dict) and "kind" in data:
        category = loader.load_category(args.file)
        return EXIT_VERIFIED, json.dumps(category.summary(), indent=2, ensure_ascii=False) + "\n"
    if isinstance(data, dict) and ("I" in data or "gen_cof" in data):
        g = loader.load_generators(args.file)
        summary = {"category": g.category.name, "name": g.name, "I": g.gen_cof.ids(),
                   "J": g.gen_acyclic_cof.ids(), "weq": g.weq.ids()}
        return EXIT_VERIFIED, json.dumps(summary, indent=2, ensure_ascii=False) + "\n"
    m = loader.load_structure(args.file)
    return EXIT_VERIFIED, m.summary().model_dump_json(indent=2) + "\n"


def cmd_check_wfs(args: argparse.Namespace, loader: FileLoader) -> Outcome:
    category = loader.load_category(args.category)
    verdict = is_wfs(parse_class_argument(category, args.left),
                     parse_class_argument(category, args.right))
    return _exit_code(verdict.verified), _render(verdict, args.human)


def cmd_check_model(args: argparse.Namespace, loader: FileLoader) -> Outcome:
    m = loader.load_structure(args.structure)
    verdict = is_model_structure(m)
    report = StructureReport(structure=m.with_verdict(verdict).summary(), verdict=verdict)
    return _exit_code(verdict.verified), _render(report, args.human)


def cmd_recognize(args: argparse.Namespace, loader: FileLoader) -> Outcome:
    recognition = kan_recognition(loader.load_generators(args.generators))
    return _exit_code(recognition.verified), _render(recognition.report, args.human)


def _generator_section(result) -> ConditionReport:
    report = result.recognition.report
    conditions = list(report.conditions)
    if result.class_path is not None and result.structure is not None:
        same = result.class_path.same_classes(result.structure)
        conditions.append(ConditionResult(name="class path",
                                          status="pass" if same else "fail",
                                          message="generator and class intersections agree"
                                          if same else "generator and class intersections differ"))
    status = "verified" if result.verified else "refuted"
    return report.model_copy(update={"title": "generator intersection", "status": status,
                                     "conditions": conditions,
                                     "notes": list(report.notes) + list(result.notes)})


def cmd_intersect(args: argparse.Namespace, loader: FileLoader) -> Outcome:
    m1 = verify(loader.load_structure(args.first))
    m2 = verify(loader.load_structure(args.second))
    result = right_intersect(m1, m2)
    verdict = is_model_structure(result)
    localizations = []
    if result.verified:
        localizations = [is_right_delocalization(result, m) for m in (m1, m2)]

    notes = []
    if args.generators:
        g1 = loader.load_generators(args.generators[0])
        g2 = loader.load_generators(args.generators[1])
    else:
        g1, g2 = generators_of(m1), generators_of(m2)
        notes.append("canonical presentations I = C, J = C∩W")
    steps = proof_step_report(g1, g2)
    generators = _generator_section(intersect_generators(g1, g2))

    report = IntersectionReport(structure=result.summary(), verdict=verdict,
                                localizations=localizations, proof_steps=steps,
                                generators=generators, notes=notes)
    verified = (verdict.verified and all(v.verified for v in localizations)
                and steps.verified and generators.verified)
    return _exit_code(verified), _render(report, args.human)


def cmd_diagram(args: argparse.Namespace, loader: FileLoader) -> Outcome:
    base = verify(loader.load_structure(args.structure))
    other = None
    if args.other:
        other = verify(loader.load_structure(args.other))
    shape = loader.load_category(args.shape)
    index = functor_category(base.category, shape, cap=args.cap)

    pipeline = DiagramPipeline(index, base, other=other, workers=args.workers)
    checks = args.checks.split(",") if args.checks else None
    reports = pipeline.run_full_pipeline(checks)
    if args.csv:
        export_to_csv(pipeline.export_to_dataframe(),
                      f"diagram_{base.category.name}_{shape.name}", args.output_dir)

    report = DiagramReport(category=base.category.name, shape=shape.name,
                           total_objects=index.total.n_objects,
                           total_morphisms=index.total.n_morphisms, reports=reports)
    return _exit_code(report.verified), _render(report, args.human)


def cmd_enumerate(args: argparse.Namespace, loader: FileLoader) -> Outcome:
    category = loader.load_category(args.category)
    structures = enumerate_model_structures(category, budget=args.budget, workers=args.workers,
                                            cross_check=args.cross_check)
    if args.csv:
        export_to_csv(census_table(structures), f"census_{category.name}", args.output_dir)
    report = CensusReport(category=category.name, count=len(structures),
                          structures=[m.summary() for m in structures])
    return EXIT_VERIFIED, _render(report, args.human)


def cmd_quiver(args: argparse.Namespace, loader: FileLoader) -> Outcome:
    category = loader.load_category(args.category)
    structures = enumerate_model_structures(category, budget=args.budget, workers=args.workers)
    quiver = build_quiver(structures)

    code = EXIT_VERIFIED
    if args.certify:
        analysis = component_analysis(quiver)
        for i, j in same_fibration_pairs(quiver):
            try:
                verdict = corollary_check(quiver.nodes[i], quiver.nodes[j], quiver)
            except EnumerationIncompleteError as e:
                logger.error(f"Nodes {i} and {j} cannot be certified: {e}")
                code = EXIT_REFUTED
                continue
            same = analysis.component_of(i) == analysis.component_of(j)
            if not (verdict.verified and same):
                logger.error(f"Nodes {i} and {j} share fibrations but are not certified: "
                             f"{verdict.message}")
                code = EXIT_REFUTED
        logger.info(f"Certified {len(same_fibration_pairs(quiver))} same-fibration pairs")

    if args.format == "dot":
        return code, to_dot(quiver)
    return code, quiver_dump(quiver).model_dump_json(indent=2) + "\n"


COMMANDS: Dict[str, Callable[[argparse.Namespace, FileLoader], Outcome]] = {
    "validate": cmd_validate,
    "check-wfs": cmd_check_wfs,
    "check-model": cmd_check_model,
    "recognize": cmd_recognize,
    "intersect": cmd_intersect,
    "diagram": cmd_diagram,
    "enumerate": cmd_enumerate,
    "quiver": cmd_quiver,
}


# -- parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--workers", type=int, default=settings.workers,
                        help="worker threads for candidate and hypothesis checks")
    common.add_argument("--cap", type=int, default=settings.functor_cap,
                        help="largest functor category to materialize")
    common.add_argument("--budget", type=int, default=settings.enum_budget,
                        help="candidate ceiling for enumeration")
    common.add_argument("--output", default=None, help="write the report here instead of stdout")
    common.add_argument("--output-dir", default=settings.output_dir, help="directory for CSV exports")
    common.add_argument("--human", action="store_true", help="plain-text report")
    common.add_argument("--log-level", default=None,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"])

    parser = argparse.ArgumentParser(prog="finmodel",
                                     description="Model structures on finite categories.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check a category, structure or generator file")
    p.add_argument("file")

    p = sub.add_parser("check-wfs", parents=[common], help="check a weak factorization system")
    p.add_argument("category")
    p.add_argument("--left", required=True, help="comma-separated ids or @all/@isos/@identities")
    p.add_argument("--right", required=True, help="comma-separated ids or @all/@isos/@identities")

    p = sub.add_parser("check-model", parents=[common], help="verify the model structure axioms")
    p.add_argument("structure")

    p = sub.add_parser("recognize", parents=[common], help="run the recognition theorem on (I, J, W)")
    p.add_argument("generators")

    p = sub.add_parser("intersect", parents=[common], help="right-intersect two same-fibration structures")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--generators", nargs=2, metavar=("G1", "G2"),
                   help="generator files presenting the two structures")

    p = sub.add_parser("diagram", parents=[common], help="checks on the objectwise structure of M^C")
    p.add_argument("structure")
    p.add_argument("--shape", required=True, help="category file of the diagram shape")
    p.add_argument("--other", help="second structure with the same fibrations")
    p.add_argument("--checks", help="comma-separated subset of the pipeline checks")
    p.add_argument("--csv", action="store_true", help="also export a CSV of all conditions")

    p = sub.add_parser("enumerate", parents=[common], help="every model structure on a category")
    p.add_argument("category")
    p.add_argument("--cross-check", action="store_true",
                   help="compare against the triple scan on small categories")
    p.add_argument("--csv", action="store_true", help="also export the census as CSV")

    p = sub.add_parser("quiver", parents=[common], help="Bousfield quiver of all model structures")
    p.add_argument("category")
    p.add_argument("--format", choices=["json", "dot"], default="json")
    p.add_argument("--certify", action="store_true",
                   help="check every same-fibration pair through its intersection node")
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, run one subcommand and return its exit status."""
    args = build_parser().parse_args(argv)
    if args.log_level:
        logging.getLogger().setLevel(args.log_level)

    loader = FileLoader()
    try:
        code, text = COMMANDS[args.command](args, loader)
    except EnumerationIncompleteError as e:
        logger.error(f"{args.command} refuted: {e}")
        sys.stderr.write(f"refuted: {e}{_witness_text(e.witness)}\n")
        return EXIT_REFUTED
    except (FinModelError, ValidationError, json.JSONDecodeError, OSError) as e:
        witness = getattr(e, "witness", ())
        logger.error(f"{args.command} failed: {e}")
        sys.stderr.write(f"error: {e}{_witness_text(witness)}\n")
        return EXIT_INPUT_ERROR

    _emit(text, args.output)
    return code
