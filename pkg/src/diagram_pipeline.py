import pandas as pd
from typing import Callable, Dict, List, Optional, Any
import logging

from .delocalize import right_intersect
from .diagram import (check_diag_intersection, check_diagdown_hypotheses,
                      check_diagram_delocalization, induced_base_structure,
                      objectwise_structure, product_adjoint_check)
from .errors import FinModelError
from .fincat import DiagramIndex
from .modelstruct import ModelStructure
from .models import ConditionReport, ConditionResult, Verdict

logger = logging.getLogger(__name__)


def _verdict_report(title: str, verdict: Verdict) -> ConditionReport:
    condition = ConditionResult(name=verdict.clause or title,
                                status="pass" if verdict.verified else "fail",
                                message=verdict.message, witness=verdict.witness)
    return ConditionReport(title=title, status=verdict.status, conditions=[condition])


class DiagramPipeline:
    """Named checks on a diagram category M^C, run in a fixed order."""

    def __init__(self, index: DiagramIndex, base: ModelStructure,
                 other: Optional[ModelStructure] = None, workers: Optional[int] = None):
        self.index = index
        self.base = base
        self.other = other
        self.workers = workers
        self.reports: List[ConditionReport] = []
        self._objectwise: Optional[ModelStructure] = None

        self.checks: Dict[str, Callable[[], ConditionReport]] = {
            'objectwise': self.check_objectwise,
            'diagdown': self.check_diagdown,
            'induced': self.check_induced,
            'adjoint': self.check_adjoint,
            'intersection': self.check_intersection,
            'delocalization': self.check_delocalization,
        }

    @property
    def objectwise(self) -> ModelStructure:
        if self._objectwise is None:
            self._objectwise = objectwise_structure(self.base, self.index)
        return self._objectwise

    def check_objectwise(self) -> ConditionReport:
        mc = self.objectwise
        condition = ConditionResult(name="objectwise structure",
                                    status="pass" if mc.verified else "fail",
                                    witness=mc.witness)
        return ConditionReport(title="objectwise", status="verified" if mc.verified else "refuted",
                               conditions=[condition], structure=mc.summary())

    def check_diagdown(self) -> ConditionReport:
        return check_diagdown_hypotheses(self.objectwise, self.index, workers=self.workers)

    def check_induced(self) -> ConditionReport:
        induced = induced_base_structure(self.objectwise, self.index)
        same = induced.same_classes(self.base)
        condition = ConditionResult(name="induced structure equals the base structure",
                                    status="pass" if same else "fail")
        return ConditionReport(title="induced", status="verified" if same else "refuted",
                               conditions=[condition], structure=induced.summary())

    def check_adjoint(self) -> ConditionReport:
        conditions = []
        for alpha in range(self.index.shape.n_objects):
            verdict = product_adjoint_check(self.index, alpha, self.objectwise)
            conditions.append(ConditionResult(name=f"adjoint at {self.index.shape.objects[alpha]}",
                                              status="pass" if verdict.verified else "fail",
                                              message=verdict.message, witness=verdict.witness))
        status = "verified" if all(c.passed for c in conditions) else "refuted"
        return ConditionReport(title="adjoint", status=status, conditions=conditions)

    def _require_other(self) -> ModelStructure:
        if self.other is None:
            raise FinModelError("this check needs a second base structure")
        return self.other

    def check_intersection(self) -> ConditionReport:
        verdict = check_diag_intersection(self.base, self._require_other(), self.index)
        report = _verdict_report("intersection", verdict)
        if verdict.verified:
            report.structure = objectwise_structure(right_intersect(self.base, self.other),
                                                    self.index).summary()
        return report

    def check_delocalization(self) -> ConditionReport:
        return check_diagram_delocalization(self.base, self._require_other(), self.index)

    def run_check(self, check_name: str) -> ConditionReport:
        if check_name not in self.checks:
            raise ValueError(f"Unknown check: {check_name}")
        logger.info(f"Running diagram check {check_name} on {self.index.total.name}...")
        try:
            return self.checks[check_name]()
        except FinModelError as e:
            logger.error(f"Diagram check {check_name} failed: {e}")
            return ConditionReport(title=check_name, status="refuted", conditions=[
                ConditionResult(name=check_name, status="error", message=str(e), witness=e.witness)])

    def run_full_pipeline(self, check_names: Optional[List[str]] = None) -> List[ConditionReport]:
        logger.info("Starting diagram pipeline...")

        if check_names is None:
            check_names = [name for name in self.checks
                           if self.other is not None or name not in ('intersection', 'delocalization')]

        reports = []
        for check_name in check_names:
            if check_name not in self.checks:
                logger.warning(f"Unknown check: {check_name}")
                continue
            reports.append(self.run_check(check_name))

        self.reports = reports
        logger.info(f"Pipeline completed. {sum(r.verified for r in reports)}/{len(reports)} checks verified")
        return reports

    def get_available_checks(self) -> List[str]:
        return list(self.checks.keys())

    def export_to_dataframe(self) -> pd.DataFrame:
        """Export all check results to a pandas DataFrame.

        Returns:
            pd.DataFrame: One row per condition of every report
        """
        if not self.reports:
            return pd.DataFrame()

        data = []
        for report in self.reports:
            for condition in report.conditions:
                data.append({
                    'check': report.title,
                    'condition': condition.name,
                    'status': condition.status,
                    'witness': " ".join(condition.witness),
                    'message': condition.message
                })

        return pd.DataFrame(data)

    def get_pipeline_stats(self) -> Dict[str, Any]:
        if not self.reports:
            return {'total_checks': 0, 'verified': 0}

        df = self.export_to_dataframe()
        return {
            'total_checks': len(self.reports),
            'verified': sum(r.verified for r in self.reports),
            'condition_status_breakdown': df['status'].value_counts().sort_index().to_dict(),
        }
