"""
Export utilities for solver results, certificate reports and matchings
"""
import logging
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional, Union

import pandas as pd
from pydantic import BaseModel

from config import LOG_LEVEL, REPORTS_DIR
from core import CapacityVector, Instance, Matching, increase_to_dict, infeasibility_reason, matching_to_dict
from deferred_acceptance import blocking_pairs
from documents import (
    CertificateFlags, CertificateReport, ResultDocument, StableMatchingsDocument, dump_document,
)
from efficiency import is_efficient
from minsum_sp import SolveResult

# Set up logging
logging.basicConfig(level=LOG_LEVEL)
logger = logging.getLogger(__name__)

CHECKS = ("stability", "perfect", "efficient", "all")


class ReportExporter:
    """Turns solver objects into JSON documents and pandas tables"""

    def __init__(self, instance: Instance):
        self.instance = instance

    def result_document(self, result: SolveResult) -> ResultDocument:
        """Result document; infeasible results carry an empty increase and matching"""
        instance = self.instance
        return ResultDocument(
            problem=result.problem,
            method=result.method,
            status=result.status,
            objective=result.objective,
            budget=result.budget,
            path=result.path,
            increase=increase_to_dict(instance, result.increase) if result.increase is not None else {},
            matching=matching_to_dict(instance, result.witness) if result.witness is not None else {},
            certificates=CertificateFlags(**result.certificates),
            details=result.details,
        )

    def certificate_report(self, matching: Matching, r: Optional[CapacityVector] = None,
                           what: str = "all") -> CertificateReport:
        """
        Check a matching under q+r

        Args:
            matching: Matching to certify
            r: Capacity increase
            what: stability, perfect, efficient or all

        Returns:
            CertificateReport; an infeasible matching only reports feasible=False
        """
        if what not in CHECKS:
            raise ValueError(f"unknown check {what!r}; choose from {', '.join(CHECKS)}")
        instance = self.instance
        reason = infeasibility_reason(instance, matching, r)
        if reason is not None:
            logger.warning(f"Matching is infeasible: {reason}")
            return CertificateReport(feasible=False)

        report = CertificateReport(feasible=True)
        if what in ("stability", "all"):
            pairs = blocking_pairs(instance, matching, r)
            report.stable = not pairs
            report.blocking_pairs = [[instance.students[u], instance.schools[w]] for u, w in pairs]
        if what in ("perfect", "all"):
            report.perfect = matching.is_perfect(instance.n)
            report.unmatched = [instance.students[u] for u in matching.unmatched(instance.n)]
        if what in ("efficient", "all"):
            verdict = is_efficient(instance, matching, r)
            report.efficient = verdict.efficient
            if verdict.moves:
                report.improvement = {
                    instance.students[u]: instance.schools[w] for u, w in sorted(verdict.moves.items())
                }
        return report

    def stable_matchings_document(self, matchings: List[Matching]) -> StableMatchingsDocument:
        return StableMatchingsDocument(
            count=len(matchings),
            matchings=[matching_to_dict(self.instance, mu) for mu in matchings],
        )

    def schools_table(self, matching: Optional[Matching], r: Optional[CapacityVector] = None) -> pd.DataFrame:
        """One row per school: base capacity, increase, occupancy and admitted students"""
        instance = self.instance
        r = r or CapacityVector.zeros(instance.m)
        holders = matching.students_at(instance.m) if matching is not None else [[] for _ in range(instance.m)]
        return pd.DataFrame({
            "school": list(instance.schools),
            "capacity": list(instance.capacities),
            "increase": list(r.increase),
            "occupancy": [len(h) for h in holders],
            "students": [" ".join(instance.students[u] for u in h) for h in holders],
        })

    def matching_table(self, matching: Matching) -> pd.DataFrame:
        instance = self.instance
        return pd.DataFrame({
            "student": list(instance.students),
            "school": [
                instance.schools[w] if w is not None else "-" for w in matching.as_list(instance.n)
            ],
        })

    def render(self, document: BaseModel, fmt: str = "json",
               table: Optional[pd.DataFrame] = None) -> str:
        """
        Render a document as canonical JSON, or as a summary plus table

        Args:
            document: Any output document
            fmt: json or table
            table: Optional table printed below the summary

        Returns:
            Text for standard output
        """
        if fmt == "json":
            return dump_document(document)
        if fmt != "table":
            raise ValueError(f"unknown format {fmt!r}")
        summary = _summary_frame(document)
        parts = [summary.to_string(index=False, header=False)]
        if table is not None and not table.empty:
            parts.append(table.to_string(index=False))
        return "\n\n".join(parts) + "\n"

    def export_to_csv(self, df: pd.DataFrame, filename: Optional[Union[str, Path]] = None,
                      stem: str = "capacity_report") -> str:
        """
        Export a table to CSV

        Args:
            df: Table to export
            filename: Optional filename (timestamped under the reports directory by default)
            stem: Filename prefix for the default name

        Returns:
            Path to exported file
        """
        if filename is None:
            timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
            REPORTS_DIR.mkdir(parents=True, exist_ok=True)
            filename = REPORTS_DIR / f"{stem}_{timestamp}.csv"

        filename = str(filename)
        if not filename.endswith(".csv"):
            filename += ".csv"

        df.to_csv(filename, index=False)
        logger.info(f"Table exported to CSV: {filename}")
        return filename


def _summary_frame(document: BaseModel) -> pd.DataFrame:
    """Scalar fields of a document as key/value rows"""
    rows: Dict[str, str] = {}
    for key, value in document.model_dump().items():
        if key in ("certificates", "details"):
            for inner, inner_value in value.items():
                rows[f"{key}.{inner}"] = str(inner_value)
        elif key == "blocking_pairs":
            rows[key] = ", ".join("-".join(pair) for pair in value) or "-"
        elif key == "unmatched":
            rows[key] = ", ".join(value) or "-"
        elif key == "improvement":
            if value:
                rows[key] = ", ".join(f"{sid}->{wid}" for sid, wid in value.items())
        elif isinstance(value, (list, dict)):
            # increase, matching and matchings go to the table
            continue
        elif value is not None:
            rows[key] = str(value)
    return pd.DataFrame({"field": list(rows), "value": list(rows.values())})
