"""Report building and rendering for coarsening runs."""
from typing import Any, Dict, Iterable, List, Optional, Union

import csv
import io
import json
import logging

from macrocause.core.partitions import relabel, restrict_partition
from macrocause.models.schemas import (
    CoarseningReport,
    CoarseningResult,
    Cpt,
    ExpectedUtilityProfile,
    OutputFormat,
    Partition,
    PipelineResult,
    Prop2Report,
    RefinementReport,
)

logger = logging.getLogger(__name__)

Reportable = Union[CoarseningReport, CoarseningResult, PipelineResult, Prop2Report, RefinementReport]


def _fmt(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


class ReportService:
    """Builds CoarseningReport documents and renders them as text, JSON or CSV."""

    def cpt_document(self, cpt: Cpt) -> Dict[str, Any]:
        return {
            "kind": cpt.kind.value,
            "causes": list(cpt.cause_space.labels),
            "effects": list(cpt.effect_space.labels),
            "rows": cpt.rows.tolist(),
        }

    def profile_document(self, profile: ExpectedUtilityProfile) -> Dict[str, Any]:
        return {"kind": profile.kind.value, "values": profile.as_dict(), "eta": profile.eta}

    def build(
        self,
        title: str,
        cause_partition: Optional[Partition] = None,
        effect_partition: Optional[Partition] = None,
        coarse_cpt: Optional[Cpt] = None,
        profile: Optional[ExpectedUtilityProfile] = None,
        checks: Iterable[Dict[str, Any]] = (),
        notes: Iterable[str] = (),
    ) -> CoarseningReport:
        return CoarseningReport(
            title=title,
            cause_partition=cause_partition.as_labels() if cause_partition is not None else None,
            effect_partition=effect_partition.as_labels() if effect_partition is not None else None,
            coarse_cpt=self.cpt_document(coarse_cpt) if coarse_cpt is not None else None,
            eu_profile=self.profile_document(profile) if profile is not None else None,
            checks=list(checks),
            notes=list(notes),
        )

    def from_coarsening(self, result: CoarseningResult, title: str = "coarsening") -> CoarseningReport:
        return self.build(title, result.cause_partition, result.effect_partition, result.coarse_cpt)

    def from_pipeline(self, result: PipelineResult, title: str = "pipeline",
                      profile: Optional[ExpectedUtilityProfile] = None) -> CoarseningReport:
        notes = [f"observational classes: {' | '.join(result.observational_partition.macro_labels())}"]
        if result.coarse_eu is not None:
            coarse = ", ".join(_fmt(float(v)) for v in result.coarse_eu)
            notes.append(f"coarse interventional expected utilities: {coarse}")
        return self.build(title, result.cause_partition, result.effect_partition, result.coarse_cpt,
                          profile=profile, notes=notes)

    def matches_exact(self, learned: Partition, exact: Partition) -> bool:
        """
        Whether a partition learned from samples groups its values as ``exact`` does.

        Values the samples never showed are dropped from ``exact`` before comparing.
        """
        if not set(learned.space.labels) <= set(exact.space.labels):
            return False
        expected = relabel(restrict_partition(exact, learned.space.labels), learned.space)
        return expected == learned

    def check(self, name: str, expected: Any, computed: Any, ok: bool) -> Dict[str, Any]:
        """One expected-vs-computed line of a demo report."""
        return {"name": name, "expected": expected, "computed": computed, "ok": bool(ok)}

    def emit_report(self, result: Reportable, fmt: Union[OutputFormat, str] = OutputFormat.TEXT) -> str:
        """Render any result document in the requested format."""
        fmt = OutputFormat(fmt)
        if isinstance(result, (Prop2Report, RefinementReport)):
            return self._emit_probe(result, fmt)
        if isinstance(result, CoarseningResult):
            result = self.from_coarsening(result)
        elif isinstance(result, PipelineResult):
            result = self.from_pipeline(result)
        if fmt is OutputFormat.JSON:
            return json.dumps(result.model_dump(), indent=2, ensure_ascii=False) + "\n"
        if fmt is OutputFormat.CSV:
            return self._render_csv(result)
        return self._render_text(result)

    def _emit_probe(self, report: Union[Prop2Report, RefinementReport], fmt: OutputFormat) -> str:
        if fmt is OutputFormat.JSON:
            document = report.model_dump()
            if isinstance(report, RefinementReport):
                document["rate"] = report.rate
            return json.dumps(document, indent=2) + "\n"
        if isinstance(report, RefinementReport):
            if fmt is OutputFormat.CSV:
                return "dims,relation,trials,holds,rate\n" + (
                    f"{'x'.join(map(str, report.dims))},{report.relation},{report.trials},"
                    f"{report.holds},{report.rate!r}\n")
            return (f"planted ties ({report.relation}) at dims {report.dims}: "
                    f"refinement held in {report.holds} of {report.trials} trials (rate {_fmt(report.rate)})\n")
        if fmt is OutputFormat.CSV:
            return report.to_csv()
        lines = [f"eps curve at dims {report.dims}, {report.trials} trials x {report.pairs_per_trial} pairs, "
                 f"delta = {_fmt(report.delta)}"]
        lines.append(f"{'eps':>10} {'flagged':>8} {'violations':>10} {'rate':>10} {'cond.rate':>10}")
        for eps, flagged, violated, rate, cond in zip(report.eps_grid, report.flagged, report.violations,
                                                      report.rates, report.conditional_rates):
            lines.append(f"{_fmt(eps):>10} {flagged:>8} {violated:>10} {_fmt(rate):>10} {_fmt(cond):>10}")
        lines.append(f"note: {report.note}")
        return "\n".join(lines) + "\n"

    def _render_text(self, report: CoarseningReport) -> str:
        lines: List[str] = [f"== {report.title} =="]
        for name, partition in (("cause partition", report.cause_partition),
                                ("effect partition", report.effect_partition)):
            if partition is not None:
                classes = "  ".join("{" + "∨".join(members) + "}" for members in partition)
                lines.append(f"{name}: {classes}")
        if report.coarse_cpt is not None:
            lines.extend(self._cpt_lines(report.coarse_cpt))
        if report.eu_profile is not None:
            lines.append(f"expected utility ({report.eu_profile['kind']}):")
            for label, value in report.eu_profile["values"].items():
                lines.append(f"  {label}: {_fmt(value)}")
            if report.eu_profile.get("eta") is not None:
                lines.append(f"eta = {_fmt(report.eu_profile['eta'])}")
        for item in report.checks:
            status = "ok" if item["ok"] else "MISMATCH"
            lines.append(f"[{status}] {item['name']}: expected {_fmt(item['expected'])}, "
                         f"computed {_fmt(item['computed'])}")
        for note in report.notes:
            lines.append(f"note: {note}")
        return "\n".join(lines) + "\n"

    def _cpt_lines(self, document: Dict[str, Any]) -> List[str]:
        causes, effects = document["causes"], document["effects"]
        width = max(len(label) for label in causes + effects + ["p(E|C)"]) + 2
        lines = [f"coarse CPT ({document['kind']}):"]
        lines.append("p(E|C)".ljust(width) + "".join(label.rjust(width) for label in effects))
        for label, row in zip(causes, document["rows"]):
            lines.append(label.ljust(width) + "".join(f"{p:.3f}".rjust(width) for p in row))
        return lines

    def _render_csv(self, report: CoarseningReport) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["section", "row", "column", "value"])
        for section, partition in (("cause_partition", report.cause_partition),
                                   ("effect_partition", report.effect_partition)):
            for k, members in enumerate(partition or []):
                writer.writerow([section, k, "", "∨".join(members)])
        if report.coarse_cpt is not None:
            for cause, row in zip(report.coarse_cpt["causes"], report.coarse_cpt["rows"]):
                for effect, p in zip(report.coarse_cpt["effects"], row):
                    writer.writerow(["coarse_cpt", cause, effect, repr(p)])
        if report.eu_profile is not None:
            for label, value in report.eu_profile["values"].items():
                writer.writerow(["eu_profile", label, "", repr(value)])
            if report.eu_profile.get("eta") is not None:
                writer.writerow(["eta", "", "", repr(report.eu_profile["eta"])])
        for item in report.checks:
            writer.writerow(["check", item["name"], _fmt(item["expected"]), _fmt(item["computed"])])
        return buffer.getvalue()


# Singleton instance
report_service = ReportService()


def emit_report(result: Reportable, fmt: Union[OutputFormat, str] = OutputFormat.TEXT) -> str:
    return report_service.emit_report(result, fmt)
