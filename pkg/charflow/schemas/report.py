"""Verification report schemas."""

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, model_validator


class ReportEntry(BaseModel):
    """One checked identity with its residual statistics."""

    check: str = Field(..., description="Stable check name, e.g. theorem_a.curvature")
    anchor: str = Field("", description="The identity being checked, in words")
    field: Optional[str] = None
    n_samples: int = 0
    max_residual: Optional[float] = None
    mean_residual: Optional[float] = None
    tolerance: Optional[float] = None
    passed: bool = False
    judged: bool = True
    convergence_order: Optional[float] = None
    refinement_levels: Optional[int] = None
    note: Optional[str] = None

    @model_validator(mode="after")
    def _order_needs_levels(self) -> "ReportEntry":
        if self.convergence_order is not None and (self.refinement_levels or 0) < 3:
            raise ValueError("convergence order is reported only for 3 or more refinement levels")
        return self

    @classmethod
    def from_residuals(cls, check: str, residuals: Any, field: Optional[str] = None, **kwargs: Any) -> "ReportEntry":
        """Entry judged against the default tolerance table; see report_service.make_entry."""
        from charflow.modules.report.services.report_service import make_entry

        return make_entry(check, kwargs.pop("anchor", ""), residuals, field, **kwargs)


class VerificationReport(BaseModel):
    """Entries plus run metadata (field, parameters, timestamp, tool version)."""

    entries: List[ReportEntry] = Field(default_factory=list)
    metadata: Dict[str, Any] = Field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries if e.judged)

    def failures(self) -> List[ReportEntry]:
        return [e for e in self.entries if e.judged and not e.passed]

    def entry(self, check: str, field: Optional[str] = None) -> ReportEntry:
        for e in self.entries:
            if e.check == check and (field is None or e.field == field):
                return e
        raise KeyError(check)

    def deterministic_dump(self) -> Dict[str, Any]:
        """Payload without wall-clock metadata, for reproducibility comparisons."""
        data = self.model_dump()
        data["metadata"] = {k: v for k, v in data["metadata"].items() if k != "timestamp"}
        return data
