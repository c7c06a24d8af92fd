"""Run configuration: everything a command needs to reproduce its output."""

from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

from charflow.core.exceptions import UsageError

TOL_PREFIX = "tol."


class RunConfig(BaseModel):
    """Flat, serializable run parameters. Precedence: flags > config file > defaults."""

    model_config = ConfigDict(extra="forbid", validate_assignment=True)

    # field source: catalog name or field file path
    field: Optional[str] = None

    # tracing
    start: Optional[Tuple[float, float]] = None
    kind: str = Field("char", pattern="^(char|seed)$")
    arclen: float = 0.5
    back: Optional[float] = None
    step: Optional[float] = Field(None, gt=0)

    # charts
    center: Optional[Tuple[float, float]] = None
    radius: Optional[float] = Field(None, gt=0)
    grid: Optional[int] = Field(None, ge=5)

    # variational
    end: Optional[Tuple[float, float]] = None
    nodes: int = Field(400, ge=2)
    H: Optional[str] = None
    initial: Optional[str] = None
    min_tol: Optional[float] = Field(None, gt=0)
    max_iters: Optional[int] = Field(None, ge=1)

    # flux
    polygon: Optional[str] = None
    phi: Optional[str] = None
    refinement: Optional[int] = Field(None, ge=1)
    order: Optional[int] = Field(None, ge=1)

    # refinement studies
    levels: Optional[List[int]] = None

    # output
    out: Optional[str] = None
    report: Optional[str] = None
    format: str = Field("json", pattern="^(json|text)$")
    threads: Optional[int] = Field(None, ge=1)
    seed: int = 20240611

    tolerances: Dict[str, float] = Field(default_factory=dict)

    @field_validator("start", "center", "end", mode="before")
    @classmethod
    def _parse_point(cls, v: Any) -> Any:
        if isinstance(v, str):
            parts = [p.strip() for p in v.split(",")]
            if len(parts) != 2:
                raise ValueError(f"expected 'x,y', got {v!r}")
            return tuple(float(p) for p in parts)
        return v

    @field_validator("levels", mode="before")
    @classmethod
    def _parse_levels(cls, v: Any) -> Any:
        if isinstance(v, str):
            return [int(p) for p in v.split(",") if p.strip()]
        return v

    @classmethod
    def parse_lines(cls, text: str, source: str = "<config>") -> Dict[str, Any]:
        """Flat `key = value` lines; `#` starts a comment; `tol.<check> = v` sets a tolerance."""
        values: Dict[str, Any] = {}
        tolerances: Dict[str, float] = {}
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if not sep or not key:
                raise UsageError(f"{source}:{number}: expected key = value")
            if key.startswith(TOL_PREFIX):
                try:
                    tolerances[key[len(TOL_PREFIX):]] = float(value)
                except ValueError as e:
                    raise UsageError(f"{source}:{number}: tolerance {value!r} is not a number") from e
                continue
            if key not in cls.model_fields or key == "tolerances":
                raise UsageError(f"{source}:{number}: unknown key {key!r}")
            values[key] = value
        if tolerances:
            values["tolerances"] = tolerances
        return values

    @classmethod
    def load(cls, path: Union[str, Path, None] = None, **flags: Any) -> "RunConfig":
        """Config file values overlaid with the non-None flags."""
        values: Dict[str, Any] = {}
        if path is not None:
            path = Path(path)
            values = cls.parse_lines(path.read_text(encoding="utf-8"), str(path))
        file_tolerances = values.pop("tolerances", {})
        flag_tolerances = flags.pop("tolerances", None) or {}
        values.update({k: v for k, v in flags.items() if v is not None})
        values["tolerances"] = {**file_tolerances, **flag_tolerances}
        try:
            return cls(**values)
        except ValueError as e:
            raise UsageError(f"invalid run configuration: {e}") from e

    def to_lines(self) -> str:
        """Inverse of parse_lines for the set fields."""
        lines = []
        for key, value in self.model_dump(exclude_none=True, exclude={"tolerances"}).items():
            if isinstance(value, (tuple, list)):
                value = ",".join(repr(v) if isinstance(v, float) else str(v) for v in value)
            lines.append(f"{key} = {value}")
        lines.extend(f"{TOL_PREFIX}{k} = {v!r}" for k, v in sorted(self.tolerances.items()))
        return "\n".join(lines) + "\n"
