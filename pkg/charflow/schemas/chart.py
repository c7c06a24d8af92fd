"""Chart JSON schema."""

from typing import Dict, List, Optional

from pydantic import BaseModel, Field

Grid = List[List[float]]


class ChartModel(BaseModel):
    """Serialized chart: lattice arrays plus a residual summary (check -> max residual)."""

    field: str
    center: List[float] = Field(..., min_length=2, max_length=2)
    rotation: float = Field(..., description="Angle φ0 making θ(center) = π/2")
    radius: float
    grid_n: int
    step: float
    x: Grid
    y: Grid
    s: Grid
    f: Grid
    t: Optional[Grid] = None
    g: Optional[Grid] = None
    residual_summary: Dict[str, Optional[float]] = Field(default_factory=dict)
