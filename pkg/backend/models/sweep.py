"""
Sweep description, output rows and detected sudden-change points.
"""

from typing import Dict, List, Literal, Optional

import numpy as np
from pydantic import BaseModel, Field, model_validator

from models.params import ModelParams
from models.results import Measure, Method

ParamName = Literal["J", "B", "D", "T"]
OUTPUT_COLUMNS = ["J", "B", "D", "T", "Q_T", "Q_H", "Q_B", "method"]
MEASURE_COLUMNS = {
    Measure.TRACE: "Q_T",
    Measure.HELLINGER: "Q_H",
    Measure.BURES: "Q_B",
}


class SweepSpec(BaseModel):
    """
    One parameter sweep: ``vary`` runs over linspace(start, stop, steps)
    for every value of the optional family parameter, the remaining
    parameters come from ``fixed``.
    """

    vary: Literal["D", "B", "T"]
    start: float = Field(alias="from")
    stop: float = Field(alias="to")
    steps: int
    fixed: ModelParams = Field(default_factory=ModelParams)
    family_param: Optional[ParamName] = None
    family_values: List[float] = Field(default_factory=list)
    measures: List[Measure] = Field(default_factory=lambda: list(Measure))
    method: Optional[Method] = None
    output: Optional[str] = None
    format: Literal["csv", "json"] = "csv"
    paper_verbatim: bool = False

    model_config = {"populate_by_name": True, "frozen": True}

    @model_validator(mode="after")
    def _check_ranges(self) -> "SweepSpec":
        if self.steps < 2:
            raise ValueError(f"steps must be >= 2, got {self.steps}")
        if self.start > self.stop:
            raise ValueError(f"sweep range is reversed: from={self.start} > to={self.stop}")
        if self.vary == "T" and self.start < 0.0:
            raise ValueError("temperatures must be >= 0")
        if self.family_param is not None:
            if self.family_param == self.vary:
                raise ValueError("family parameter must differ from the swept parameter")
            if not self.family_values:
                raise ValueError("family parameter given without family values")
            if self.family_param == "T" and min(self.family_values) < 0.0:
                raise ValueError("temperatures must be >= 0")
        elif self.family_values:
            raise ValueError("family values given without a family parameter")
        if not self.measures:
            raise ValueError("at least one measure is required")
        return self

    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)

    def families(self) -> List[Optional[float]]:
        """Family values in the order given, [None] for a single series."""
        return list(self.family_values) if self.family_param else [None]

    def points(self) -> List[ModelParams]:
        """Every grid point, ordered by family then by the swept axis."""
        points = []
        for family_value in self.families():
            base = self.fixed
            if family_value is not None:
                base = base.replace(**{self.family_param: family_value})
            points.extend(base.replace(**{self.vary: float(x)}) for x in self.grid())
        return points


class SweepRow(BaseModel):
    """One output row; ``branches`` holds argmax tags and is not written out."""

    J: float
    B: float
    D: float
    T: float
    Q_T: Optional[float] = None
    Q_H: Optional[float] = None
    Q_B: Optional[float] = None
    method: str
    branches: Dict[str, str] = Field(default_factory=dict, exclude=True)

    def to_record(self) -> Dict[str, object]:
        return {column: getattr(self, column) for column in OUTPUT_COLUMNS}


class SuddenChangePoint(BaseModel):
    """Parameter value where a measure curve changes its optimizing branch or turns."""

    location: float
    kind: Literal["argmax-switch", "non-smooth-kink", "turning-point"]
    series: str
    value: Optional[float] = None

    def to_dict(self) -> Dict[str, object]:
        return self.model_dump()
