"""
Result records for the discord measures.
"""

from enum import Enum
from typing import Any, Dict

from pydantic import BaseModel, Field


class Measure(str, Enum):
    TRACE = "trace"
    HELLINGER = "hellinger"
    BURES = "bures"


class Method(str, Enum):
    CLOSED_FORM = "closed_form"
    DEFINITIONAL = "definitional"
    ORACLE = "oracle"


PAPER_VERBATIM_TAG = "paper_verbatim"


class MeasureResult(BaseModel):
    """
    Value of one discord measure with its provenance.

    ``diagnostics`` carries whatever the computing path reports: optimizer
    rounds, grid sizes, the argmax axis and the branch tag used by the
    sudden-change detector.
    """

    value: float
    measure: Measure
    method: Method
    paper_verbatim: bool = False
    diagnostics: Dict[str, Any] = Field(default_factory=dict)

    model_config = {"frozen": True}

    @property
    def method_label(self) -> str:
        """Method tag as written to the output tables."""
        label = self.method.value
        if self.paper_verbatim:
            label = f"{label}+{PAPER_VERBATIM_TAG}"
        return label

    @property
    def branch(self) -> str:
        """Argmax branch tag, empty when the path has none."""
        return str(self.diagnostics.get("branch", ""))

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary representation."""
        return {
            "value": self.value,
            "measure": self.measure.value,
            "method": self.method_label,
            "diagnostics": self.diagnostics,
        }


class XStateParams(BaseModel):
    """
    Invariants of an X state entering the closed trace-discord formula.

    gamma1 = 2(|r23| + |r14|), gamma2 = 2(|r23| - |r14|) taken in absolute
    value so that gamma1 >= gamma2 >= 0, gamma3 = 1 - 2(r22 + r33) and
    x3 = 2(r11 + r22) - 1.
    """

    gamma1: float
    gamma2: float
    gamma3: float
    x3: float

    model_config = {"frozen": True}
