"""
Data models: model parameters, states, measure results and sweep records.
"""

from models.density import DensityMatrix
from models.params import ModelParams
from models.results import Measure, MeasureResult, Method, XStateParams
from models.states import BlochMeasurement, CQState
from models.sweep import SuddenChangePoint, SweepRow, SweepSpec

__all__ = [
    "BlochMeasurement",
    "CQState",
    "DensityMatrix",
    "Measure",
    "MeasureResult",
    "Method",
    "ModelParams",
    "SuddenChangePoint",
    "SweepRow",
    "SweepSpec",
    "XStateParams",
]
