"""Floating-point accuracy and robustness analysis of a C subset."""

import json

from ._fldx import REPORT_SCHEMA, StageError, instrument, typecheck
from ._fldx import analyze_json as _analyze_json

__all__ = ["REPORT_SCHEMA", "StageError", "analyze", "instrument", "typecheck"]


def analyze(source, inputs=None, scenario=None, format=None, max_noise=64, path_budget=256, subdiv=1,
            threshold="0.05", entry="main", file="<string>"):
    """Analyzes `source` and returns the report as a dict.

    `inputs` maps parameter names to specs such as "[0,1]~[-1e-9,1e-9]", or is
    a list of "name=spec" strings. A `scenario` label or 1-based index takes
    the inputs of a Scenario line of the source first.
    """
    if isinstance(inputs, dict):
        inputs = [f"{k}={v}" for k, v in inputs.items()]
    report = _analyze_json(source, list(inputs or []), str(scenario or ""), format or "", max_noise, path_budget,
                           subdiv, str(threshold), entry, file)
    return json.loads(report)
