"""
CSV and JSON encodings of solve reports, boundary sweeps and verification runs.

Every number passes through format_number, so both encodings of one run hold
the same values and repeated runs give byte-identical output.
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections.abc import Iterable, Mapping, Sequence
from typing import Any

import numpy as np

from sinr_region.config.models import OutputFormat
from sinr_region.constants import NUMBER_FORMAT
from sinr_region.model.models import SolveReport
from sinr_region.oracle import VerificationResult
from sinr_region.region.sweep import BoundaryPoint


def format_number(value: float) -> str:
    """
    12 significant digits with a lowercase exponent; non-finite values spelled out.
    """
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:{NUMBER_FORMAT}}"


def json_number(value: float) -> float | None:
    """
    The value as printed in CSV, or None when it is not finite.
    """
    if not math.isfinite(value):
        return None
    return float(format_number(value))


def _json_vector(values: Iterable[float] | None) -> list[float | None] | None:
    if values is None:
        return None
    return [json_number(float(v)) for v in values]


def _columns(prefix: str, count: int) -> list[str]:
    return [f"{prefix}{k}" for k in range(1, count + 1)]


def _csv_text(header: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def _json_text(payload: Any) -> str:
    return json.dumps(payload, indent=2) + "\n"


def report_to_dict(report: SolveReport) -> dict[str, Any]:
    """
    JSON mapping named after the report fields; absent values are null.
    """
    data: dict[str, Any] = {
        "mu": _json_vector(report.direction.mu),
        "gamma_star": json_number(report.gamma_star),
        "unbounded": report.unbounded,
        "binding": report.binding,
        "ties": list(report.ties),
        "candidates": [{"constraint": label, "gamma_star": json_number(value)} for label, value in report.candidates],
        "power": _json_vector(report.power),
        "sinr": _json_vector(report.sinr),
        "rate": _json_vector(report.rate),
    }
    if report.state_power is not None:
        data["state_power"] = [_json_vector(row) for row in report.state_power]
        data["average_power"] = _json_vector(report.average_power)
    if report.state_sinr is not None:
        data["state_sinr"] = [_json_vector(row) for row in report.state_sinr]
    return data


def _report_row(report: SolveReport) -> tuple[list[str], list[str]]:
    n = report.direction.n
    header = ["gamma_star", "unbounded", "binding", "ties", *_columns("mu", n)]
    row = [
        format_number(report.gamma_star),
        str(report.unbounded).lower(),
        report.binding,
        ";".join(report.ties),
        *(format_number(float(v)) for v in report.direction.mu),
    ]

    if report.state_power is not None and report.state_sinr is not None and report.average_power is not None:
        states = report.state_power.shape[0]
        cells = [(i, j) for i in range(1, states + 1) for j in range(1, n + 1)]
        header += [f"sinr_s{i}_u{j}" for i, j in cells]
        header += [f"rate_s{i}_u{j}" for i, j in cells]
        header += [f"power_s{i}_u{j}" for i, j in cells]
        header += _columns("average_power", n)
        rates = np.log2(1.0 + report.state_sinr)
        for matrix in (report.state_sinr, rates, report.state_power):
            row += [format_number(float(v)) for v in matrix.reshape(-1)]
        row += [format_number(float(v)) for v in report.average_power]
        return header, row

    header += _columns("sinr", n) + _columns("rate", n) + _columns("power", n)
    for values in (report.sinr, report.rate, report.power):
        row += [format_number(float(v)) for v in values] if values is not None else [""] * n
    return header, row


def render_report(report: SolveReport, fmt: OutputFormat) -> str:
    if fmt == "json":
        return _json_text(report_to_dict(report))
    header, row = _report_row(report)
    return _csv_text(header, [row])


def point_to_dict(point: BoundaryPoint) -> dict[str, Any]:
    return {
        "theta": None if point.theta is None else json_number(point.theta),
        "mu": _json_vector(point.mu.mu),
        "gamma_star": json_number(point.gamma_star),
        "sinr": _json_vector(point.sinr),
        "rate": _json_vector(point.rate),
        "binding": point.binding,
        "error": point.error,
    }


def _point_row(point: BoundaryPoint) -> list[str]:
    return [
        "" if point.theta is None else format_number(point.theta),
        *(format_number(float(v)) for v in point.mu.mu),
        format_number(point.gamma_star),
        *(format_number(float(v)) for v in point.sinr),
        *(format_number(float(v)) for v in point.rate),
        point.binding,
        point.error or "",
    ]


def _boundary_header(n: int) -> list[str]:
    return ["theta", *_columns("mu", n), "gamma_star", *_columns("sinr", n), *_columns("rate", n), "binding", "error"]


def render_boundary(points: Sequence[BoundaryPoint], fmt: OutputFormat) -> str:
    """
    One row per direction, in sweep order.
    """
    if fmt == "json":
        return _json_text([point_to_dict(point) for point in points])
    n = points[0].mu.n if points else 0
    return _csv_text(_boundary_header(n), (_point_row(point) for point in points))


def render_curves(curves: Mapping[str, Sequence[BoundaryPoint]], fmt: OutputFormat) -> str:
    """
    Several boundary curves; CSV rows lead with the curve name.
    """
    if fmt == "json":
        return _json_text({name: [point_to_dict(point) for point in points] for name, points in curves.items()})
    n = next((points[0].mu.n for points in curves.values() if points), 0)
    rows = ([name, *_point_row(point)] for name, points in curves.items() for point in points)
    return _csv_text(["curve", *_boundary_header(n)], rows)


def render_verification(result: VerificationResult, fmt: OutputFormat) -> str:
    status = "pass" if result.passed else "fail"
    values = (result.closed_form, result.bisection, result.abs_gap, result.rel_gap, result.tolerance)
    header = ["closed_form", "bisection", "abs_gap", "rel_gap", "tolerance", "status"]
    if fmt == "json":
        payload = {name: json_number(v) for name, v in zip(header, values, strict=False)}
        return _json_text({**payload, "status": status})
    return _csv_text(header, [[*(format_number(v) for v in values), status]])
