"""IdentityReport and its flat JSON / CSV encodings."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

REL_FLOOR = 1e-300
RHS_ABSOLUTE_BELOW = 1e-9

JSON_KEYS = (
    "name", "params", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_error",
    "rel_error", "tail_bound", "tolerance", "elapsed_ms", "pass",
)


@dataclass(frozen=True)
class IdentityReport:
    name: str
    params: dict
    lhs: complex
    rhs: complex
    abs_error: float
    rel_error: float
    tolerance: float
    tail_bound: float = 0.0
    elapsed_ms: float = 0.0
    passed: bool = False
    extras: dict = field(default_factory=dict, compare=False)


def standard_pass(abs_error, rel_error, rhs, tolerance):
    if abs(rhs) > RHS_ABSOLUTE_BELOW:
        return rel_error <= tolerance
    return abs_error <= tolerance


def build_report(name, params, lhs, rhs, tolerance, *, tail_bound=0.0,
                 elapsed_ms=0.0, passed=None, extras=None) -> IdentityReport:
    """Fill in the error fields; ``passed`` overrides the standard rule."""
    abs_error = abs(complex(lhs) - complex(rhs))
    rel_error = abs_error / max(abs(rhs), REL_FLOOR)
    if passed is None:
        passed = standard_pass(abs_error, rel_error, rhs, tolerance)
    return IdentityReport(
        name=name,
        params=dict(params),
        lhs=lhs,
        rhs=rhs,
        abs_error=abs_error,
        rel_error=rel_error,
        tolerance=tolerance,
        tail_bound=float(tail_bound),
        elapsed_ms=float(elapsed_ms),
        passed=bool(passed),
        extras=dict(extras or {}),
    )


def _num(x) -> str:
    x = float(x)
    if not math.isfinite(x):
        return "null"
    return "%.17g" % x


def _value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, float)):
        return _num(v)
    if isinstance(v, complex):
        return "[%s, %s]" % (_num(v.real), _num(v.imag))
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_value(x) for x in v) + "]"
    return json.dumps(str(v))


def to_json(report: IdentityReport) -> str:
    """One flat JSON object; floats carry 17 significant digits."""
    params = ", ".join(f"{json.dumps(k)}: {_value(v)}" for k, v in report.params.items())
    lhs, rhs = complex(report.lhs), complex(report.rhs)
    fields = [
        ("name", json.dumps(report.name)),
        ("params", "{" + params + "}"),
        ("lhs_re", _num(lhs.real)),
        ("lhs_im", _num(lhs.imag)),
        ("rhs_re", _num(rhs.real)),
        ("rhs_im", _num(rhs.imag)),
        ("abs_error", _num(report.abs_error)),
        ("rel_error", _num(report.rel_error)),
        ("tail_bound", _num(report.tail_bound)),
        ("tolerance", _num(report.tolerance)),
        ("elapsed_ms", _num(report.elapsed_ms)),
        ("pass", "true" if report.passed else "false"),
    ]
    return "{" + ", ".join(f'"{k}": {v}' for k, v in fields) + "}"


def from_json(text: str) -> IdentityReport:
    d = json.loads(text)
    return IdentityReport(
        name=d["name"],
        params=d["params"],
        lhs=complex(d["lhs_re"], d["lhs_im"]),
        rhs=complex(d["rhs_re"], d["rhs_im"]),
        abs_error=d["abs_error"],
        rel_error=d["rel_error"],
        tolerance=d["tolerance"],
        tail_bound=d["tail_bound"],
        elapsed_ms=d["elapsed_ms"],
        passed=d["pass"],
    )


CSV_HEADER = ("name", "params", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_error",
              "rel_error", "tail_bound", "tolerance", "elapsed_ms", "pass")


def to_csv_row(report: IdentityReport) -> list[str]:
    lhs, rhs = complex(report.lhs), complex(report.rhs)
    params = ";".join(f"{k}={_value(v)}" for k, v in report.params.items())
    return [
        report.name, params, _num(lhs.real), _num(lhs.imag), _num(rhs.real), _num(rhs.imag),
        _num(report.abs_error), _num(report.rel_error), _num(report.tail_bound),
        _num(report.tolerance), _num(report.elapsed_ms), "true" if report.passed else "false",
    ]


def format_human(report: IdentityReport) -> str:
    status = "PASS" if report.passed else "FAIL"
    params = ", ".join(f"{k}={_short(v)}" for k, v in report.params.items())
    return (
        f"[{status}] {report.name}({params})  lhs={_short(report.lhs)}  rhs={_short(report.rhs)}  "
        f"rel={report.rel_error:.3e}  abs={report.abs_error:.3e}  tol={report.tolerance:g}  "
        f"tail<={report.tail_bound:.2e}  {report.elapsed_ms:.0f} ms"
    )


def _short(v):
    if isinstance(v, complex):
        if v.imag == 0:
            return f"{v.real:.12g}"
        return f"{v.real:.12g}{v.imag:+.12g}i"
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)
