"""JSON input and output.  Numbers cross the boundary as decimal strings."""

import json
from fractions import Fraction

import mpmath

from .numerics import decimal_string


class InputFormatError(ValueError):
    """Malformed points file; the message carries the position of the problem."""


def parse_points(text, source="<points>"):
    """Points from JSON: an array of arrays of 3 integer strings (plain integers accepted)."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if isinstance(data, dict) and "points" in data:
        data = data["points"]
    if not isinstance(data, list):
        raise InputFormatError(f"{source}: expected an array of points")
    points = []
    for i, p in enumerate(data):
        if not isinstance(p, list) or len(p) != 3:
            raise InputFormatError(f"{source}: point {i}: expected 3 homogeneous coordinates")
        coords = []
        for k, c in enumerate(p):
            if isinstance(c, bool) or not isinstance(c, (str, int)):
                raise InputFormatError(f"{source}: point {i} coordinate {k}: expected an integer string")
            try:
                coords.append(int(str(c).strip()))
            except ValueError:
                raise InputFormatError(f"{source}: point {i} coordinate {k}: not an integer: {c!r}") from None
        points.append(tuple(coords))
    return points


def load_points(path):
    with open(path, encoding="utf-8") as fh:
        return parse_points(fh.read(), str(path))


def points_json(points):
    return json.dumps([[str(c) for c in p] for p in points]) + "\n"


def rational_string(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def complex_entry(z, bits):
    z = mpmath.mpc(z)
    return {"re": decimal_string(z.real, bits), "im": decimal_string(z.imag, bits)}


def _real(x, bits):
    return decimal_string(mpmath.mpf(x), bits)


def period_record(result):
    """Period-matrix record of a pipeline result, fields in the fixed order."""
    bits = result.precision
    model = result.model
    with mpmath.workprec(bits):
        M = result.period.M
        return {
            "points": [[str(c) for c in p] for p in result.exact.cfg.integer_points()],
            "g4": [rational_string(c) for c in model.g4z.univariate_coeffs()],
            "g6": [rational_string(c) for c in model.g6z.univariate_coeffs()],
            "branch_points": [dict(complex_entry(b.t.mid, bits), radius=_real(b.t.rad, bits))
                              for b in result.branches],
            "H": [[complex_entry(c.mid, bits) for c in row] for row in M],
            "gram": [list(r) for r in result.period.gram],
            "residuals": {"orthonormality": _real(result.period.orthonormality, bits),
                          "determinant": _real(result.period.determinant, bits)},
            "precision_bits": bits,
            "sign_convention": result.period.branch,
        }


def _matrix(rows, bits):
    return [[complex_entry(x, bits) for x in row] for row in rows]


def pde_record(report, bits, points, directions, jacobian=None, richardson=None, criteria=None):
    """PDE verification report; residuals as decimal strings."""
    with mpmath.workprec(bits):
        def block(r):
            return {
                "delta": rational_string(r.delta),
                "condition_number": _real(r.condition, bits),
                "residuals": {"a": _real(r.residual_a, bits), "b": _real(r.residual_b, bits),
                              "c": _real(r.residual_c, bits),
                              "c_diagonal": _real(r.residual_c_diagonal, bits),
                              "c_diagonal_unprojected": _real(r.diagonal_unprojected, bits),
                              "unit_norm": _real(r.unit_norm, bits)},
                "worst": {k: _locate(getattr(r, "entries_" + k)) for k in ("a", "b", "c")},
            }
        out = {
            "points": [[str(c) for c in p] for p in points],
            "directions": [{"point": d.point, "vector": [rational_string(v) for v in d.vector]}
                           for d in directions],
            "precision_bits": bits,
            "coordinates": "j-value at each branch point",
            "report": block(report),
        }
        if jacobian is not None:
            out["jacobian"] = _matrix(jacobian, bits)
        if richardson is not None:
            out["half_step_report"] = block(richardson.fine)
            out["richardson_ratios"] = {k[-1]: _real(v, bits) for k, v in richardson.ratios.items()}
        if criteria is not None:
            out["criteria"] = criteria
        return out


def _locate(entries):
    """1-based (i, j) of the largest entry of a residual table."""
    if not entries:
        return None
    best = max(((i, j) for i in range(len(entries)) for j in range(len(entries[i]))),
               key=lambda ij: entries[ij[0]][ij[1]])
    return [best[0] + 1, best[1] + 1]


def dumps(record):
    return json.dumps(record, indent=1) + "\n"
