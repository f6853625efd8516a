"""Binary-method scalar multiplication with per-phase op metering.

The left-to-right double-and-add loop runs over the shared projective
kernels.  A scalar k with bit length l costs l-1 point doublings and
HW(k)-1 mixed additions, and the single field inversion of the whole run
happens in the final conversion back to affine coordinates.

Work is metered into three phases:

  Init     embedding the base point (no arithmetic)
  Iterate  every doubling and mixed addition in the loop
  Convert  the one projective-to-affine conversion

`count_report` compares the measured per-point-op averages against a
fixed baseline cost table and reports the deviations; the baseline is an
idealised count per point operation, so nonzero deviations are expected
and are exactly what the report is for.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from .curves import (AffinePoint, CurveParams, INFINITY, _add_affine_raw,
                     _embed_kernel, _require_on_curve, kernels_for)
from .errors import EmptyTrace, OracleBoundExceeded
from .fields import ARITH_KINDS, FieldOps, FieldSpec, OpKind

ORACLE_BOUND = 1 << 16


class Phase(enum.Enum):
    INIT = "init"
    ITERATE = "iterate"
    CONVERT = "convert"


class Segment(enum.Enum):
    """Finer-grained than Phase: the loop phase splits into doublings
    and additions so the two can be averaged separately."""

    INIT = "init"
    DOUBLE = "double"
    ADD = "add"
    CONVERT = "convert"

    @property
    def phase(self) -> Phase:
        if self in (Segment.DOUBLE, Segment.ADD):
            return Phase.ITERATE
        return Phase.INIT if self is Segment.INIT else Phase.CONVERT


class OpTrace:
    """Monotone field-op counters for one run, kept per segment.

    Totals are derived sums over segments, so the totals always equal
    the sum of the per-phase counts.
    """

    def __init__(self):
        self._segments = {
            seg: {kind: 0 for kind in ARITH_KINDS} for seg in Segment}
        self.n_point_doubles = 0
        self.n_point_adds = 0

    def sink_for(self, seg: Segment):
        counters = self._segments[seg]

        def sink(kind: OpKind) -> None:
            counters[kind] += 1

        return sink

    def segment_counts(self, seg: Segment) -> dict[OpKind, int]:
        return dict(self._segments[seg])

    def phase_counts(self, phase: Phase) -> dict[OpKind, int]:
        out = {kind: 0 for kind in ARITH_KINDS}
        for seg in Segment:
            if seg.phase is phase:
                for kind, n in self._segments[seg].items():
                    out[kind] += n
        return out

    def totals(self) -> dict[OpKind, int]:
        out = {kind: 0 for kind in ARITH_KINDS}
        for counters in self._segments.values():
            for kind, n in counters.items():
                out[kind] += n
        return out

    def to_dict(self) -> dict:
        return {
            "point_doubles": self.n_point_doubles,
            "point_adds": self.n_point_adds,
            "phases": {
                phase.value: {k.value: n
                              for k, n in self.phase_counts(phase).items()}
                for phase in Phase},
            "totals": {k.value: n for k, n in self.totals().items()},
        }


class _TraceBackend:
    """Execution backend that meters ops into an OpTrace."""

    def __init__(self, spec: FieldSpec, trace: OpTrace):
        self.trace = trace
        self._ops = {seg: FieldOps(spec, trace.sink_for(seg)) for seg in Segment}

    def segment(self, seg: Segment, point_op_index: int) -> FieldOps:
        if seg is Segment.DOUBLE:
            self.trace.n_point_doubles += 1
        elif seg is Segment.ADD:
            self.trace.n_point_adds += 1
        return self._ops[seg]


def run_binary_method(curve: CurveParams, k: int, P: AffinePoint, backend):
    """Drive the double-and-add loop through a backend's ops objects.

    Preconditions: k >= 1 and P is finite and on the curve.  Returns the
    conversion kernel's output: an (x, y) pair of backend values, or
    None when k*P is the point at infinity.
    """
    double, madd, to_aff = kernels_for(curve)
    ops = backend.segment(Segment.INIT, -1)
    X, Y, Z = _embed_kernel(ops, curve, P.x, P.y)
    idx = 0
    for i in range(k.bit_length() - 2, -1, -1):
        ops = backend.segment(Segment.DOUBLE, idx)
        idx += 1
        X, Y, Z = double(ops, curve, X, Y, Z)
        if (k >> i) & 1:
            ops = backend.segment(Segment.ADD, idx)
            idx += 1
            X, Y, Z = madd(ops, curve, X, Y, Z, P.x, P.y)
    ops = backend.segment(Segment.CONVERT, -1)
    return to_aff(ops, curve, X, Y, Z)


def scalar_mul(curve: CurveParams, k: int, P: AffinePoint,
               trace: Optional[OpTrace] = None) -> AffinePoint:
    """Compute k*P by the binary method, metering ops into `trace`."""
    _require_on_curve(curve, P)
    if k < 0:
        raise ValueError("scalar must be nonnegative")
    if k == 0 or P.is_infinity:
        return INFINITY
    if trace is None:
        trace = OpTrace()
    out = run_binary_method(curve, k, P, _TraceBackend(curve.field, trace))
    if out is None:
        return INFINITY
    return AffinePoint(out[0], out[1])


def scalar_mul_reference(curve: CurveParams, k: int,
                         P: AffinePoint) -> AffinePoint:
    """Independent oracle: literal k-fold repeated affine addition."""
    if k < 0:
        raise ValueError("scalar must be nonnegative")
    if k > ORACLE_BOUND:
        raise OracleBoundExceeded(
            f"reference scalar {k} exceeds the oracle bound {ORACLE_BOUND}")
    _require_on_curve(curve, P)
    acc = INFINITY
    for _ in range(k):
        acc = _add_affine_raw(curve, acc, P)
    return acc


# ---------------------------------------------------------------------------
# baseline cost table and the audit report

# Idealised field-op cost of each projective point operation; the audit
# compares measured averages against these cells.  The ADD row covers
# additions and subtractions together.
AUDIT_BASELINE = {
    "point_add": {"ADD": 2, "MUL": 4, "INV": 0, "SQR": 1},
    "point_double": {"ADD": 1, "MUL": 2, "INV": 0, "SQR": 4},
    "convert": {"ADD": 6, "MUL": 10, "INV": 1, "SQR": 1},
}

_ROW_ORDER = ("ADD", "MUL", "INV", "SQR")
_COL_ORDER = ("point_double", "point_add", "convert")


def _row_value(counts: dict[OpKind, int], row: str) -> int:
    if row == "ADD":
        return counts[OpKind.ADD] + counts[OpKind.SUB]
    return counts[OpKind[row]]


@dataclass
class CountReport:
    """Measured-vs-baseline op counts per point operation."""

    n_point_doubles: int
    n_point_adds: int
    cells: dict  # cells[point_op][row] = {baseline, measured, deviation}

    def to_dict(self) -> dict:
        return {
            "point_doubles": self.n_point_doubles,
            "point_adds": self.n_point_adds,
            "cells": self.cells,
        }

    def format_text(self) -> str:
        lines = [
            f"point doublings: {self.n_point_doubles}   "
            f"point additions: {self.n_point_adds}",
            f"{'op':<5}" + "".join(f"{col:>34}" for col in _COL_ORDER),
            f"{'':<5}" + "".join(f"{'base':>12}{'measured':>11}{'dev':>11}"
                                 for _ in _COL_ORDER),
        ]
        for row in _ROW_ORDER:
            parts = [f"{row:<5}"]
            for col in _COL_ORDER:
                cell = self.cells[col][row]
                base = cell["baseline"]
                if cell["measured"] is None:
                    parts.append(f"{base:>12}{'-':>11}{'-':>11}")
                else:
                    parts.append(f"{base:>12}{cell['measured']:>11.3f}"
                                 f"{cell['deviation']:>+11.3f}")
            lines.append("".join(parts))
        return "\n".join(lines)


def count_report(trace: OpTrace, n_doubles: int, n_adds: int) -> CountReport:
    """Audit a trace against the baseline cost table.

    Measured cells are per-point-op averages (doubling and addition
    segments divided by their op counts; conversion happens once).
    Raises EmptyTrace when the run performed no point operations at all.
    """
    if n_doubles == 0 and n_adds == 0:
        raise EmptyTrace("the run performed no point operations to audit")
    seg_of = {"point_double": (Segment.DOUBLE, n_doubles),
              "point_add": (Segment.ADD, n_adds),
              "convert": (Segment.CONVERT, 1)}
    cells = {}
    for col in _COL_ORDER:
        seg, n = seg_of[col]
        counts = trace.segment_counts(seg)
        cells[col] = {}
        for row in _ROW_ORDER:
            base = AUDIT_BASELINE[col][row]
            if n == 0:
                cells[col][row] = {
                    "baseline": base, "measured": None, "deviation": None}
            else:
                measured = _row_value(counts, row) / n
                cells[col][row] = {
                    "baseline": base,
                    "measured": measured,
                    "deviation": measured - base,
                }
    return CountReport(n_point_doubles=n_doubles, n_point_adds=n_adds,
                       cells=cells)


def expected_op_totals(l: int, hamming: int) -> dict[str, int]:
    """Baseline whole-run totals for a scalar of bit length l and
    Hamming weight `hamming`: l-1 doublings, hamming-1 additions, one
    conversion."""
    if l < 1:
        raise ValueError("bit length must be at least 1")
    if not 1 <= hamming <= l:
        raise ValueError("Hamming weight must lie in [1, l]")
    n_d, n_a = l - 1, hamming - 1
    return {
        row: (n_d * AUDIT_BASELINE["point_double"][row]
              + n_a * AUDIT_BASELINE["point_add"][row]
              + AUDIT_BASELINE["convert"][row])
        for row in _ROW_ORDER}


def expected_op_totals_average(l: int) -> dict[str, float]:
    """As `expected_op_totals` but for the average scalar of bit length
    l, whose expected Hamming weight is l/2."""
    if l < 2:
        raise ValueError("bit length must be at least 2")
    n_d, n_a = l - 1, l / 2 - 1
    return {
        row: (n_d * AUDIT_BASELINE["point_double"][row]
              + n_a * AUDIT_BASELINE["point_add"][row]
              + AUDIT_BASELINE["convert"][row])
        for row in _ROW_ORDER}
