"""Decay diagnostics for the central sub-Planck structure.

The decay functional normalizes the chessboard value at the phase-space
origin by its initial magnitude,

    f(tau) = W_chess(0, tau) / |W_chess(0, 0)|,

and the temporal threshold is the first zero crossing of f.  Thresholds for
independent parameter rows run concurrently; each scan is sequential because
bracketing is order-dependent.
"""

from __future__ import annotations

import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import TAU_MIN, evolved_pa_chess, evolved_ps_chess, evolved_total
from .errors import NoCrossingError, ParameterError
from .states import CompassStateSpec, ReservoirSpec
from .wigner import wigner_pa_chess, wigner_ps_chess, wigner_total

#: the four parameter rows (m, r, nbar) of the reference threshold table
TABLE_ROWS_DEFAULT = ((5, 0.5, 0.0), (11, 0.5, 0.0), (11, 0.5, 0.5), (11, 0.8, 0.5))


def _chess_origin(spec: CompassStateSpec, nbar: float, tau: float) -> float:
    zeta = 0.0 + 0.0j
    if tau < TAU_MIN:
        fn = wigner_pa_chess if spec.variant == "pa" else wigner_ps_chess
        return float(fn(zeta, spec.m, spec.r))
    fn = evolved_pa_chess if spec.variant == "pa" else evolved_ps_chess
    return float(fn(zeta, spec.m, spec.r, ReservoirSpec(nbar=nbar, tau=tau)))


def decay_function(spec: CompassStateSpec, nbar: float, tau: float,
                   include_cross: bool = False) -> float:
    """Normalized central chessboard height f(tau).

    `include_cross` swaps in the full Wigner function (chess plus doubled
    real cross part) for sensitivity studies; the chess-only form is the
    definition used everywhere else.
    """
    if tau < 0.0:
        raise ParameterError("tau must be >= 0")
    if include_cross:
        w0 = float(wigner_total(0.0 + 0.0j, spec))
        if tau < TAU_MIN:
            wt = w0
        else:
            wt = float(evolved_total(0.0 + 0.0j, spec, ReservoirSpec(nbar=nbar, tau=tau)))
    else:
        w0 = _chess_origin(spec, nbar, 0.0)
        wt = w0 if tau < TAU_MIN else _chess_origin(spec, nbar, tau)
    if abs(w0) < 1e-12:
        raise ParameterError(f"initial central height {w0:g} too small to normalize")
    return wt / abs(w0)


@dataclass(frozen=True)
class DecayCurve:
    spec: CompassStateSpec
    nbar: float
    samples: tuple  # ordered (tau, f) pairs


def decay_curve(spec: CompassStateSpec, nbar: float, tau_max: float, steps: int) -> DecayCurve:
    """Sample f on a uniform tau grid (tau = 0 included)."""
    if steps < 1:
        raise ParameterError("steps must be >= 1")
    if tau_max <= 0.0:
        raise ParameterError("tau_max must be > 0")
    taus = np.linspace(0.0, tau_max, steps + 1)
    samples = tuple((float(t), decay_function(spec, nbar, float(t))) for t in taus)
    return DecayCurve(spec=spec, nbar=nbar, samples=samples)


def find_threshold(spec: CompassStateSpec, nbar: float, tau_max: float = 2.0,
                   scan_step: float = 1e-3, bisect_tol: float = 1e-13) -> float:
    """Smallest tau > 0 with f(tau) = 0: scan for a sign change, then bisect."""
    f0 = decay_function(spec, nbar, 0.0)
    sign0 = math.copysign(1.0, f0)
    prev_tau, prev_sign = 0.0, sign0
    lo = hi = None
    f_min, f_max = f0, f0
    tau = scan_step
    while tau <= tau_max + 0.5 * scan_step:
        f = decay_function(spec, nbar, tau)
        f_min, f_max = min(f_min, f), max(f_max, f)
        if math.copysign(1.0, f) != prev_sign or f == 0.0:
            lo, hi = prev_tau, tau
            break
        prev_tau, prev_sign = tau, math.copysign(1.0, f)
        tau += scan_step
    if lo is None:
        raise NoCrossingError(
            f"f has no sign change on (0, {tau_max}] for {spec}, nbar={nbar}; "
            f"f ranged over [{f_min:.3e}, {f_max:.3e}]"
        )
    lo_sign = math.copysign(1.0, decay_function(spec, nbar, lo)) if lo > 0 else sign0
    while hi - lo > bisect_tol:
        mid = 0.5 * (lo + hi)
        if math.copysign(1.0, decay_function(spec, nbar, mid)) == lo_sign:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class ThresholdRecord:
    row_id: int
    m: int
    r: float
    nbar: float
    tau_d_pa: float
    tau_d_ps: float

    @property
    def ordered(self) -> bool:
        """Whether the photon-added threshold comes strictly first."""
        return self.tau_d_pa < self.tau_d_ps


@dataclass(frozen=True)
class RelativeChange:
    reference_row: int
    next_row: int
    delta_pa: float  # fraction, (tau_next - tau_ref) / |tau_ref|
    delta_ps: float


def relative_change(prev: ThresholdRecord, nxt: ThresholdRecord) -> RelativeChange:
    """Fractional change of successive thresholds, per variant."""
    return RelativeChange(
        reference_row=prev.row_id,
        next_row=nxt.row_id,
        delta_pa=(nxt.tau_d_pa - prev.tau_d_pa) / abs(prev.tau_d_pa),
        delta_ps=(nxt.tau_d_ps - prev.tau_d_ps) / abs(prev.tau_d_ps),
    )


def _worker_count(workers: int | None) -> int:
    if workers is not None:
        return max(1, workers)
    env = os.environ.get("SUBPLANCK_WORKERS")
    return max(1, int(env)) if env else 1


def table1(rows=None, workers: int | None = None, tau_max: float = 2.0) -> list[ThresholdRecord]:
    """Threshold table over parameter rows (m, r, nbar), both variants per row.

    Note: for these states the two variants' first zero crossings coincide to
    solver precision, so the strict pa-before-ps ordering is reported by the
    `ordered` flag on each record rather than asserted here.
    """
    if rows is None:
        rows = TABLE_ROWS_DEFAULT
    jobs = []
    for row_id, (m, r, nbar) in enumerate(rows, start=1):
        for variant in ("pa", "ps"):
            jobs.append((row_id, variant, CompassStateSpec(variant, m, r), nbar))

    def solve(job):
        row_id, variant, spec, nbar = job
        return row_id, variant, find_threshold(spec, nbar, tau_max=tau_max)

    n_workers = _worker_count(workers)
    if n_workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            results = list(pool.map(solve, jobs))
    else:
        results = [solve(j) for j in jobs]

    by_row: dict[int, dict[str, float]] = {}
    for row_id, variant, tau_d in results:
        by_row.setdefault(row_id, {})[variant] = tau_d
    records = []
    for row_id, (m, r, nbar) in enumerate(rows, start=1):
        records.append(
            ThresholdRecord(
                row_id=row_id, m=m, r=r, nbar=nbar,
                tau_d_pa=by_row[row_id]["pa"], tau_d_ps=by_row[row_id]["ps"],
            )
        )
    return records


def relative_changes(records: list[ThresholdRecord]) -> list[RelativeChange]:
    return [relative_change(a, b) for a, b in zip(records, records[1:])]


def thresholds_to_csv(records: list[ThresholdRecord]) -> str:
    buf = io.StringIO()
    buf.write("row,m,r,nbar,tau_d_pa,tau_d_ps\n")
    for rec in records:
        buf.write(
            f"{rec.row_id},{rec.m},{rec.r:.17g},{rec.nbar:.17g},"
            f"{rec.tau_d_pa:.17g},{rec.tau_d_ps:.17g}\n"
        )
    return buf.getvalue()


def thresholds_to_json(records: list[ThresholdRecord]) -> str:
    return json.dumps(
        [
            {
                "row": rec.row_id, "m": rec.m, "r": rec.r, "nbar": rec.nbar,
                "tau_d_pa": rec.tau_d_pa, "tau_d_ps": rec.tau_d_ps,
            }
            for rec in records
        ],
        indent=2,
    )


def central_tile_extent(spec: CompassStateSpec, direction: str = "diagonal",
                        scan_step: float = 5e-3, reach: float = 4.0) -> float:
    """Spacing between the first zero crossings of W on either side of the origin.

    The chessboard tiles of these states sit on the diagonal lattice: along
    the x axis itself the central pattern has no sign change for large m, so
    the default cut runs along x = p.  `direction` may be "diagonal" or "x".
    Returns the Euclidean distance between the two crossings.
    """
    if spec.m < 4:
        raise ParameterError("central tiles need m >= 4")
    if direction == "diagonal":
        unit = complex(1.0, 1.0) / math.sqrt(2.0)
    elif direction == "x":
        unit = complex(1.0, 0.0)
    else:
        raise ParameterError(f"direction must be 'diagonal' or 'x', got {direction!r}")

    def w_at(t: float) -> float:
        return float(wigner_total(t * unit / math.sqrt(2.0), spec))

    roots = []
    for sgn in (+1.0, -1.0):
        prev_t, prev_w = 0.0, w_at(0.0)
        t = scan_step
        root = None
        while t <= reach:
            w = w_at(sgn * t)
            if math.copysign(1.0, w) != math.copysign(1.0, prev_w):
                lo, hi = prev_t, t
                for _ in range(60):
                    mid = 0.5 * (lo + hi)
                    if math.copysign(1.0, w_at(sgn * mid)) == math.copysign(1.0, prev_w):
                        lo = mid
                    else:
                        hi = mid
                root = 0.5 * (lo + hi)
                break
            prev_t, prev_w = t, w
            t += scan_step
        if root is None:
            raise NoCrossingError(
                f"no zero crossing of W along {direction} within t <= {reach} for {spec}"
            )
        roots.append(sgn * root)
    return abs(roots[0] - roots[1])
