"""Grid evaluation, integration, and export of Wigner fields.

A field samples a pointwise evaluator on a rectangular (x, p) grid with
z = (x + i p)/sqrt(2).  Integration uses composite Simpson weights per axis
and reports the integral with respect to d^2z = dx dp / 2, so a normalized
Wigner function integrates to one.
"""

from __future__ import annotations

import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

WIGNER_BOUND = 2.0 / math.pi


@dataclass(frozen=True)
class GridSpec:
    x_min: float
    x_max: float
    p_min: float
    p_max: float
    nx: int
    np: int

    def __post_init__(self):
        if not (self.x_max > self.x_min and self.p_max > self.p_min):
            raise ParameterError("grid extents must satisfy max > min on both axes")
        for n in (self.nx, self.np):
            if not 2 <= n <= 4096:
                raise ParameterError(f"grid points per axis must lie in [2, 4096], got {n}")

    def x_values(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)

    def p_values(self) -> np.ndarray:
        return np.linspace(self.p_min, self.p_max, self.np)

    def zeta_mesh(self) -> np.ndarray:
        """Complex phase points, shape (nx, np), row-major in x."""
        x = self.x_values()
        p = self.p_values()
        return (x[:, None] + 1j * p[None, :]) / math.sqrt(2.0)


def parse_grid(spec: str) -> GridSpec:
    """Parse 'xmin:xmax:nx[,pmin:pmax:np]'; the second triple defaults to the first."""
    parts = spec.split(",")
    if len(parts) not in (1, 2):
        raise ParameterError(f"bad grid spec {spec!r}")

    def triple(text: str):
        bits = text.split(":")
        if len(bits) != 3:
            raise ParameterError(f"bad grid triple {text!r} (want min:max:n)")
        return float(bits[0]), float(bits[1]), int(bits[2])

    x_min, x_max, nx = triple(parts[0])
    p_min, p_max, npts = triple(parts[1]) if len(parts) == 2 else (x_min, x_max, nx)
    return GridSpec(x_min=x_min, x_max=x_max, p_min=p_min, p_max=p_max, nx=nx, np=npts)


@dataclass(frozen=True)
class WignerField:
    grid: GridSpec
    values: np.ndarray  # real, shape (nx, np)
    meta: dict


def _worker_count(workers: int | None) -> int:
    if workers is not None:
        return max(1, workers)
    env = os.environ.get("SUBPLANCK_WORKERS")
    return max(1, int(env)) if env else 1


def evaluate_field(evaluator, grid: GridSpec, workers: int | None = None,
                   meta: dict | None = None) -> WignerField:
    """Sample `evaluator` (vectorized over complex arrays) on the grid.

    Rows are assembled by index, so the result is bitwise identical whatever
    the worker count.
    """
    mesh = grid.zeta_mesh()
    n_workers = min(_worker_count(workers), grid.nx)
    if n_workers <= 1:
        values = np.asarray(evaluator(mesh), dtype=float)
    else:
        chunks = np.array_split(np.arange(grid.nx), n_workers)

        def run(idx):
            return idx, np.asarray(evaluator(mesh[idx]), dtype=float)

        values = np.empty((grid.nx, grid.np), dtype=float)
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            for idx, block in pool.map(run, chunks):
                values[idx] = block
    if values.shape != (grid.nx, grid.np):
        raise ParameterError(f"evaluator returned shape {values.shape}, grid wants {(grid.nx, grid.np)}")
    if not np.all(np.isfinite(values)):
        raise ParameterError("evaluator produced non-finite field values")
    return WignerField(grid=grid, values=values, meta=dict(meta or {}))


def _simpson_weights(n: int, h: float) -> np.ndarray:
    """Composite Simpson weights; an even point count gets a trapezoid end cell."""
    w = np.zeros(n)
    if n == 2:
        return np.array([0.5, 0.5]) * h
    n_simpson = n if n % 2 == 1 else n - 1
    w[0] = w[n_simpson - 1] = 1.0
    w[1:n_simpson - 1:2] = 4.0
    w[2:n_simpson - 1:2] = 2.0
    w[:n_simpson] *= h / 3.0
    if n_simpson != n:
        w[-2] += 0.5 * h
        w[-1] += 0.5 * h
    return w


def integrate_field(field: WignerField) -> float:
    """Integral of the field over d^2z = dx dp / 2."""
    grid = field.grid
    hx = (grid.x_max - grid.x_min) / (grid.nx - 1)
    hp = (grid.p_max - grid.p_min) / (grid.np - 1)
    wx = _simpson_weights(grid.nx, hx)
    wp = _simpson_weights(grid.np, hp)
    return 0.5 * float(wx @ field.values @ wp)


# --- export ----------------------------------------------------------------


def export_csv(field: WignerField) -> bytes:
    buf = io.StringIO()
    buf.write("x,p,w\n")
    x = field.grid.x_values()
    p = field.grid.p_values()
    for i in range(field.grid.nx):
        for j in range(field.grid.np):
            buf.write(f"{x[i]:.17g},{p[j]:.17g},{field.values[i, j]:.17g}\n")
    return buf.getvalue().encode()


def export_json(field: WignerField) -> bytes:
    grid = field.grid
    doc = {
        "grid": {
            "x_min": grid.x_min, "x_max": grid.x_max,
            "p_min": grid.p_min, "p_max": grid.p_max,
            "nx": grid.nx, "np": grid.np,
        },
        "values": [field.values[i, j] for i in range(grid.nx) for j in range(grid.np)],
        "meta": field.meta,
    }
    return json.dumps(doc).encode()


def import_json(data: bytes | str) -> WignerField:
    doc = json.loads(data)
    g = doc["grid"]
    grid = GridSpec(x_min=g["x_min"], x_max=g["x_max"], p_min=g["p_min"],
                    p_max=g["p_max"], nx=g["nx"], np=g["np"])
    values = np.array(doc["values"], dtype=float).reshape(grid.nx, grid.np)
    return WignerField(grid=grid, values=values, meta=doc.get("meta", {}))


def export_pgm(field: WignerField) -> bytes:
    """8-bit P5 with a symmetric diverging map anchored at the universal bound.

    0 maps to gray 127 and +-2/pi to 255/0, so images are comparable across
    evolution times.
    """
    levels = np.rint(127.0 + field.values * (128.0 / WIGNER_BOUND))
    levels = np.clip(levels, 0, 255).astype(np.uint8)
    # image rows scan p downward, columns scan x rightward
    img = levels.T[::-1, :]
    header = f"P5\n{field.grid.nx} {field.grid.np}\n255\n".encode()
    return header + img.tobytes()


_EXPORTERS = {"csv": export_csv, "json": export_json, "pgm": export_pgm}


def export_field(field: WignerField, fmt: str) -> bytes:
    try:
        return _EXPORTERS[fmt](field)
    except KeyError:
        raise ParameterError(f"unknown export format {fmt!r}") from None
