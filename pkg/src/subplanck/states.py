"""Parameter spaces for the compasslike states and the thermal reservoir.

A compasslike state is built from the superposition S(r)|0> + S(-r)|0> of two
squeezed vacua by adding (PA) or subtracting (PS) m photons.  This module
holds the validated parameter records and the closed-form normalization
constants.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .errors import ParameterError, RealnessError
from .specialfn import legendre, log_factorial

VARIANTS = ("pa", "ps")

M_MAX = 20
R_MAX = 2.0
R_MIN_PS = 1e-3  # a^m S(r)|0> + a^m S(-r)|0> vanishes as r -> 0 for m >= 1

# imaginary residue allowed on analytically real normalization terms
_REALNESS_RTOL = 1e-10


@dataclass(frozen=True)
class CompassStateSpec:
    """Which compasslike state: variant ('pa'|'ps'), photon count m, squeezing r."""

    variant: str
    m: int
    r: float

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ParameterError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if not isinstance(self.m, int) or not 0 <= self.m <= M_MAX:
            raise ParameterError(f"m must be an integer in [0, {M_MAX}], got {self.m!r}")
        if not 0.0 < self.r <= R_MAX:
            raise ParameterError(f"r must lie in (0, {R_MAX}], got {self.r!r}")
        if self.variant == "ps" and self.m >= 1 and self.r <= R_MIN_PS:
            raise ParameterError(
                f"ps state with m >= 1 needs r > {R_MIN_PS} (state is not normalizable at r -> 0)"
            )


@dataclass(frozen=True)
class ReservoirSpec:
    """Thermal reservoir: mean photon number nbar and dimensionless time tau."""

    nbar: float
    tau: float

    def __post_init__(self):
        if self.nbar < 0.0:
            raise ParameterError(f"nbar must be >= 0, got {self.nbar!r}")
        if self.tau < 0.0:
            raise ParameterError(f"tau must be >= 0, got {self.tau!r}")


def reservoir_constants(res: ReservoirSpec) -> tuple[float, float]:
    """Return (T, Tbar) with T = 1 - e^{-2 tau} and Tbar = (1 + 2 nbar) T."""
    big_t = 1.0 - math.exp(-2.0 * res.tau)
    return big_t, (1.0 + 2.0 * res.nbar) * big_t


def normalization(spec: CompassStateSpec) -> float:
    """Normalization constant N of the compasslike state.

    1/N^2 is the squared norm of the unnormalized state, a sum of the two
    branch norms plus twice the real branch overlap.  Both pieces reduce to
    Legendre polynomials of hyperbolic arguments.
    """
    m, r = spec.m, spec.r
    c2 = math.cosh(2.0 * r)
    sq_c2 = math.sqrt(c2)
    fact_m = math.exp(log_factorial(m))
    if spec.variant == "pa":
        ch = math.cosh(r)
        cross = 2.0 / sq_c2 * (ch / sq_c2) ** m * fact_m * float(legendre(m, ch / sq_c2).real)
        diag = 2.0 * ch**m * fact_m * float(legendre(m, ch).real)
    else:
        sh = math.sinh(r)
        # cross term carries (-1)^m; the number-basis norm fixes the sign
        cross = (
            (-1.0) ** m
            * 2.0
            / sq_c2
            * (sh / sq_c2) ** m
            * fact_m
            * float(legendre(m, sh / sq_c2).real)
        )
        prod = (-1j * sh) ** m * legendre(m, 1j * sh)
        if abs(prod.imag) > _REALNESS_RTOL * max(1.0, abs(prod.real)):
            raise RealnessError(
                f"ps diagonal term (-i sinh r)^m P_m(i sinh r) has imaginary residue {prod.imag:g}"
            )
        diag = 2.0 * fact_m * float(prod.real)
    total = cross + diag
    if not total > 0.0 or not math.isfinite(total):
        raise ParameterError(f"non-normalizable state: 1/N^2 = {total!r} for {spec}")
    return total**-0.5


def params_from_json(text: str) -> tuple[CompassStateSpec, ReservoirSpec]:
    """Parse {"variant", "m", "r", "nbar", "tau"} into validated records."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParameterError(f"invalid parameter JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ParameterError("parameter JSON must be an object")
    try:
        spec = CompassStateSpec(
            variant=str(data["variant"]).lower(), m=int(data["m"]), r=float(data["r"])
        )
        res = ReservoirSpec(nbar=float(data.get("nbar", 0.0)), tau=float(data.get("tau", 0.0)))
    except KeyError as exc:
        raise ParameterError(f"missing parameter field {exc}") from exc
    return spec, res
