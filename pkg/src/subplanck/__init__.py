"""Compasslike states, their Wigner functions, and thermal-channel decay."""

from .analysis import (
    DecayCurve,
    RelativeChange,
    TABLE_ROWS_DEFAULT,
    ThresholdRecord,
    central_tile_extent,
    decay_curve,
    decay_function,
    find_threshold,
    relative_change,
    relative_changes,
    table1,
)
from .channel import (
    TAU_MIN,
    ChannelCoefficients,
    coefficients,
    convolve_reference,
    evolved_pa_chess,
    evolved_pa_cross,
    evolved_ps_chess,
    evolved_ps_cross,
    evolved_total,
    thermal_wigner,
)
from .errors import (
    NoCrossingError,
    ParameterError,
    QuadratureError,
    RealnessError,
    StepControlError,
    SubplanckError,
    TruncationError,
    TruncationWarning,
)
from .fields import (
    GridSpec,
    WignerField,
    evaluate_field,
    export_field,
    import_json,
    integrate_field,
    parse_grid,
)
from .fock import (
    DensityMatrix,
    FockVector,
    build_compass_state,
    default_dim,
    displacement_matrix,
    evolve_density,
    thermal_density,
    wigner_from_density,
    wigner_from_state,
)
from .specialfn import hermite, hermite_scaled, legendre, log_factorial
from .states import (
    CompassStateSpec,
    ReservoirSpec,
    normalization,
    params_from_json,
    reservoir_constants,
)
from .wigner import (
    wigner_pa_chess,
    wigner_pa_cross,
    wigner_ps_chess,
    wigner_ps_cross,
    wigner_svs,
    wigner_total,
)

__version__ = "0.1.0"
