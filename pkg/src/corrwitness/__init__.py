"""Open-system trace-distance dynamics with correlated initial states."""

from ._accel import USE_NUMBA
from .dynamics import (
    Evolution,
    TimeGrid,
    Trajectory,
    distance_trajectory,
    evolve_total,
    reduced_state_at,
    sigma_rate,
)
from .errors import (
    BoundViolation,
    ConvergenceFailure,
    CorrWitnessError,
    DimensionMismatch,
    DimensionTooLarge,
    InvalidAmplitudes,
    InvalidState,
    NotHermitian,
    ZeroVector,
)
from .linalg import Propagator, Spectrum, expm_propagator, hermitian_eig
from .models import (
    CnotScenario,
    SpinBathScenario,
    cnot_classical_pair,
    cnot_pair,
    spin_bath_analytic,
    spin_bath_pair,
)
from .states import (
    BipartiteState,
    DensityMatrix,
    from_pure,
    partial_trace_env,
    partial_trace_sys,
    product,
    product_of_marginals,
    random_density,
    random_pure,
    trace_distance,
)
from .witness import (
    BoundSet,
    WitnessReport,
    analyze,
    bound_set,
    correlation_measure,
    triangle_bound,
    inaccessible_information,
)

__version__ = "0.1.0"
