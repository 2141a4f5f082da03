"""wavecho: auditory-cortex-structured echo state networks for phase-resolved
shallow-water wave forecasting, with a 1D Boussinesq flume for generating the
wave data."""

from ._backend import USE_NUMBA, backend_name
from .topology import (
    ALL_CODES,
    Connectivity,
    NetworkCode,
    TopologySpec,
    assemble_combined,
    build_connectivity,
    build_input_matrix,
    build_random_connectivity,
    build_tonotopic_connectivity,
    parse_code,
    spectral_radius,
    spectral_scale,
)
from .reservoir import (
    ReservoirParams,
    ReservoirState,
    make_state,
    run_sequence,
    step_postsynaptic,
    step_presynaptic,
)
from .spectral import (
    SpectralFrame,
    incremental_update,
    inverse_transform,
    split_to_input,
    window_transform,
)
from .readout import (
    ReadoutState,
    batch_ridge,
    init_readout,
    predict_output,
    rls_downdate,
    rls_update,
)
from .series import GaugeSeries, load_gauge_csv, save_gauge_csv
from .forecaster import (
    PAPER_SEA_STATES,
    PARAMETER_GRID,
    ForecastConfig,
    PredictionReport,
    detect_troughs,
    evaluate,
    free_run,
    summarize,
    sweep,
    train,
)
from . import flume

__version__ = "0.1.0"
