from .spectrum import (
    GRAVITY,
    SpectrumSpec,
    dispersion_wavenumber,
    discretize_spectrum,
    pm_spectrum,
)
from .solver import (
    FlumeConfig,
    FlumeState,
    dispersive_terms,
    hllc_flux,
    initial_state,
    reconstruct_interfaces,
    rk2_step,
    run_scenario,
    run_with_spectrum,
    stable_dt,
    synthesize_series,
    tke_step,
    wavemaker_source,
)

__all__ = [
    "GRAVITY",
    "SpectrumSpec",
    "dispersion_wavenumber",
    "discretize_spectrum",
    "pm_spectrum",
    "FlumeConfig",
    "FlumeState",
    "dispersive_terms",
    "hllc_flux",
    "initial_state",
    "reconstruct_interfaces",
    "rk2_step",
    "run_scenario",
    "run_with_spectrum",
    "stable_dt",
    "synthesize_series",
    "tke_step",
    "wavemaker_source",
]
