"""Secrecy analysis and energy-efficient power allocation for large-array MRT wiretap downlinks."""

from ._kernels import BACKEND
from .analytics import (
    MinPower,
    SecrecyPoint,
    asymptotic_legitimate_capacity,
    eavesdropper_gain_cdf,
    energy_efficiency,
    min_power_for_qos,
    outage_log_term,
    positive_secrecy_probability,
    saturation_capacity,
    secrecy_energy_efficiency,
    secrecy_outage_capacity,
    secrecy_outage_probability,
)
from .config import ConfigError, SolverSettings, SystemConfig, base_config, load_scenario, validate
from .optimizer import (
    InfeasibleError,
    PowerAllocationResult,
    dinkelbach_solve,
    dual_update,
    grid_search_oracle,
    inner_minimize,
    solve_kkt_stationarity,
)

__version__ = "0.1.0"
