"""Resolution limits and resource tradeoffs for cross-range ISAR super-resolution
imaging of orbiting targets."""

from .bounds import (
    BoundsInput,
    BoundsReport,
    SensitivityReport,
    compute_bounds,
    rayleigh,
    required_psnr,
    required_theta,
    srl_sensitivities,
    theta_bounds,
)
from .core import (
    ConfigError,
    DbValue,
    InfeasibleError,
    RadarParams,
    StationGeodetic,
    TimeWindow,
    db,
    linear,
)
from .link import LinkBudget, ResourceState, c_st, psnr, required_energy, required_pav
from .orbit import (
    ImagingGeometry,
    LosState,
    NoEffectiveRotation,
    OrbitalElements,
    PassWindow,
    ThetaPolynomialConstants,
    find_passes,
    img0_frame,
    imaging_geometry,
    los_state,
    parse_tle,
    theta_delta_closed_form,
    theta_delta_numeric,
)
from .scenario import ScenarioConfig, builtin_scenario, load_scenario, parse_scenario, serialize_scenario

__version__ = "0.1.0"
