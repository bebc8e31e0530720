"""Poisson processes of lambda-geodesic hyperplanes in hyperbolic space:
sampling, exact moment integrals, limit laws and fluctuation diagnostics."""

from .errors import DomainError, QuadratureError, UnsupportedDimensionError
from .hyperbolic import (
    DimensionConstants,
    LambdaGeometry,
    ModelConfig,
    ball_volume,
    intersection_volume,
    intersection_volume_asymptote,
    intersection_volume_bound,
    lambda_geometry,
    rho,
    rho_bounds,
    unit_ball_constants,
)
from .sampling import (
    HyperplaneCoord,
    ProcessSample,
    intensity_density,
    inverse_cdf,
    mean_count,
    read_sample_dump,
    sample_process,
    sample_zeta,
    write_sample_dump,
)
from .functionals import (
    SurfaceResult,
    berry_esseen_indicator,
    cumulant_integral,
    expected_surface_area,
    limit_profile,
    normalized_cumulant_limit,
    normalized_profile,
    simulate_surface,
    total_surface_area,
    variance,
    variance_order,
)
from .limitlaw import (
    LimitLawSpec,
    cdf_via_inversion,
    characteristic_function,
    levy_density,
    limit_cumulant,
    limit_law_spec,
    limit_scale_constant,
    sample_limit,
)
from .stats import (
    EmpiricalSummary,
    k_statistics,
    ks_distance,
    ks_two_sample,
    regime_report,
    wasserstein1,
)
from .render import render_disk

__version__ = "0.1.0"
