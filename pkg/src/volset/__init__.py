"""Volume sets, wedge sets and Fourier decay of fractal point configurations."""
__version__ = "0.1.0"

from .algebra import cofactor_det3, decomposition_value, det, wedge_star
from .energy import EnergyReport, discrete_energy, is_adaptable, thicken
from .errors import (
    ConfigError,
    GeneratorError,
    InvalidInputError,
    ResourceError,
    SingularInputError,
    VolsetError,
)
from .scaling import (
    PowerLawFit,
    box_dimension,
    fit_power_law,
    fR_measure,
    fr_fit,
    smallness_fit,
    wedge_smallness,
)
from .setgen import (
    CantorSpec,
    CellMeasure,
    PointSet,
    annulus_filter,
    cantor_iterate,
    homogeneous_set,
    planar_set,
    point_mass,
    product_cantor,
    product_measure,
    sample_measure,
    sphere_measure,
    uniform_measure,
)
from .spectral import DecayProfile, decay_profile, mu_hat, salem_gap, sphere_transform
from .volumes import (
    VolumeSample,
    bilinear_sample,
    delta_separated_count,
    distinct_count,
    occupancy_measure,
    volume_sample,
    wedge_sample,
)
