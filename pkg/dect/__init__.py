# Don't manually change, let poetry-dynamic-versioning-plugin handle it.
__version__ = "0.0.0"

__all__ = [
    "ConfigError",
    "DectException",
    "DirectionSet",
    "EctConfig",
    "EctGrid",
    "EctMode",
    "GeometricComplex",
    "Normalization",
    "ShapeSpec",
    "compute_ect",
    "ect_hard",
    "ect_smooth",
    "ect_smooth_backward",
    "euler_characteristic",
    "finite_difference_oracle",
    "generate",
    "learn_directions",
    "load_complex",
    "normalize",
    "optimize_pointcloud",
    "uniform_directions",
    "validate",
    "write_ect",
]
from .complex import GeometricComplex, euler_characteristic, normalize, validate
from .directions import DirectionSet, uniform_directions
from .ect import EctConfig, EctGrid, EctMode, Normalization, compute_ect, ect_hard, ect_smooth
from .exceptions import ConfigError, DectException
from .formats import load_complex, write_ect
from .grad import ect_smooth_backward, finite_difference_oracle
from .optim import learn_directions, optimize_pointcloud
from .shapes import ShapeSpec, generate
