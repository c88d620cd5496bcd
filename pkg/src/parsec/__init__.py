"""Partial-correlation screening for sample-starved, high-dimensional data."""

from .core import DegenerateInputError, ScaledPCorMatrix, parsec_base, parsec_scalable, symmetrize
from .edges import EdgeSet
from .estimation import EdgeStructure, PrecisionEstimate, concord_estimate, gaussian_estimate, mvp_weights
from .inference import ErrorControlSpec, pvalue, spherical_cap_p0
from .ingest import DataMatrix, load_matrix, write_edges
from .pcs_hub import HubPCorMatrix, pcs_hub_matrix
from .screening import ScreenResult, screen
from .uscore import UScoreMatrix, uscores

__version__ = "0.1.0"
