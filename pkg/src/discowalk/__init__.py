"""Universal computation by a walker switched through weighted rail graphs."""

from .graph import (
    WeightedGraph,
    adjacency_matrix,
    christandl_chain,
    evolve,
    spectrum,
    transfer_amplitude,
    xy_single_excitation_block,
)
from .kernels import BACKEND

__version__ = "0.1.0"
