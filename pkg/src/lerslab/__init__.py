"""Loop-erased random surfaces on the cubical lattice.

Samples uniform spanning 2-trees of the cubical complex Q_n through the
dual spanning-tree coupling, tracks the surface bounded by the equatorial
loop while the Aldous-Broder walk runs, and fits the growth exponent of the
surface area.
"""

from lerslab.lattice import Chain1, Chain2, CubicalComplex, build_complex
from lerslab.dualgraph import DualGraph, build_dual
from lerslab.rng import RngStream, child_seed
from lerslab.lers import LersSample, sample_lers

__all__ = [
    "Chain1",
    "Chain2",
    "CubicalComplex",
    "DualGraph",
    "LersSample",
    "RngStream",
    "build_complex",
    "build_dual",
    "child_seed",
    "sample_lers",
]

__version__ = "0.1.0"
