"""Delta-shock construction, verification and classification for 2x2
conservation laws, specialized to the Brio system."""

from .core import (
    Arc,
    ElementaryWave,
    FluxPair,
    Mollifier,
    RiemannData,
    ShockGraph,
    SingularSolution,
    State,
    TestFunction,
    WaveFan,
    brio_flux,
    canonical_mollifier,
    eval_flux,
    jacobian_eigen,
    polynomial_flux,
    reduced_brio_flux,
)

__version__ = "0.1.0"
