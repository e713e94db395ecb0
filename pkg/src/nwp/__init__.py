"""Nonspreading wave packets: construction, Hamiltonian decomposition, evolution, classical correspondence."""
from .classical import (
    PhasePoint,
    TrajectoryRecord,
    compare_classical_quantum,
    hc_vector_field,
    integrate_hc,
)
from .decomposition import (
    OperatorSpec,
    apply_operator,
    e_tilde,
    eigen_residual,
    full_hamiltonian,
    h_c,
    h_tilde,
    schrodinger_residual,
)
from .errors import ConfigError, InvariantError
from .grid import (
    Grid1D,
    WaveField,
    Window,
    apply_mask,
    centroid,
    interior_window,
    l2_norm,
    make_grid,
    mode_position,
    spatial_shift,
)
from .propagator import (
    EvolutionConfig,
    exact_evolve,
    infinitesimal_factor_check,
    initial_packet,
    product_formula_evolve,
    split_step_evolve,
)
from .scenarios import (
    Case,
    Constant,
    PiecewiseLinear,
    ScenarioParams,
    Sinusoid,
    alpha,
    build_packet,
    d0,
    d1,
    f_b,
    phi0,
    trajectory_d,
)
from .special import AiryEvalConfig, airy_ai, hermite_psi

__version__ = "0.1.0"
