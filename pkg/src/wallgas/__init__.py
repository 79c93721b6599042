"""wallgas: equilibrium measures, energies, and large-deviation rate
functions of the hard-wall log-gas, with Monte Carlo and finite-n
orthogonal-polynomial oracles cross-checking every closed form."""

__version__ = "0.1.0"

from .density import (
    DensityEval,
    DensityForm,
    density_for,
    eval_density,
    integrate_density,
    log_moment,
    normalize_check,
    reflect_negative,
    second_moment,
)
from .edges import Regime, RegimeKind, SupportSolution, classify, solve_b
from .energy import (
    EnergyReport,
    RateCurve,
    RateKind,
    delta_e_closed,
    energy,
    energy_alpha0_closed,
    energy_fullline,
    left_rate,
    log_prob_estimate,
    phi_minus_closed,
    phi_plus_closed,
    rate_curve,
    right_rate,
    tail_coefficient,
    theta,
)
from .errors import (
    BracketFailure,
    OracleMismatch,
    PrecisionExhausted,
    QuadratureFailure,
    TuningFailure,
    WallgasError,
)
from .model import EdgePair, EnsembleParams, a_crit, a_crit_closed, a_crit_solved, b_crit, phi, psi
from .montecarlo import (
    GasChain,
    SpectralHistogram,
    gas_log_density,
    l1_distance,
    make_chain,
    metropolis_sweep,
    min_eigenvalue_samples,
    run_and_histogram,
)
from .orthopoly import (
    OrthoBasis,
    build_basis,
    convergence_study,
    density_mass,
    finite_n_density,
    half_line_moment,
)
from .potential import (
    AsymptoticConstants,
    EquilibriumReport,
    PotentialEval,
    asymptotic_constants,
    aux_measure_mass,
    cauchy_transform,
    cauchy_transform_quad,
    equilibrium_check,
    external_potential,
    log_potential,
    log_potential_quad,
    potential_for,
    robin_constant,
)

__all__ = [name for name in dir() if not name.startswith("_")]
