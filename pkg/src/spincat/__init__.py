"""Spin cat states of N two-level atoms: Wigner functions, squeezing, thermal decoherence."""

from spincat.dynamics import (
    BathParams,
    CharacteristicTimes,
    EvolutionTrace,
    characteristic_times,
    coherence_analytic,
    energy,
    evolve,
    evolve_polar_cat,
    master_rhs,
    stationary_state,
    t_dec,
    t_diss,
    t_ncl,
    zero_temp_cascade,
)
from spincat.kernels import BACKEND
from spincat.specfun import HalfInt, spherical_harmonic, wigner3j
from spincat.squeezing import max_squeezing, squeezing_measure, squeezing_report
from spincat.states import (
    DensityMatrix,
    PureState,
    coherent_state,
    density_of,
    nonpolar_cat,
    polar_cat,
    spin_operators,
)
from spincat.wigner import (
    characteristic_matrix,
    default_grid,
    min_section,
    nonclassicality,
    product_rule_expectation,
    wigner_field,
)

__version__ = "0.1.0"
