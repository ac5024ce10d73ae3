"""czkit: spectral toolkit for parabolic Fourier-multiplier equations.

Pieces: order-adapted space-time partition filtrations (`partitions`),
time-measurable symbol families with admissibility checks (`symbols`),
kernel evaluation and kernel-inequality verification (`kernels`), the
exact-in-time spectral solution operators (`solver`), and mixed-norm
ensemble estimate experiments (`estimates`).  The `czkit` command line
wires JSON configs to all of it.
"""

from .estimates import (
    EnsembleSpec,
    MixedNormSpec,
    apriori_ratio,
    g_l2_bound,
    generate_ensemble,
    mixed_norm,
    resolvent_bounds,
    weak11_check,
)
from .grid import SpaceTimeGrid, make_grid
from .kernels import (
    KernelSlice,
    assumption1_sweep,
    hormander_Q,
    kernel_slice,
    l1_norm,
    moment,
    moment_power_law,
    operator_slice_norm,
    opnorm_power_law,
    time_integral,
)
from .partitions import Box, Cube, Filtration, GammaValue, LevelState, TimeLevel
from .report import EstimateReport
from .solver import (
    GridFunction,
    apply_A,
    apply_G,
    forward_apply,
    frac_laplacian,
    solve_resolvent,
)
from .symbols import (
    SymbolError,
    SymbolSpec,
    TimeDomainError,
    compose,
    eval_symbol,
    make_fractional,
    make_levy,
    make_poly2m,
    make_scaled,
    verify_conditions,
)

__version__ = "0.1.0"
CONFIG_SCHEMA_VERSION = 1
