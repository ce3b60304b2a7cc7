"""Laws of refracted Levy processes at an independent exponential time.

The refracted process drains an extra drift whenever it sits above a
level; its law at an exponential time (equivalently its resolvent
measure) is assembled from the Wiener-Hopf factors of the driving
process and verified against an independent Monte Carlo simulation.
"""

from .errors import (BracketError, DegenerateError, FitError,
                     GridMismatchError, IntegrationError, InversionError,
                     MassError, ModelSpecError, PoleError, RefractError,
                     RegularityError, SeamError)
from .grids import GridFunction, GridSpec
from .levy_models import (AdmissibilityReport, JumpSpec, LevyDensity,
                          LevySpec, MixtureTerm, VariationClass,
                          brownian_motion, bv_hyperexp, classify_and_admit,
                          cp_positive_drift_up_jumps, jump_diffusion,
                          laplace_exponent, laplace_exponent_derivative,
                          power_law_density, tempered_stable_ladder,
                          two_sided_bv_negative_drift,
                          two_sided_jump_diffusion)
from .roots import (QContext, RootSet, cramer_lundberg_roots, phi_root,
                    solve_context, varphi_root)
from .wiener_hopf import (ExtremaLaw, factor_inf, factor_sup, inf_law,
                          inf_law_cdf, sup_law)
from .kernels import (KernelSet, build_kernels, f1_eval, f2_eval,
                      kernel_property_report, kq_grid, pi1_density)
from .potential import (PotentialResult, RefractionProblem, atom_scan,
                        refracted_cdf, total_mass)
from .monte_carlo import SimConfig, SimResult, compare, simulate_u
from .approximation import ApproxSequence, build_stage, convergence_report

__version__ = "0.1.0"
