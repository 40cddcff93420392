"""Jacobi analysis on the weighted half-line and dynamics of the heat semigroup."""

from .dynamics import (DynamicsVerdict, ParabolicRegion, StripRegion, Verdict, classify,
                       dsw_pairing, eigenfunction_phi_z, in_parabolic_region, in_strip,
                       periodic_eigenvalues, theta_threshold, verify_eigen_residual)
from .errors import (AccuracyError, DomainError, InputError, JacobiError, ParameterError,
                     PoleError, RangeError, RegionError, SlitError)
from .grid import RadialFunction, SpectralFunction, indicator, make_grid
from .heat import (HeatQuery, heat_evolve, heat_kernel, heat_maximal, heat_multiplier,
                   log_heat_kernel, sharp_estimate_ratio)
from .measure import (LorentzIndex, density_A, distribution_function, lorentz_norm, lp_norm,
                      mu_integral, rearrangement)
from .special import (EvalRegimeReport, JacobiParams, apply_jacobi_operator, c_function,
                      complex_gamma, hyp2f1, jacobi_phi, loggamma, phi_values,
                      plancherel_density)
from .transform import (QuadratureConfig, convolve, forward_transform, inverse_transform,
                        transform, translate)

__version__ = "0.1.0"
