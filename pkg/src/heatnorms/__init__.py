"""Desk-scale verification of mixed-norm estimates for heat-type equations."""

from .constants import (beckner_A, beckner_constant, beta_fn, gamma_fn,
                        heat_lp_constant, heat_time_constant, riesz_factor,
                        ConstantValue)
from .exponents import ExponentTuple, admissibility, frac_exponents
from .grids import SpaceGrid, TimeGrid
from .kernels import (KernelSpec, heat_kernel, heat_time_norm, tail_fit,
                      transstable_density, transstable_kernel,
                      weighted_transstable, znorm_bound, self_similar_kernel)
from .norms import (MixedNormSpec, SampledField, grand_lebesgue_norm,
                    kernel_operator_bound, lp_norm, mixed_norm,
                    two_param_gls_norm)
from .operators import (ConvolutionPlan, SolutionField, cesaro_hardy, duhamel,
                        frac_duhamel, frac_evolve, heat_evolve,
                        riesz_potential, space_convolve, weighted_field)
from .testfunctions import (Gaussian, Indicator, PowerWeight,
                            SpaceTimeTestFunction, TestFunction,
                            anisotropic_dilate, closed_form_lp, dilate,
                            generalized_dilate, tensor)
from .verify import (GridProfile, RatioEnvelope, VerificationReport,
                     power_law_fit, run_suite, verify_decay, verify_gls,
                     verify_thm20a, verify_thm31, verify_united,
                     verify_weight, verify_young)

__version__ = "0.1.0"
