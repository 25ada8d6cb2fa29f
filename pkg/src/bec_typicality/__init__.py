"""
Typicality of interference between two uniformly sampled Bose condensate modes.

Submodules
----------
fock       Fock sector, sampling subspace, uniform state sampling
algebra    normal-ordered ladder polynomials, Wick products, exact traces
modes      plane-wave and Gaussian mode models and their kernels
analytics  closed-form sums, means and covariances
ensemble   Monte Carlo runs, fringe patterns, scaling scans, comparisons
cli        command-line front end
"""
__version__ = "0.1.0"

from .fock import (SubspaceError, SubspaceSpec, StateVector, make_subspace,
                   sample_state, sample_batch, estimate_moments, uniform_moment,
                   substream)
from .modes import (PlaneWaveModel, GaussianModel, plane_wave_kernel,
                    gaussian_kernel, kernel_for)
from .algebra import (OperatorPoly, normal_order_product, matrix_element,
                      wick_product, exact_mean_R, exact_ensemble_cov,
                      exact_quantum_cov_avg)
from .analytics import s_sums_exact, s_sums_closed, mean_R_closed
from .ensemble import (ExperimentConfig, StatReport, run_ensemble, closed_report,
                       exact_report, compare_reports, scaling_scan,
                       single_run_pattern)
