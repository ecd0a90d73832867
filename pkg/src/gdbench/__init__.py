"""Qubit noise modeling around generalized damping: channel construction,
robust T1/T2 estimation simulations, randomized-benchmarking observables,
and certified diamond-distance upper bounds."""

from gdbench.model import PerturbedGDParams, SpamParams, BlochGenerator
from gdbench.model import build_coefficient_matrix, bloch_generator, is_dissipator_psd
from gdbench.eigen import EigenSystem, eigensystem_exact, eigenvalues_approx
from gdbench.channels import (
    LiouvilleChannel,
    KrausSet,
    discrete_params,
    liouville_gd,
    kraus_gd,
    liouville_pgd,
    evolve_bloch,
)
from gdbench.estimation import (
    DecaySeries,
    FitResult,
    apply_spam,
    simulate_population_inversion,
    simulate_static_ramsey,
    simulate_avg_ramsey,
    fit_exponential,
    predicted_estimator_bias,
)
from gdbench.rb import (
    RBReport,
    rb_observables,
    ideal_predictions,
    perturbed_error_rate,
    esum_from_observables,
)
from gdbench.diamond import (
    BoundReport,
    UserCorrections,
    pauli_diamond,
    single_element_diamond,
    eps_gd_ub,
    bound_new,
    bound_robust,
    user_corrections,
    diamond_oracle,
    bound_report,
)

__version__ = "0.1.0"
