"""lshlab: locality-sensitive hashing on the Hamming cube.

Concrete hash families and their k-fold concatenation, exact noise-stability
analysis (with a log-convexity certificate for stability curves), closed-form
rho-parameter bounds, reproducible Monte Carlo sampling, and an
(r, c)-near-neighbor index planned from any family's sensitivity profile.
"""

from .points import Point, hamming
from .hashing import (
    HashFamily,
    HashFunction,
    SensitivityProfile,
    bit_sampling_family,
    bit_sampling_profile,
    collision_probability,
    exact_sensitivity,
    finite_family,
    minhash_family,
    power,
    trivial_family,
)
from .spectral import (
    FourierSpectrum,
    StabilityCurve,
    brute_force_stability,
    check_log_convexity,
    family_spectrum,
    fourier_spectrum,
    noise_stability_at_time,
    stability,
    stability_curve,
    stability_ratio,
)
from .sampling import (
    correlated_pair,
    jaccard_of_correlated_sets,
    mc_stability,
    tail_probabilities,
    verify_sandwich,
)
from .bounds import (
    ChernoffLedger,
    bound_table,
    chernoff_ledger,
    correction_scale,
    delta_choice,
    effective_exponents,
    im_rho,
    im_upper,
    ls_transfer,
    mnp_lower,
    rho_lower_bound,
)
from .annindex import NNIndex, build, plan, planted_experiment, query, stats

__version__ = "0.1.0"

__all__ = [
    "Point",
    "hamming",
    "HashFamily",
    "HashFunction",
    "SensitivityProfile",
    "bit_sampling_family",
    "bit_sampling_profile",
    "collision_probability",
    "exact_sensitivity",
    "finite_family",
    "minhash_family",
    "power",
    "trivial_family",
    "FourierSpectrum",
    "StabilityCurve",
    "brute_force_stability",
    "check_log_convexity",
    "family_spectrum",
    "fourier_spectrum",
    "noise_stability_at_time",
    "stability",
    "stability_curve",
    "stability_ratio",
    "correlated_pair",
    "jaccard_of_correlated_sets",
    "mc_stability",
    "tail_probabilities",
    "verify_sandwich",
    "ChernoffLedger",
    "bound_table",
    "chernoff_ledger",
    "correction_scale",
    "delta_choice",
    "effective_exponents",
    "im_rho",
    "im_upper",
    "ls_transfer",
    "mnp_lower",
    "rho_lower_bound",
    "NNIndex",
    "build",
    "plan",
    "planted_experiment",
    "query",
    "stats",
]
