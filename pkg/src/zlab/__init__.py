"""Computational experiments on the duality between primes and zeta zeros."""
from .adelic import (
    character_triviality_check,
    g_from_l_factor,
    local_l_factor,
    partial_fractions,
    principal_part,
)
from .duality import (
    best_polarity_match,
    detect_peaks,
    match_peaks,
    primes_to_zeros_sum,
    zeros_to_primes_sum,
)
from .errors import ComputationError, DomainError, ParseError, PoleError, ZlabError
from .explicit_formula import chebyshev_psi, landau_sum, psi_explicit, von_mangoldt
from .prime_poset import (
    descendants_of_dilation,
    poset_graph,
    poset_parents,
    pratt_tree,
)
from .primes import factorize, is_prime
from .spectrum_stats import (
    DilationParams,
    expected_density,
    fractional_parts,
    g_alpha_closed,
    g_alpha_series,
    histogram,
    ks_statistic,
    run_dilation_experiment,
)
from .zeta_core import (
    ZeroList,
    count_check,
    find_zeros,
    ingest_zeros,
    rs_theta,
    rs_z,
    zeta_alternating,
)

__version__ = "0.1.0"
