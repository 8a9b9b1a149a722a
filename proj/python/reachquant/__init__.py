"""Remote state estimation over a finite-rate channel.

Thin wrapper around the compiled core: zonotope reachability, observer
certificate verification, the two dynamic quantization schemes and the
closed-loop simulation loop.
"""

from ._core import (
    BoundsConfig,
    CertificateError,
    CertificateReport,
    ConfigError,
    DecodedPacket,
    DecoderRange,
    EncodedPacket,
    ErrorBounds,
    ExperimentConfig,
    FeasibilityReport,
    GrowthBound,
    Hyperrect,
    InfeasibleError,
    Mat,
    ObserverCertificate,
    ObserverGains,
    PlantModel,
    QuantizerConfig,
    QuantizerOverflow,
    QuantizerState,
    ReachParams,
    SchemeKind,
    SignalSpec,
    SimOptions,
    SimTrace,
    SteadyState,
    Transmission,
    Zonotope,
    __version__,
    beta_inflation,
    compare_schemes,
    contains,
    decode,
    derive_gains,
    encode,
    entrywise_abs,
    feasibility_norm,
    feasibility_set,
    induced_inf_norm,
    inf_norm,
    input_error_inflation,
    interval_hull,
    linear_map,
    mat_exp,
    max_col_sum_norm,
    max_qerror_step,
    minkowski_sum,
    norm_based_update,
    pack_indices,
    payload_bits,
    rk4_step,
    run_closed_loop,
    scheme_name,
    set_based_update,
    spectral_radius_nonneg,
    steady_state_metrics,
    symmetric_eigenvalues,
    terminal_reach_overapprox,
    to_zonotope,
    verify_certificate,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
