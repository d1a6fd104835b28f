"""Free-fermion dephasing dynamics and Hubbard evolution with imaginary
on-site interactions, sampled through a stochastic mixed-unitary channel.

Layering, bottom up:

* lattice    - bipartite hopping graphs and their validation
* fock       - dense many-body references (spinful Hamiltonians, Lindbladians)
* slater     - free-fermion states and single-step matrices
* channel    - stochastic trajectory sampling and its exact channel average
* duality    - the map between dephasing evolution and Hubbard amplitudes
* landscape  - complex-coupling diagnostics (torus chart, growth, norm bounds)
* cli        - config-driven experiment runner writing CSV + manifest
"""

from .channel import (
    AmplitudeEstimate,
    ChannelPlan,
    SignString,
    averaged_step_superop,
    evolve_trajectory,
    hoeffding_bound,
    hoeffding_samples,
    monte_carlo_estimate,
    observable_range,
    sample_signs,
    trajectory_rng,
)
from .duality import (
    DualityMap,
    HubbardRequest,
    dual_hamiltonian,
    exact_wavefunction_matrix,
    gauge_phase,
    simulate_hubbard_wavefunction,
    simulate_wavefunction,
    verify_duality_exact,
)
from .errors import (
    BipartitenessError,
    ConfigError,
    DegenerateStateError,
    DephasimError,
    DomainError,
    ExperimentConfigError,
    InvalidHoppingError,
    OverflowGuardError,
    SectorError,
    ShapeError,
    SizeError,
)
from .fock import (
    DenseOperator,
    DenseState,
    SpinfulBasis,
    VectorizedBasis,
    amplitude_from_state,
    basis_state,
    build_generalized_hubbard,
    build_lindbladian_superop,
    evolve_dense,
    evolve_superop,
    propagator,
    pt_spectrum_check,
    symmetry_generators,
    symmetry_report,
)
from .landscape import (
    ComplexCoupling,
    ProbeResult,
    ProbeRow,
    TorusPoint,
    coupling_from_torus,
    holder_chain_bound,
    interaction_angle,
    negate_hopping_gauge_check,
    similarity_trajectory,
    spectral_norm_bound,
    step_norm_bounds,
    torus_coords,
    variance_probe,
)
from .lattice import (
    BipartiteLattice,
    ValidationReport,
    build_lattice,
    validate_bipartite,
)
from .slater import (
    ModeMatrix,
    SlaterState,
    apply_mode_matrix,
    dephase_step,
    hopping_step,
    init_slater,
    overlap,
    pair_amplitude,
)

__all__ = [
    "AmplitudeEstimate",
    "BipartiteLattice",
    "BipartitenessError",
    "ChannelPlan",
    "ComplexCoupling",
    "ConfigError",
    "DegenerateStateError",
    "DenseOperator",
    "DenseState",
    "DephasimError",
    "DomainError",
    "DualityMap",
    "ExperimentConfigError",
    "HubbardRequest",
    "InvalidHoppingError",
    "ModeMatrix",
    "OverflowGuardError",
    "ProbeResult",
    "ProbeRow",
    "SectorError",
    "ShapeError",
    "SignString",
    "SizeError",
    "SlaterState",
    "SpinfulBasis",
    "TorusPoint",
    "ValidationReport",
    "VectorizedBasis",
    "amplitude_from_state",
    "apply_mode_matrix",
    "averaged_step_superop",
    "basis_state",
    "build_generalized_hubbard",
    "build_lattice",
    "build_lindbladian_superop",
    "coupling_from_torus",
    "dephase_step",
    "dual_hamiltonian",
    "evolve_dense",
    "evolve_superop",
    "evolve_trajectory",
    "exact_wavefunction_matrix",
    "gauge_phase",
    "hoeffding_bound",
    "hoeffding_samples",
    "holder_chain_bound",
    "hopping_step",
    "init_slater",
    "interaction_angle",
    "monte_carlo_estimate",
    "negate_hopping_gauge_check",
    "observable_range",
    "overlap",
    "pair_amplitude",
    "propagator",
    "pt_spectrum_check",
    "sample_signs",
    "similarity_trajectory",
    "simulate_hubbard_wavefunction",
    "simulate_wavefunction",
    "spectral_norm_bound",
    "step_norm_bounds",
    "symmetry_generators",
    "symmetry_report",
    "torus_coords",
    "trajectory_rng",
    "validate_bipartite",
    "variance_probe",
    "verify_duality_exact",
]
