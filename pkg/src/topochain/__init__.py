"""topochain: topological edge-state storage and adiabatic transfer in
1D qubit chains (SSH, Rice-Mele, trimer Rice-Mele, AAH), with the
effective Landau-Zener reduction and flux-qubit circuit quantization."""

__version__ = "0.1.0"

from .errors import (
    IntegrationError,
    InvalidDimensionError,
    InvalidParameterError,
    NumericError,
    PhaseDomainError,
    SchemaError,
    TopochainError,
)
from .models import (
    ChainHamiltonian,
    DisorderSpec,
    FunctionSpec,
    Schedule,
    apply_disorder,
    bell_transfer_schedule,
    build_aah,
    build_rice_mele,
    build_ssh,
    build_trimer,
    optimized_schedule,
    pump_schedule,
    sample_schedule,
)
from .spectra import (
    EdgeStatePair,
    Spectrum,
    SpectrumTrace,
    TrimerEdgeStates,
    analytic_edge_states,
    edge_weight,
    eigendecompose,
    instantaneous_spectrum,
    localization_length,
    trimer_edge_states,
)
from .dynamics import (
    HamiltonianProvider,
    IntegratorConfig,
    Trajectory,
    basis_state,
    evolve,
    pump,
    quench,
    sigma_z,
    transfer_fidelity,
)
from .effective import (
    LZPath,
    PathClass,
    TwoLevelSystem,
    classify_path,
    compare_reduction,
    lz_eigen,
    lz_evolve,
    path_c_frame,
    path_c_hamiltonian,
    reduce_rm,
    reduce_trimer,
    reduction_report,
)
from .couplings import (
    EffectiveCoupling,
    ModulationSpec,
    bessel_j,
    bessel_jn,
    effective_coupling_identical,
    effective_coupling_matched,
)
from .fluxcircuit import (
    FluxQubitSpec,
    QubitCharacter,
    build_charge_hamiltonian,
    coupling_elements,
    d_hamiltonian_d_feps,
    persistent_currents,
    qubit_gap,
    qubit_levels,
)
