"""Quantum discord, entropic uncertainty relations with quantum memory, and
upper bounds on how discord can be shared among the parts of a state."""

from .bounds import (
    BoundReport,
    MultipartiteBoundReport,
    corollary_eq19_check,
    delta_eq6,
    four_partite_b_prime,
    hufan_bound,
    incompatibility_c,
    monogamy_form,
    multipartite_b,
    q_mu,
    theorem1_bounds,
    theorem2_check,
    theorem3_check,
    tripartite_lhs,
)
from .core import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    DensityMatrix,
    Observable,
    ProjectiveMeasurement,
    PureState,
    eig_hermitian,
    partial_trace,
    project_pure,
    tensor,
)
from .correlations import DiscordResult, bloch_measurement, classical_correlation, discord_one_sided, discord_oracle
from .entropy import (
    conditional_entropy,
    holevo_quantity,
    measurement_distribution,
    mutual_information,
    post_measurement_state,
    shannon_entropy,
    von_neumann_entropy,
)
from .states import (
    Family,
    StateFamilyPoint,
    make_gghz,
    make_ghz_w_mix,
    make_gw,
    make_werner_ghz,
    random_ginibre,
    random_haar_pure,
)

__version__ = "0.1.0"
