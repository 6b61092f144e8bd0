"""Quantum, almost-quantum and min-tensor compatibility of noisy qubit identities."""

from ._kernels import BACKEND
from .almost_quantum import (
    AlmostQuantumDecomposition,
    BipartiteChannel,
    ProofFrame,
    almost_quantum_compatible,
    compose_decomposition,
    proof_frame,
    random_decomposition,
    singlet_channel,
    theorem2_harness,
)
from .channels import (
    PositiveUnitalMap,
    QubitChannelPT,
    choi,
    compose,
    identity_channel,
    is_cp,
    is_positive_unital,
    noisy_identity,
    transpose_map,
)
from .joint_maps import (
    BilinearJointMap,
    PositivityCertificate,
    certify_min_tensor_positivity,
    construct_min_tensor_joint,
    eval_product,
    joint_choi,
    marginals,
    min_tensor_compatible,
    singlet_phi,
    singlet_phi_map,
    uniqueness_probe,
)
from .lemmas import (
    AnticommutingSet,
    TripartiteDistribution,
    check_lemma2,
    clifford_bound,
    jm_unbiased,
    joint_povm_unbiased,
    tripartite_correlators,
)
from .pauli_core import HermitianOp2, eig2, is_effect, kron, min_eig
from .quantum_joint import (
    IncompatibleError,
    boundary_eta2,
    cloner_isometry,
    quantum_compatible,
    quantum_joint_channel,
)

__version__ = "0.1.0"
