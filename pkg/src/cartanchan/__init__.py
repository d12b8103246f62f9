"""Verification toolkit for SO(D)- and SP(D)-covariant quantum channels."""

from .basis import (
    CartanBasis,
    CartanInvolution,
    Kind,
    OperatorBasis,
    build_cartan_basis,
    cartan_involution,
    cartan_partition,
    commutation_audit,
    gellmann_basis,
    pauli_basis,
    symplectic_form,
)
from .channels import (
    CartanChannel,
    analytic_spectrum,
    apply_channel,
    choi_direct,
    choi_via_action,
    is_ccp,
    is_cp,
    is_ppt,
    kraus_from_choi,
    partial_transpose,
    qubit_hadamard_cp_check,
)
from .config import RunConfig
from .liealg import block_decompose, invariant_operators, projectors, structure_constants, verify_identities
from .regions import (
    cp_halfplanes,
    cp_region,
    extreme_ppt,
    intersect_halfplanes,
    ppt2_verify,
    ppt_halfplanes,
    ppt_region,
    web_region,
)

__version__ = "0.1.0"
