"""Unitary dilations of finite-dimensional quantum channels.

Equilibrating and catalytic dilations, thermal operations, fermionic
dilations of Schur multipliers, the dual-unitary correspondence and a
certificate-based classifier for the doubly-stochastic hierarchy.
"""
from . import channels, dual, hierarchy, matcore, schur, thermal, verify
from .channels import (ChannelChoi, Dilation, MixedUnitaryDecomposition, VerificationReport,
                       apply, channel_distance, channel_of_dilation, covariance_check,
                       fixed_point_check, from_kraus, is_doubly_stochastic)
from .dual import catalytic_to_dual, dual_to_catalytic, is_dual_unitary
from .errors import *  # noqa: F401,F403
from .hierarchy import HierarchyReport, Status, classify
from .schur import (SchurMatrix, build_schur_dilation, extremality_witness_search,
                    factorizable_decompose, gram_factorize, majorana_ops, schur_channel)
from .thermal import (emergent_hamiltonian, equilibrating_to_thermal, gibbs,
                      nonequilibrium_witness, robust_catalysis_reduce, thermal_operation_check)
from .verify import (catalytic_check, entropy_flow_check, equilibrating_check,
                     extract_mixed_unitary, multipartite_equilibrium_check,
                     nondegenerate_spectrum, structural_catalytic_check)

__version__ = "0.1.0"
