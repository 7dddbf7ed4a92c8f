"""
Equilibrating dilations are thermal operations
==============================================

Build a unitary that commutes with a product of two states, check that the
pair stays in equilibrium, then read the same dilation as an
energy-conserving interaction with a Gibbs bath.
"""
import numpy as np

from dilations import matcore as mc
from dilations.channels import Dilation, channel_of_dilation, covariance_check
from dilations.thermal import equilibrating_to_thermal, thermal_operation_check
from dilations.verify import commuting_unitary, equilibrating_check

rng = np.random.default_rng(0)

# two full-rank states with degenerate product spectrum, so the commuting
# unitary below has room to be non-trivial
omega_sys = np.diag([0.5, 0.3, 0.2])
omega_env = np.diag([0.6, 0.4])
U = commuting_unitary(np.kron(omega_sys, omega_env), rng)
dil = Dilation(U, omega_env, 3, 2)

rep = equilibrating_check(dil, omega_sys)
print("equilibrium passed:", rep.passed)
print("joint output equals the product input to", f"{rep.joint_product_residual:.1e}")
print("mutual information of the output:", f"{rep.mutual_info_out:.1e}")

# the channel is covariant under the modular flow omega_sys**(it)
cov = covariance_check(channel_of_dilation(dil), omega_sys)
print("covariance residual:", f"{cov.residuals['covariance']:.1e}")

# choose an inverse temperature; the Hamiltonians are -log(omega)/beta
beta = 1.5
h_sys, h_env, restricted = equilibrating_to_thermal(dil, omega_sys, beta)
th = thermal_operation_check(restricted, h_sys, h_env, beta)
print("thermal operation:", th.passed, {k: f"{v:.1e}" for k, v in th.residuals.items()})

# a Haar-random interaction almost never equilibrates
generic = Dilation(mc.haar_random_unitary(6, rng), omega_env, 3, 2)
print("random unitary equilibrates:", equilibrating_check(generic, omega_sys).passed)
