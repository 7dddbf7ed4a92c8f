"""
Placing channels in the doubly-stochastic hierarchy
===================================================

    MU  <  CAT  <  EQ_DS  <  F  <  DS

A class is marked CERTIFIED_IN only with a verified certificate. Failing to
be unital rules out every class at once.
"""
import numpy as np

from dilations import matcore as mc
from dilations.channels import (Dilation, MixedUnitaryDecomposition, amplitude_damping,
                                channel_of_dilation, unitary_channel)
from dilations.hierarchy import CLASSES, classify
from dilations.schur import build_schur_dilation, schur_channel


def show(name, rep):
    print(f"{name:28s}", "  ".join(f"{c}:{rep.status[c].value.split('_')[-1]:7s}" for c in CLASSES))


W = mc.haar_random_unitary(2, seed=3)
show("unitary", classify(unitary_channel(W), [MixedUnitaryDecomposition([1.0], [W])]))
show("amplitude damping 0.3", classify(amplitude_damping(0.3)))

X = np.eye(2)
show("dephasing (Schur, X = 1)", classify(schur_channel(X), [build_schur_dilation(X)[0]]))

# any unitary with a maximally mixed environment is strongly factorizable,
# but a random one is not catalytic
dil = Dilation(mc.haar_random_unitary(4, seed=4), np.eye(2) / 2, 2, 2)
show("random, maximally mixed env", classify(channel_of_dilation(dil), [dil]))
