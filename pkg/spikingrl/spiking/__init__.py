# -*- coding: utf-8 -*-
'''
spikingrl.spiking
~~~~~~~~~~~~~~~~~

LIF neurons and spiking fully connected networks
'''

# Import spikingrl libs
from spikingrl.spiking.lif import (  # pylint: disable=unused-import
    LifParams, LifState, SpikeTrain, initial_state, lif_step, lif_integrate, psp_kernel
)
from spikingrl.spiking.network import (  # pylint: disable=unused-import
    OUTPUT_MODES, SpikingMlpConfig, SpikingMlp, forward_unroll, reset_state
)
