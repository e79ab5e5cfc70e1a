# -*- coding: utf-8 -*-
'''
Spiking RL

Spiking neural networks with learnable temporal coders, trained by surrogate-gradient
BPTT and wired into DQN, DDPG, BCQ and behavioural cloning.
'''

# Import Python libs
import re

# Import spikingrl libs
from spikingrl.version import __version__

# Define __version_info__ attribute
VERSION_INFO_REGEX = re.compile(
    r'(?P<year>[\d]{4})\.(?P<major>[\d]{1,2})\.(?P<minor>[\d]{1,2})'
    r'(?:\.dev(?P<commits>[\d]+))?'
)
try:
    __version_info__ = tuple([int(p) for p in VERSION_INFO_REGEX.match(__version__).groups() if p])
except AttributeError:
    __version_info__ = (-1, -1, -1)
finally:
    del VERSION_INFO_REGEX
