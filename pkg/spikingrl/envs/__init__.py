# -*- coding: utf-8 -*-
'''
spikingrl.envs
~~~~~~~~~~~~~~

Control tasks and offline datasets
'''

# Import spikingrl libs
from spikingrl.envs.base import Env, EnvSpec, StepResult  # pylint: disable=unused-import
from spikingrl.envs.registry import ENVIRONMENTS, get_spec, make_env  # pylint: disable=unused-import
from spikingrl.envs.dataset import (  # pylint: disable=unused-import
    Dataset, collect_dataset, read_dataset, write_dataset
)
