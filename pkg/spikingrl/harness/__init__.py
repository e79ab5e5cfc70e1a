# -*- coding: utf-8 -*-
'''
spikingrl.harness
~~~~~~~~~~~~~~~~~

Experiment harness: configuration, training runs, checkpoints, results and the
``spiking-rl`` command
'''
