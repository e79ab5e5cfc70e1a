# -*- coding: utf-8 -*-
'''
spikingrl.fixtures
~~~~~~~~~~~~~~~~~~

pytest plugin with the spikingrl fixtures and helpers
'''
