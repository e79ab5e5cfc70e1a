# -*- coding: utf-8 -*-
'''
spikingrl.version
~~~~~~~~~~~~~~~~~

Package version
'''

__version__ = '2024.1.0'
