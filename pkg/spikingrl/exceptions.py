# -*- coding: utf-8 -*-
'''
spikingrl.exceptions
~~~~~~~~~~~~~~~~~~~~

Exceptions raised across the package. The CLI maps them onto exit codes.
'''


class SpikingRLError(Exception):
    '''
    Base class for every error raised by spikingrl
    '''


class DimensionError(SpikingRLError, ValueError):
    '''
    Raised when tensor shapes do not agree
    '''


class ContractError(SpikingRLError, RuntimeError):
    '''
    Raised when a documented precondition of an operation is not met
    '''


class InputError(SpikingRLError, ValueError):
    '''
    Raised on non-finite input data
    '''


class DomainError(SpikingRLError, ValueError):
    '''
    Raised when a parameter lies outside of its mathematical domain
    '''


class DatasetError(SpikingRLError, IOError):
    '''
    Raised when a dataset or checkpoint file is missing or malformed
    '''


class InvariantViolation(SpikingRLError, AssertionError):
    '''
    Raised when an internal invariant stops holding during a run
    '''


class UsageError(SpikingRLError):
    '''
    Raised on invalid run configuration.

    ``diagnostics`` holds one ``field: message`` string per offending field.
    '''

    def __init__(self, message, diagnostics=None):
        self.diagnostics = list(diagnostics or [])
        if self.diagnostics:
            message = '{}:\n  {}'.format(message, '\n  '.join(self.diagnostics))
        super(UsageError, self).__init__(message)
