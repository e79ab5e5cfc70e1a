# -*- coding: utf-8 -*-
'''
spikingrl.utils
~~~~~~~~~~~~~~~

Process helpers used by the experiment harness
'''

# Import Python libs
from __future__ import absolute_import
import os
import sys
import socket
import logging
from collections import namedtuple
from operator import itemgetter
try:
    import resource
except ImportError:
    resource = None

# Import 3rd party libs
import psutil
try:
    import setproctitle
    HAS_SETPROCTITLE = True
except ImportError:
    HAS_SETPROCTITLE = False

log = logging.getLogger(__name__)


def set_proc_title(title):
    if HAS_SETPROCTITLE is False:
        return
    setproctitle.setproctitle('[{}] - {}'.format(title, setproctitle.getproctitle()))


def get_unused_localhost_port():
    '''
    Return a random unused port on localhost
    '''
    usock = socket.socket(family=socket.AF_INET, type=socket.SOCK_STREAM)
    usock.bind(('127.0.0.1', 0))
    port = usock.getsockname()[1]
    usock.close()
    return port


def cpu_count():
    '''
    Logical CPUs available to this process
    '''
    try:
        return len(psutil.Process().cpu_affinity())
    except (AttributeError, psutil.Error):
        return psutil.cpu_count() or 1


def pool_size(tasks, workers=None):
    '''
    Bounded worker count: ``min(tasks, workers or cores)``, at least one
    '''
    return max(1, min(int(tasks), int(workers) if workers else cpu_count()))


class ProcessStats(namedtuple('ProcessStats', ('pid', 'rss', 'peak_rss', 'cpu_user', 'cpu_system'))):
    __slots__ = ()

    pid = property(itemgetter(0))
    rss = property(itemgetter(1), doc='Resident set size in bytes')
    peak_rss = property(itemgetter(2), doc='Peak resident set size in bytes, where the platform reports it')
    cpu_user = property(itemgetter(3))
    cpu_system = property(itemgetter(4))

    def describe(self):
        return 'rss {:.1f} MiB, peak {:.1f} MiB, cpu user {:.1f}s system {:.1f}s'.format(
            self.rss / 1048576.0, self.peak_rss / 1048576.0, self.cpu_user, self.cpu_system
        )


def process_stats(pid=None):
    '''
    Memory and CPU usage of a process, the current one by default
    '''
    proc = psutil.Process(pid or os.getpid())
    with proc.oneshot():
        memory = proc.memory_info()
        times = proc.cpu_times()
    peak = getattr(memory, 'peak_wset', None) or memory.rss
    if proc.pid == os.getpid() and sys.platform.startswith('linux'):
        # ru_maxrss is reported in KiB on Linux
        peak = max(peak, resource.getrusage(resource.RUSAGE_SELF).ru_maxrss * 1024)
    return ProcessStats(proc.pid, memory.rss, peak, times.user, times.system)
