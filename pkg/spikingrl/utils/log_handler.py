# -*- coding: utf-8 -*-
'''
spikingrl.utils.log_handler
~~~~~~~~~~~~~~~~~~~~~~~~~~~

Worker side of the log forwarding: records are queued by a handler and a daemon thread
ships them, msgpack encoded, to the parent's log server.
'''

# Import python libs
from __future__ import absolute_import
import queue
import socket
import logging
import threading
import logging.handlers

# Import 3rd-party libs
import msgpack

log = logging.getLogger(__name__)

QUEUE_SIZE = 100000


def record_to_dict(record, prefix=None):
    '''
    Serializable copy of ``record`` with its message rendered and exception text attached
    '''
    record_dict = dict(record.__dict__)
    message = record.getMessage()
    if prefix:
        message = '[{}] {}'.format(prefix, message)
    record_dict['msg'] = message
    record_dict['args'] = None
    if record.exc_info:
        record_dict['exc_text'] = logging.Formatter().formatException(record.exc_info)
    record_dict['exc_info'] = None
    record_dict.pop('stack_info', None)
    return record_dict


def process_queue(host, port, prefix, record_queue):
    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        sock.connect((host, port))
    except socket.error:
        sock.close()
        return

    while True:
        try:
            record = record_queue.get()
            if record is None:
                # A sentinel to stop processing the queue
                break
            sock.sendall(msgpack.packb(record_to_dict(record, prefix), use_bin_type=True, default=str))
        except (IOError, EOFError, KeyboardInterrupt, SystemExit):
            break
        except Exception as exc:  # pylint: disable=broad-except
            log.warning('An exception occurred in the log forwarding thread: %s', exc)
    sock.close()


class ForwardingHandler(logging.handlers.QueueHandler):
    '''
    Queue handler whose queue is drained by the forwarding thread
    '''

    def __init__(self, record_queue, thread):
        super(ForwardingHandler, self).__init__(record_queue)
        self.thread = thread

    def prepare(self, record):
        return record

    def close(self):
        try:
            self.queue.put_nowait(None)
        except queue.Full:
            pass
        self.thread.join(5)
        super(ForwardingHandler, self).close()


def setup_handler(port, prefix, level=logging.INFO, host='127.0.0.1'):
    '''
    Install a forwarding handler on the root logger, or return ``None`` when the log
    server cannot be reached
    '''
    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        sock.connect((host, port))
    except socket.error as exc:
        # Don't even bother if we can't connect
        log.warning('Cannot connect back to log server: %s', exc)
        return None
    finally:
        sock.close()

    record_queue = queue.Queue(QUEUE_SIZE)
    process_queue_thread = threading.Thread(target=process_queue, args=(host, port, prefix, record_queue))
    process_queue_thread.daemon = True
    process_queue_thread.start()
    handler = ForwardingHandler(record_queue, process_queue_thread)
    handler.setLevel(level)
    root = logging.getLogger()
    root.addHandler(handler)
    if root.level > level or root.level == logging.NOTSET:
        root.setLevel(level)
    return handler
