# -*- coding: utf-8 -*-
'''
spikingrl.utils.log_server_tornado
~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

Tornado log server receiving msgpack encoded log records from worker processes and
re-emitting them in the current process
'''

# Import Python libs
from __future__ import absolute_import
import asyncio
import logging
import threading
from collections import Counter

# Import 3rd-party libs
import msgpack
from tornado.ioloop import IOLoop
from tornado.tcpserver import TCPServer
from tornado.iostream import StreamClosedError

# Import spikingrl libs
from spikingrl.utils.log import TRACE

log = logging.getLogger(__name__)

READ_CHUNK = 4096
MAX_FRAME_BYTES = 1 << 20


class LogServer(TCPServer):
    '''
    Re-emits every record a worker sends through the logger it was created on.

    ``received`` counts the re-emitted records per worker address.
    '''

    def __init__(self, *args, **kwargs):
        super(LogServer, self).__init__(*args, **kwargs)
        self.received = Counter()

    def _reemit(self, record_dict, address):
        if not isinstance(record_dict, dict) or 'name' not in record_dict:
            log.warning('Dropping a malformed log frame from %s:%s', *address[:2])
            return
        record = logging.makeLogRecord(record_dict)
        self.received[address] += 1
        logging.getLogger(record.name).handle(record)

    async def handle_stream(self, stream, address):
        unpacker = msgpack.Unpacker(raw=False, max_buffer_size=MAX_FRAME_BYTES)
        while True:
            try:
                wire_bytes = await stream.read_bytes(READ_CHUNK, partial=True)
            except StreamClosedError:
                break
            try:
                unpacker.feed(wire_bytes)
                for record_dict in unpacker:
                    self._reemit(record_dict, address)
            except (msgpack.exceptions.BufferFull, msgpack.exceptions.ExtraData, ValueError) as exc:
                log.warning('Resetting the log stream from %s:%s after a bad frame: %s', address[0], address[1], exc)
                unpacker = msgpack.Unpacker(raw=False, max_buffer_size=MAX_FRAME_BYTES)
        log.log(TRACE, 'Worker %s:%s disconnected after %d records', address[0], address[1], self.received[address])


class LogServerHandle(object):
    '''
    A running log server; ``stop()`` shuts it down
    '''

    def __init__(self, port):
        self.port = port
        self.ready = threading.Event()
        self.io_loop = None
        self.server = None
        self.thread = None

    def stop(self, timeout=5):
        if self.io_loop is not None:
            self.io_loop.add_callback(self.io_loop.stop)
        if self.thread is not None:
            self.thread.join(timeout)
        log.debug('Log server on port %s stopped', self.port)

    def __enter__(self):
        return self

    def __exit__(self, *args):
        self.stop()


def log_server_tornado(log_server_port, timeout=5):
    '''
    Starts a log server in a daemon thread and waits until it listens
    '''
    handle = LogServerHandle(log_server_port)

    def process_logs(port):
        asyncio.set_event_loop(asyncio.new_event_loop())
        io_loop = IOLoop.current()
        server = LogServer()
        server.listen(port, address='127.0.0.1')
        handle.io_loop = io_loop
        handle.server = server
        handle.ready.set()
        try:
            io_loop.start()
        except KeyboardInterrupt:
            pass

        server.stop()
        io_loop.close(all_fds=True)

    process_queue_thread = threading.Thread(target=process_logs, args=(log_server_port,))
    process_queue_thread.daemon = True
    handle.thread = process_queue_thread
    process_queue_thread.start()
    if not handle.ready.wait(timeout):
        log.warning('The log server on port %s did not start within %s seconds', log_server_port, timeout)
    else:
        log.debug('Log server listening on 127.0.0.1:%s', log_server_port)
    return handle
