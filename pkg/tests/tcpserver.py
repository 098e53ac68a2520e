# Copyright (C) 2022 Ben Elliston
# Copyright (C) 2026 The equipass developers
#
# This file is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by
# the Free Software Foundation; either version 3 of the License, or
# (at your option) any later version.

"""A simple TCP server for testing remote input files."""

import socket
import socketserver
import time
from multiprocessing import Process

GROUP_FILE = b'group Z2 degree=2\n(0 1)\n'


class HTTP400Handler(socketserver.BaseRequestHandler):
    """A socket server that returns HTTP error 400."""

    def handle(self):
        """Send error 400 and quit."""
        if not self.request.recv(1024):
            return
        self.request.sendall(b'HTTP/1.1 400 Bad Request\r\n'
                             b'Content-Length: 0\r\n\r\n')


class GroupFileHandler(socketserver.BaseRequestHandler):
    """A socket server that serves a small group file."""

    def handle(self):
        """Send the group file and quit."""
        if not self.request.recv(1024):
            return
        self.request.sendall(b'HTTP/1.1 200 OK\r\n'
                             b'Content-Type: text/plain\r\n'
                             b'Content-Length: %d\r\n\r\n' % len(GROUP_FILE)
                             + GROUP_FILE)


class BlockingTCPHandler(socketserver.BaseRequestHandler):
    """A socket server that just blocks."""

    def handle(self):
        """Just block."""
        while True:
            time.sleep(60)


handlers = {'block': BlockingTCPHandler, 'http400': HTTP400Handler,
            'group': GroupFileHandler}


def func(host, port, action):
    """Create the server, binding to host and port."""
    socketserver.TCPServer.allow_reuse_address = True
    with socketserver.TCPServer((host, port), handlers[action]) as server:
        server.serve_forever()


def wait(port, attempts=50):
    """Wait until something listens on port."""
    for _ in range(attempts):
        try:
            with socket.create_connection(('localhost', port), timeout=1):
                return
        except OSError:
            time.sleep(0.1)


def run(port, action):
    """Start the TCP server."""
    proc = Process(target=func, args=('localhost', port, action))
    proc.start()
    if action != 'block':
        wait(port)
    else:
        time.sleep(0.5)
    return proc
