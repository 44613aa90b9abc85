"""Run the real server as a subprocess for protocol, e2e and crash tests."""

from __future__ import annotations

import socket
import subprocess
import sys
import time

import httpx


def free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


class ServerProcess:
    def __init__(self, store_dir, gold_dir=None, port=None, extra_args=()):
        self.port = port or free_port()
        self.url = f"http://127.0.0.1:{self.port}"
        command = [
            sys.executable,
            "-m",
            "nrts.cli",
            "serve",
            "--listen",
            f"127.0.0.1:{self.port}",
            "--store-dir",
            str(store_dir),
        ]
        if gold_dir is not None:
            command += ["--gold-dir", str(gold_dir)]
        command += list(extra_args)
        self.process = subprocess.Popen(
            command, stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL
        )
        self._wait_ready()

    def _wait_ready(self, timeout: float = 20.0) -> None:
        deadline = time.monotonic() + timeout
        probe = f"{self.url}/api/v1/sessions/{'a' * 26}/stats"
        while time.monotonic() < deadline:
            if self.process.poll() is not None:
                raise RuntimeError("server process exited during startup")
            try:
                httpx.get(probe, timeout=1.0)
                return
            except httpx.TransportError:
                time.sleep(0.05)
        self.stop()
        raise RuntimeError("server did not become ready in time")

    def kill(self) -> None:
        """SIGKILL: no shutdown hooks, simulating a crash."""
        self.process.kill()
        self.process.wait()

    def stop(self) -> None:
        if self.process.poll() is None:
            self.process.terminate()
            try:
                self.process.wait(timeout=10)
            except subprocess.TimeoutExpired:
                self.process.kill()
                self.process.wait()

    def __enter__(self) -> "ServerProcess":
        return self

    def __exit__(self, *exc_info) -> None:
        self.stop()
