import socket

import pytest

from fnucis.appserver.config import AppConfig
from fnucis.appserver.server import AppServer
from fnucis.contracts import campus_doc
from fnucis.middleware.client import RpcClient
from fnucis.middleware.naming import start_registry


def free_port() -> int:
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


class AppStack:
    """Registry + application server on ephemeral ports, one temp store."""

    def __init__(self, tmp_path, **config_overrides):
        self.registry = start_registry("127.0.0.1", 0)
        defaults = dict(
            listen_host="127.0.0.1",
            listen_port=0,
            registry_host="127.0.0.1",
            registry_port=self.registry.port,
            db_dir=str(tmp_path / "store"),
            term="2024-1",
            fee_per_credit=40,
            pbkdf2_iters=400,  # fast hashes for tests
            bootstrap_user="root",
            bootstrap_password="root-pw",
        )
        defaults.update(config_overrides)
        self.config = AppConfig(**defaults)
        self.app = AppServer(self.config).start()
        self._clients = []

    def client(self) -> RpcClient:
        host, port = self.app.endpoint
        client = RpcClient(host, port, campus_doc(), timeout=10.0)
        self._clients.append(client)
        return client

    def call(self, client, object_name, method, args):
        interface = campus_doc().interface  # noqa: avoid shadow
        from fnucis.contracts import SERVICE_INTERFACES

        return client.invoke(object_name, SERVICE_INTERFACES[object_name], method, args)

    def stop(self):
        for client in self._clients:
            client.close()
        self.app.stop()
        self.registry.stop()


@pytest.fixture()
def app_stack(tmp_path):
    stack = AppStack(tmp_path)
    yield stack
    stack.stop()
