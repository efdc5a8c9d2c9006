import pytest

from fnucis.middleware.errors import ConnectFailedError, NotBoundError
from fnucis.middleware.naming import bind, resolve, start_registry
from fnucis.middleware.wire import ObjectRef


@pytest.fixture()
def registry():
    srv = start_registry("127.0.0.1", 0)
    yield srv
    srv.stop()


def test_resolve_after_bind(registry):
    target = ObjectRef("127.0.0.1", 4321, "enrollment", "Enrollment")
    bind(registry.endpoint, "enrollment", target)
    assert resolve(registry.endpoint, "enrollment") == target


def test_resolve_unknown_name(registry):
    with pytest.raises(NotBoundError):
        resolve(registry.endpoint, "ghost")


def test_bind_overwrites(registry):
    first = ObjectRef("127.0.0.1", 1111, "svc", "I")
    second = ObjectRef("127.0.0.1", 2222, "svc", "I")
    bind(registry.endpoint, "svc", first)
    bind(registry.endpoint, "svc", second)
    assert resolve(registry.endpoint, "svc") == second


def test_unreachable_registry():
    with pytest.raises(ConnectFailedError):
        resolve(("127.0.0.1", 1), "anything", timeout=0.5)
