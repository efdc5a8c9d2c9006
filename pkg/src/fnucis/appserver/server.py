"""Application server: owns the store, hosts the servants, registers names.

All mutating requests funnel through one writer lane (a process-wide lock
around exactly one store transaction); reads run concurrently against the
committed view. Domain errors roll the transaction back and cross the wire
as error replies carrying the same stable code.
"""

from __future__ import annotations

import contextlib
import logging
import threading

from fnucis.appserver.auth import Authenticator, SessionStore, make_credential
from fnucis.appserver.config import AppConfig
from fnucis.appserver.mapping import StoreState
from fnucis.appserver.servants import (
    AdmissionsServant,
    AuthServant,
    DirectoryServant,
    EnrollmentServant,
    FinanceServant,
    RecordsServant,
    ReportingServant,
)
from fnucis.contracts import SERVICE_INTERFACES, campus_doc
from fnucis.domain.errors import DomainError
from fnucis.domain.model import Contact, StaffRecord
from fnucis.domain.ops import CampusOps
from fnucis.middleware.errors import RemoteCallError
from fnucis.middleware.naming import bind
from fnucis.middleware.server import RpcServer, Servant
from fnucis.storage.engine import open_store

log = logging.getLogger(__name__)


class AppRuntime:
    """Shared plumbing handed to every servant."""

    def __init__(self, store, config: AppConfig):
        self.store = store
        self.config = config
        self.domain_config = config.domain_config()
        self.current_term = config.current_term()
        self.pbkdf2_iters = config.pbkdf2_iters
        self.auth = Authenticator(SessionStore(config.token_ttl_hours), config.pbkdf2_iters)
        self._write_lock = threading.Lock()

    @contextlib.contextmanager
    def reads(self):
        """Committed-view operations; domain errors become error replies."""
        try:
            yield CampusOps(StoreState(self.store), self.domain_config)
        except DomainError as exc:
            raise RemoteCallError(exc.code, exc.message) from exc

    @contextlib.contextmanager
    def writes(self):
        """One store transaction on the single writer lane."""
        with self._write_lock:
            txn = self.store.begin()
            try:
                yield CampusOps(StoreState(txn), self.domain_config)
            except DomainError as exc:
                txn.rollback()
                raise RemoteCallError(exc.code, exc.message) from exc
            except BaseException:
                txn.rollback()
                raise
            else:
                txn.commit()


class AppServer:
    """Running application tier; start() binds servants into the registry."""

    def __init__(self, config: AppConfig):
        self.config = config
        self.store = None
        self.runtime: AppRuntime | None = None
        self.rpc: RpcServer | None = None

    def start(self, register: bool = True) -> "AppServer":
        self.store = open_store(self.config.db_dir)
        try:
            self.runtime = AppRuntime(self.store, self.config)
            self._bootstrap_admin()
            doc = campus_doc()
            rt = self.runtime
            impls = {
                "auth": AuthServant(rt),
                "admissions": AdmissionsServant(rt),
                "enrollment": EnrollmentServant(rt),
                "records": RecordsServant(rt),
                "finance": FinanceServant(rt),
                "reporting": ReportingServant(rt),
                "directory": DirectoryServant(rt),
            }
            servants = {name: Servant(SERVICE_INTERFACES[name], impl) for name, impl in impls.items()}
            self.rpc = RpcServer(self.config.listen_host, self.config.listen_port, doc, servants)
            if register:
                registry = (self.config.registry_host, self.config.registry_port)
                for name in servants:
                    bind(registry, name, self.rpc.ref(name))
        except BaseException:
            self.stop()
            raise
        log.info("application server on %s:%s (store %s)", self.config.listen_host,
                 self.endpoint[1], self.config.db_dir)
        return self

    def _bootstrap_admin(self) -> None:
        """An empty store gets one administration account so seeding can start."""
        assert self.store is not None and self.runtime is not None
        if self.store.scan("cred"):
            return
        with self.runtime.writes() as ops:
            user = self.config.bootstrap_user
            ops.state.put("staff", user,
                          StaffRecord(user, "Bootstrap Administrator", Contact(), "academic_services"))
            ops.state.put("cred", user,
                          make_credential(user, user, "academic_services",
                                          self.config.bootstrap_password, self.config.pbkdf2_iters))

    @property
    def endpoint(self) -> tuple[str, int]:
        assert self.rpc is not None
        return self.rpc.endpoint

    def stop(self) -> None:
        if self.rpc is not None:
            self.rpc.stop()
            self.rpc = None
        if self.store is not None:
            self.store.close()
            self.store = None
