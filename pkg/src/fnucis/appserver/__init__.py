"""Application-server tier: servants, sessions, per-request transactions."""

from fnucis.appserver.config import AppConfig
from fnucis.appserver.server import AppServer
