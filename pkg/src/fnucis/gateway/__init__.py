"""Web tier: HTTP facade over the middleware servants, plus static assets."""

from fnucis.gateway.server import GatewayConfig, GatewayServer
