"""Campus information system: middleware, tiers, and deployment tooling."""

__version__ = "0.1.0"
