"""Deployment orchestration, seeding, smoke scenario, benchmarking, auditing."""
