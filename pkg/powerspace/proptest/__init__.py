"""Property suites, brute-force oracles and the seeded runner."""

from powerspace.proptest.runner import SuiteSummary, run_property, run_suite
from powerspace.proptest.suites import Property, properties, suite_names

__all__ = ["Property", "SuiteSummary", "properties", "run_property", "run_suite", "suite_names"]
