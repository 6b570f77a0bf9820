"""Fixtures, documents, the claim registry, suites and the command line."""
