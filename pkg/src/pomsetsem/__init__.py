"""Pomset semantics with probability and nondeterminism."""
