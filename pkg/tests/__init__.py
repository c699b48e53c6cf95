"""
Tests package initialization.

Repository-level tests for settings, logging and the run configuration.
"""
