"""
E2E Tests
=========
Complete command-line workflows.
"""
