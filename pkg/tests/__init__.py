"""
Test Suite
==========
Organized test structure for modspace.

Structure:
- unit/: Unit tests for individual components
- integration/: Cross-module checks and rate reproduction
- e2e/: Command-line workflows through click's CliRunner
"""
