"""
Integration Tests
=================
Cross-module identities and desk-scale rate reproduction.
"""
