"""Tests for nn-core."""
