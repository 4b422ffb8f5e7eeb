"""Tests for sample sources."""
