"""Tests for forecasting architectures."""
