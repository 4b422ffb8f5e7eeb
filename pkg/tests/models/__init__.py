"""Tests for models package."""