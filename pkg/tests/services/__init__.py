"""Tests for services package."""