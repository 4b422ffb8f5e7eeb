"""Utility modules for firecast."""
