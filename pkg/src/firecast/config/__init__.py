"""Configuration module for firecast."""
