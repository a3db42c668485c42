"""Test package for subdd."""
