"""Domain and report models."""
