"""Command-line experiments: finiteness, building, verify."""
