"""Worker module initialization."""
