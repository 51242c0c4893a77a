"""HTTP service wrapping the engine."""
