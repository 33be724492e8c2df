"""Image output and trend summaries."""
