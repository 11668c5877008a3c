"""Service layer: runs pipelines and writes their artifacts."""
