"""Lifespan functors, barcodes and persistent (co)homology of filtrations."""

__version__ = "0.1.0"
