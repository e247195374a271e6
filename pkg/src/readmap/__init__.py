"""readmap: build and serve knowledge-domain maps from co-readership data."""

__version__ = "0.1.0"
