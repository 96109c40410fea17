"""Type-D decisions for conjugacy classes and twisted conjugacy classes."""

__version__ = "0.1.0"
