"""effdom: computable elements, functions and complexity on effective domains."""

__version__ = "0.1.0"
