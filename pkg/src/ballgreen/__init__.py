"""Green-function machinery for Delta u = g on the unit ball B^n (n > 2), zero boundary data,
and numerical certification of the operator norms of the absolute gradient kernel."""

__version__ = "0.1.0"
