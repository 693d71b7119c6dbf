"""Links of real quadrics, their simple polytopes and integer cohomology rings."""

__version__ = "0.1.0"
