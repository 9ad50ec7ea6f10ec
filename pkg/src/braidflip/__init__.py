"""Pure-braid invariants from kinetic Delaunay flips and q-6j recoupling."""

__version__ = "0.1.0"
