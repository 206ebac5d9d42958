"""Independent finite-difference solver for cross-validation."""

from .finite_difference import fd_rhs, fd_run

__all__ = ["fd_rhs", "fd_run"]
