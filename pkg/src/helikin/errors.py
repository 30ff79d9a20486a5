"""Shared exception types."""


class ConvergenceError(RuntimeError):
    """A numerical routine failed to meet its convergence target."""


class PatchDomainError(ValueError):
    """A momentum direction lies outside the validity of the requested gauge patch."""
