"""Exception hierarchy shared by every module."""


class TspliftError(Exception):
    """Base class for all package errors."""


class PreconditionError(TspliftError, ValueError):
    """An argument violates an operation's documented domain."""


class ResourceCapError(TspliftError):
    """A dense computation would exceed the configured size cap."""


class SmoothingInfeasibleError(TspliftError):
    """The equalization system for the smoothing combination has no convex solution."""


class MalformedProgramError(TspliftError, ValueError):
    """A linear program has inconsistent row lengths or masks."""


class UnboundedRayError(TspliftError):
    """A ray maximization over Q_k came back unbounded (Q_k is bounded, so this is a bug)."""
