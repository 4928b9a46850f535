"""Exception hierarchy shared by every module and mapped to CLI exit codes."""


class RaagCubeError(Exception):
    """Base class."""


class InputError(RaagCubeError, ValueError):
    """Malformed input: unknown vertex, bad incidence, wrong shape."""


class BoundExceeded(RaagCubeError):
    """A configured brute-force or size bound was exceeded."""


class PreconditionError(RaagCubeError):
    """A mathematical precondition of an operation does not hold."""


class ValidationError(RaagCubeError):
    """A constructed object failed its a-posteriori validation."""
