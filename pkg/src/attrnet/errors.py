"""Exception types shared across the package."""


class AttrnetError(Exception):
    """Base class for all library errors."""


class ModelError(AttrnetError):
    """Invalid model input: broken metric, bad kernel, bad parameters."""


class SamplingError(AttrnetError):
    """A sampling precondition failed (empty oracle, budget too large, ...)."""


class DataError(AttrnetError):
    """Malformed or inconsistent data: files, shapes, label ranges."""


class ConvergenceError(AttrnetError):
    """An iterative numerical routine did not converge within its budget."""


class ComplexityError(AttrnetError):
    """Input exceeds a guard rail for an intentionally brute-force routine."""


class ConfigError(AttrnetError):
    """Bad or incomplete experiment configuration."""
