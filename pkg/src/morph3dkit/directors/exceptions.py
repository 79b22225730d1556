class InvalidConfig(Exception):
    """Exception raised for an invalid generator, stage or experiment configuration."""

    __module__ = "builtins"
    pass


class UsageError(Exception):
    """Exception raised for invalid command-line usage."""

    __module__ = "builtins"
    pass


class ModelFormatFailure(Exception):
    """Exception raised when a saved model container is unreadable or of the wrong kind or version."""

    __module__ = "builtins"
    pass
