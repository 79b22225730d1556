class InvalidGeometry(Exception):
    """Exception raised when a geometry object breaks its construction invariants."""

    __module__ = "builtins"
    pass


class GridMismatch(Exception):
    """Exception raised when depth maps or models do not share one grid specification."""

    __module__ = "builtins"
    pass
