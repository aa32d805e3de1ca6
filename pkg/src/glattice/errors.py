class InputError(ValueError):
    """Malformed or mathematically invalid input."""


class ResourceError(RuntimeError):
    """A configured size bound would be exceeded."""


class NotEquivariantError(InputError):
    pass
