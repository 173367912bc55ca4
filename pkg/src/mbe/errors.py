"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """A precondition on user-supplied data failed (bad complex, map, levels...)."""


class InternalInvariantError(RuntimeError):
    """A mathematical invariant the code relies on was violated.

    This always indicates a bug (or corrupted state), never bad user input;
    the command line maps it to exit code 3.
    """
