class FolError(Exception):
    """Base class for every error raised by folmt."""


class ParseError(FolError):
    def __init__(self, message: str, pos: int | None = None):
        self.pos = pos
        super().__init__(message if pos is None else f"{message} at offset {pos}")


class UnknownSymbolError(FolError):
    pass


class ArityError(FolError):
    pass


class PreconditionError(FolError):
    """An operation was called outside the fragment it is defined on."""


class ModelError(FolError):
    """A model table is partial, out of range, or otherwise malformed."""


class ModelMalformed(FolError):
    """Solution extraction hit a model that does not satisfy the encoding."""


class CapExceeded(FolError):
    pass


class TotalityError(FolError):
    pass
