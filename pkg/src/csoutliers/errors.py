"""Exception types shared by the solvers and the CLI."""


class RefusalError(RuntimeError):
    """A solver declined to run: a precondition or a resource cap failed."""


class CapExceededError(RefusalError):
    """The enumeration an exact or approximate solver would need exceeds its cap."""

    def __init__(self, what: str, count: int, cap: int, hint: str = ""):
        self.count = count
        self.cap = cap
        msg = f"{what} needs {count} enumeration steps, above the cap of {cap}"
        if hint:
            msg += f"; {hint}"
        super().__init__(msg)


class InstanceFormatError(ValueError):
    """Malformed instance, graph or reads file. Carries the 1-based line number."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
