"""Shared exception types."""

from __future__ import annotations


class ParseError(ValueError):
    """A data file failed to parse. Carries the path and 1-based line number."""

    def __init__(self, path: str, line: int | None, message: str):
        self.path = str(path)
        self.line = line
        self.message = message
        where = f"{self.path}:{line}" if line is not None else self.path
        super().__init__(f"{where}: {message}")


class OOVError(LookupError):
    """A token has no entry in the active vocabulary or embedding table."""

    def __init__(self, token: str, source: str = "vocabulary"):
        self.token = token
        super().__init__(f"token {token!r} not found in {source}")


class ProtocolError(RuntimeError):
    """A remote bridge response violated the wire contract."""
