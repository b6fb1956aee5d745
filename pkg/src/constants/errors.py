from typing import Optional


class SectorError(Exception):
    """Base class for every error raised by the simulator."""
    def __init__(self, message):
        super().__init__(message)


class DomainError(SectorError):
    """A special function or link formula was evaluated outside its domain."""


class InfeasibleLinkError(DomainError):
    """No link geometry satisfies the requested rate / PER target."""


class NoCandidateError(SectorError):
    """Path discovery failed at a hop: the forwarder has no usable candidate set."""
    def __init__(self, node: int, reason: str):
        self.node = node
        self.reason = reason
        super().__init__(f"node {node}: {reason}")


class UnexpectedError:
    """ Display caret block error """
    def __init__(self, line: str, position: tuple[int, int]):
        self._line = line.replace('\n', '')
        self._position = position  # (1-based line, 1-based col)

    def __str__(self):
        line_no = max(1, int(self._position[0]))
        col_no = max(1, int(self._position[1]))
        return (
            f"{line_no:<5}|{self._line}\n"
            f"     |{' '*(col_no-1)}^\n"
        )


class ConfigError(SectorError):
    """
    Invalid parameter value or malformed parameter file.

    When the offending source line is known the message is prefixed with a
    caret block pointing at the column.
    """
    def __init__(self, message: str, line_text: Optional[str] = None,
                 line: Optional[int] = None, col: Optional[int] = None):
        self.reason = message
        self.line = line
        self.col = col
        if line_text is not None and line is not None:
            message = f"{UnexpectedError(line_text, (line, col or 1))}{message}"
        super().__init__(message)


class TopologyFormatError(ConfigError):
    """Malformed topology file."""
