from .commands import CommandHandler, CommandResult
from .writers import emit, format_value, read_header, render

__all__ = ["CommandHandler", "CommandResult", "emit", "format_value", "read_header", "render"]
