"""Exception hierarchy shared by the numerical modules and the CLI."""
from pydantic import ValidationError


class VblLimitsError(Exception):
    """Base class for every error raised by the toolkit."""


class DomainError(VblLimitsError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConfigurationError(VblLimitsError, ValueError):
    """A grid, bound, simulation config or run setting is invalid."""


class NotFoundError(DomainError):
    """A root search found no sign change on the requested interval."""


def build_model(model_cls, values: dict):
    """Instantiate a pydantic model, reporting the first validation failure as a ConfigurationError."""
    try:
        return model_cls(**values)
    except ValidationError as exc:
        error = exc.errors()[0]
        where = ".".join(str(part) for part in error["loc"]) or model_cls.__name__
        raise ConfigurationError(f"{where}: {error['msg']}") from exc
