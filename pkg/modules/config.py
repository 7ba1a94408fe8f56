"""
Run configuration for the quiverhall command line.
"""

import logging
import os
from pathlib import Path
from typing import Optional, Sequence, Tuple

import attrs
from sympy import isprime

from .errors import ConfigError

__all__ = ["RunConfig", "DEFAULT_CONFIG", "CACHE_ENV", "FORMATS", "parse_int_list", "from_namespace"]

logger = logging.getLogger(__name__)

CACHE_ENV = "QUIVERHALL_CACHE"
FORMATS = ("text", "json", "tsv")

# Defaults for every run; the command line overrides them key by key.
DEFAULT_CONFIG = {
    "primes": (2, 3, 5, 7, 11, 13),
    "seed": 0,
    "output_format": "text",
    "max_total_dim": 4,
    "workers": 1,
}


def _check_primes(instance, attribute, value: Tuple[int, ...]) -> None:
    bad = [p for p in value if not isprime(p)]
    if bad:
        raise ConfigError(f"not prime: {', '.join(map(str, bad))}")
    if len(set(value)) != len(value):
        raise ConfigError(f"repeated primes in {list(value)}")
    if len(value) < 3:
        raise ConfigError(f"interpolation needs at least 3 primes, got {list(value)}")


def _check_format(instance, attribute, value: str) -> None:
    if value not in FORMATS:
        raise ConfigError(f"unknown output format {value!r}; choose from {', '.join(FORMATS)}")


def _check_positive(instance, attribute, value: int) -> None:
    if value < 1:
        raise ConfigError(f"{attribute.name} must be at least 1, got {value}")


@attrs.frozen
class RunConfig:
    """
    Everything a command needs besides the command name.

    The dimension vector is checked against the quiver when the quiver is loaded.
    """

    quiver_path: Optional[Path] = attrs.field(default=None, converter=attrs.converters.optional(Path))
    dim: Optional[Tuple[int, ...]] = attrs.field(default=None, converter=attrs.converters.optional(tuple))
    primes: Tuple[int, ...] = attrs.field(default=DEFAULT_CONFIG["primes"], converter=lambda ps: tuple(sorted(ps)),
                                          validator=_check_primes)
    seed: int = DEFAULT_CONFIG["seed"]
    output_format: str = attrs.field(default=DEFAULT_CONFIG["output_format"], validator=_check_format)
    max_total_dim: int = attrs.field(default=DEFAULT_CONFIG["max_total_dim"], validator=_check_positive)
    workers: int = attrs.field(default=DEFAULT_CONFIG["workers"], validator=_check_positive)
    cache_dir: Optional[Path] = attrs.field(default=None, converter=attrs.converters.optional(Path))
    progress: bool = False

    def require_dim(self) -> Tuple[int, ...]:
        if self.dim is None:
            raise ConfigError("this command needs --dim")
        return self.dim


def parse_int_list(text: str, what: str) -> Tuple[int, ...]:
    """'1,2,0' -> (1, 2, 0)."""
    try:
        values = tuple(int(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError:
        raise ConfigError(f"{what} must be comma-separated integers, got {text!r}") from None
    if any(v < 0 for v in values):
        raise ConfigError(f"{what} entries must be non-negative, got {text!r}")
    return values


def from_namespace(args, environ=None) -> RunConfig:
    """Build a RunConfig from parsed arguments; ``QUIVERHALL_CACHE`` fills in a missing --cache."""
    environ = os.environ if environ is None else environ
    cache = getattr(args, "cache", None) or environ.get(CACHE_ENV) or None
    dim = getattr(args, "dim", None)
    primes = getattr(args, "primes", None)
    config = RunConfig(
        quiver_path=getattr(args, "quiver", None),
        dim=parse_int_list(dim, "--dim") if dim else None,
        primes=parse_int_list(primes, "--primes") if primes else DEFAULT_CONFIG["primes"],
        seed=getattr(args, "seed", DEFAULT_CONFIG["seed"]),
        output_format=getattr(args, "format", DEFAULT_CONFIG["output_format"]),
        max_total_dim=getattr(args, "max_total_dim", DEFAULT_CONFIG["max_total_dim"]),
        workers=getattr(args, "workers", DEFAULT_CONFIG["workers"]),
        cache_dir=cache,
        progress=getattr(args, "progress", False),
    )
    logger.debug("run configuration: %s", config)
    return config
