from typing import Any, Dict, Mapping, Optional

from qsgps.constants import DEFAULT_SEED
from qsgps.errors import ConfigError
from qsgps.models.base import Model

SUBCOMMANDS = (
    "verify-code",
    "bell",
    "classical-bound",
    "attack-sweep",
    "hardware",
    "position",
    "protocol-run",
)

FORMATS = ("json", "table", "csv")


class CommandSpec(Model):
    """
    One parsed command-line invocation.

    ``seed`` is None when not given on the command line; ``resolved_seed``
    falls back to DEFAULT_SEED.
    """

    def __init__(
        self,
        subcommand: str,
        options: Optional[Mapping[str, Any]] = None,
        seed: Optional[int] = None,
        output: Optional[str] = None,
        format: str = "json",
    ):
        super().__init__("command_spec")
        if subcommand not in SUBCOMMANDS:
            raise ConfigError(f"Unknown subcommand {subcommand!r}")
        if format not in FORMATS:
            raise ConfigError(f"Unknown format {format!r}, expected one of {list(FORMATS)}")
        if seed is not None and not 0 <= int(seed) < 2 ** 64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {seed}")
        self.subcommand = subcommand
        self.options: Dict[str, Any] = dict(options or {})
        self.seed = int(seed) if seed is not None else None
        self.output = output
        self.format = format

    @property
    def resolved_seed(self) -> int:
        return self.seed if self.seed is not None else DEFAULT_SEED

    def option(self, name: str, default: Any = None) -> Any:
        value = self.options.get(name)
        return default if value is None else value

    def to_dict(self) -> Dict[str, Any]:
        return {
            "subcommand": self.subcommand,
            "options": dict(sorted(self.options.items())),
            "seed": self.resolved_seed,
            "output": self.output,
            "format": self.format,
        }

    def __str__(self) -> str:
        return f"CommandSpec({self.subcommand}, seed={self.resolved_seed})"
