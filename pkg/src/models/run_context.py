from typing import Any, Dict

from models.command_input import CommandInput


class RunContext:
    """What a processor action gets: the checked config, the staged output directory and run-wide settings."""

    def __init__(self, command_input: CommandInput, staged, progress: bool = False):
        self.command_input = command_input
        self.staged = staged
        self.progress = bool(progress)
        self.seed: int = int(command_input.config.get("seed", 0))
        self.threads: int = int(command_input.config.get("threads", 1))
        self.resolved: Dict[str, Any] = {}

    @property
    def command(self) -> str:
        return self.command_input.command_name

    def section(self, name: str) -> Dict[str, Any]:
        return self.command_input.section(name)

    def resolve(self, name: str, values: Dict[str, Any]) -> None:
        """Record the effective settings of a section, defaults included."""
        self.resolved[name] = values

    def resolved_config(self) -> Dict[str, Any]:
        config = {"command": self.command, "seed": self.seed, "threads": self.threads}
        for name, values in self.command_input.config.items():
            if name not in config:
                config[name] = values
        config.update(self.resolved)
        return config
