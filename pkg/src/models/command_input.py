from typing import Any, Dict

from config.cli_commands import REQUIRED_KEYS, SECTION_KEYS, TOP_LEVEL_KEYS, DeepBayesCommands
from exceptions.deepbayes_exceptions.exceptions import ConfigError
from helpers.common_helper.common_helper import reject_unknown_keys, require_keys


class CommandInput:
    """A subcommand plus its run config, checked against the command table before any work starts."""

    def __init__(self, command_name: str, config: Dict[str, Any]):
        self.command_name = command_name
        self.config = config
        self.command = DeepBayesCommands.get_command(command_name)

        self._validate()

    def _validate(self):
        if self.command is None:
            raise ConfigError(
                f"Unknown subcommand {self.command_name!r}; expected one of {DeepBayesCommands.get_command_names()}"
            )
        if not isinstance(self.config, dict):
            raise ConfigError("run config must be a JSON object")

        reject_unknown_keys(self.config, list(TOP_LEVEL_KEYS) + self.command.allowed_sections)
        require_keys(self.config, self.command.required_sections)
        seed = self.config.get("seed", 0)
        if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
            raise ConfigError(f"seed must be a non-negative integer, got {seed!r}", key="seed")
        threads = self.config.get("threads", 1)
        if not isinstance(threads, int) or isinstance(threads, bool) or threads < 1:
            raise ConfigError(f"threads must be a positive integer, got {threads!r}", key="threads")
        for name in self.command.allowed_sections:
            if name not in self.config:
                continue
            section = self.config[name]
            if not isinstance(section, dict):
                raise ConfigError(f"section {name} must be an object", key=name)
            reject_unknown_keys(section, SECTION_KEYS[name], section=name)
            require_keys(section, REQUIRED_KEYS.get(name, ()), section=name)
        if self.command.required_paths:
            require_keys(self.config["paths"], self.command.required_paths, section="paths")

    @property
    def processor_name(self) -> str:
        return self.command.processor_name

    @property
    def action(self) -> str:
        return self.command.action

    def section(self, name: str) -> Dict[str, Any]:
        return dict(self.config.get(name, {}))
