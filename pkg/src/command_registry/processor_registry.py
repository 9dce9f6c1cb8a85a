"""
Name -> processor class lookup for the command table.
Processor modules register themselves with `@CommandRegistry.register("<name>")` at import time.
"""

from typing import Dict, List, Type

from helpers.common_helper.logger_helper import LoggerHelper

logger = LoggerHelper(__name__).get_logger()


class CommandRegistry:
    _registry: Dict[str, Type] = {}

    @classmethod
    def register(cls, name: str):
        def decorator(processor_class: Type) -> Type:
            existing = cls._registry.get(name)
            if existing is not None and existing.__qualname__ != processor_class.__qualname__:
                raise ValueError(
                    f"Processor name '{name}' already taken by {existing.__qualname__}; "
                    f"cannot register {processor_class.__qualname__}"
                )
            cls._registry[name] = processor_class
            logger.debug("Registered processor %s -> %s", name, processor_class.__qualname__)
            return processor_class

        return decorator

    @classmethod
    def get_processor(cls, name: str) -> Type:
        if name not in cls._registry:
            raise ValueError(f"Processor '{name}' not registered; known processors: {cls.registered_names()}")
        return cls._registry[name]

    @classmethod
    def registered_names(cls) -> List[str]:
        return sorted(cls._registry)
