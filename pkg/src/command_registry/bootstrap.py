"""
Imports every module of the command_processors package so their @CommandRegistry.register
decorators run. The command line calls this once before it resolves a subcommand.
"""

import importlib
import pkgutil
import traceback
from typing import Dict, List

import command_processors as processors_pkg
from helpers.common_helper.logger_helper import LoggerHelper

logger = LoggerHelper(__name__).get_logger()

# module name -> import error, kept so a later lookup can say why a processor is missing
_failed_imports: Dict[str, str] = {}


def load_all_processors() -> List[str]:
    loaded = []
    for _, module_name, _ in pkgutil.iter_modules(processors_pkg.__path__):
        full_module_name = f"{processors_pkg.__name__}.{module_name}"
        try:
            importlib.import_module(full_module_name)
            loaded.append(full_module_name)
            _failed_imports.pop(full_module_name, None)
        except Exception as e:
            _failed_imports[full_module_name] = str(e)
            logger.error("Failed to import processor module: %s | Error: %s", full_module_name, e)
            logger.debug("Traceback:\n%s", traceback.format_exc())
    logger.debug("Loaded %d processor modules", len(loaded))
    return loaded


def failed_imports() -> Dict[str, str]:
    return dict(_failed_imports)
