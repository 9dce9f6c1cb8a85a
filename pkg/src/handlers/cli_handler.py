import argparse
import json
import sys
import traceback
from typing import Any, Dict, List, Optional, Tuple

from command_registry.bootstrap import failed_imports, load_all_processors
from command_registry.processor_registry import CommandRegistry
from config.cli_commands import (
    EXIT_INPUT,
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_UNEXPECTED,
    EXIT_USAGE,
    DeepBayesCommands,
)
from exceptions.deepbayes_exceptions.exceptions import ConfigError, DatasetFormatError, DeepBayesError
from exceptions.processor_exceptions.exceptions import (
    InvalidInputError,
    ProcessorExecutionError,
    ProcessorNotFoundError,
)
from helpers.common_helper.logger_helper import LoggerHelper
from helpers.storage_helpers.report_store_helper import RESOLVED_CONFIG_NAME, RUN_LOG_NAME, StagedOutput
from models.command_input import CommandInput
from models.run_context import RunContext

logger = LoggerHelper(__name__).get_logger()


class _ArgumentParser(argparse.ArgumentParser):

    def error(self, message: str):
        raise InvalidInputError(message)


def cli_main(argv: Optional[List[str]] = None) -> int:
    try:
        load_all_processors()
        args = _build_parser().parse_args(argv)
        command_input = _parse_command(args)
        processor = _resolve_processor(command_input.processor_name)
        summary = _execute_processor(processor, command_input, args.out, args.progress)
        _respond(command_input.command_name, summary)
        return EXIT_OK

    except SystemExit as e:
        # --help
        return EXIT_OK if not e.code else EXIT_USAGE

    except Exception as e:
        return _fail(e)


def _build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="deepbayes", description="Simulation-based parameter estimation")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)
    for command in DeepBayesCommands.get_all_commands():
        sub = commands.add_parser(command.name, help=command.description)
        sub.add_argument("--config", required=True, help="JSON run config")
        sub.add_argument("--seed", type=int, default=None, help="master seed, overrides the config")
        sub.add_argument("--out", default=".", help="output directory")
        sub.add_argument("--threads", type=int, default=None, help="worker threads, overrides the config")
        sub.add_argument("--progress", action="store_true", help="show progress bars")
    return parser


def _load_config(path: str) -> Dict[str, Any]:
    with open(path, "r", encoding="utf-8") as handle:
        try:
            return json.load(handle)
        except json.JSONDecodeError as e:
            raise ConfigError(f"config {path} is not valid JSON: {e.msg} (line {e.lineno}, column {e.colno})")


def _parse_command(args: argparse.Namespace) -> CommandInput:
    config = _load_config(args.config)
    if isinstance(config, dict):
        if args.seed is not None:
            config["seed"] = args.seed
        if args.threads is not None:
            config["threads"] = args.threads
    command_input = CommandInput(args.command, config)
    logger.info("Validated config %s for command %s", args.config, args.command)
    return command_input


def _resolve_processor(processor_name: str):
    try:
        processor = CommandRegistry.get_processor(processor_name)
        logger.debug("Resolved processor: %s", processor_name)
        return processor
    except ValueError as e:
        broken = failed_imports()
        if broken:
            # a processor module did not import; that is a defect, not a usage error
            details = "; ".join(f"{name}: {error}" for name, error in broken.items())
            raise ProcessorExecutionError(f"{e} (import failures: {details})")
        raise ProcessorNotFoundError(str(e))


def _execute_processor(processor_class, command_input: CommandInput, out_dir: str, progress: bool) -> Dict[str, Any]:
    with StagedOutput(out_dir) as staged:
        log_handler = LoggerHelper.add_file_handler(staged.path(RUN_LOG_NAME))
        try:
            run = RunContext(command_input, staged, progress=progress)
            summary = processor_class().process(command_input.action, run)
            staged.write_json(RESOLVED_CONFIG_NAME, run.resolved_config())
        except (DeepBayesError, OSError):
            raise
        except Exception as e:
            logger.error("Traceback:\n%s", traceback.format_exc())
            raise ProcessorExecutionError(f"{command_input.command_name} failed: {e}")
        finally:
            LoggerHelper.remove_handler(log_handler)
    return summary


def _respond(command: str, summary: Dict[str, Any]) -> None:
    fields = " ".join(f"{key}={value}" for key, value in summary.items())
    print(f"command={command} status=ok {fields}".rstrip(), file=sys.stdout)


def _classify(e: Exception) -> Tuple[str, int]:
    if isinstance(e, ConfigError):
        return e.category, EXIT_USAGE
    if isinstance(e, (InvalidInputError, ProcessorNotFoundError)):
        return "usage", EXIT_USAGE
    if isinstance(e, FileNotFoundError):
        return "file_not_found", EXIT_INPUT
    if isinstance(e, DatasetFormatError):
        return e.category, EXIT_INPUT
    if isinstance(e, OSError):
        return "io", EXIT_INPUT
    if isinstance(e, DeepBayesError):
        return e.category, EXIT_NUMERICAL
    if isinstance(e, ProcessorExecutionError):
        return e.category, EXIT_UNEXPECTED
    return "internal", EXIT_UNEXPECTED


def _fail(e: Exception) -> int:
    category, code = _classify(e)
    if code == EXIT_UNEXPECTED:
        logger.exception("Unexpected error occurred: %s", e)
    else:
        logger.warning("Command failed (%s): %s", category, e)
    message = str(e).replace("\n", " ")
    if isinstance(e, FileNotFoundError) and e.filename:
        message = f"no such file: {e.filename}"
    print(f"error category={category} message={message}", file=sys.stderr)
    return code
