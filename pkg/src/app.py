"""
Command line entry point: python src/app.py <subcommand> --config run.json [--seed N] [--out DIR] [--threads N]
"""

import sys

from handlers.cli_handler import cli_main

if __name__ == "__main__":
    sys.exit(cli_main(sys.argv[1:]))
