#!/usr/bin/env python
"""
Entry point for the geometric discord toolkit.
Loads the environment, prepares the output directories and hands the
command line to the backend CLI.
"""

import sys
from pathlib import Path

from dotenv import load_dotenv

# Get the absolute paths
ROOT_DIR = Path(__file__).parent.absolute()
BACKEND_DIR = ROOT_DIR / 'backend'

# Backend modules import each other by flat module name
sys.path.insert(0, str(BACKEND_DIR))


def setup_environment():
    """Load .env files; the backend one overrides the root one."""
    root_env_file = ROOT_DIR / '.env'
    backend_env_file = BACKEND_DIR / '.env'

    if root_env_file.exists():
        load_dotenv(root_env_file)
    if backend_env_file.exists():
        load_dotenv(backend_env_file, override=True)


def main():
    setup_environment()

    from cli import cli_main
    from utils.directory_utils import ensure_directory_structure

    ensure_directory_structure(str(ROOT_DIR))
    return cli_main(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
