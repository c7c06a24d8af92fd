#!/usr/bin/env python
"""
Run Script - charflow launcher
Usage: python run.py COMMAND [options]   (same commands as `python -m charflow`)
"""

import sys
from pathlib import Path


def check_dependencies():
    """Fail early with a readable message when the numerical stack is missing."""
    missing = []
    for module in ("numpy", "scipy", "pydantic", "pydantic_settings", "rich"):
        try:
            __import__(module)
        except ImportError:
            missing.append(module)
    if missing:
        print(f"Missing packages: {', '.join(missing)}. Install them with: pip install -r requirements.txt",
              file=sys.stderr)
        sys.exit(3)


def load_env_file():
    """Load CHARFLOW_* settings from .env before the settings singleton is created."""
    env_file = Path(".env")
    if not env_file.exists():
        return
    try:
        from dotenv import load_dotenv
        load_dotenv(env_file)
    except Exception as e:
        print(f"Error loading .env file: {e}", file=sys.stderr)


def main():
    check_dependencies()
    load_env_file()

    from charflow.cli import main as cli_main

    return cli_main()


if __name__ == "__main__":
    sys.exit(main())
