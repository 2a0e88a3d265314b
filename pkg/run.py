#!/usr/bin/env python3
"""
Launcher script for tagmetrics

Checks the environment, then hands the command-line arguments to the
application entry point.
"""

import sys
from pathlib import Path

# Add the app directory to Python path
app_dir = Path(__file__).parent / "app"
sys.path.insert(0, str(app_dir))

def check_dependencies():
    """Check if required dependencies are installed."""
    required_packages = [
        'click',
        'loguru',
        'numpy',
        'pandas',
        'pydantic',
        'pydantic_settings'
    ]

    missing_packages = []

    for package in required_packages:
        try:
            __import__(package.replace('-', '_'))
        except ImportError:
            missing_packages.append(package)

    if missing_packages:
        print("Error: Missing required packages:", file=sys.stderr)
        for package in missing_packages:
            print(f"  - {package}", file=sys.stderr)
        print("\nPlease install missing packages using:", file=sys.stderr)
        print("pip install -r requirements.txt", file=sys.stderr)
        return False

    return True

def main():
    """Main launcher function."""
    if sys.version_info < (3, 9):
        print("Error: Python 3.9 or higher is required.", file=sys.stderr)
        print(f"Current version: {sys.version}", file=sys.stderr)
        return 1

    if not check_dependencies():
        return 1

    from main import main as app_main
    return app_main(sys.argv[1:])

if __name__ == "__main__":
    sys.exit(main())
