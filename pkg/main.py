#!/usr/bin/env python3
"""
agfft - fast encoding of one-point algebraic-geometry codes
Command-line entry point
"""

import sys
import os

# Add src directory to Python path
current_dir = os.path.dirname(os.path.abspath(__file__))
src_path = os.path.join(current_dir, 'src')
if src_path not in sys.path:
    sys.path.insert(0, src_path)

from cli.commands import EXIT_FAILURE, EXIT_OK, CommandLineApp
from utils.logger import log_error


def main():
    """Main entry point"""
    app = None
    try:
        app = CommandLineApp()
        sys.exit(app.run())
    except KeyboardInterrupt:
        print("\nRun interrupted by user", file=sys.stderr)
        sys.exit(EXIT_OK)
    except Exception as e:
        if app is not None:
            log_error(app.logger, e, "unhandled")
        print(f"Fatal error: {e}", file=sys.stderr)
        sys.exit(EXIT_FAILURE)


if __name__ == "__main__":
    main()
