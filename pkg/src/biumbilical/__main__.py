import sys

from .cli_report.cli import main

sys.exit(main())
