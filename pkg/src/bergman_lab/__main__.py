"""``python -m bergman_lab``."""

import sys

from .cli import main

sys.exit(main())
