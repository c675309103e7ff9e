"""Copyright (C) 2025-2025 pyMassFlow developers. See LICENSE file for terms."""
import sys

from .cli import main

sys.exit(main())
