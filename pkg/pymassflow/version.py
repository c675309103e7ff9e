"""Copyright (C) 2025-2025 pyMassFlow developers. See LICENSE file for terms."""
VERSION = "0.1.0"
