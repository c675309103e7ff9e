# Copyright (C) 2025-2025 pyMassFlow developers. See LICENSE file for terms.
# Master version file for all scripts.
# Update these variables and run a build-tool (which will run version_updater.py)
docs_version = "0.1.0"
package_version = "0.1.0"
