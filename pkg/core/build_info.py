"""Provides build information."""

import platform
from importlib import metadata

import numpy as np

DISTRIBUTION_NAME = "pammlab"

class _BuildInfo:
    """Class to hold build and runtime version information."""

    @property
    def version(self) -> str | None:
        """Get the version of the installed distribution."""
        try:
            return metadata.version(DISTRIBUTION_NAME)
        except metadata.PackageNotFoundError:
            return None

    @property
    def numpy_version(self) -> str:
        """Version of numpy doing the arithmetic."""
        return np.__version__

    @property
    def python_version(self) -> str:
        """Version of the running interpreter."""
        return platform.python_version()

    def as_dict(self) -> dict[str, str]:
        """Versions recorded in run manifests."""
        return {
            "pammlab": self.version or "development",
            "numpy": self.numpy_version,
            "python": self.python_version,
        }

BuildInfo = _BuildInfo()
