"""Signaling tests for state-dependent copying and deleting machines.

The heavy lifting lives in the compiled extension; this package just
re-exports it under a stable name.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
