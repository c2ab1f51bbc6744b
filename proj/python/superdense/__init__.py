"""Dense-coding protocols over Bell, GHZ and distributed resource states."""

from ._core import *  # noqa: F401,F403
from ._core import Error, InvalidArgument, NoMatch, Unsupported  # noqa: F401

__version__ = "0.1.0"
