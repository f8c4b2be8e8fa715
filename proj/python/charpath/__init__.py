"""Character paths, Steinhaus random series and their moments."""

from ._charpath import *  # noqa: F401,F403
from ._charpath import Error, InvalidArgument, LimitExceeded, build_context

__all__ = [name for name in dir() if not name.startswith("_")]
