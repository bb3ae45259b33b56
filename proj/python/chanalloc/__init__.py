from ._chanalloc import *  # noqa: F401,F403
from ._chanalloc import __doc__  # noqa: F401

__version__ = "0.1.0"
