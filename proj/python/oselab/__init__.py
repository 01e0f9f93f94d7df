try:
    from ._oselab import *  # noqa: F401,F403
    from ._oselab import __doc__  # noqa: F401
except ImportError:  # in-tree builds leave the extension next to the package
    from _oselab import *  # noqa: F401,F403
