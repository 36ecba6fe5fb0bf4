"""Class-wise adversarial rationalization laboratory."""

try:
    from ._carlab import *  # noqa: F401,F403  (installed package layout)
    from ._carlab import __doc__  # noqa: F401
except ImportError:  # build-tree layout: extension lives on sys.path
    from _carlab import *  # noqa: F401,F403

__version__ = "0.1.0"
