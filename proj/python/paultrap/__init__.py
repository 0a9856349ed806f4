"""Paul trap dynamics, Floquet stability, restricted-path-integral
measurement densities and quantum nondemolition variables."""

try:
    from ._paultrap import *  # noqa: F401,F403
    from ._paultrap import __version__  # noqa: F401
except ImportError:  # extension built out-of-package (development tree)
    from _paultrap import *  # noqa: F401,F403
    from _paultrap import __version__  # noqa: F401
