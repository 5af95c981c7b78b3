from ._scfde import *  # noqa: F401,F403
