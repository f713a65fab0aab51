from .grid import *  # noqa: F401, F403
from .harmonics import *  # noqa: F401, F403
