from .base import *  # noqa: F401, F403
from .methods import *  # noqa: F401, F403
