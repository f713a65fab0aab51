from .funcs import *  # noqa: F401, F403
from .normalize import *  # noqa: F401, F403
