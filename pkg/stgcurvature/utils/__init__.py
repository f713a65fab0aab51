from .file import *  # noqa: F401, F403
from .math import *  # noqa: F401, F403
