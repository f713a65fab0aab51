from .diagnostics import *  # noqa: F401, F403
from .report import *  # noqa: F401, F403
from .solver import *  # noqa: F401, F403
