from .commands import *  # noqa: F401, F403
from .config import *  # noqa: F401, F403
from .main import *  # noqa: F401, F403
from .verify import *  # noqa: F401, F403
