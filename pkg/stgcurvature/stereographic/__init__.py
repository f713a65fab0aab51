from .checks import *  # noqa: F401, F403
from .flat import *  # noqa: F401, F403
from .projection import *  # noqa: F401, F403
