from .enums import *  # noqa: F401, F403
from .exceptions import *  # noqa: F401, F403
from .functions import *  # noqa: F401, F403
from .types import *  # noqa: F401, F403
from .utils import *  # noqa: F401, F403

from .sphere import *  # noqa: F401, F403
from .kernels import *  # noqa: F401, F403
from .stereographic import *  # noqa: F401, F403
from .functional import *  # noqa: F401, F403
from .solver import *  # noqa: F401, F403
from .manifold import *  # noqa: F401, F403
