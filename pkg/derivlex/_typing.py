import os
from typing import Union

PathType = Union[str, os.PathLike[str]]
