from pathlib import Path
from typing import Sequence, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

PathType = Union[str, Path]
FloatArray = NDArray[np.float64]
IndexArray = NDArray[np.int64]
Simplex = Tuple[int, ...]
SimplexList = Union[Sequence[Sequence[int]], ArrayLike]
