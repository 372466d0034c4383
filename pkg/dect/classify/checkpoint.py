"""Binary checkpoints of a :class:`~dect.classify.model.ClassifierModel`.

Layout (all integers little-endian ``u32``, all reals little-endian ``f8``)::

    magic            8 bytes, b"DECTCKPT"
    version          u32, currently 1
    pool             u32, 0 = sum, 1 = mean
    constrained      u32, 0 or 1
    lambda           f8
    num_heights      u32
    height_min       f8
    height_max       f8
    normalization    u32, 0 = none, 1 = per-vertex-count, 2 = unit-l2
    num_directions   u32
    ambient_dim      u32
    directions       f8[num_directions * ambient_dim], row-major
    curve_embed      MLP block
    head             MLP block

An MLP block is ``num_layers`` (u32) followed, per layer, by ``in`` (u32),
``out`` (u32), the ``in x out`` weight matrix (f8, row-major) and the ``out``
biases (f8).
"""

import io
from pathlib import Path
from typing import BinaryIO

import numpy as np

from ..directions import DirectionSet
from ..ect import EctConfig, EctMode, Normalization
from ..exceptions import CheckpointError, DectException
from ..typing import PathType
from ..utils import atomic_write
from .mlp import MlpParams
from .model import ClassifierModel, Pool

MAGIC = b"DECTCKPT"
VERSION = 1

_POOLS = [Pool.SUM, Pool.MEAN]
_NORMALIZATIONS = [Normalization.NONE, Normalization.PER_VERTEX_COUNT, Normalization.UNIT_L2]

_U32 = np.dtype("<u4")
_F8 = np.dtype("<f8")


def _write_u32(f: BinaryIO, *values: int):
    f.write(np.asarray(values, dtype=_U32).tobytes())


def _write_f8(f: BinaryIO, values):
    f.write(np.ascontiguousarray(values, dtype=_F8).tobytes())


def _write_mlp(f: BinaryIO, mlp: MlpParams):
    _write_u32(f, mlp.num_layers)
    for w, b in zip(mlp.weights, mlp.biases):
        _write_u32(f, *w.shape)
        _write_f8(f, w)
        _write_f8(f, b)


def dumps(model: ClassifierModel) -> bytes:
    f = io.BytesIO()
    f.write(MAGIC)
    config = model.ect_config
    _write_u32(f, VERSION, _POOLS.index(model.pool), int(model.directions.constrained))
    _write_f8(f, [config.lambda_])
    _write_u32(f, config.num_heights)
    _write_f8(f, config.height_interval)
    _write_u32(f, _NORMALIZATIONS.index(config.normalization))
    _write_u32(f, *model.directions.directions.shape)
    _write_f8(f, model.directions.directions)
    _write_mlp(f, model.curve_embed)
    _write_mlp(f, model.head)
    return f.getvalue()


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.offset = 0

    def take(self, dtype: np.dtype, count: int = 1) -> np.ndarray:
        size = dtype.itemsize * count
        if self.offset + size > len(self.data):
            raise CheckpointError("Checkpoint is truncated.")
        out = np.frombuffer(self.data, dtype=dtype, count=count, offset=self.offset)
        self.offset += size
        return out.astype(dtype.newbyteorder("="))

    def u32(self) -> int:
        return int(self.take(_U32)[0])

    def f8(self, count: int = 1) -> np.ndarray:
        return self.take(_F8, count)

    def enum(self, choices):
        code = self.u32()
        if code >= len(choices):
            raise CheckpointError(f"Invalid enum code {code}.")
        return choices[code]

    def mlp(self) -> MlpParams:
        weights, biases = [], []
        for _ in range(self.u32()):
            rows, cols = self.u32(), self.u32()
            weights.append(self.f8(rows * cols).reshape(rows, cols))
            biases.append(self.f8(cols))
        return MlpParams(weights, biases)


def loads(data: bytes) -> ClassifierModel:
    if not data.startswith(MAGIC):
        raise CheckpointError("Not a dect checkpoint (bad magic).")
    reader = _Reader(data)
    reader.offset = len(MAGIC)
    version = reader.u32()
    if version != VERSION:
        raise CheckpointError(f"Unsupported checkpoint version {version}; expected {VERSION}.")

    try:
        pool = reader.enum(_POOLS)
        constrained = bool(reader.u32())
        lam = float(reader.f8()[0])
        num_heights = reader.u32()
        interval = tuple(float(x) for x in reader.f8(2))
        normalization = reader.enum(_NORMALIZATIONS)
        num_directions, ambient_dim = reader.u32(), reader.u32()
        directions = reader.f8(num_directions * ambient_dim).reshape(num_directions, ambient_dim)
        curve_embed = reader.mlp()
        head = reader.mlp()
        if reader.offset != len(data):
            raise CheckpointError(f"{len(data) - reader.offset} trailing bytes after checkpoint.")

        config = EctConfig(
            lambda_=lam,
            num_heights=num_heights,
            height_interval=interval,
            normalization=normalization,
            mode=EctMode.SMOOTH,
        )
        return ClassifierModel(DirectionSet(directions, constrained=constrained), config, curve_embed, head, pool)
    except CheckpointError:
        raise
    except (DectException, ValueError) as e:
        raise CheckpointError(f"Invalid checkpoint contents: {e}") from e


def save(model: ClassifierModel, path: PathType):
    with atomic_write(path, "wb") as f:
        f.write(dumps(model))


def load(path: PathType) -> ClassifierModel:
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise CheckpointError(f"Cannot read checkpoint {path}: {e}") from e
    return loads(data)
