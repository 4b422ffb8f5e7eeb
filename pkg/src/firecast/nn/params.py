"""Named parameter collections and their checkpoint codec.

Checkpoint layout (one directory):
    params.json  {"format": "firecast-params", "version": 1,
                  "dtype": "<f8", "tensors": [{"name", "shape", "offset"}]}
    params.f64   concatenated little-endian float64 arrays, row-major,
                 in the order listed in params.json
"""

import json
import math
from collections import OrderedDict
from pathlib import Path
from typing import Dict, Iterator, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np

from firecast.utils.errors import CheckpointError, FirecastValidationError
from firecast.utils.logging_config import get_logger

from .tensor import Tensor

logger = get_logger(__name__)

InitKind = Literal["uniform", "zeros", "ones"]

PARAMS_HEADER = "params.json"
PARAMS_DATA = "params.f64"


class ParamStore:
    """Ordered map of trainable tensors, each with a gradient buffer."""

    def __init__(self):
        self._params: "OrderedDict[str, Tensor]" = OrderedDict()
        self._init_spec: Dict[str, Dict[str, object]] = {}

    def add(
        self,
        name: str,
        shape: Sequence[int],
        rng: Optional[np.random.Generator] = None,
        fan_in: Optional[int] = None,
        init: InitKind = "uniform",
    ) -> Tensor:
        """Create and register a parameter.

        ``uniform`` draws from U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
        """
        if name in self._params:
            raise FirecastValidationError(f"parameter '{name}' already registered", field="name")
        shape = tuple(int(s) for s in shape)
        if init == "uniform":
            if rng is None or fan_in is None or fan_in < 1:
                raise FirecastValidationError("uniform init needs an rng and a positive fan_in", field="fan_in")
            bound = 1.0 / math.sqrt(fan_in)
            data = rng.uniform(-bound, bound, size=shape)
        elif init == "zeros":
            data = np.zeros(shape)
        elif init == "ones":
            data = np.ones(shape)
        else:
            raise FirecastValidationError(f"unknown init '{init}'", field="init")
        tensor = Tensor(data, requires_grad=True, name=name)
        self._params[name] = tensor
        self._init_spec[name] = {"init": init, "fan_in": fan_in}
        return tensor

    def __getitem__(self, name: str) -> Tensor:
        try:
            return self._params[name]
        except KeyError:
            raise KeyError(f"parameter '{name}' not found") from None

    def __contains__(self, name: str) -> bool:
        return name in self._params

    def __len__(self) -> int:
        return len(self._params)

    def __iter__(self) -> Iterator[str]:
        return iter(self._params)

    def items(self) -> List[Tuple[str, Tensor]]:
        return list(self._params.items())

    def parameters(self) -> List[Tensor]:
        return list(self._params.values())

    def init_spec(self, name: str) -> Dict[str, object]:
        return dict(self._init_spec[name])

    def names_with_prefix(self, prefix: str) -> List[str]:
        return [n for n in self._params if n.startswith(prefix)]

    def zero_grad(self) -> None:
        for tensor in self._params.values():
            tensor.zero_grad()

    def count(self) -> int:
        return int(sum(t.size for t in self._params.values()))

    def snapshot(self) -> Dict[str, np.ndarray]:
        """Copy of all parameter values."""
        return {name: t.data.copy() for name, t in self._params.items()}

    def restore(self, values: Dict[str, np.ndarray]) -> None:
        """Overwrite parameter values from a snapshot."""
        for name, tensor in self._params.items():
            if name not in values:
                raise CheckpointError(f"snapshot is missing parameter '{name}'")
            value = np.asarray(values[name], dtype=np.float64)
            if value.shape != tensor.shape:
                raise CheckpointError(
                    f"parameter '{name}' has shape {value.shape}, expected {tensor.shape}"
                )
            tensor.data = value.copy()


def save_params(store: ParamStore, path: Union[str, Path]) -> None:
    """Write a parameter checkpoint into directory ``path``."""
    directory = Path(path)
    directory.mkdir(parents=True, exist_ok=True)
    entries = []
    offset = 0
    chunks = []
    for name, tensor in store.items():
        blob = np.ascontiguousarray(tensor.data, dtype="<f8").tobytes()
        entries.append({"name": name, "shape": list(tensor.shape), "offset": offset})
        chunks.append(blob)
        offset += len(blob)
    header = {"format": "firecast-params", "version": 1, "dtype": "<f8", "tensors": entries}
    (directory / PARAMS_HEADER).write_text(json.dumps(header, indent=2), encoding="utf-8")
    (directory / PARAMS_DATA).write_bytes(b"".join(chunks))
    logger.debug(f"Saved {len(entries)} parameter tensors ({offset} bytes) to {directory}")


def read_params(path: Union[str, Path]) -> Dict[str, np.ndarray]:
    """Read a parameter checkpoint as name -> float64 array."""
    directory = Path(path)
    header_path = directory / PARAMS_HEADER
    data_path = directory / PARAMS_DATA
    if not header_path.is_file() or not data_path.is_file():
        raise CheckpointError(f"no parameter checkpoint in {directory}", path=str(directory))
    try:
        header = json.loads(header_path.read_text(encoding="utf-8"))
        entries = header["tensors"]
    except (json.JSONDecodeError, KeyError, TypeError) as e:
        raise CheckpointError(f"malformed {PARAMS_HEADER}: {e}", path=str(directory)) from e
    blob = data_path.read_bytes()
    values: Dict[str, np.ndarray] = {}
    expected = 0
    for entry in entries:
        shape = tuple(int(s) for s in entry["shape"])
        count = int(np.prod(shape, dtype=np.int64))
        start = int(entry["offset"])
        stop = start + 8 * count
        if stop > len(blob):
            raise CheckpointError(f"{PARAMS_DATA} is truncated at '{entry['name']}'", path=str(directory))
        values[entry["name"]] = np.frombuffer(blob[start:stop], dtype="<f8").astype(np.float64).reshape(shape)
        expected = max(expected, stop)
    if expected != len(blob):
        raise CheckpointError(
            f"{PARAMS_DATA} has {len(blob)} bytes, header describes {expected}", path=str(directory)
        )
    return values


def load_params(store: ParamStore, path: Union[str, Path]) -> None:
    """Load a parameter checkpoint into an existing store."""
    values = read_params(path)
    extra = set(values) - set(store)
    if extra:
        raise CheckpointError(f"checkpoint has unknown parameters: {sorted(extra)}", path=str(path))
    store.restore(values)
