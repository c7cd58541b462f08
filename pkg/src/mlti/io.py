"""JSON encodings for tensors, systems and trajectories.

System file
-----------
::

    {
      "format": "mlti-system",
      "version": 1,
      "layout": "ivec-interleaved",
      "N": 2,
      "state_shape": [3, 2],
      "input_shape": [1, 1],
      "output_shape": [1, 1],
      "A": {"tucker": [{"shape": [3, 3], "data": [[...], ...]}, ...]},
      "B": {"dense": {"pairs": [[3, 1], [2, 1]], "data": [...]}},
      "C": ...
    }

Each operator is either ``dense`` or ``tucker``.  Dense ``data`` is flat in
ivec order over the interleaved extents ``(J_1, I_1, ..., J_N, I_N)``: the
entry with 1-based indices ``(j_1, i_1, ..., j_N, i_N)`` sits at 0-based
position ``ivec((j_1, i_1, ...), (J_1, I_1, ...)) - 1``, first index
fastest.  Tucker factors are listed mode by mode as row-major nested
arrays with their ``shape`` stated.

Tensor files hold ``{"shape": [...], "data": [...]}`` in the same flat
ivec layout.  Complex data is written as a list of ``[re, im]`` pairs.
"""

from __future__ import annotations

import json
import math
from importlib import resources
from pathlib import Path
from typing import Any, Union

import numpy as np

from .errors import FileFormatError, MltiError
from .systems import MltiSystem, Trajectory, from_tucker
from .tensor import DenseTensor, PairedTensor

SYSTEM_FORMAT = "mlti-system"
TRAJECTORY_FORMAT = "mlti-trajectory"
INPUTS_FORMAT = "mlti-inputs"
LAYOUT = "ivec-interleaved"
VERSION = 1

PathLike = Union[str, Path]


def dumps(obj: Any) -> str:
    """Canonical JSON text: two-space indent, repr floats, trailing newline."""
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def read_json(path: PathLike) -> Any:
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(
            f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None


def write_json(path: PathLike, obj: Any) -> None:
    Path(path).write_text(dumps(obj))


def _floats(values) -> list:
    arr = np.asarray(values)
    if np.iscomplexobj(arr):
        return [[float(z.real), float(z.imag)] for z in arr.ravel()]
    return [float(x) for x in arr.ravel()]


def _field(obj: dict, key: str, where: str):
    if not isinstance(obj, dict):
        raise FileFormatError(f"field '{where}' must be an object")
    if key not in obj:
        raise FileFormatError(f"missing field '{where}.{key}'" if where else f"missing field '{key}'")
    return obj[key]


def _int_list(value, where: str) -> list[int]:
    if not isinstance(value, list) or not all(
        isinstance(v, int) and not isinstance(v, bool) and v >= 1 for v in value
    ):
        raise FileFormatError(f"field '{where}' must be a list of positive integers")
    return value


def _number_array(value, where: str) -> np.ndarray:
    if not isinstance(value, list):
        raise FileFormatError(f"field '{where}' must be an array")
    try:
        arr = np.asarray(value, dtype=np.float64)
    except (TypeError, ValueError):
        raise FileFormatError(f"field '{where}' must contain only numbers") from None
    # [re, im] pairs mark complex data
    if arr.ndim == 2 and arr.shape[1] == 2 and all(isinstance(v, list) for v in value):
        return arr[:, 0] + 1j * arr[:, 1]
    if arr.ndim != 1:
        raise FileFormatError(f"field '{where}' must be a flat array")
    return arr


# ---------------------------------------------------------------------------
# tensors


def tensor_to_dict(X: DenseTensor) -> dict:
    return {"shape": list(X.shape), "data": _floats(X.data)}


def tensor_from_dict(obj: dict, where: str = "tensor") -> DenseTensor:
    shape = _int_list(_field(obj, "shape", where), f"{where}.shape")
    data = _number_array(_field(obj, "data", where), f"{where}.data")
    if data.size != math.prod(shape):
        raise FileFormatError(
            f"field '{where}.data' has {data.size} entries, shape {shape} needs {math.prod(shape)}"
        )
    return DenseTensor.from_data(shape, data)


def paired_to_dict(A: PairedTensor) -> dict:
    return {"pairs": [list(p) for p in A.pairs], "data": _floats(A.data)}


def paired_from_dict(obj: dict, where: str) -> PairedTensor:
    pairs = _field(obj, "pairs", where)
    if not isinstance(pairs, list) or not pairs:
        raise FileFormatError(f"field '{where}.pairs' must be a non-empty list of [rows, cols]")
    for n, p in enumerate(pairs):
        _int_list(p, f"{where}.pairs[{n}]")
        if len(p) != 2:
            raise FileFormatError(f"field '{where}.pairs[{n}]' must have two extents")
    data = _number_array(_field(obj, "data", where), f"{where}.data")
    expected = math.prod(e for p in pairs for e in p)
    if data.size != expected:
        raise FileFormatError(
            f"field '{where}.data' has {data.size} entries, pairs {pairs} need {expected}"
        )
    return PairedTensor.from_data(pairs, data)


def _matrix_from_dict(obj: dict, where: str) -> np.ndarray:
    shape = _int_list(_field(obj, "shape", where), f"{where}.shape")
    if len(shape) != 2:
        raise FileFormatError(f"field '{where}.shape' must be [rows, cols]")
    rows = _field(obj, "data", where)
    if not isinstance(rows, list) or len(rows) != shape[0]:
        raise FileFormatError(f"field '{where}.data' must have {shape[0]} rows")
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != shape[1]:
            raise FileFormatError(f"field '{where}.data[{r}]' must have {shape[1]} entries")
    try:
        return np.asarray(rows, dtype=np.float64).reshape(shape)
    except (TypeError, ValueError):
        raise FileFormatError(f"field '{where}.data' must contain only numbers") from None


def _operator_to_dict(op: PairedTensor) -> dict:
    if op.factors is not None:
        return {
            "tucker": [
                {"shape": list(f.shape), "data": [[float(x) for x in row] for row in f]}
                for f in op.factors
            ]
        }
    return {"dense": paired_to_dict(op)}


def _operator_from_dict(obj, name: str):
    """Return (tensor, factors-or-None) for one operator entry."""
    if not isinstance(obj, dict) or len(obj) != 1 or not set(obj) <= {"dense", "tucker"}:
        raise FileFormatError(f"field '{name}' must be {{\"dense\": ...}} or {{\"tucker\": [...]}}")
    if "dense" in obj:
        return paired_from_dict(obj["dense"], f"{name}.dense"), None
    mats = obj["tucker"]
    if not isinstance(mats, list) or not mats:
        raise FileFormatError(f"field '{name}.tucker' must be a non-empty list of matrices")
    factors = [_matrix_from_dict(m, f"{name}.tucker[{n}]") for n, m in enumerate(mats)]
    return PairedTensor.from_factors(factors), factors


# ---------------------------------------------------------------------------
# systems


def system_to_dict(sys: MltiSystem) -> dict:
    return {
        "format": SYSTEM_FORMAT,
        "version": VERSION,
        "layout": LAYOUT,
        "N": sys.order,
        "state_shape": list(sys.state_shape),
        "input_shape": list(sys.input_shape),
        "output_shape": list(sys.output_shape),
        "A": _operator_to_dict(sys.A),
        "B": _operator_to_dict(sys.B),
        "C": _operator_to_dict(sys.C),
    }


def system_from_dict(obj: dict) -> MltiSystem:
    if not isinstance(obj, dict):
        raise FileFormatError("system file must hold a JSON object")
    fmt = obj.get("format", SYSTEM_FORMAT)
    if fmt != SYSTEM_FORMAT:
        raise FileFormatError(f"field 'format' is {fmt!r}, expected {SYSTEM_FORMAT!r}")
    version = _field(obj, "version", "")
    if version != VERSION:
        raise FileFormatError(f"unsupported version {version!r}")
    layout = obj.get("layout", LAYOUT)
    if layout != LAYOUT:
        raise FileFormatError(f"field 'layout' is {layout!r}, expected {LAYOUT!r}")
    N = _field(obj, "N", "")
    if not isinstance(N, int) or isinstance(N, bool) or N < 1:
        raise FileFormatError("field 'N' must be a positive integer")
    shapes = {}
    for key in ("state_shape", "input_shape", "output_shape"):
        shapes[key] = _int_list(_field(obj, key, ""), key)
        if len(shapes[key]) != N:
            raise FileFormatError(f"field '{key}' has {len(shapes[key])} extents, N is {N}")
    J, K, I = shapes["state_shape"], shapes["input_shape"], shapes["output_shape"]
    expected = {
        "A": [(j, j) for j in J],
        "B": [(j, k) for j, k in zip(J, K)],
        "C": [(i, j) for i, j in zip(I, J)],
    }
    ops, factors = {}, {}
    for name in ("A", "B", "C"):
        ops[name], factors[name] = _operator_from_dict(_field(obj, name, ""), name)
        if ops[name].pairs != tuple(expected[name]):
            raise FileFormatError(
                f"operator {name} has pairs {[list(p) for p in ops[name].pairs]}, "
                f"expected {[list(p) for p in expected[name]]}"
            )
    try:
        if all(factors[name] is not None for name in ops):
            return from_tucker(factors["A"], factors["B"], factors["C"])
        return MltiSystem(ops["A"], ops["B"], ops["C"])
    except MltiError as exc:
        raise FileFormatError(str(exc)) from exc


def load_system(path: PathLike) -> MltiSystem:
    try:
        return system_from_dict(read_json(path))
    except FileFormatError as exc:
        if str(path) in str(exc):
            raise
        raise FileFormatError(f"{path}: {exc}") from None


def save_system(path: PathLike, sys: MltiSystem) -> None:
    write_json(path, system_to_dict(sys))


def as_dense(sys: MltiSystem) -> MltiSystem:
    """Same system with every operator stored densely (drops Tucker factors)."""
    return MltiSystem(PairedTensor(sys.A.array), PairedTensor(sys.B.array), PairedTensor(sys.C.array))


def bundled_example_path() -> Path:
    """Path of the bundled 3x2 single-input single-output example system."""
    return Path(str(resources.files("mlti") / "data" / "siso_3x2.json"))


def load_tensor(path: PathLike) -> DenseTensor:
    try:
        return tensor_from_dict(read_json(path))
    except FileFormatError as exc:
        raise FileFormatError(f"{path}: {exc}") from None


def inputs_to_dict(inputs) -> dict:
    return {"format": INPUTS_FORMAT, "inputs": [tensor_to_dict(u) for u in inputs]}


def load_inputs(path: PathLike) -> list[DenseTensor]:
    obj = read_json(path)
    seq = obj.get("inputs") if isinstance(obj, dict) else obj
    if not isinstance(seq, list):
        raise FileFormatError(f"{path}: expected a list of tensors or an object with 'inputs'")
    try:
        return [tensor_from_dict(u, f"inputs[{t}]") for t, u in enumerate(seq)]
    except FileFormatError as exc:
        raise FileFormatError(f"{path}: {exc}") from None


def trajectory_to_dict(traj: Trajectory) -> dict:
    return {
        "format": TRAJECTORY_FORMAT,
        "steps": traj.steps,
        "states": [tensor_to_dict(x) for x in traj.states],
        "outputs": [tensor_to_dict(y) for y in traj.outputs],
        "inputs": [tensor_to_dict(u) for u in traj.inputs],
    }


def trajectory_from_dict(obj: dict) -> Trajectory:
    if obj.get("format") != TRAJECTORY_FORMAT:
        raise FileFormatError(f"field 'format' must be {TRAJECTORY_FORMAT!r}")
    return Trajectory(
        tuple(tensor_from_dict(x, f"states[{t}]") for t, x in enumerate(obj["states"])),
        tuple(tensor_from_dict(y, f"outputs[{t}]") for t, y in enumerate(obj["outputs"])),
        tuple(tensor_from_dict(u, f"inputs[{t}]") for t, u in enumerate(obj["inputs"])),
    )
