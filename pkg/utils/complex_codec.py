"""
Encoding of complex scalars and arrays as nested [re, im] pairs.
Used by the fixture, triple and experiment file formats.
"""

from typing import Any

import numpy as np


def _is_real(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def decode_complex(value: Any) -> complex:
    """Decode a real number or an [re, im] pair."""
    if _is_real(value):
        return complex(float(value), 0.0)
    if isinstance(value, complex):
        return value
    if isinstance(value, (list, tuple)) and len(value) == 2 and all(_is_real(p) for p in value):
        return complex(float(value[0]), float(value[1]))
    raise ValueError(f"Expected a number or an [re, im] pair, got {value!r}")


def decode_array(value: Any, ndim: int) -> np.ndarray:
    """
    Decode a nested list into a complex array of rank `ndim`.

    Leaves (at depth `ndim`) are real numbers or [re, im] pairs, so a
    real 2-vector [1, 0] and the complex scalar [1, 0] are told apart by rank.
    """
    if ndim == 0:
        return np.asarray(decode_complex(value), dtype=complex)
    if not isinstance(value, (list, tuple)):
        raise ValueError(f"Expected a nested list of rank {ndim}, got {value!r}")
    parts = [decode_array(item, ndim - 1) for item in value]
    if not parts:
        return np.zeros((0,) * ndim, dtype=complex)
    shapes = {part.shape for part in parts}
    if len(shapes) > 1:
        raise ValueError(f"Ragged array: inconsistent shapes {sorted(shapes)}")
    return np.stack(parts)


def encode_complex(z: complex) -> list[float]:
    """Encode one complex scalar as [re, im]."""
    z = complex(z)
    return [float(z.real), float(z.imag)]


def encode_array(arr: np.ndarray) -> Any:
    """Encode a complex array as nested lists of [re, im] pairs."""
    arr = np.asarray(arr, dtype=complex)
    if arr.ndim == 0:
        return encode_complex(arr.item())
    return [encode_array(item) for item in arr]
