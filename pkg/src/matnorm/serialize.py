"""JSON helpers: complex arrays travel as nested [re, im] pairs."""

import numpy as np

from .errors import InvalidInputError


def complex_to_pairs(arr):
    """Nested lists with every complex entry encoded as [re, im]."""
    arr = np.asarray(arr, dtype=complex)
    return np.stack([arr.real, arr.imag], axis=-1).tolist()


def pairs_to_complex(data):
    """Inverse of :func:`complex_to_pairs`; validates shape and finiteness."""
    try:
        arr = np.asarray(data, dtype=float)
    except (ValueError, TypeError) as exc:
        raise InvalidInputError(f"malformed complex-pair data: {exc}") from exc
    if arr.ndim < 1 or arr.shape[-1] != 2:
        raise InvalidInputError(
            f"complex entries must be [re, im] pairs, got trailing dimension {arr.shape[-1] if arr.ndim else 0}"
        )
    if not np.isfinite(arr).all():
        raise InvalidInputError("complex-pair data must be finite")
    return arr[..., 0] + 1j * arr[..., 1]
