"""Strict JSON for documents that may carry infinite thresholds."""

import json
import math
from typing import Any

_NON_FINITE = {"inf": math.inf, "-inf": -math.inf, "nan": math.nan}


def json_safe(payload: Any) -> Any:
    """Copy of ``payload`` with non-finite floats spelled ``"inf"``, ``"-inf"`` or ``"nan"``."""
    if isinstance(payload, float):
        if math.isfinite(payload):
            return payload
        if math.isnan(payload):
            return "nan"
        return "inf" if payload > 0 else "-inf"
    if isinstance(payload, dict):
        return {key: json_safe(value) for key, value in payload.items()}
    if isinstance(payload, (list, tuple)):
        return [json_safe(value) for value in payload]
    return payload


def restore_non_finite(payload: Any) -> Any:
    """Inverse of :func:`json_safe` for documents read back from disk."""
    if isinstance(payload, str):
        return _NON_FINITE.get(payload, payload)
    if isinstance(payload, dict):
        return {key: restore_non_finite(value) for key, value in payload.items()}
    if isinstance(payload, list):
        return [restore_non_finite(value) for value in payload]
    return payload


def dumps(payload: Any, indent: int = 2) -> str:
    """Sorted, indented RFC 8259 JSON; raises ValueError rather than emit ``Infinity``."""
    return json.dumps(json_safe(payload), indent=indent, sort_keys=True, allow_nan=False)
