import json
from hashlib import sha3_256

import numpy as np


def array_hash(values: np.ndarray) -> str:
    """sha3-256 of the raw float64 bytes."""
    data = np.ascontiguousarray(values, dtype=np.float64)
    return sha3_256(data.tobytes()).hexdigest()


def content_hash(payload: dict) -> str:
    """sha3-256 of a JSON document with sorted keys."""
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"), default=str)
    return sha3_256(text.encode("utf-8")).hexdigest()


def file_hash(path) -> str:
    digest = sha3_256()
    with open(path, "rb") as handle:
        for block in iter(lambda: handle.read(1 << 16), b""):
            digest.update(block)
    return digest.hexdigest()
